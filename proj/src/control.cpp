#include "dwig/control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dwig {

void MvConfig::validate() const {
    if (!(rho >= 0.0) || !std::isfinite(rho)) {
        throw ConfigError("control penalty rho must be non-negative");
    }
    if (!(u_min < u_max)) {
        throw ConfigError("control bounds must satisfy u_min < u_max");
    }
    if (!(dither_variance >= 0.0) || !std::isfinite(dither_variance)) {
        throw ConfigError("dither variance must be non-negative");
    }
    if (!std::isfinite(w) || !std::isfinite(u_star)) {
        throw ConfigError("reference and steady-state control must be finite");
    }
}

ControlHistory::ControlHistory(int order) : order_(order) {
    if (order < 2 || order > 8) {
        throw ConfigError("arx order must be in 2..8");
    }
    recent_y_.assign(static_cast<size_t>(order - 1), 0.0);
    recent_u_.assign(static_cast<size_t>(order - 1), 0.0);
}

void ControlHistory::push_output(double y) {
    for (size_t i = recent_y_.size(); i-- > 1;) recent_y_[i] = recent_y_[i - 1];
    recent_y_[0] = y;
}

void ControlHistory::push_control(double u) {
    for (size_t i = recent_u_.size(); i-- > 1;) recent_u_[i] = recent_u_[i - 1];
    recent_u_[0] = u;
}

ControlDecision mv_control(const MvConfig& config, const ArxModel& estimates,
                           const ControlHistory& history) {
    config.validate();
    estimates.validate();
    if (history.order() != estimates.order) {
        throw DimensionMismatch("control history order does not match model order");
    }

    const double denom = estimates.b[0] + config.rho;
    if (!(std::abs(denom) > 1e-9)) {
        throw UnrealizableLaw("control law denominator b0 + rho is numerically zero");
    }

    double num = config.w;
    for (int i = 0; i < estimates.order - 1; ++i) {
        num += estimates.a[static_cast<size_t>(i)] * history.recent_y()[static_cast<size_t>(i)];
    }
    for (int j = 1; j < estimates.order; ++j) {
        num -= estimates.b[static_cast<size_t>(j)] * history.recent_u()[static_cast<size_t>(j - 1)];
    }
    num += config.rho * config.u_star;

    ControlDecision out;
    out.u_unclamped = num / denom;
    out.u = std::clamp(out.u_unclamped, config.u_min, config.u_max);
    out.clamped = out.u != out.u_unclamped;
    return out;
}

GaussianNoise::GaussianNoise(std::uint64_t seed, double variance)
    : engine_(seed), sigma_(std::sqrt(variance)), variance_(variance) {
    if (!(variance >= 0.0) || !std::isfinite(variance)) {
        throw ConfigError("noise variance must be non-negative");
    }
}

double GaussianNoise::sample() {
    // Two 53-bit uniforms per draw; u1 is kept away from zero so the
    // logarithm stays finite.
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1p-53;
    const double mag = std::sqrt(-2.0 * std::log(u1));
    return sigma_ * mag * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace dwig

#include "dwig/sysid.hpp"

#include <cmath>
#include <sstream>

namespace dwig {

void ArxModel::validate() const {
    if (order < 2 || order > 8) {
        throw ConfigError("arx order must be in 2..8");
    }
    if (static_cast<int>(a.size()) != order - 1 || static_cast<int>(b.size()) != order) {
        std::ostringstream msg;
        msg << "arx coefficient counts (" << a.size() << ", " << b.size()
            << ") do not match order " << order;
        throw DimensionMismatch(msg.str());
    }
    for (double c : a) {
        if (!std::isfinite(c)) throw ConfigError("arx a-coefficient not finite");
    }
    for (double c : b) {
        if (!std::isfinite(c)) throw ConfigError("arx b-coefficient not finite");
    }
}

ArxModel ArxModel::zeros(int order) {
    ArxModel m;
    m.order = order;
    m.a.assign(static_cast<size_t>(order - 1), 0.0);
    m.b.assign(static_cast<size_t>(order), 0.0);
    m.validate();
    return m;
}

Eigen::VectorXd ArxModel::packed() const {
    validate();
    Eigen::VectorXd th(2 * order - 1);
    for (int i = 0; i < order - 1; ++i) th[i] = a[static_cast<size_t>(i)];
    for (int j = 0; j < order; ++j) th[order - 1 + j] = b[static_cast<size_t>(j)];
    return th;
}

ArxModel ArxModel::unpack(int order, const Eigen::VectorXd& theta) {
    if (theta.size() != 2 * order - 1) {
        throw DimensionMismatch("packed parameter vector length does not match order");
    }
    ArxModel m;
    m.order = order;
    m.a.resize(static_cast<size_t>(order - 1));
    m.b.resize(static_cast<size_t>(order));
    for (int i = 0; i < order - 1; ++i) m.a[static_cast<size_t>(i)] = theta[i];
    for (int j = 0; j < order; ++j) m.b[static_cast<size_t>(j)] = theta[order - 1 + j];
    return m;
}

RegressorWindow::RegressorWindow(int order) : order_(order) {
    if (order < 2 || order > 8) {
        throw ConfigError("arx order must be in 2..8");
    }
    past_y_.assign(static_cast<size_t>(order - 1), 0.0);
    past_u_.assign(static_cast<size_t>(order), 0.0);
}

void RegressorWindow::push(double y, double u) {
    for (size_t i = past_y_.size(); i-- > 1;) past_y_[i] = past_y_[i - 1];
    past_y_[0] = y;
    for (size_t i = past_u_.size(); i-- > 1;) past_u_[i] = past_u_[i - 1];
    past_u_[0] = u;
}

Eigen::VectorXd RegressorWindow::regressor() const {
    Eigen::VectorXd phi(2 * order_ - 1);
    for (int i = 0; i < order_ - 1; ++i) phi[i] = -past_y_[static_cast<size_t>(i)];
    for (int j = 0; j < order_; ++j) phi[order_ - 1 + j] = past_u_[static_cast<size_t>(j)];
    return phi;
}

double arx_predict(const ArxModel& model, const RegressorWindow& window) {
    if (window.order() != model.order) {
        throw DimensionMismatch("regressor window order does not match model order");
    }
    // Evaluated as the packed dot product so the difference equation and
    // the estimator's prediction agree bit for bit.
    return model.packed().dot(window.regressor());
}

std::vector<double> arx_simulate(const ArxModel& model, std::span<const double> inputs,
                                 std::span<const double> noise) {
    model.validate();
    if (inputs.size() != noise.size()) {
        throw DimensionMismatch("input and noise sequences must have equal length");
    }
    RegressorWindow win(model.order);
    std::vector<double> out;
    out.reserve(inputs.size());
    for (size_t t = 0; t < inputs.size(); ++t) {
        const double y = arx_predict(model, win) + noise[t];
        if (!std::isfinite(y) || std::abs(y) > 1e9) {
            throw DivergedState("arx simulation diverged", static_cast<double>(t));
        }
        out.push_back(y);
        win.push(y, inputs[t]);
    }
    return out;
}

RlsEstimator::RlsEstimator(int order, double lambda, double p0)
    : order_(order), lambda_(lambda), p0_(p0) {
    if (order < 2 || order > 8) {
        throw ConfigError("arx order must be in 2..8");
    }
    if (!(lambda > 0.9) || !(lambda <= 1.0)) {
        throw ConfigError("forgetting factor must lie in (0.9, 1.0]");
    }
    if (!(p0 > 0.0)) {
        throw ConfigError("initial covariance scale must be positive");
    }
    const int dim = 2 * order - 1;
    theta_ = Eigen::VectorXd::Zero(dim);
    p_ = Eigen::MatrixXd::Identity(dim, dim) * p0;
}

void RlsEstimator::set_theta(const Eigen::VectorXd& theta0) {
    if (theta0.size() != theta_.size()) {
        throw DimensionMismatch("initial estimate length does not match parameter count");
    }
    if (!theta0.allFinite()) {
        throw ConfigError("initial estimate must be finite");
    }
    theta_ = theta0;
}

double RlsEstimator::update(const Eigen::VectorXd& phi, double measured) {
    if (phi.size() != theta_.size()) {
        throw DimensionMismatch("regressor length does not match parameter count");
    }
    const double err = measured - theta_.dot(phi);
    const Eigen::VectorXd pphi = p_ * phi;
    const double denom = lambda_ + phi.dot(pphi);
    const Eigen::VectorXd gain = pphi / denom;
    theta_ += gain * err;
    p_ = (p_ - gain * pphi.transpose()) / lambda_;
    p_ = 0.5 * (p_ + p_.transpose()).eval();
    if (!theta_.allFinite() || !p_.allFinite()) {
        throw NonFiniteUpdate("rls update produced a non-finite value");
    }
    // Blow-up guard; resetting only makes sense once the trace has
    // grown well past its initial value.
    const double initial_trace = p0_ * static_cast<double>(p_.rows());
    if (p_.trace() > std::max(trace_guard, 10.0 * initial_trace)) {
        p_ = Eigen::MatrixXd::Identity(p_.rows(), p_.cols()) * p0_;
        ++resets_;
    }
    return err;
}

StabilityReport stability_check(const ArxModel& model) {
    model.validate();
    const int deg = model.order - 1;
    StabilityReport rep;
    rep.root_magnitudes.reserve(static_cast<size_t>(deg));

    // Companion matrix of z^deg + a1 z^{deg-1} + ... + a_deg.
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 0; i < deg; ++i) comp(0, i) = -model.a[static_cast<size_t>(i)];
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;

    const Eigen::VectorXcd roots = comp.eigenvalues();
    rep.stable = true;
    for (int i = 0; i < roots.size(); ++i) {
        const double mag = std::abs(roots[i]);
        rep.root_magnitudes.push_back(mag);
        // Roots within an eigensolver tolerance of the circle count as
        // on it, so a marginal pole is never reported stable.
        if (!(mag < 1.0 - 1e-9)) rep.stable = false;
    }
    return rep;
}

} // namespace dwig

#ifndef DWIG_CONTROL_HPP
#define DWIG_CONTROL_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "dwig/errors.hpp"
#include "dwig/sysid.hpp"

namespace dwig {

/// Tuning of the penalized one-step-ahead controller.
struct MvConfig {
    double rho = 0.0;              ///< control penalty factor, >= 0
    double w = 1.0;                ///< reference value
    double u_star = 0.0;           ///< steady-state controller output
    double u_min = -3.0;           ///< actuator saturation, lower
    double u_max = 3.0;            ///< actuator saturation, upper
    double dither_variance = 0.01; ///< excitation noise variance

    void validate() const;
};

/// Signal histories the control law consumes: outputs y(t)..y(t-n+2)
/// and controls u(t-1)..u(t-n+1), both most recent first. Push the
/// freshly measured output before evaluating the law, then push the
/// control actually applied.
class ControlHistory {
public:
    explicit ControlHistory(int order);

    int order() const { return order_; }
    const std::vector<double>& recent_y() const { return recent_y_; }
    const std::vector<double>& recent_u() const { return recent_u_; }

    void push_output(double y);
    void push_control(double u);

private:
    int order_;
    std::vector<double> recent_y_; ///< length n-1
    std::vector<double> recent_u_; ///< length n-1
};

struct ControlDecision {
    double u = 0.0;           ///< applied value, clamped to bounds
    double u_unclamped = 0.0; ///< raw law output, for diagnostics
    bool clamped = false;
};

/// Evaluates the control law over the current estimates:
///   (b0 + rho) * u = w + sum_i a[i]*y(t-i+1) - sum_{j>=1} b[j]*u(t-j)
///                      + rho * u_star
/// Throws UnrealizableLaw when |b0 + rho| <= 1e-9.
ControlDecision mv_control(const MvConfig& config, const ArxModel& estimates,
                           const ControlHistory& history);

/// Zero-mean Gaussian source: 64-bit Mersenne Twister (whose output
/// stream the standard pins down exactly) plus a Box-Muller transform,
/// so the sequence is reproducible from the seed across platforms and
/// library versions.
class GaussianNoise {
public:
    GaussianNoise(std::uint64_t seed, double variance);

    double variance() const { return variance_; }
    double sample();

private:
    std::mt19937_64 engine_;
    double sigma_;
    double variance_;
};

} // namespace dwig

#endif

#ifndef DWIG_SYSID_HPP
#define DWIG_SYSID_HPP

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "dwig/errors.hpp"

namespace dwig {

/// Discrete design model
///   y(t) = -sum_i a[i-1] * y(t-i) + sum_j b[j] * u(t-1-j)
/// with i = 1..n-1 and j = 0..n-1: an n-th order transfer function with
/// one step of input delay. a holds the denominator coefficients past
/// the implicit leading 1, b the numerator.
struct ArxModel {
    int order = 5;
    std::vector<double> a; ///< a1..a_{n-1}
    std::vector<double> b; ///< b0..b_{n-1}

    /// Throws DimensionMismatch / ConfigError if the coefficient counts
    /// do not match the order or the order is outside {2..8}.
    void validate() const;

    static ArxModel zeros(int order);

    /// Packs (a1..a_{n-1}, b0..b_{n-1}) into a 2n-1 vector, the same
    /// layout the estimator uses.
    Eigen::VectorXd packed() const;
    static ArxModel unpack(int order, const Eigen::VectorXd& theta);
};

/// Fixed-length recent-first signal histories feeding prediction and
/// estimation. past_y()[0] is y(t-1), past_u()[0] is u(t-1).
class RegressorWindow {
public:
    explicit RegressorWindow(int order);

    int order() const { return order_; }
    const std::vector<double>& past_y() const { return past_y_; }
    const std::vector<double>& past_u() const { return past_u_; }

    /// Records the pair observed at the step just completed.
    void push(double y, double u);

    /// (-y(t-1)..-y(t-n+1), u(t-1)..u(t-n)), length 2n-1, so that the
    /// model prediction is packed-theta dot regressor.
    Eigen::VectorXd regressor() const;

private:
    int order_;
    std::vector<double> past_y_; ///< length n-1
    std::vector<double> past_u_; ///< length n
};

/// One-step-ahead prediction of the model over the window.
double arx_predict(const ArxModel& model, const RegressorWindow& window);

/// Simulates the model from rest; noise[t] is added to each output and
/// participates in the recursion. Throws DivergedState when |y| > 1e9.
std::vector<double> arx_simulate(const ArxModel& model, std::span<const double> inputs,
                                 std::span<const double> noise);

/// Exponentially weighted recursive least squares over the packed
/// parameter layout (a1..a_{n-1}, b0..b_{n-1}).
class RlsEstimator {
public:
    /// lambda must lie in (0.9, 1.0]; p0 scales the initial covariance.
    RlsEstimator(int order, double lambda, double p0 = 1e3);

    /// One update with regressor phi (length 2n-1) and the measured
    /// output. Returns the a-priori prediction error. The covariance is
    /// re-symmetrized after every update and reset to p0*I whenever its
    /// trace exceeds the blow-up guard.
    double update(const Eigen::VectorXd& phi, double measured);

    int order() const { return order_; }
    double lambda() const { return lambda_; }
    const Eigen::VectorXd& theta() const { return theta_; }

    /// Replaces the current estimate (e.g. a warm start); length 2n-1.
    void set_theta(const Eigen::VectorXd& theta0);
    const Eigen::MatrixXd& covariance() const { return p_; }
    ArxModel model() const { return ArxModel::unpack(order_, theta_); }

    /// Number of covariance blow-up resets performed so far.
    int reset_count() const { return resets_; }

    double trace_guard = 1e8;

private:
    int order_;
    double lambda_;
    double p0_;
    Eigen::VectorXd theta_;
    Eigen::MatrixXd p_;
    int resets_ = 0;
};

struct StabilityReport {
    bool stable = false;
    std::vector<double> root_magnitudes; ///< |roots| of the denominator
};

/// Checks whether all denominator roots lie strictly inside the unit
/// circle, via companion-matrix eigenvalues.
StabilityReport stability_check(const ArxModel& model);

} // namespace dwig

#endif

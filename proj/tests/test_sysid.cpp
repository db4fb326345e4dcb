#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dwig/control.hpp"
#include "dwig/sysid.hpp"
#include "oracles.hpp"

using namespace dwig;

namespace {

ArxModel plant() {
    ArxModel m;
    m.order = 5;
    m.a = oracles::kPlantA;
    m.b = oracles::kPlantB;
    return m;
}

/// Feeds a (u, y) record through a fresh estimator.
Eigen::VectorXd identify(const std::vector<double>& u, const std::vector<double>& y,
                         double lambda, double p0) {
    RlsEstimator est(5, lambda, p0);
    RegressorWindow win(5);
    for (size_t t = 0; t < y.size(); ++t) {
        est.update(win.regressor(), y[t]);
        win.push(y[t], u[t]);
    }
    return est.theta();
}

} // namespace

TEST_CASE("arx model validation") {
    CHECK_THROWS_AS(ArxModel::zeros(1), ConfigError);
    CHECK_THROWS_AS(ArxModel::zeros(9), ConfigError);
    ArxModel m = ArxModel::zeros(5);
    m.a.push_back(0.0);
    CHECK_THROWS_AS(m.validate(), DimensionMismatch);
}

TEST_CASE("arx predict: delay and feedback terms") {
    ArxModel m = ArxModel::zeros(5);
    RegressorWindow win(5);
    CHECK(arx_predict(m, win) == 0.0);

    m.b[0] = 1.0;
    win.push(0.0, 2.5); // u(t-1) = 2.5
    CHECK(arx_predict(m, win) == doctest::Approx(2.5));

    m = ArxModel::zeros(5);
    m.a[0] = -0.5;
    m.b[0] = 1.0;
    RegressorWindow win2(5);
    win2.push(1.0, 0.0); // y(t-1) = 1, u(t-1) = 0
    CHECK(arx_predict(m, win2) == doctest::Approx(0.5));
}

TEST_CASE("arx predict equals packed theta dot regressor") {
    std::mt19937_64 eng(7);
    auto uni = [&] { return static_cast<double>(eng() >> 11) * 0x1p-53 * 2.0 - 1.0; };
    ArxModel m = ArxModel::zeros(5);
    for (double& c : m.a) c = 0.3 * uni();
    for (double& c : m.b) c = uni();
    RegressorWindow win(5);
    for (int i = 0; i < 12; ++i) win.push(uni(), uni());
    CHECK(arx_predict(m, win) == m.packed().dot(win.regressor()));
}

TEST_CASE("arx simulate: rest, impulse, and step gain") {
    ArxModel m = ArxModel::zeros(5);
    m.b[0] = 1.0;
    std::vector<double> zeros(20, 0.0);
    const std::vector<double> rest = arx_simulate(m, zeros, zeros);
    CHECK(*std::max_element(rest.begin(), rest.end()) == 0.0);

    std::vector<double> impulse(20, 0.0);
    impulse[3] = 1.0;
    const std::vector<double> delayed = arx_simulate(m, impulse, zeros);
    for (size_t t = 0; t < delayed.size(); ++t) {
        CHECK(delayed[t] == (t == 4 ? 1.0 : 0.0));
    }

    // Step response settles at B(1)/A(1).
    ArxModel p = plant();
    double b_sum = 0.0, a_sum = 1.0;
    for (double c : p.b) b_sum += c;
    for (double c : p.a) a_sum += c;
    const double want = b_sum / a_sum;
    std::vector<double> step(4000, 1.0), no_noise(4000, 0.0);
    const std::vector<double> y = arx_simulate(p, step, no_noise);
    CHECK(y.back() == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("arx simulate: divergence guard") {
    ArxModel m = ArxModel::zeros(5);
    m.a[0] = -2.0; // pole at 2
    m.b[0] = 1.0;
    std::vector<double> step(200, 1.0), no_noise(200, 0.0);
    CHECK_THROWS_AS((void)arx_simulate(m, step, no_noise), DivergedState);
}

TEST_CASE("rls: zero regressor changes nothing but inflates covariance") {
    RlsEstimator est(5, 0.95, 10.0);
    const Eigen::VectorXd theta0 = est.theta();
    const Eigen::MatrixXd p0 = est.covariance();
    const double err = est.update(Eigen::VectorXd::Zero(9), 3.0);
    CHECK(err == 3.0);
    CHECK((est.theta() - theta0).norm() == 0.0);
    CHECK((est.covariance() - p0 / 0.95).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("rls: hand-evaluated unit step") {
    // One informative direction: phi = e0, P = I, lambda = 1. The gain
    // is 1/2, so theta0 -> 1/2 and P00 -> 1/2 while the rest is intact.
    RlsEstimator est(2, 1.0, 1.0);
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(3);
    phi[0] = 1.0;
    const double err = est.update(phi, 1.0);
    CHECK(err == doctest::Approx(1.0));
    CHECK(est.theta()[0] == doctest::Approx(0.5));
    CHECK(est.theta()[1] == 0.0);
    CHECK(est.covariance()(0, 0) == doctest::Approx(0.5));
    CHECK(est.covariance()(1, 1) == doctest::Approx(1.0));
    CHECK(est.covariance()(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("rls: exact recovery from noise-free binary excitation") {
    const ArxModel p = plant();
    const std::vector<double> u = oracles::prbs(11, 2000, 10.0);
    const std::vector<double> no_noise(u.size(), 0.0);
    const std::vector<double> y = arx_simulate(p, u, no_noise);
    const Eigen::VectorXd theta = identify(u, y, 1.0, 1e8);
    const Eigen::VectorXd truth = p.packed();
    CHECK((theta - truth).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("rls: parameter ordering matches the packed layout") {
    const ArxModel p = plant();
    const std::vector<double> u = oracles::prbs(3, 3000, 10.0);
    const std::vector<double> no_noise(u.size(), 0.0);
    const std::vector<double> y = arx_simulate(p, u, no_noise);
    RlsEstimator est(5, 1.0, 1e8);
    RegressorWindow win(5);
    for (size_t t = 0; t < y.size(); ++t) {
        est.update(win.regressor(), y[t]);
        win.push(y[t], u[t]);
    }
    const ArxModel fitted = est.model();
    for (int i = 0; i < 4; ++i) {
        CHECK(fitted.a[static_cast<size_t>(i)] ==
              doctest::Approx(p.a[static_cast<size_t>(i)]).epsilon(1e-6));
    }
    for (int j = 0; j < 5; ++j) {
        CHECK(fitted.b[static_cast<size_t>(j)] ==
              doctest::Approx(p.b[static_cast<size_t>(j)]).epsilon(1e-6));
    }
}

TEST_CASE("rls: covariance stays symmetric positive definite") {
    RlsEstimator est(5, 0.995, 1e3);
    RegressorWindow win(5);
    GaussianNoise noise(99, 1.0);
    const ArxModel p = plant();
    for (int t = 0; t < 10000; ++t) {
        const double y = arx_predict(p, win) + 0.1 * noise.sample();
        est.update(win.regressor(), y);
        win.push(y, noise.sample());
        if (t % 100 == 99) {
            const Eigen::MatrixXd& P = est.covariance();
            CHECK((P - P.transpose()).cwiseAbs().maxCoeff() < 1e-10);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(P);
            CHECK(eig.eigenvalues().minCoeff() > 0.0);
        }
    }
}

TEST_CASE("rls: trace grows as 1/lambda per zero-information step") {
    const double lambdas[] = {1.0, 0.995, 0.990};
    double traces[3] = {};
    for (int i = 0; i < 3; ++i) {
        RlsEstimator est(5, lambdas[i], 1e3);
        const double trace0 = est.covariance().trace();
        for (int t = 0; t < 50; ++t) est.update(Eigen::VectorXd::Zero(9), 0.0);
        traces[i] = est.covariance().trace();
        CHECK(traces[i] == doctest::Approx(trace0 / std::pow(lambdas[i], 50))
                               .epsilon(1e-9));
    }
    CHECK(traces[0] < traces[1]);
    CHECK(traces[1] < traces[2]);
}

TEST_CASE("rls: covariance blow-up guard resets and counts") {
    RlsEstimator est(5, 0.95, 1e3);
    est.trace_guard = 1e4; // effective threshold: 10x the initial trace
    for (int t = 0; t < 200; ++t) est.update(Eigen::VectorXd::Zero(9), 0.0);
    CHECK(est.reset_count() >= 2);
    CHECK(est.covariance().trace() < 1e5);
}

TEST_CASE("rls: constructor guards") {
    CHECK_THROWS_AS(RlsEstimator(5, 0.8, 1e3), ConfigError);
    CHECK_THROWS_AS(RlsEstimator(5, 1.1, 1e3), ConfigError);
    CHECK_THROWS_AS(RlsEstimator(5, 0.995, 0.0), ConfigError);
    CHECK_THROWS_AS(RlsEstimator(1, 0.995, 1e3), ConfigError);
}

TEST_CASE("stability check: white, marginal, and factored cases") {
    ArxModel m = ArxModel::zeros(5);
    StabilityReport rep = stability_check(m);
    CHECK(rep.stable);
    for (double mag : rep.root_magnitudes) CHECK(mag == 0.0);

    m.a = {-1.0, 0.0, 0.0, 0.0};
    rep = stability_check(m);
    CHECK_FALSE(rep.stable);
    CHECK(*std::max_element(rep.root_magnitudes.begin(), rep.root_magnitudes.end()) ==
          doctest::Approx(1.0));

    // z^2 - 1.5 z + 0.56 = (z - 0.7)(z - 0.8), padded with zero roots.
    m.a = {-1.5, 0.56, 0.0, 0.0};
    rep = stability_check(m);
    CHECK(rep.stable);
    std::sort(rep.root_magnitudes.begin(), rep.root_magnitudes.end());
    CHECK(rep.root_magnitudes[2] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(rep.root_magnitudes[3] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("stability check: the frozen identification plant is stable") {
    const StabilityReport rep = stability_check(plant());
    CHECK(rep.stable);
    CHECK(*std::max_element(rep.root_magnitudes.begin(), rep.root_magnitudes.end()) ==
          doctest::Approx(0.95).epsilon(1e-9));
}

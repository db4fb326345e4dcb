#ifndef DWIG_LOOP_HPP
#define DWIG_LOOP_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dwig/control.hpp"
#include "dwig/machine.hpp"
#include "dwig/sysid.hpp"

namespace dwig {

enum class LoopMode { OpenLoop, ClosedLoop };

enum class EventTarget { MechanicalTorque, LoadResistance, ExcitationVoltage, Reference };
enum class EventKind { RelativeStep, AbsoluteSet };

/// A scheduled change of one exogenous quantity. Relative steps scale
/// the current value by (1 + value); absolute sets replace it.
struct PerturbationEvent {
    double time = 0.0;
    EventTarget target = EventTarget::MechanicalTorque;
    EventKind kind = EventKind::RelativeStep;
    double value = 0.0;
};

/// How the steady-state control fed to the penalty term is maintained.
enum class UStarMode { Constant, Averaged };

/// Initial operating point. The run starts from the electrical steady
/// state at this speed; torque_auto picks the shaft torque that makes
/// the point a full equilibrium.
struct OperatingPoint {
    double u_d2 = 0.0;
    double u_q2 = 1.0;
    double torque = 0.0;
    bool torque_auto = true;
    double r_load = 2.0;
    double omega = 0.97;
};

struct ScenarioSpec {
    LoopMode mode = LoopMode::ClosedLoop;
    double duration = 40.0;
    double ts = 0.01;  ///< controller sample period, seconds
    double h = 0.001;  ///< plant integration step, seconds
    double lambda = 0.995;
    double rho = 0.0725;
    std::uint64_t seed = 1;
    std::vector<PerturbationEvent> events;
    MachineParams machine;
    MvConfig mv;
    bool reference_auto = true; ///< w := terminal voltage after the trim
    bool u_star_auto = true;    ///< u_star := nominal excitation magnitude
    UStarMode u_star_mode = UStarMode::Constant;
    double u_star_tau = 10.0; ///< averaging time constant, seconds
    OperatingPoint op;
    int arx_order = 5;
    double p0 = 1e3;
    std::vector<double> theta0; ///< warm-start estimate; empty = zeros
    int warmup_steps = 50;
    double trim_seconds = 2.0; ///< discarded pre-run settling the speed
    double settle_band = 0.01; ///< metrics band, fraction of final value

    void validate() const;
};

struct LogRow {
    double time = 0.0;
    double y_pu = 0.0;        ///< plant terminal voltage
    double y_volts = 0.0;
    double u_applied = 0.0;   ///< excitation magnitude actually applied
    double u_unclamped = 0.0; ///< raw law output before saturation
    double torque = 0.0;
    double r_load = 0.0;
    double reference = 0.0;
    double pred_error = 0.0;  ///< a-priori estimator error
    int realizable = 1;       ///< 0 when the law failed and u_star was held
    std::vector<double> theta;
};

struct TimeSeriesLog {
    int arx_order = 5;
    double base_voltage_v = 440.0;
    std::vector<LogRow> rows;
};

/// Per-control-step diagnostics offered to an optional observer.
struct StepDiag {
    int step = 0;
    double time = 0.0;
    double y_true = 0.0;
    double y_measured = 0.0;
    const RlsEstimator* estimator = nullptr;
};
using StepObserver = std::function<void(const StepDiag&)>;

/// Integrates the plant with the excitation held at its nominal value
/// except for scheduled events; the controller is disabled.
TimeSeriesLog run_open_loop(const ScenarioSpec& spec);

/// Full adaptive loop: per sample period, measure (with dither), update
/// the estimator, evaluate the control law, hold the excitation for the
/// next period. Deterministic given the seed.
TimeSeriesLog run_closed_loop(const ScenarioSpec& spec, const StepObserver& observer = {});

struct PerfMetrics {
    double overshoot_v = 0.0;      ///< max |y - y_final| after the event
    double settling_s = 0.0;       ///< last band exit relative to the event
    bool settled = true;
    double control_spike_v = 0.0;  ///< max |unclamped u| after the event
    double steady_control_v = 0.0; ///< mean applied u over the final 10%
};

/// Evaluates the log after event_time against a band of
/// band_fraction * |settled value|, where the settled value is the mean
/// over the trailing tenth of the post-event rows. The run is flagged
/// unsettled when the band is still violated inside that trailing
/// window.
PerfMetrics compute_metrics(const TimeSeriesLog& log, double band_fraction,
                            double event_time);

struct SweepCell {
    double lambda = 0.0;
    double rho = 0.0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    PerfMetrics metrics;
};

struct SweepResult {
    std::vector<SweepCell> cells;    ///< row-major over lambdas x rhos
    std::vector<std::size_t> ranking;///< ok cells, best (settling, overshoot) first
};

/// Runs the closed loop once per (lambda, rho) pair. Cell c uses seed
/// base.seed ^ c so parallel dispatch stays reproducible; cell failures
/// are recorded and the sweep continues.
SweepResult sweep(const ScenarioSpec& base, const std::vector<double>& lambdas,
                  const std::vector<double>& rhos);

} // namespace dwig

#endif

#include "dwig/loop.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dwig {

namespace {

long checked_ratio(double whole, double part, const char* what) {
    const double ratio = whole / part;
    const long n = std::lround(ratio);
    if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio) {
        throw ConfigError(std::string(what) + " must divide evenly");
    }
    return n;
}

/// Mutable exogenous quantities plus the direction the scalar
/// excitation command is applied along.
struct LiveInputs {
    MachineInputs in;
    double exc_dir_d = 0.0, exc_dir_q = 1.0;
    double reference = 0.0;

    void apply(const PerturbationEvent& ev) {
        const bool rel = ev.kind == EventKind::RelativeStep;
        switch (ev.target) {
        case EventTarget::MechanicalTorque:
            in.tm = rel ? in.tm * (1.0 + ev.value) : ev.value;
            break;
        case EventTarget::LoadResistance:
            in.r_load = rel ? in.r_load * (1.0 + ev.value) : ev.value;
            break;
        case EventTarget::ExcitationVoltage:
            if (rel) {
                in.u_d2 *= (1.0 + ev.value);
                in.u_q2 *= (1.0 + ev.value);
            } else {
                in.u_d2 = ev.value * exc_dir_d;
                in.u_q2 = ev.value * exc_dir_q;
            }
            break;
        case EventTarget::Reference:
            reference = rel ? reference * (1.0 + ev.value) : ev.value;
            break;
        }
    }
};

/// Shared open/closed-loop setup: steady state at the nominal point,
/// torque balancing, discarded trim run.
struct Prepared {
    MachineModel model;
    Vec7 x;
    LiveInputs live;
    double w = 0.0;      ///< resolved reference
    double u_star = 0.0; ///< resolved steady-state control
};

Prepared prepare(const ScenarioSpec& spec) {
    Prepared p{MachineModel(spec.machine), Vec7::Zero(), {}, 0.0, 0.0};
    const OperatingPoint& op = spec.op;

    p.live.in.u_d2 = op.u_d2;
    p.live.in.u_q2 = op.u_q2;
    p.live.in.r_load = op.r_load;

    const double mag = std::hypot(op.u_d2, op.u_q2);
    if (!(mag > 0.0)) {
        throw ConfigError("nominal excitation magnitude must be positive");
    }
    p.live.exc_dir_d = op.u_d2 / mag;
    p.live.exc_dir_q = op.u_q2 / mag;

    const MachineState ss = p.model.steady_state(p.live.in, op.omega);
    if (op.torque_auto) {
        p.live.in.tm = electromagnetic_torque(ss, p.model.currents(ss.fluxes()));
    } else {
        p.live.in.tm = op.torque;
    }

    p.x = ss.as_vector();
    const long trim_steps = std::lround(spec.trim_seconds / spec.h);
    for (long i = 0; i < trim_steps; ++i) {
        try {
            p.x = p.model.rk4_step(p.x, p.live.in, spec.h);
        } catch (const DivergedState& e) {
            // Negative time marks the discarded pre-run.
            throw DivergedState(e.what(),
                                static_cast<double>(i) * spec.h - spec.trim_seconds);
        }
    }

    const double y0 = terminal_voltage(p.model.currents(p.x.head<6>()), p.live.in.r_load);
    p.w = spec.reference_auto ? y0 : spec.mv.w;
    p.u_star = spec.u_star_auto ? mag : spec.mv.u_star;
    p.live.reference = p.w;
    return p;
}

} // namespace

void ScenarioSpec::validate() const {
    machine.validate();
    mv.validate();
    if (!(h > 0.0) || h > 0.01) {
        throw ConfigError("integration step h must satisfy 0 < h <= 0.01");
    }
    checked_ratio(ts, h, "controller period ts by integration step h");
    checked_ratio(duration, ts, "duration by controller period ts");
    if (arx_order < 2 || arx_order > 8) {
        throw ConfigError("arx order must be in 2..8");
    }
    if (!(lambda > 0.9) || !(lambda <= 1.0)) {
        throw ConfigError("forgetting factor must lie in (0.9, 1.0]");
    }
    if (!(rho >= 0.0)) {
        throw ConfigError("control penalty rho must be non-negative");
    }
    if (!(p0 > 0.0)) {
        throw ConfigError("initial covariance scale p0 must be positive");
    }
    if (!theta0.empty() && theta0.size() != static_cast<size_t>(2 * arx_order - 1)) {
        throw ConfigError("theta0 must hold 2n-1 values for the configured order");
    }
    if (warmup_steps < 0) {
        throw ConfigError("warmup step count must be non-negative");
    }
    if (!(trim_seconds >= 0.0)) {
        throw ConfigError("trim duration must be non-negative");
    }
    if (!(settle_band > 0.0)) {
        throw ConfigError("settle band must be positive");
    }
    if (!(op.r_load > 0.0)) {
        throw ConfigError("load resistance must be positive");
    }
    double prev = 0.0;
    for (const PerturbationEvent& ev : events) {
        if (ev.time < prev) {
            throw ConfigError("events must be sorted by time");
        }
        if (ev.time < 0.0 || ev.time > duration) {
            throw ConfigError("event time must lie within [0, duration]");
        }
        if (ev.kind == EventKind::RelativeStep && !(ev.value > -1.0)) {
            throw ConfigError("relative event fraction must exceed -1");
        }
        if (mode == LoopMode::ClosedLoop && ev.target == EventTarget::ExcitationVoltage) {
            throw ConfigError("excitation is controller-owned in closed loop; "
                              "use reference or torque events");
        }
        prev = ev.time;
    }
}

TimeSeriesLog run_open_loop(const ScenarioSpec& spec) {
    spec.validate();
    if (spec.mode != LoopMode::OpenLoop) {
        throw ConfigError("scenario mode is not open_loop");
    }
    Prepared p = prepare(spec);

    const long sub = checked_ratio(spec.ts, spec.h, "ts by h");
    const long steps = checked_ratio(spec.duration, spec.ts, "duration by ts");
    const int dim = 2 * spec.arx_order - 1;

    TimeSeriesLog log;
    log.arx_order = spec.arx_order;
    log.base_voltage_v = spec.machine.base_voltage_v;
    log.rows.reserve(static_cast<size_t>(steps + 1));

    // Event times snapped to the integration grid.
    std::vector<std::pair<long, const PerturbationEvent*>> pending;
    for (const PerturbationEvent& ev : spec.events) {
        pending.emplace_back(std::lround(ev.time / spec.h), &ev);
    }
    size_t next_ev = 0;

    double t = 0.0;
    for (long k = 0; k <= steps; ++k) {
        const Currents6 cur = p.model.currents(p.x.head<6>());
        const double y = terminal_voltage(cur, p.live.in.r_load);
        const double mag = std::hypot(p.live.in.u_d2, p.live.in.u_q2);

        LogRow row;
        row.time = t;
        row.y_pu = y;
        row.y_volts = y * spec.machine.base_voltage_v;
        row.u_applied = mag;
        row.u_unclamped = mag;
        row.torque = p.live.in.tm;
        row.r_load = p.live.in.r_load;
        row.reference = p.live.reference;
        row.theta.assign(static_cast<size_t>(dim), 0.0);
        log.rows.push_back(std::move(row));

        if (k == steps) break;
        for (long s = 0; s < sub; ++s) {
            const long j = k * sub + s;
            while (next_ev < pending.size() && pending[next_ev].first <= j) {
                p.live.apply(*pending[next_ev].second);
                ++next_ev;
            }
            try {
                p.x = p.model.rk4_step(p.x, p.live.in, spec.h);
            } catch (const DivergedState& e) {
                throw DivergedState(e.what(), static_cast<double>(j) * spec.h);
            }
        }
        t = static_cast<double>(k + 1) * spec.ts;
    }
    return log;
}

TimeSeriesLog run_closed_loop(const ScenarioSpec& spec, const StepObserver& observer) {
    spec.validate();
    if (spec.mode != LoopMode::ClosedLoop) {
        throw ConfigError("scenario mode is not closed_loop");
    }
    Prepared p = prepare(spec);

    const long sub = checked_ratio(spec.ts, spec.h, "ts by h");
    const long steps = checked_ratio(spec.duration, spec.ts, "duration by ts");
    const int n = spec.arx_order;
    const int dim = 2 * n - 1;

    MvConfig mv = spec.mv;
    mv.rho = spec.rho;
    mv.w = p.w;
    mv.u_star = p.u_star;

    GaussianNoise dither(spec.seed, mv.dither_variance);
    RlsEstimator rls(n, spec.lambda, spec.p0);
    if (!spec.theta0.empty()) {
        rls.set_theta(Eigen::Map<const Eigen::VectorXd>(
            spec.theta0.data(), static_cast<long>(spec.theta0.size())));
    }
    RegressorWindow win(n);
    ControlHistory hist(n);

    TimeSeriesLog log;
    log.arx_order = n;
    log.base_voltage_v = spec.machine.base_voltage_v;
    log.rows.reserve(static_cast<size_t>(steps + 1));

    std::vector<std::pair<long, const PerturbationEvent*>> pending;
    for (const PerturbationEvent& ev : spec.events) {
        pending.emplace_back(std::lround(ev.time / spec.h), &ev);
    }
    size_t next_ev = 0;

    double last_u = p.u_star, last_raw = p.u_star, last_err = 0.0;
    int last_realizable = 1;

    for (long k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * spec.ts;
        const double y_true =
            terminal_voltage(p.model.currents(p.x.head<6>()), p.live.in.r_load);

        if (k < steps) {
            const double y_meas = y_true + dither.sample();
            last_err = rls.update(win.regressor(), y_meas);
            hist.push_output(y_meas);

            mv.w = p.live.reference;
            ControlDecision dec{p.u_star, p.u_star, false};
            last_realizable = 1;
            if (k >= spec.warmup_steps) {
                try {
                    dec = mv_control(mv, rls.model(), hist);
                } catch (const UnrealizableLaw&) {
                    dec = ControlDecision{mv.u_star, mv.u_star, false};
                    last_realizable = 0;
                }
            }
            hist.push_control(dec.u);
            win.push(y_meas, dec.u);
            last_u = dec.u;
            last_raw = dec.u_unclamped;

            if (spec.u_star_mode == UStarMode::Averaged) {
                const double alpha = spec.ts / spec.u_star_tau;
                mv.u_star += alpha * (dec.u - mv.u_star);
            }

            if (observer) {
                StepDiag d;
                d.step = static_cast<int>(k);
                d.time = t;
                d.y_true = y_true;
                d.y_measured = y_meas;
                d.estimator = &rls;
                observer(d);
            }

            p.live.in.u_d2 = dec.u * p.live.exc_dir_d;
            p.live.in.u_q2 = dec.u * p.live.exc_dir_q;
        }

        LogRow row;
        row.time = t;
        row.y_pu = y_true;
        row.y_volts = y_true * spec.machine.base_voltage_v;
        row.u_applied = last_u;
        row.u_unclamped = last_raw;
        row.torque = p.live.in.tm;
        row.r_load = p.live.in.r_load;
        row.reference = p.live.reference;
        row.pred_error = last_err;
        row.realizable = last_realizable;
        row.theta.assign(rls.theta().data(), rls.theta().data() + dim);
        log.rows.push_back(std::move(row));

        if (k == steps) break;
        for (long s = 0; s < sub; ++s) {
            const long j = k * sub + s;
            while (next_ev < pending.size() && pending[next_ev].first <= j) {
                p.live.apply(*pending[next_ev].second);
                ++next_ev;
            }
            try {
                p.x = p.model.rk4_step(p.x, p.live.in, spec.h);
            } catch (const DivergedState& e) {
                throw DivergedState(e.what(), static_cast<double>(j) * spec.h);
            }
        }
    }
    return log;
}

PerfMetrics compute_metrics(const TimeSeriesLog& log, double band_fraction,
                            double event_time) {
    if (log.rows.empty()) {
        throw DimensionMismatch("cannot compute metrics of an empty log");
    }
    if (!(band_fraction > 0.0)) {
        throw ConfigError("band fraction must be positive");
    }

    size_t first_after = log.rows.size();
    for (size_t i = 0; i < log.rows.size(); ++i) {
        if (log.rows[i].time >= event_time) {
            first_after = i;
            break;
        }
    }
    if (first_after == log.rows.size()) {
        throw ConfigError("event time lies beyond the log span");
    }

    // The settled value is the mean over the trailing tenth of the
    // post-event rows; a single final sample would make the band test
    // vacuous at the end of the log.
    const size_t tail = std::max<size_t>(1, (log.rows.size() - first_after) / 10);
    const size_t tail_begin = log.rows.size() - tail;
    double y_final = 0.0;
    for (size_t i = tail_begin; i < log.rows.size(); ++i) {
        y_final += log.rows[i].y_volts;
    }
    y_final /= static_cast<double>(tail);
    const double band = band_fraction * std::abs(y_final);

    PerfMetrics m;
    std::ptrdiff_t last_exceed = -1;
    for (size_t i = first_after; i < log.rows.size(); ++i) {
        const LogRow& r = log.rows[i];
        const double dev = std::abs(r.y_volts - y_final);
        m.overshoot_v = std::max(m.overshoot_v, dev);
        m.control_spike_v =
            std::max(m.control_spike_v, std::abs(r.u_unclamped) * log.base_voltage_v);
        if (dev > band) last_exceed = static_cast<std::ptrdiff_t>(i);
    }

    if (last_exceed < 0) {
        m.settling_s = 0.0;
        m.settled = true;
    } else {
        m.settling_s = log.rows[static_cast<size_t>(last_exceed)].time - event_time;
        // Still outside the band where the settled value is measured:
        // the run never came to rest.
        m.settled = static_cast<size_t>(last_exceed) < tail_begin;
    }

    double acc = 0.0;
    for (size_t i = tail_begin; i < log.rows.size(); ++i) {
        acc += log.rows[i].u_applied;
    }
    m.steady_control_v = acc / static_cast<double>(tail) * log.base_voltage_v;
    return m;
}

SweepResult sweep(const ScenarioSpec& base, const std::vector<double>& lambdas,
                  const std::vector<double>& rhos) {
    if (lambdas.empty() || rhos.empty()) {
        throw ConfigError("sweep grids must be non-empty");
    }
    const double event_time = base.events.empty() ? 0.0 : base.events.back().time;

    SweepResult res;
    std::size_t cell = 0;
    for (double lam : lambdas) {
        for (double rho : rhos) {
            SweepCell c;
            c.lambda = lam;
            c.rho = rho;
            c.seed = base.seed ^ static_cast<std::uint64_t>(cell);
            ScenarioSpec spec = base;
            spec.lambda = lam;
            spec.rho = rho;
            spec.seed = c.seed;
            try {
                const TimeSeriesLog log = run_closed_loop(spec);
                c.metrics = compute_metrics(log, spec.settle_band, event_time);
                c.ok = true;
            } catch (const std::exception& e) {
                c.ok = false;
                c.error = e.what();
            }
            res.cells.push_back(std::move(c));
            ++cell;
        }
    }

    for (std::size_t i = 0; i < res.cells.size(); ++i) {
        if (res.cells[i].ok) res.ranking.push_back(i);
    }
    std::stable_sort(res.ranking.begin(), res.ranking.end(),
                     [&](std::size_t lhs, std::size_t rhs) {
                         const PerfMetrics& a = res.cells[lhs].metrics;
                         const PerfMetrics& b = res.cells[rhs].metrics;
                         const double sa = a.settled ? a.settling_s : 1e300;
                         const double sb = b.settled ? b.settling_s : 1e300;
                         if (sa != sb) return sa < sb;
                         return a.overshoot_v < b.overshoot_v;
                     });
    return res;
}

} // namespace dwig

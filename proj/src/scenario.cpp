#include "dwig/scenario.hpp"

#include <filesystem>
#include <sstream>

#include "dwig/config.hpp"

namespace dwig {

namespace {

EventTarget parse_target(const std::string& path, const std::string& v) {
    if (v == "mechanical_torque") return EventTarget::MechanicalTorque;
    if (v == "load_resistance") return EventTarget::LoadResistance;
    if (v == "excitation_voltage") return EventTarget::ExcitationVoltage;
    if (v == "reference") return EventTarget::Reference;
    throw ConfigError(path + ": unknown event target: " + v);
}

EventKind parse_kind(const std::string& path, const std::string& v) {
    if (v == "relative_step") return EventKind::RelativeStep;
    if (v == "absolute_set") return EventKind::AbsoluteSet;
    throw ConfigError(path + ": unknown event kind: " + v);
}

} // namespace

MachineParams load_machine_params(const std::string& path) {
    ConfigFile cfg = ConfigFile::load(path);
    MachineParams p;
    p.r1 = cfg.require_double("r1");
    p.r2 = cfg.require_double("r2");
    p.r3 = cfg.require_double("r3");
    p.l1 = cfg.require_double("l1");
    p.l2 = cfg.require_double("l2");
    p.l3 = cfg.require_double("l3");
    p.m_d12 = cfg.require_double("m_d12");
    p.m_q12 = cfg.require_double("m_q12");
    p.m_d1r = cfg.require_double("m_d1r");
    p.m_q1r = cfg.require_double("m_q1r");
    p.m_d2r = cfg.require_double("m_d2r");
    p.m_q2r = cfg.require_double("m_q2r");
    p.omega1 = cfg.require_double("omega1");
    p.inertia_h = cfg.require_double("inertia_h");
    p.base_voltage_v = cfg.require_double("base_voltage_v");
    p.base_torque = cfg.require_double("base_torque");
    const std::string coupling = cfg.require_string("coupling");
    if (coupling == "literal") {
        p.coupling = CouplingLayout::Literal;
    } else if (coupling == "symmetric") {
        p.coupling = CouplingLayout::Symmetric;
    } else {
        throw ConfigError(path + ": coupling must be `literal` or `symmetric`");
    }
    cfg.finish();
    p.validate();
    return p;
}

ScenarioFile load_scenario(const std::string& path) {
    ConfigFile cfg = ConfigFile::load(path);
    ScenarioFile out;
    ScenarioSpec& s = out.spec;

    const std::string mode = cfg.require_string("mode");
    if (mode == "open_loop") {
        s.mode = LoopMode::OpenLoop;
    } else if (mode == "closed_loop") {
        s.mode = LoopMode::ClosedLoop;
    } else {
        throw ConfigError(path + ": mode must be `open_loop` or `closed_loop`");
    }

    s.duration = cfg.require_double("duration");
    s.ts = cfg.require_double("ts");
    s.h = cfg.require_double("h");

    const std::string machine_rel = cfg.require_string("machine");
    namespace fs = std::filesystem;
    fs::path mp(machine_rel);
    if (mp.is_relative()) {
        mp = fs::path(path).parent_path() / mp;
    }
    out.machine_path = mp.string();
    s.machine = load_machine_params(out.machine_path);

    s.lambda = cfg.get_double("lambda", 0.995);
    s.rho = cfg.get_double("rho", 0.0725);
    s.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
    s.arx_order = static_cast<int>(cfg.get_int("arx_order", 5));
    s.p0 = cfg.get_double("p0", 1e3);
    if (cfg.has("theta0")) s.theta0 = cfg.get_double_list("theta0");
    s.warmup_steps = static_cast<int>(cfg.get_int("warmup_steps", 50));
    s.trim_seconds = cfg.get_double("trim_seconds", 2.0);
    s.settle_band = cfg.get_double("settle_band", 0.01);

    s.op.u_d2 = cfg.get_double("u_d2", 0.0);
    s.op.u_q2 = cfg.get_double("u_q2", 1.0);
    s.op.r_load = cfg.get_double("r_load", 2.0);
    s.op.omega = cfg.get_double("omega_nominal", 0.97);
    s.op.torque_auto = cfg.get_auto_or_double("torque", s.op.torque, 0.0, true);

    s.reference_auto = cfg.get_auto_or_double("reference", s.mv.w, 1.0, true);
    s.u_star_auto = cfg.get_auto_or_double("u_star", s.mv.u_star, 0.0, true);
    s.mv.u_min = cfg.get_double("u_min", -3.0);
    s.mv.u_max = cfg.get_double("u_max", 3.0);
    s.mv.dither_variance = cfg.get_double("dither_variance", 0.01);
    s.mv.rho = s.rho;

    const std::string um = cfg.get_string("u_star_mode", "constant");
    if (um == "constant") {
        s.u_star_mode = UStarMode::Constant;
    } else if (um == "averaged") {
        s.u_star_mode = UStarMode::Averaged;
    } else {
        throw ConfigError(path + ": u_star_mode must be `constant` or `averaged`");
    }
    s.u_star_tau = cfg.get_double("u_star_tau", 10.0);

    // Events are numbered from 1: event.1.time, event.1.target, ...
    for (int i = 1;; ++i) {
        std::ostringstream prefix;
        prefix << "event." << i << ".";
        if (cfg.keys_with_prefix(prefix.str()).empty()) break;
        PerturbationEvent ev;
        ev.time = cfg.require_double(prefix.str() + "time");
        ev.target = parse_target(path, cfg.require_string(prefix.str() + "target"));
        ev.kind = parse_kind(path, cfg.require_string(prefix.str() + "kind"));
        ev.value = cfg.require_double(prefix.str() + "value");
        s.events.push_back(ev);
    }

    out.sweep_lambdas = cfg.get_double_list("sweep.lambda");
    out.sweep_rhos = cfg.get_double_list("sweep.rho");

    cfg.finish();
    s.validate();
    return out;
}

} // namespace dwig

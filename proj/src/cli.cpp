#include "dwig/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dwig/csv.hpp"
#include "dwig/manifest.hpp"
#include "dwig/scenario.hpp"
#include "dwig/svg.hpp"

namespace dwig {

namespace fs = std::filesystem;

namespace {

ScenarioFile load_with_overrides(const RunOptions& opt) {
    ScenarioFile f = load_scenario(opt.scenario_path);
    if (opt.seed) f.spec.seed = *opt.seed;
    if (opt.ts) f.spec.ts = *opt.ts;
    if (opt.h) f.spec.h = *opt.h;
    f.spec.validate();
    return f;
}

RunManifest make_manifest(const RunOptions& opt, std::uint64_t seed) {
    RunManifest m;
    m.tool_version = tool_version();
    m.scenario_path = opt.scenario_path;
    m.scenario_hash = to_hex(fnv1a64_file(opt.scenario_path));
    m.seed = seed;
    m.started_at = current_utc_timestamp();
    return m;
}

std::vector<double> column_time(const TimeSeriesLog& log) {
    std::vector<double> t;
    t.reserve(log.rows.size());
    for (const LogRow& r : log.rows) t.push_back(r.time);
    return t;
}

void plot_terminal_voltage(const fs::path& dir, const TimeSeriesLog& log,
                           bool with_reference, std::vector<std::string>& outputs) {
    std::vector<SvgSeries> series;
    SvgSeries y{"terminal voltage [p.u.]", {}};
    for (const LogRow& r : log.rows) y.values.push_back(r.y_pu);
    series.push_back(std::move(y));
    if (with_reference) {
        SvgSeries ref{"reference [p.u.]", {}};
        for (const LogRow& r : log.rows) ref.values.push_back(r.reference);
        series.push_back(std::move(ref));
    }
    write_line_chart_svg((dir / "terminal_voltage.svg").string(), "Terminal voltage",
                         "time [s]", "voltage [p.u.]", column_time(log), series);
    outputs.push_back("terminal_voltage.svg");
}

int run_scenario_command(const RunOptions& opt, bool closed) {
    try {
        ScenarioFile f = load_with_overrides(opt);
        fs::create_directories(opt.out_dir);
        const fs::path dir(opt.out_dir);

        TimeSeriesLog log;
        try {
            log = closed ? run_closed_loop(f.spec) : run_open_loop(f.spec);
        } catch (const DivergedState& e) {
            std::cerr << "simulation diverged at t=" << e.time << " s: " << e.what()
                      << "\n";
            return kExitDiverged;
        }

        RunManifest manifest = make_manifest(opt, f.spec.seed);
        write_log_csv((dir / "log.csv").string(), log);
        manifest.outputs.push_back("log.csv");
        plot_terminal_voltage(dir, log, closed, manifest.outputs);

        if (closed) {
            const double event_time =
                f.spec.events.empty() ? 0.0 : f.spec.events.back().time;
            const PerfMetrics m = compute_metrics(log, f.spec.settle_band, event_time);
            write_metrics_csv((dir / "metrics.csv").string(), m, f.spec.lambda,
                              f.spec.rho, f.spec.seed);
            manifest.outputs.push_back("metrics.csv");

            std::vector<SvgSeries> exc(2);
            exc[0].label = "applied [V]";
            exc[1].label = "unclamped [V]";
            for (const LogRow& r : log.rows) {
                exc[0].values.push_back(r.u_applied * log.base_voltage_v);
                exc[1].values.push_back(r.u_unclamped * log.base_voltage_v);
            }
            write_line_chart_svg((dir / "excitation_voltage.svg").string(),
                                 "Excitation voltage", "time [s]", "voltage [V]",
                                 column_time(log), exc);
            manifest.outputs.push_back("excitation_voltage.svg");

            const int dim = 2 * log.arx_order - 1;
            std::vector<SvgSeries> th(static_cast<size_t>(dim));
            for (int i = 0; i < dim; ++i) {
                std::ostringstream label;
                if (i < log.arx_order - 1) {
                    label << "a" << i + 1;
                } else {
                    label << "b" << i - (log.arx_order - 1);
                }
                th[static_cast<size_t>(i)].label = label.str();
                for (const LogRow& r : log.rows) {
                    th[static_cast<size_t>(i)].values.push_back(
                        r.theta[static_cast<size_t>(i)]);
                }
            }
            write_line_chart_svg((dir / "estimates.svg").string(), "Parameter estimates",
                                 "time [s]", "estimate [-]", column_time(log), th);
            manifest.outputs.push_back("estimates.svg");
        }

        write_manifest(opt.out_dir, manifest);
        std::cout << "wrote " << (dir / "log.csv").string() << " ("
                  << log.rows.size() << " rows)\n";
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
}

} // namespace

int cmd_open_loop(const RunOptions& opt) { return run_scenario_command(opt, false); }

int cmd_closed_loop(const RunOptions& opt) { return run_scenario_command(opt, true); }

int cmd_sweep(const RunOptions& opt, const std::vector<double>& lambdas,
              const std::vector<double>& rhos) {
    try {
        ScenarioFile f = load_with_overrides(opt);
        std::vector<double> lam = lambdas.empty() ? f.sweep_lambdas : lambdas;
        std::vector<double> rho = rhos.empty() ? f.sweep_rhos : rhos;
        if (lam.empty() || rho.empty()) {
            std::cerr << "config error: sweep grids missing (set sweep.lambda / "
                         "sweep.rho in the scenario or pass --lambda/--rho)\n";
            return kExitConfig;
        }
        fs::create_directories(opt.out_dir);
        const fs::path dir(opt.out_dir);

        const SweepResult res = sweep(f.spec, lam, rho);

        RunManifest manifest = make_manifest(opt, f.spec.seed);
        write_sweep_csv((dir / "sweep_metrics.csv").string(), res);
        manifest.outputs.push_back("sweep_metrics.csv");

        std::ofstream rep(dir / "sweep_report.txt");
        rep << "Tuning sweep over (lambda, rho), ranked by (settling time, overshoot).\n"
               "Machine constants are synthetic defaults; rankings describe this\n"
               "plant only and are not comparable against published magnitudes.\n\n";
        rep << "rank  lambda    rho       settling[s]  overshoot[V]  spike[V]  "
               "steady u[V]  settled\n";
        int rank = 1;
        for (std::size_t idx : res.ranking) {
            const SweepCell& c = res.cells[idx];
            char line[160];
            std::snprintf(line, sizeof line,
                          "%-5d %-9.6g %-9.6g %-12.4g %-13.4g %-9.4g %-12.4g %s\n",
                          rank++, c.lambda, c.rho, c.metrics.settling_s,
                          c.metrics.overshoot_v, c.metrics.control_spike_v,
                          c.metrics.steady_control_v, c.metrics.settled ? "yes" : "no");
            rep << line;
        }
        bool any_failed = false;
        for (const SweepCell& c : res.cells) {
            if (!c.ok) {
                any_failed = true;
                rep << "failed: lambda=" << c.lambda << " rho=" << c.rho << ": "
                    << c.error << "\n";
            }
        }
        rep.close();
        manifest.outputs.push_back("sweep_report.txt");
        write_manifest(opt.out_dir, manifest);

        std::cout << "wrote " << (dir / "sweep_metrics.csv").string() << " ("
                  << res.cells.size() << " cells)\n";
        return any_failed ? kExitPartialFailure : kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
}

int cmd_identify(const IdentifyOptions& opt) {
    try {
        const UySeries data = read_uy_csv(opt.log_path);

        RlsEstimator rls(opt.order, opt.lambda, opt.p0);
        RegressorWindow win(opt.order);
        double sq_sum = 0.0;
        std::size_t count = 0;
        for (std::size_t t = 0; t < data.y.size(); ++t) {
            const double e = rls.update(win.regressor(), data.y[t]);
            win.push(data.y[t], data.u[t]);
            // Skip the initial transient when scoring the fit.
            if (t >= data.y.size() / 10) {
                sq_sum += e * e;
                ++count;
            }
        }
        const double err_var = count > 0 ? sq_sum / static_cast<double>(count) : 0.0;
        const ArxModel model = rls.model();
        const StabilityReport stab = stability_check(model);

        std::ostringstream rep;
        rep << "samples: " << data.y.size() << "\n";
        rep << "order: " << opt.order << "  lambda: " << format_double(opt.lambda)
            << "  p0: " << format_double(opt.p0) << "\n";
        rep << "a:";
        for (double c : model.a) rep << ' ' << format_double(c);
        rep << "\nb:";
        for (double c : model.b) rep << ' ' << format_double(c);
        rep << "\nprediction error variance: " << format_double(err_var) << "\n";
        rep << "stable: " << (stab.stable ? "yes" : "no") << "  |roots|:";
        for (double m : stab.root_magnitudes) rep << ' ' << format_double(m);
        rep << "\ncovariance resets: " << rls.reset_count() << "\n";

        std::cout << rep.str();
        if (!opt.out_dir.empty()) {
            fs::create_directories(opt.out_dir);
            std::ofstream out(fs::path(opt.out_dir) / "identify_report.txt");
            out << rep.str();
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
}

const char* tool_version() {
#ifdef DWIG_VERSION
    return DWIG_VERSION;
#else
    return "0.0.0";
#endif
}

} // namespace dwig

#include "dwig/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace dwig {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double to_double(const std::string& path, const std::string& s) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(path + ": malformed numeric field: `" + s + "`");
    }
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_log_csv(const std::string& path, const TimeSeriesLog& log) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open for writing: " + path);
    }
    out << "time,y_pu,y_volts,u_applied_pu,u_unclamped_pu,torque_pu,r_load_pu,"
           "reference_pu,pred_error,realizable";
    const int dim = 2 * log.arx_order - 1;
    for (int i = 0; i < dim; ++i) out << ",theta_" << i;
    out << "\n";
    for (const LogRow& r : log.rows) {
        out << format_double(r.time) << ',' << format_double(r.y_pu) << ','
            << format_double(r.y_volts) << ',' << format_double(r.u_applied) << ','
            << format_double(r.u_unclamped) << ',' << format_double(r.torque) << ','
            << format_double(r.r_load) << ',' << format_double(r.reference) << ','
            << format_double(r.pred_error) << ',' << r.realizable;
        for (double th : r.theta) out << ',' << format_double(th);
        out << "\n";
    }
}

TimeSeriesLog read_log_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open log: " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError(path + ": empty file");
    }
    const std::vector<std::string> header = split_csv_line(line);
    constexpr int kFixed = 10;
    if (header.size() < kFixed || header[0] != "time" || header[1] != "y_pu") {
        throw ConfigError(path + ": unrecognized log header");
    }
    const int dim = static_cast<int>(header.size()) - kFixed;
    if (dim < 3 || dim % 2 == 0) {
        throw ConfigError(path + ": theta column count is not 2n-1");
    }

    TimeSeriesLog log;
    log.arx_order = (dim + 1) / 2;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != header.size()) {
            throw ConfigError(path + ": row width does not match header");
        }
        LogRow r;
        r.time = to_double(path, f[0]);
        r.y_pu = to_double(path, f[1]);
        r.y_volts = to_double(path, f[2]);
        r.u_applied = to_double(path, f[3]);
        r.u_unclamped = to_double(path, f[4]);
        r.torque = to_double(path, f[5]);
        r.r_load = to_double(path, f[6]);
        r.reference = to_double(path, f[7]);
        r.pred_error = to_double(path, f[8]);
        r.realizable = static_cast<int>(to_double(path, f[9]));
        r.theta.reserve(static_cast<size_t>(dim));
        for (int i = 0; i < dim; ++i) {
            r.theta.push_back(to_double(path, f[static_cast<size_t>(kFixed + i)]));
        }
        log.rows.push_back(std::move(r));
    }
    if (log.rows.empty()) {
        throw ConfigError(path + ": log holds no data rows");
    }
    if (log.rows.front().y_pu != 0.0) {
        log.base_voltage_v = log.rows.front().y_volts / log.rows.front().y_pu;
    }
    return log;
}

UySeries read_uy_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open csv: " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError(path + ": empty file");
    }
    const std::vector<std::string> header = split_csv_line(line);
    int u_col = -1, y_col = -1;
    for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "u_applied_pu" || header[i] == "u") u_col = static_cast<int>(i);
        if (header[i] == "y_pu" || header[i] == "y") y_col = static_cast<int>(i);
    }
    if (u_col < 0 || y_col < 0) {
        throw ConfigError(path + ": need `u`/`y` or `u_applied_pu`/`y_pu` columns");
    }
    UySeries out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() <= static_cast<size_t>(std::max(u_col, y_col))) {
            throw ConfigError(path + ": row width does not match header");
        }
        out.u.push_back(to_double(path, f[static_cast<size_t>(u_col)]));
        out.y.push_back(to_double(path, f[static_cast<size_t>(y_col)]));
    }
    if (out.u.empty()) {
        throw ConfigError(path + ": no data rows");
    }
    return out;
}

namespace {

void write_metrics_row(std::ostream& out, const PerfMetrics& m) {
    out << format_double(m.overshoot_v) << ',' << format_double(m.settling_s) << ','
        << (m.settled ? 1 : 0) << ',' << format_double(m.control_spike_v) << ','
        << format_double(m.steady_control_v);
}

} // namespace

void write_sweep_csv(const std::string& path, const SweepResult& result) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open for writing: " + path);
    }
    out << "lambda,rho,seed,status,overshoot_v,settling_s,settled,"
           "control_spike_v,steady_control_v,error\n";
    for (const SweepCell& c : result.cells) {
        out << format_double(c.lambda) << ',' << format_double(c.rho) << ',' << c.seed
            << ',' << (c.ok ? "ok" : "failed") << ',';
        if (c.ok) {
            write_metrics_row(out, c.metrics);
            out << ',';
        } else {
            out << ",,,,,";
        }
        std::string err = c.error;
        for (char& ch : err) {
            if (ch == ',' || ch == '\n') ch = ';';
        }
        out << err << "\n";
    }
}

void write_metrics_csv(const std::string& path, const PerfMetrics& m, double lambda,
                       double rho, std::uint64_t seed) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open for writing: " + path);
    }
    out << "lambda,rho,seed,overshoot_v,settling_s,settled,control_spike_v,"
           "steady_control_v\n";
    out << format_double(lambda) << ',' << format_double(rho) << ',' << seed << ',';
    write_metrics_row(out, m);
    out << "\n";
}

} // namespace dwig

#ifndef DWIG_CSV_HPP
#define DWIG_CSV_HPP

#include <string>
#include <vector>

#include "dwig/loop.hpp"

namespace dwig {

/// Shortest decimal representation that round-trips the double
/// (17 significant digits), used for every numeric CSV field.
std::string format_double(double v);

/// Column order: time, y_pu, y_volts, u_applied_pu, u_unclamped_pu,
/// torque_pu, r_load_pu, reference_pu, pred_error, realizable,
/// theta_0 .. theta_{2n-2}.
void write_log_csv(const std::string& path, const TimeSeriesLog& log);

/// Reads a log written by write_log_csv back into memory.
TimeSeriesLog read_log_csv(const std::string& path);

/// Input/output pair extracted from a CSV: either this tool's log
/// schema (u_applied_pu / y_pu) or a plain file with `u` and `y`
/// columns.
struct UySeries {
    std::vector<double> u;
    std::vector<double> y;
};
UySeries read_uy_csv(const std::string& path);

/// One metrics row per sweep cell plus a status column.
void write_sweep_csv(const std::string& path, const SweepResult& result);

/// Metrics of a single run.
void write_metrics_csv(const std::string& path, const PerfMetrics& m,
                       double lambda, double rho, std::uint64_t seed);

} // namespace dwig

#endif

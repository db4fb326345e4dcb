#ifndef DWIG_CLI_HPP
#define DWIG_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dwig {

/// Process exit codes shared by all subcommands.
enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitConfig = 2,
    kExitDiverged = 3,
    kExitPartialFailure = 4,
};

struct RunOptions {
    std::string scenario_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed; ///< overrides the scenario seed
    std::optional<double> ts;
    std::optional<double> h;
};

int cmd_open_loop(const RunOptions& opt);
int cmd_closed_loop(const RunOptions& opt);

/// Sweep grids from the command line win over inline `sweep.*` keys.
int cmd_sweep(const RunOptions& opt, const std::vector<double>& lambdas,
              const std::vector<double>& rhos);

struct IdentifyOptions {
    std::string log_path;
    int order = 5;
    double lambda = 1.0;
    double p0 = 1e3;
    std::string out_dir; ///< empty: report to stdout only
};

int cmd_identify(const IdentifyOptions& opt);

const char* tool_version();

} // namespace dwig

#endif

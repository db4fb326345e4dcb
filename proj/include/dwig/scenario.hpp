#ifndef DWIG_SCENARIO_HPP
#define DWIG_SCENARIO_HPP

#include <string>
#include <vector>

#include "dwig/loop.hpp"

namespace dwig {

/// Loads a machine parameter file. Every field is required; unknown
/// keys are rejected.
MachineParams load_machine_params(const std::string& path);

/// A scenario file plus the optional inline sweep grids.
struct ScenarioFile {
    ScenarioSpec spec;
    std::string machine_path; ///< resolved path of the machine file
    std::vector<double> sweep_lambdas;
    std::vector<double> sweep_rhos;
};

/// Loads a scenario file; the referenced machine file is resolved
/// relative to the scenario's directory.
ScenarioFile load_scenario(const std::string& path);

} // namespace dwig

#endif

#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "nilmult/config.hpp"

namespace nilmult {

struct CommandResult {
  int exit_code = 0;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> failures; ///< named failing invariants
};

/// Identity suites of all modules; verify.csv plus verify.json.
CommandResult cmd_verify(const ExperimentConfig &c, std::ostream &log);

/// Streams the kernel to kernel.csv; kernel.json carries the grid, the
/// diagnostics and the Plancherel comparison. With the direct6d method the
/// kernel is evaluated at random points and compared with the closed route;
/// a relative deviation above 2% sets exit code 1.
CommandResult cmd_kernel(const ExperimentConfig &c, std::ostream &log);

/// scaling_norms.csv (one row per M and r) and scaling_fits.csv.
CommandResult cmd_scaling(const ExperimentConfig &c, std::ostream &log);

/// norms.csv, holder.csv and, when requested, doubling.csv and family.csv.
CommandResult cmd_norms(const ExperimentConfig &c, std::ostream &log);

/// Dispatches on c.experiment.
CommandResult run_experiment(const ExperimentConfig &c, std::ostream &log);

} // namespace nilmult

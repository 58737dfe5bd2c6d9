#pragma once

#include <filesystem>
#include <vector>

#include "risdeploy/parallel.hpp"
#include "risdeploy/scenario.hpp"

namespace risdeploy {

enum ExitCode : int { kExitOk = 0, kExitConfigError = 2, kExitRuntimeError = 3 };

// How the RIS placement is chosen before coverage/cdf evaluation.
enum class PlacementMode {
  AsConfigured,  // ris block of the scenario
  Tilt,          // best tilt at the configured x and height
  HeightTilt,    // best (height, tilt) over search.h_values at the configured x
};

// Writes snapshot_status.csv, snapshot_rate.csv and snapshot_summary.csv.
void cmd_snapshot(const ScenarioFile& scenario, const std::vector<double>& blocker_x,
                  const std::filesystem::path& out_dir, const ExecOptions& exec);
// sweep_x.csv
void cmd_sweep_x(const ScenarioFile& scenario, const std::filesystem::path& out_dir,
                 const ExecOptions& exec);
// optimize.csv and optimize_trace.csv
void cmd_optimize(const ScenarioFile& scenario, const std::filesystem::path& out_dir,
                  const ExecOptions& exec);
// cdf_ris.csv and cdf_no_ris.csv
void cmd_cdf(const ScenarioFile& scenario, PlacementMode placement,
             const std::filesystem::path& out_dir, const ExecOptions& exec);
// coverage.csv
void cmd_coverage(const ScenarioFile& scenario, PlacementMode placement,
                  const std::filesystem::path& out_dir, const ExecOptions& exec);

// Applies `placement` to the scenario's RIS using the nested draw budget.
RisConfig resolve_placement(const ScenarioFile& scenario, PlacementMode placement,
                            const ExecOptions& exec);

// Parses arguments, runs one subcommand and maps failures onto ExitCode.
int run_cli(int argc, const char* const* argv);

}  // namespace risdeploy

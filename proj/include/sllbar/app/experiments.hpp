#pragma once

// Experiment drivers behind the command-line subcommands. Each driver writes
// its CSV artifacts, a verdict.txt, and a manifest.txt holding the version,
// command, seed, status, config echo and the SHA-256 of every output.

#include <filesystem>
#include <string>
#include <vector>

#include "sllbar/app/config.hpp"

namespace sllbar::app {

inline constexpr const char* kVersion = "sllbar 0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitBlowup = 3,
  kExitIo = 4,
};

struct RunResult {
  int exit_code = kExitOk;
  /// completed, blowup, nonfinite, pass, fail
  std::string status;
  std::string verdict;
  std::vector<std::filesystem::path> outputs;
};

RunResult run_simulate(const ExperimentConfig& cfg);
RunResult run_skeleton(const ExperimentConfig& cfg);
RunResult run_condition1(const ExperimentConfig& cfg);
RunResult run_condition2(const ExperimentConfig& cfg);
RunResult run_energy_audit(const ExperimentConfig& cfg);
RunResult run_flow_check(const ExperimentConfig& cfg);

/// Dispatches by subcommand name; unknown names raise ConfigError.
RunResult run_command(const std::string& command, const ExperimentConfig& cfg);

/// Loads the config, applies overrides and runs the command, mapping every
/// failure to an exit code. Error text goes to `error` when non-null.
int execute(const std::string& command, const std::filesystem::path& config_path,
            const std::vector<std::pair<std::string, std::string>>& overrides,
            std::string* error = nullptr);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace sllbar::app

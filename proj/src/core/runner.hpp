#pragma once

#include <optional>
#include <string>

#include "core/config.hpp"

namespace otoclab {

enum class RunStatus {
  Ok = 0,
  BoundViolation = 1,
  ConfigError = 2,
  IoError = 3,
  InvalidArgument = 4,
  ResourceLimit = 5,
  InternalError = 6,
};

const char* run_status_name(RunStatus s);
const char* tool_version();

/// Per-invocation overrides layered on top of the config file.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out_dir;
  bool sensitivity = false;  // shrink the certified c0 to prove the checks have teeth
  bool test_mode = false;    // suppress timestamps so outputs are byte-stable
};

struct RunResult {
  RunStatus status = RunStatus::Ok;
  std::string message;      // failure description when status != Ok
  std::string report_json;  // run manifest with summary, also written to the output dir
};

/// Executes one experiment command (the config's command unless overridden):
/// lattice-info | model-check | otoc | bound-check | cluster-audit | fit |
/// regression. Results and a manifest land in the output directory; the
/// status encodes the exit contract (rigorous-bound violations are nonzero,
/// budget flags are warnings).
RunResult execute_command(const RunConfig& cfg, const RunOptions& opt,
                          const std::string& command_override = "");

RunResult execute_config_file(const std::string& path, const RunOptions& opt,
                              const std::string& command_override = "");
RunResult execute_config_text(const std::string& json_text, const RunOptions& opt,
                              const std::string& command_override = "");

}  // namespace otoclab

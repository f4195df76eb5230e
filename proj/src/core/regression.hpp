#pragma once

#include <json.hpp>

#include "core/runner.hpp"

namespace otoclab {

struct RegressionCaseResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RegressionReport {
  std::vector<RegressionCaseResult> cases;
  nlohmann::json coverage;

  bool all_pass() const;
  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// Re-executes every golden case in the suite manifest and compares the
/// produced files under each case's tolerance policy (digest | exact | rel).
/// Paths inside the suite file resolve against its directory. The report also
/// carries the operation-coverage table.
RegressionReport run_regression_suite(const std::string& suite_path, const RunOptions& opt);

/// Static audit table mapping every public operation to the tests and golden
/// cases exercising it.
const nlohmann::json& operation_coverage();

}  // namespace otoclab

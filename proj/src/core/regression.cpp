#include "core/regression.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "core/io.hpp"

namespace otoclab {

namespace {

using nlohmann::json;

namespace fs = std::filesystem;

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

bool numeric_cell(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end && *end == '\0';
}

std::string compare_rel(const std::string& got, const std::string& expected, double tol) {
  auto a = parse_csv(got), b = parse_csv(expected);
  if (a.size() != b.size())
    return "row count " + std::to_string(a.size()) + " != " + std::to_string(b.size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (a[r].size() != b[r].size()) return "column count differs at row " + std::to_string(r);
    for (std::size_t c = 0; c < a[r].size(); ++c) {
      double x, y;
      if (numeric_cell(a[r][c], x) && numeric_cell(b[r][c], y)) {
        double scale = std::max({1.0, std::abs(x), std::abs(y)});
        if (std::abs(x - y) > tol * scale)
          return "cell (" + std::to_string(r) + "," + std::to_string(c) + "): " + a[r][c] +
                 " vs " + b[r][c];
      } else if (a[r][c] != b[r][c]) {
        return "cell (" + std::to_string(r) + "," + std::to_string(c) + "): '" + a[r][c] +
               "' vs '" + b[r][c] + "'";
      }
    }
  }
  return {};
}

}  // namespace

bool RegressionReport::all_pass() const {
  for (const auto& c : cases)
    if (!c.pass) return false;
  return true;
}

json RegressionReport::to_json() const {
  json out;
  out["all_pass"] = all_pass();
  out["cases"] = json::array();
  for (const auto& c : cases)
    out["cases"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  out["coverage"] = coverage;
  return out;
}

std::string RegressionReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : cases)
    os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << (c.detail.empty() ? "" : ": " + c.detail)
       << "\n";
  os << (all_pass() ? "regression suite: all cases passed\n"
                    : "regression suite: FAILURES present\n");
  return os.str();
}

RegressionReport run_regression_suite(const std::string& suite_path, const RunOptions& opt) {
  if (suite_path.empty()) throw config_error("regression needs a 'suite' manifest path");
  RegressionReport report;
  report.coverage = operation_coverage();

  json suite = json::parse(read_file(suite_path));
  fs::path base = fs::path(suite_path).parent_path();
  fs::path work_root = fs::temp_directory_path() /
                       ("otoclab_regression_" + fnv1a64_hex(suite_path));
  for (const auto& cj : suite.at("cases")) {
    RegressionCaseResult cr;
    cr.name = cj.at("name").get<std::string>();
    fs::path config_path = base / cj.at("config").get<std::string>();
    fs::path work = work_root / cr.name;
    std::error_code ec;
    fs::remove_all(work, ec);

    RunOptions case_opt = opt;
    case_opt.test_mode = true;
    case_opt.out_dir = work.string();
    RunResult rr = execute_config_file(config_path.string(), case_opt);
    std::string expect_status = cj.value("expect_status", std::string("ok"));
    if (std::string(run_status_name(rr.status)) != expect_status) {
      cr.pass = false;
      cr.detail = "status " + std::string(run_status_name(rr.status)) + " (expected " +
                  expect_status + "): " + rr.message;
      report.cases.push_back(cr);
      continue;
    }
    cr.pass = true;
    for (const auto& cmp : cj.value("compare", json::array())) {
      std::string file = cmp.at("file").get<std::string>();
      std::string produced;
      try {
        produced = read_file((work / file).string());
      } catch (const io_error& e) {
        cr.pass = false;
        cr.detail = e.what();
        break;
      }
      std::string mode = cmp.value("mode", "digest");
      if (mode == "digest") {
        std::string want = cmp.at("digest").get<std::string>();
        if (fnv1a64_hex(produced) != want) {
          cr.pass = false;
          cr.detail = file + ": digest " + fnv1a64_hex(produced) + " != " + want;
          break;
        }
      } else if (mode == "exact") {
        std::string expected = read_file((base / cmp.at("expected").get<std::string>()).string());
        if (produced != expected) {
          cr.pass = false;
          cr.detail = file + ": bytes differ from golden";
          break;
        }
      } else if (mode == "rel") {
        std::string expected = read_file((base / cmp.at("expected").get<std::string>()).string());
        std::string diff = compare_rel(produced, expected, cmp.value("tol", 1e-9));
        if (!diff.empty()) {
          cr.pass = false;
          cr.detail = file + ": " + diff;
          break;
        }
      } else {
        cr.pass = false;
        cr.detail = "unknown compare mode '" + mode + "'";
        break;
      }
    }
    report.cases.push_back(cr);
    fs::remove_all(work, ec);
  }
  return report;
}

const json& operation_coverage() {
  static const json table = json::parse(R"JSON({
  "lattice.ball": ["unit:lattice_ball", "golden:lattice_chain"],
  "lattice.extend_region": ["unit:lattice_extend_region"],
  "lattice.shell": ["unit:lattice_shells", "golden:lattice_chain"],
  "lattice.certify_gamma": ["unit:lattice_gamma", "golden:lattice_chain"],
  "lattice.certify_lambda": ["unit:lattice_lambda", "golden:lattice_chain"],
  "lattice.decay_sum_check": ["unit:lattice_decay_sum", "golden:lattice_chain"],
  "pauli.multiply": ["unit:pauli_products_dense_oracle"],
  "pauli.commutator": ["unit:pauli_commutators_dense_oracle"],
  "pauli.to_dense": ["unit:pauli_to_dense_kron_oracle"],
  "hamiltonian.build_model": ["unit:hamiltonian_presets", "golden:model_check_chain"],
  "hamiltonian.certify_assumption": ["unit:hamiltonian_assumption", "golden:model_check_chain"],
  "hamiltonian.one_site_energy": ["unit:hamiltonian_one_site_energy"],
  "hamiltonian.derived_constants": ["unit:hamiltonian_derived_constants", "golden:model_check_chain"],
  "evolve.heisenberg_evolve": ["unit:evolve_closed_form", "acceptance:criterion1"],
  "evolve.bch_expand": ["unit:bch_first_order", "unit:bch_dense_convergence"],
  "evolve.stochastic_frobenius": ["unit:stochastic_estimator"],
  "locality.schatten_norm": ["unit:norms_holder", "unit:norm_ordering"],
  "locality.local_restrict": ["unit:restrict_closed_form", "acceptance:criterion2"],
  "locality.approx_error": ["unit:approx_error_cases"],
  "locality.otoc": ["unit:otoc_closed_form", "acceptance:criterion1", "golden:otoc_2site"],
  "locality.unitary_connection": ["unit:recursion_degenerate", "acceptance:criterion3"],
  "bounds.zeta": ["unit:bounds_zeta", "acceptance:criterion9"],
  "bounds.theorem1_rhs": ["unit:bounds_theorem1", "acceptance:criterion5"],
  "bounds.corollary_rhs": ["unit:bounds_corollary"],
  "bounds.opnorm_bound_rhs": ["unit:bounds_opnorm"],
  "bounds.hk_short_step_rhs": ["unit:bounds_hk_step"],
  "bounds.theoremS3_rhs": ["unit:bounds_theorem_s3", "acceptance:criterion4"],
  "bounds.scrambling_time": ["unit:bounds_scrambling", "acceptance:criterion9"],
  "cluster.enumerate_connected_strings": ["unit:cluster_enumeration", "acceptance:criterion7"],
  "cluster.nested_commutator": ["unit:cluster_nested_commutator"],
  "cluster.lemma_s3_audit": ["unit:cluster_lemma_s3", "acceptance:criterion6", "golden:cluster_audit_chain"],
  "cluster.enumerate_graphs": ["unit:cluster_graphs", "acceptance:criterion7"],
  "cluster.decompose_string": ["unit:cluster_decomposition", "acceptance:criterion8"],
  "fit.front_extract": ["unit:fit_front_extract", "golden:fit_synthetic"],
  "fit.fit_exponent": ["unit:fit_exponent_synthetic", "golden:fit_synthetic"],
  "fit.cone_containment": ["unit:fit_containment", "acceptance:criterion5"],
  "cli.cmd_lattice_info": ["golden:lattice_chain", "unit:runner_commands"],
  "cli.cmd_model_check": ["golden:model_check_chain", "unit:runner_commands"],
  "cli.cmd_otoc": ["golden:otoc_2site", "acceptance:criterion10"],
  "cli.cmd_bound_check": ["golden:bound_check_small", "unit:runner_commands"],
  "cli.cmd_cluster_audit": ["golden:cluster_audit_chain"],
  "cli.cmd_fit": ["golden:fit_synthetic"],
  "regression.run_regression": ["unit:regression_suite", "ctest:regression"]
})JSON");
  return table;
}

}  // namespace otoclab

#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "core/hamiltonian.hpp"
#include "core/lattice.hpp"

namespace otoclab {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Budgets {
  int dense_cutoff = kDefaultDenseCutoff;
  std::size_t string_budget = 10'000'000;
  int graph_budget = 7;
};

/// A validated experiment configuration. The raw JSON is kept in canonical
/// form; its digest identifies the run in every manifest.
struct RunConfig {
  nlohmann::json raw;
  int schema_version = 1;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out_dir = "out";

  bool has_lattice = false;
  int dimension = 1;
  std::vector<int> extents;
  Boundary boundary = Boundary::Open;

  bool has_model = false;
  ModelSpec model;

  std::string command;
  nlohmann::json experiment;

  Budgets budgets;
  std::string config_hash;

  Lattice make_lattice() const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace otoclab

#pragma once

#include <functional>

#include "core/evolve.hpp"
#include "core/hamiltonian.hpp"

namespace otoclab {

/// A connected string: a root Pauli term followed by `order` Hamiltonian
/// Pauli terms, each overlapping the union support of its predecessors. The
/// nested half-commutator chain and the coupling product are carried along;
/// the nested result can be the zero string even when the supports connect.
struct StringW {
  PauliString root_op;
  double root_coeff = 1.0;
  int root_term_index = -1;           // index into pauli_terms, -1 for external seeds
  std::vector<int> elements;          // pauli_terms indices for positions 1..order
  double coupling_product = 1.0;      // product of all coefficients including the root
  PauliString nested;                 // eta_w P_{Lambda_w, q_w}; phase carries eta
  std::vector<std::uint64_t> union_mask;  // site bitmask of the union support

  int order() const { return static_cast<int>(elements.size()); }
  bool union_contains(int site) const;
  std::vector<int> union_sites(int lattice_size) const;
};

struct RootConstraint {
  enum class Kind { AllTerms, ContainsSite, SurfaceSet, FixedSeed };
  Kind kind = Kind::AllTerms;
  int site = -1;                 // ContainsSite
  std::vector<int> surface_level;  // SurfaceSet: signed surface distances per site
  int max_level = 0;             // SurfaceSet: admit terms entirely at levels <= this
  PauliString seed;              // FixedSeed
  double seed_coeff = 1.0;

  static RootConstraint all();
  static RootConstraint contains_site(int site);
  /// Terms contained in the union of shells at signed offset <= max_level
  /// around X (equivalently, inside X extended by max_level).
  static RootConstraint surface_set(const Lattice& lat, const Region& x, int max_level);
  static RootConstraint fixed_seed(const PauliString& seed);
};

struct EnumerationResult {
  bool complete = true;
  std::size_t yielded = 0;
};

/// Streams every connected string of the given order satisfying the root
/// constraint. Stops and reports incompleteness when the budget is reached.
EnumerationResult enumerate_connected_strings(const Hamiltonian& h, int order,
                                              const RootConstraint& root, std::size_t budget,
                                              const std::function<void(const StringW&)>& sink);

/// Recomputes the nested half-commutator chain of a string from scratch:
/// returns eta_w (as a phase) folded into the resulting Pauli string, or the
/// zero string when any intermediate commutator vanishes.
PauliString nested_commutator(const Hamiltonian& h, const StringW& w);

struct LemmaS3Audit {
  double lhs = 0.0;  // brute-force coupling-product sum, a lower bound if incomplete
  double rhs = 0.0;  // m! (m+1)^2 gtilde^(m+1) (d+1)^-alpha
  bool complete = true;
  std::size_t strings_counted = 0;
  int distance = 0;
};

LemmaS3Audit lemma_s3_audit(const Hamiltonian& h, int site_a, int site_b, int order,
                            const DerivedConstants& consts,
                            std::size_t budget = kDefaultStringBudget);

/// Rooted connection graph on order+1 vertices: vertex j >= 1 has exactly one
/// back-edge to parent[j-1] < j.
struct ConnectionGraph {
  std::vector<int> parent;
  int order() const { return static_cast<int>(parent.size()); }
};

constexpr int kDefaultGraphBudget = 7;

/// All back-edge graphs of the given order; there are exactly order! of them.
std::vector<ConnectionGraph> enumerate_graphs(int order, int max_order = kDefaultGraphBudget);

/// Constructive split of a string with nonzero nested commutator into two
/// parts, each internally connected to the root and each with union support
/// meeting the support of the nested result. Positions index the string with
/// 0 = root; the root lands in part2. Ambiguous assignments go to part1.
struct Decomposition {
  std::vector<int> part1;
  std::vector<int> part2;
};

Decomposition decompose_string(const Hamiltonian& h, const StringW& w);

struct DecompositionCheck {
  bool connected_to_root = false;   // property 1, both parts
  bool parts_meet_result = false;   // property 2, both parts
  bool ok() const { return connected_to_root && parts_meet_result; }
};

DecompositionCheck check_decomposition(const Hamiltonian& h, const StringW& w,
                                       const Decomposition& d);

/// Order-m slice of the cluster series for a seed operator: the sum over
/// connected strings of 2^m J_w eta_w P_{Lambda_w, q_w}. Equals the m-th
/// adjoint layer of the expansion of the seed.
StringSum cluster_series_layer(const Hamiltonian& h, const PauliString& seed, int order,
                               std::size_t budget = kDefaultStringBudget);

}  // namespace otoclab

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/dense.hpp"
#include "core/lattice.hpp"
#include "core/pauli.hpp"

namespace otoclab {

/// One k-body interaction term: a real combination of Pauli strings living on
/// a common support. Coefficients are real so every term is Hermitian.
struct InteractionTerm {
  Region support;
  std::vector<std::pair<PauliString, double>> strings;  // strings span the full register
  double op_norm = 0.0;       // exact operator norm of the term
  double fro_norm = 0.0;      // normalized Frobenius norm of the term
};

struct FieldSpec {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Description of a model to build on a lattice. Presets generate two-body
/// couplings J / d^alpha at every distance plus optional on-site fields;
/// explicit term lists take textual Pauli strings with real coefficients.
struct ModelSpec {
  std::string preset = "ising";  // ising | xy | heisenberg | explicit
  double coupling = 1.0;         // J
  double alpha = 2.0;            // power-law decay exponent
  FieldSpec fields;
  struct ExplicitTerm {
    std::vector<std::string> strings;
    std::vector<double> coeffs;
  };
  std::vector<ExplicitTerm> explicit_terms;
};

struct AssumptionCertificate {
  double j0_min = 0.0;   // minimal J0 satisfying the power-law assumption
  int witness_i = -1;    // saturating pair
  int witness_j = -1;
  int witness_distance = 0;
  double alpha = 0.0;
};

/// Constants derived from the certified model: the coupling certificate J0,
/// the Pauli-sum coupling J = 3^(k/2) J0, the one-site energy g, the combined
/// scale gtilde = max(g k, lambda J), the short-time Frobenius prefactor c0,
/// the cluster-sum constant c2 and the step threshold tau_star = 1/(2 e gtilde).
struct DerivedConstants {
  double alpha = 0.0;
  int dimension = 1;
  int k = 0;
  double j0 = 0.0;
  double j = 0.0;
  double g = 0.0;
  double gtilde = 0.0;
  double c0 = 0.0;
  double c2 = 0.0;
  double tau_star = 0.0;
  double gamma = 1.0;
  double lambda = 0.0;
};

class Hamiltonian {
 public:
  Hamiltonian(Lattice lattice, std::vector<InteractionTerm> terms, double alpha);

  const Lattice& lattice() const { return lattice_; }
  const std::vector<InteractionTerm>& terms() const { return terms_; }
  double alpha() const { return alpha_; }
  /// Largest term support size actually present (1 for a pure field model,
  /// 0 for an empty Hamiltonian).
  int k() const { return k_; }
  bool empty() const;

  /// Flattened (support, Pauli string, coefficient) decomposition used by the
  /// expansion and cluster machinery.
  struct PauliTerm {
    int term_index = 0;
    PauliString op;      // phase +1, full register
    double coeff = 0.0;  // real
  };
  const std::vector<PauliTerm>& pauli_terms() const { return pauli_terms_; }
  /// Indices of pauli_terms touching each site.
  const std::vector<std::vector<int>>& site_terms() const { return site_terms_; }

  DenseOp to_dense(int dense_cutoff = kDefaultDenseCutoff) const;

 private:
  Lattice lattice_;
  std::vector<InteractionTerm> terms_;
  double alpha_;
  int k_ = 0;
  std::vector<PauliTerm> pauli_terms_;
  std::vector<std::vector<int>> site_terms_;
};

Hamiltonian build_model(const ModelSpec& spec, const Lattice& lattice);

/// Minimal J0 such that sup over pairs at distance r of the summed term norms
/// is at most J0 (r+1)^-alpha, together with the saturating pair. Always
/// computable on a finite lattice; zero when no multi-site terms exist.
AssumptionCertificate certify_assumption(const Hamiltonian& h);

/// Exact one-site energy: max over sites of the absolute-coefficient sum of
/// all Pauli terms touching the site.
double one_site_energy(const Hamiltonian& h);

DerivedConstants derived_constants(const Hamiltonian& h, const GeometricConstants& geo);

}  // namespace otoclab

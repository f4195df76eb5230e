#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>

#include "core/dense.hpp"
#include "core/hamiltonian.hpp"

namespace otoclab {

/// Exact Heisenberg-picture evolution. The Hamiltonian is diagonalized once;
/// propagators for individual times are built from the spectrum and cached, so
/// many evolutions per model amortize one decomposition. The cache is
/// write-once per time value and guarded for concurrent readers.
class Evolver {
 public:
  Evolver(const Hamiltonian& h, int dense_cutoff = kDefaultDenseCutoff);

  int sites() const { return sites_; }
  const DenseOp& hamiltonian_dense() const { return h_dense_; }

  /// e^{iHt} W e^{-iHt}.
  DenseOp evolve(const DenseOp& w, double t) const;
  /// e^{-iHt}.
  const Mat& propagator(double t) const;

 private:
  int sites_;
  DenseOp h_dense_;
  Eigen::VectorXd evals_;
  Mat evecs_;
  mutable std::mutex mu_;
  mutable std::map<std::uint64_t, std::shared_ptr<const Mat>> cache_;
};

DenseOp heisenberg_evolve(const Hamiltonian& h, const DenseOp& w, double t,
                          int dense_cutoff = kDefaultDenseCutoff);

/// Truncated operator expansion: a Pauli-string-to-coefficient map together
/// with the truncation order and the coefficient mass lost to pruning. Keys
/// are phase-normalized; the phase lives in the coefficient.
struct StringSum {
  int sites = 0;
  int order = 0;
  std::map<PauliString, std::complex<double>> coeffs;
  double dropped_mass = 0.0;  // empirical, accumulated from pruned entries

  void add(const PauliString& s, std::complex<double> c);
  void prune(double threshold);
  DenseOp to_dense(int dense_cutoff = kDefaultDenseCutoff) const;
  Vec apply(const Vec& v) const;
  double frobenius_norm() const;  // normalized; strings are orthonormal
  bool is_hermitian(double tol = 1e-12) const;
};

/// Raised when a string expansion exceeds its configured entry budget; carries
/// partial diagnostics.
struct expansion_budget_error : resource_limit_error {
  expansion_budget_error(const std::string& what, int reached_order, std::size_t strings)
      : resource_limit_error(what), reached_order(reached_order), strings(strings) {}
  int reached_order;
  std::size_t strings;
};

constexpr double kDefaultPruneThreshold = 1e-14;
constexpr std::size_t kDefaultStringBudget = 10'000'000;

/// The nested-adjoint layers of the expansion of W0 under H. Layer m holds
/// ad_H^m(W0) exactly (no time factors); the partial sum through order M is
/// sum_m (it)^m/m! layer_m.
struct BchExpansion {
  int sites = 0;
  int order = 0;
  std::vector<StringSum> layers;
  double dropped_mass = 0.0;

  StringSum partial_sum(double t) const;
};

/// Scalar (2it)^m / m! used by both the expansion assembly and the cluster
/// series, so coefficient comparisons see identical arithmetic.
std::complex<double> order_prefactor(double t, int m);

BchExpansion bch_layers(const Hamiltonian& h, const PauliString& w0, int order,
                        double prune_threshold = kDefaultPruneThreshold,
                        std::size_t string_budget = kDefaultStringBudget);

StringSum bch_expand(const Hamiltonian& h, const PauliString& w0, double t, int order,
                     double prune_threshold = kDefaultPruneThreshold,
                     std::size_t string_budget = kDefaultStringBudget);

struct StochasticEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  int samples = 0;
};

/// Unbiased estimator of the squared normalized Frobenius norm via random
/// Rademacher probe vectors; reproducible under a fixed seed.
StochasticEstimate stochastic_frobenius_squared(const std::function<Vec(const Vec&)>& apply,
                                                int sites, int samples, std::uint64_t seed);
StochasticEstimate stochastic_frobenius_squared(const DenseOp& op, int samples,
                                                std::uint64_t seed);
StochasticEstimate stochastic_frobenius_squared(const StringSum& sum, int samples,
                                                std::uint64_t seed);

}  // namespace otoclab

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "core/lattice.hpp"
#include "core/pauli.hpp"

namespace otoclab {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Raised when a dense materialization would exceed the configured site cutoff.
struct resource_limit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr int kDefaultDenseCutoff = 12;

/// Explicit operator on the 2^n-dimensional space. Basis convention: bit j of
/// a basis index is the state of site j (site 0 least significant).
struct DenseOp {
  Mat m;
  int sites = 0;

  int dim() const { return static_cast<int>(m.rows()); }
};

DenseOp dense_identity(int sites);
DenseOp dense_zero(int sites);

/// Materializes a Pauli string; each column has a single nonzero entry.
DenseOp to_dense(const PauliString& p, int sites, int dense_cutoff = kDefaultDenseCutoff);

/// P * M and M * P without materializing P.
Mat pauli_mult_left(const PauliString& p, const Mat& m);
Mat pauli_mult_right(const Mat& m, const PauliString& p);
/// P |v>.
Vec pauli_apply(const PauliString& p, const Vec& v);

enum class NormKind { Trace, Frobenius, NormalizedFrobenius, Operator };

/// Exact Schatten norms: singular values for trace/operator norm (through a
/// full decomposition; Hermitian inputs take the eigenvalue route), entrywise
/// sums for the Frobenius norms. The normalized Frobenius norm divides by
/// sqrt(dim).
double schatten_norm(const Mat& m, NormKind kind);

bool is_hermitian(const Mat& m, double tol = 1e-12);

/// Normalized partial trace onto the kept region, re-tensored with identity:
/// the Frobenius-orthogonal projection onto operators supported on `keep`.
DenseOp local_restrict(const DenseOp& op, const Region& keep);

/// True when the operator acts as identity outside `keep` (commutes with
/// everything on the complement).
bool supported_on(const DenseOp& op, const Region& keep, double tol = 1e-10);

Mat random_hermitian(int dim, std::uint64_t seed);
Mat random_matrix(int dim, std::uint64_t seed);

}  // namespace otoclab

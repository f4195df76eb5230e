#include "core/dense.hpp"

#include <bit>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace otoclab {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};

std::complex<double> ipow(long e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}
}  // namespace

DenseOp dense_identity(int sites) {
  int dim = 1 << sites;
  return {Mat::Identity(dim, dim), sites};
}

DenseOp dense_zero(int sites) {
  int dim = 1 << sites;
  return {Mat::Zero(dim, dim), sites};
}

DenseOp to_dense(const PauliString& p, int sites, int dense_cutoff) {
  if (sites > dense_cutoff)
    throw resource_limit_error("dense materialization above the site cutoff");
  if (sites > 30) throw resource_limit_error("dense dimension overflow");
  if (p.sites() > sites) throw std::invalid_argument("pauli string spans more sites than requested");
  const int dim = 1 << sites;
  DenseOp out{Mat::Zero(dim, dim), sites};
  if (p.is_zero()) return out;
  std::uint64_t xm = p.x_words().empty() ? 0 : p.x_words()[0];
  std::uint64_t zm = p.z_words().empty() ? 0 : p.z_words()[0];
  std::uint64_t ym = xm & zm;
  int base = p.phase_exponent() + std::popcount(ym);
  for (int c = 0; c < dim; ++c) {
    int r = static_cast<int>(c ^ xm);
    long e = base + 2 * std::popcount(static_cast<std::uint64_t>(c) & zm);
    out.m(r, c) = ipow(e);
  }
  return out;
}

Mat pauli_mult_left(const PauliString& p, const Mat& m) {
  const int dim = static_cast<int>(m.rows());
  Mat out(dim, m.cols());
  if (p.is_zero()) {
    out.setZero();
    return out;
  }
  std::uint64_t xm = p.x_words().empty() ? 0 : p.x_words()[0];
  std::uint64_t zm = p.z_words().empty() ? 0 : p.z_words()[0];
  int base = p.phase_exponent() + std::popcount(xm & zm);
  for (int r = 0; r < dim; ++r) {
    // Row r of P*M is phase(c) * row c of M with c = r ^ xm, where phase(c)
    // is the single nonzero of P in column c.
    int c = static_cast<int>(r ^ xm);
    long e = base + 2 * std::popcount(static_cast<std::uint64_t>(c) & zm);
    out.row(r) = ipow(e) * m.row(c);
  }
  return out;
}

Mat pauli_mult_right(const Mat& m, const PauliString& p) {
  const int dim = static_cast<int>(m.cols());
  Mat out(m.rows(), dim);
  if (p.is_zero()) {
    out.setZero();
    return out;
  }
  std::uint64_t xm = p.x_words().empty() ? 0 : p.x_words()[0];
  std::uint64_t zm = p.z_words().empty() ? 0 : p.z_words()[0];
  int base = p.phase_exponent() + std::popcount(xm & zm);
  for (int c = 0; c < dim; ++c) {
    int r = static_cast<int>(c ^ xm);
    long e = base + 2 * std::popcount(static_cast<std::uint64_t>(c) & zm);
    out.col(c) = ipow(e) * m.col(r);
  }
  return out;
}

Vec pauli_apply(const PauliString& p, const Vec& v) {
  const int dim = static_cast<int>(v.size());
  Vec out(dim);
  if (p.is_zero()) {
    out.setZero();
    return out;
  }
  std::uint64_t xm = p.x_words().empty() ? 0 : p.x_words()[0];
  std::uint64_t zm = p.z_words().empty() ? 0 : p.z_words()[0];
  int base = p.phase_exponent() + std::popcount(xm & zm);
  for (int c = 0; c < dim; ++c) {
    int r = static_cast<int>(c ^ xm);
    long e = base + 2 * std::popcount(static_cast<std::uint64_t>(c) & zm);
    out(r) = ipow(e) * v(c);
  }
  return out;
}

bool is_hermitian(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

double schatten_norm(const Mat& m, NormKind kind) {
  switch (kind) {
    case NormKind::Frobenius:
      return m.norm();
    case NormKind::NormalizedFrobenius:
      return m.norm() / std::sqrt(static_cast<double>(m.rows()));
    case NormKind::Trace:
    case NormKind::Operator: {
      if (is_hermitian(m)) {
        Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        if (kind == NormKind::Operator) return ev.cwiseAbs().maxCoeff();
        return ev.cwiseAbs().sum();
      }
      Eigen::BDCSVD<Mat> svd(m);
      const auto& sv = svd.singularValues();
      if (kind == NormKind::Operator) return sv.size() ? sv(0) : 0.0;
      return sv.sum();
    }
  }
  throw std::logic_error("unknown norm kind");
}

DenseOp local_restrict(const DenseOp& op, const Region& keep) {
  const int n = op.sites;
  if (keep.lattice_size() != n && !(keep.lattice_size() == 0 && keep.empty()))
    throw std::invalid_argument("region does not match operator register");
  std::vector<int> kept = keep.sites();
  const int nk = static_cast<int>(kept.size());
  const int nt = n - nk;
  if (nt == 0) return op;
  std::vector<int> traced;
  traced.reserve(nt);
  {
    std::size_t ki = 0;
    for (int s = 0; s < n; ++s) {
      if (ki < kept.size() && kept[ki] == s) {
        ++ki;
      } else {
        traced.push_back(s);
      }
    }
  }
  const int dk = 1 << nk, dt = 1 << nt;
  auto scatter = [](int packed, const std::vector<int>& positions) {
    int out = 0;
    for (std::size_t b = 0; b < positions.size(); ++b)
      if (packed & (1 << b)) out |= 1 << positions[b];
    return out;
  };
  std::vector<int> kept_idx(dk), traced_idx(dt);
  for (int a = 0; a < dk; ++a) kept_idx[a] = scatter(a, kept);
  for (int e = 0; e < dt; ++e) traced_idx[e] = scatter(e, traced);

  Mat reduced = Mat::Zero(dk, dk);
  for (int a = 0; a < dk; ++a)
    for (int b = 0; b < dk; ++b) {
      std::complex<double> acc = 0;
      for (int e = 0; e < dt; ++e)
        acc += op.m(kept_idx[a] | traced_idx[e], kept_idx[b] | traced_idx[e]);
      reduced(a, b) = acc / static_cast<double>(dt);
    }

  DenseOp out{Mat::Zero(op.dim(), op.dim()), n};
  for (int a = 0; a < dk; ++a)
    for (int b = 0; b < dk; ++b) {
      if (reduced(a, b) == std::complex<double>(0, 0)) continue;
      for (int e = 0; e < dt; ++e)
        out.m(kept_idx[a] | traced_idx[e], kept_idx[b] | traced_idx[e]) = reduced(a, b);
    }
  return out;
}

bool supported_on(const DenseOp& op, const Region& keep, double tol) {
  DenseOp projected = local_restrict(op, keep);
  return (op.m - projected.m).cwiseAbs().maxCoeff() <= tol;
}

Mat random_hermitian(int dim, std::uint64_t seed) {
  Mat a = random_matrix(dim, seed);
  return 0.5 * (a + a.adjoint());
}

Mat random_matrix(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Mat a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = std::complex<double>(g(rng), g(rng));
  return a;
}

}  // namespace otoclab

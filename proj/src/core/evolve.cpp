#include "core/evolve.hpp"

#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>
#include <functional>
#include <random>

namespace otoclab {

Evolver::Evolver(const Hamiltonian& h, int dense_cutoff)
    : sites_(h.lattice().size()), h_dense_(h.to_dense(dense_cutoff)) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h_dense_.m);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
}

const Mat& Evolver::propagator(double t) const {
  if (!std::isfinite(t)) throw std::invalid_argument("evolution time must be finite");
  std::uint64_t key = std::bit_cast<std::uint64_t>(t);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
  }
  Vec phases(evals_.size());
  for (Eigen::Index k = 0; k < evals_.size(); ++k)
    phases(k) = std::exp(std::complex<double>(0.0, -evals_(k) * t));
  auto prop = std::make_shared<Mat>(evecs_ * phases.asDiagonal() * evecs_.adjoint());
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = cache_.emplace(key, std::move(prop));
  return *it->second;
}

DenseOp Evolver::evolve(const DenseOp& w, double t) const {
  if (w.sites != sites_) throw std::invalid_argument("operator register mismatch");
  if (t == 0.0) return w;
  const Mat& u = propagator(t);
  return {u.adjoint() * w.m * u, sites_};
}

DenseOp heisenberg_evolve(const Hamiltonian& h, const DenseOp& w, double t, int dense_cutoff) {
  Evolver ev(h, dense_cutoff);
  return ev.evolve(w, t);
}

void StringSum::add(const PauliString& s, std::complex<double> c) {
  if (s.is_zero() || c == std::complex<double>(0, 0)) return;
  PauliString key = s.phaseless();
  std::complex<double> v = s.phase_value() * c;
  auto [it, inserted] = coeffs.emplace(key, v);
  if (!inserted) {
    it->second += v;
    if (it->second == std::complex<double>(0, 0)) coeffs.erase(it);
  }
}

void StringSum::prune(double threshold) {
  for (auto it = coeffs.begin(); it != coeffs.end();) {
    if (std::abs(it->second) < threshold) {
      dropped_mass += std::abs(it->second);
      it = coeffs.erase(it);
    } else {
      ++it;
    }
  }
}

DenseOp StringSum::to_dense(int dense_cutoff) const {
  DenseOp out = dense_zero(sites);
  if (sites > dense_cutoff) throw resource_limit_error("string sum above the dense cutoff");
  for (const auto& [s, c] : coeffs) out.m += c * otoclab::to_dense(s, sites).m;
  return out;
}

Vec StringSum::apply(const Vec& v) const {
  Vec out = Vec::Zero(v.size());
  for (const auto& [s, c] : coeffs) out += c * pauli_apply(s, v);
  return out;
}

double StringSum::frobenius_norm() const {
  double s2 = 0.0;
  for (const auto& [s, c] : coeffs) s2 += std::norm(c);
  return std::sqrt(s2);
}

bool StringSum::is_hermitian(double tol) const {
  // A phase-normalized Pauli string is Hermitian, so the represented operator
  // is Hermitian iff every coefficient is real.
  for (const auto& [s, c] : coeffs)
    if (std::abs(c.imag()) > tol * std::max(1.0, std::abs(c))) return false;
  return true;
}

std::complex<double> order_prefactor(double t, int m) {
  std::complex<double> p(1.0, 0.0);
  const std::complex<double> step(0.0, 2.0 * t);
  for (int j = 1; j <= m; ++j) p *= step / static_cast<double>(j);
  return p;
}

BchExpansion bch_layers(const Hamiltonian& h, const PauliString& w0, int order,
                        double prune_threshold, std::size_t string_budget) {
  if (order < 0) throw std::invalid_argument("expansion order must be non-negative");
  const int n = h.lattice().size();
  BchExpansion out;
  out.sites = n;
  out.order = order;
  StringSum layer;
  layer.sites = n;
  layer.add(w0, 1.0);
  out.layers.push_back(layer);
  for (int m = 1; m <= order; ++m) {
    StringSum next;
    next.sites = n;
    next.dropped_mass = out.layers.back().dropped_mass;
    for (const auto& [s, c] : out.layers.back().coeffs) {
      for (const auto& pt : h.pauli_terms()) {
        // ad_{J P}(c s) = 2 J c * half_commutator(P, s); disjoint supports
        // commute, so only overlapping terms contribute.
        if (!pt.op.support_overlaps(s)) continue;
        PauliString half = pt.op.half_commutator(s);
        if (half.is_zero()) continue;
        next.add(half, 2.0 * pt.coeff * c);
      }
      if (next.coeffs.size() > string_budget)
        throw expansion_budget_error("string budget exceeded during expansion", m,
                                     next.coeffs.size());
    }
    next.prune(prune_threshold);
    out.layers.push_back(std::move(next));
  }
  out.dropped_mass = out.layers.back().dropped_mass;
  return out;
}

StringSum BchExpansion::partial_sum(double t) const {
  StringSum out;
  out.sites = sites;
  out.order = order;
  out.dropped_mass = dropped_mass;
  const std::complex<double> unit(0.0, 1.0);
  for (int m = 0; m < static_cast<int>(layers.size()); ++m) {
    // (it)^m / m!; layers hold full adjoint powers (the factor 2 per
    // half-commutator is already applied), so the plain Taylor weight applies.
    std::complex<double> pref(1.0, 0.0);
    for (int j = 1; j <= m; ++j) pref *= unit * t / static_cast<double>(j);
    for (const auto& [s, c] : layers[m].coeffs) out.add(s, pref * c);
  }
  return out;
}

StringSum bch_expand(const Hamiltonian& h, const PauliString& w0, double t, int order,
                     double prune_threshold, std::size_t string_budget) {
  return bch_layers(h, w0, order, prune_threshold, string_budget).partial_sum(t);
}

StochasticEstimate stochastic_frobenius_squared(const std::function<Vec(const Vec&)>& apply,
                                                int sites, int samples, std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  const int dim = 1 << sites;
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  std::mt19937_64 rng(seed);
  double sum = 0.0, sum2 = 0.0;
  Vec v(dim);
  for (int s = 0; s < samples; ++s) {
    // Rademacher probe from raw generator bits; E[v v^dag] = 1/dim.
    std::uint64_t word = 0;
    for (int i = 0; i < dim; ++i) {
      if (i % 64 == 0) word = rng();
      v(i) = ((word >> (i % 64)) & 1u) ? amp : -amp;
    }
    double x = apply(v).squaredNorm();
    sum += x;
    sum2 += x * x;
  }
  StochasticEstimate est;
  est.samples = samples;
  est.estimate = sum / samples;
  double var = std::max(0.0, (sum2 - sum * sum / samples) / (samples - 1));
  est.stderr_ = std::sqrt(var / samples);
  return est;
}

StochasticEstimate stochastic_frobenius_squared(const DenseOp& op, int samples,
                                                std::uint64_t seed) {
  return stochastic_frobenius_squared([&op](const Vec& v) { return Vec(op.m * v); }, op.sites,
                                      samples, seed);
}

StochasticEstimate stochastic_frobenius_squared(const StringSum& sum, int samples,
                                                std::uint64_t seed) {
  return stochastic_frobenius_squared([&sum](const Vec& v) { return sum.apply(v); }, sum.sites,
                                      samples, seed);
}

}  // namespace otoclab

#include "core/hamiltonian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>

namespace otoclab {

namespace {

// Exact norms of a term, computed on the compressed register of its support.
void compute_term_norms(InteractionTerm& term, int lattice_size) {
  const auto& sup = term.support.sites();
  const int ns = static_cast<int>(sup.size());
  if (term.strings.empty() || ns == 0) {
    term.op_norm = 0.0;
    term.fro_norm = 0.0;
    // Identity component (empty support) would be an energy shift; not used.
    return;
  }
  if (ns > 10) throw std::invalid_argument("interaction support too large for exact norms");
  std::map<int, int> compress;
  for (int a = 0; a < ns; ++a) compress[sup[a]] = a;
  const int dim = 1 << ns;
  Mat h = Mat::Zero(dim, dim);
  for (const auto& [str, coeff] : term.strings) {
    std::vector<std::pair<int, char>> letters;
    for (int s : str.support()) letters.emplace_back(compress.at(s), str.letter(s));
    PauliString local = PauliString::from_letters(ns, letters, str.phase_exponent());
    h += coeff * to_dense(local, ns).m;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  term.op_norm = es.eigenvalues().cwiseAbs().maxCoeff();
  term.fro_norm = h.norm() / std::sqrt(static_cast<double>(dim));
  (void)lattice_size;
}

}  // namespace

Hamiltonian::Hamiltonian(Lattice lattice, std::vector<InteractionTerm> terms, double alpha)
    : lattice_(std::move(lattice)), terms_(std::move(terms)), alpha_(alpha) {
  site_terms_.resize(lattice_.size());
  for (std::size_t ti = 0; ti < terms_.size(); ++ti) {
    auto& term = terms_[ti];
    k_ = std::max<int>(k_, static_cast<int>(term.support.size()));
    for (const auto& [str, coeff] : term.strings) {
      if (str.phase_exponent() != 0)
        throw std::invalid_argument("hamiltonian strings must carry unit phase");
      for (int s : str.support())
        if (!term.support.contains(s))
          throw std::invalid_argument("hamiltonian string leaves its declared support");
      if (coeff == 0.0) continue;
      pauli_terms_.push_back({static_cast<int>(ti), str, coeff});
    }
    compute_term_norms(term, lattice_.size());
  }
  for (std::size_t pi = 0; pi < pauli_terms_.size(); ++pi)
    for (int s : pauli_terms_[pi].op.support()) site_terms_[s].push_back(static_cast<int>(pi));
}

bool Hamiltonian::empty() const { return pauli_terms_.empty(); }

DenseOp Hamiltonian::to_dense(int dense_cutoff) const {
  const int n = lattice_.size();
  if (n > dense_cutoff) throw resource_limit_error("hamiltonian above the dense cutoff");
  DenseOp h = dense_zero(n);
  for (const auto& pt : pauli_terms_) h.m += pt.coeff * otoclab::to_dense(pt.op, n).m;
  return h;
}

Hamiltonian build_model(const ModelSpec& spec, const Lattice& lattice) {
  const int n = lattice.size();
  std::vector<InteractionTerm> terms;

  auto add_pair = [&](int i, int j, const std::vector<std::pair<std::string, double>>& parts) {
    InteractionTerm t;
    t.support = Region({i, j}, n);
    for (const auto& [kind, c] : parts) {
      if (c == 0.0) continue;
      t.strings.emplace_back(
          PauliString::from_letters(n, {{i, kind[0]}, {j, kind[1]}}), c);
    }
    if (!t.strings.empty()) terms.push_back(std::move(t));
  };

  if (spec.preset == "explicit") {
    for (const auto& et : spec.explicit_terms) {
      if (et.strings.size() != et.coeffs.size())
        throw std::invalid_argument("explicit term needs one coefficient per string");
      InteractionTerm t;
      std::vector<int> sup;
      for (std::size_t s = 0; s < et.strings.size(); ++s) {
        PauliString p = PauliString::parse(et.strings[s], n);
        if (p.is_zero()) throw std::invalid_argument("explicit term uses the zero string");
        if (p.phase_exponent() == 2) {
          p = p.with_phase(0);
          t.strings.emplace_back(p, -et.coeffs[s]);
        } else if (p.phase_exponent() == 0) {
          t.strings.emplace_back(p, et.coeffs[s]);
        } else {
          throw std::invalid_argument("explicit term phase must be real");
        }
        for (int site : p.support()) sup.push_back(site);
      }
      t.support = Region(sup, n);
      terms.push_back(std::move(t));
    }
  } else if (spec.preset == "ising" || spec.preset == "xy" || spec.preset == "heisenberg") {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        double d = lattice.distance(i, j);
        double c = spec.coupling / std::pow(d, spec.alpha);
        if (c == 0.0) continue;
        if (spec.preset == "ising") {
          add_pair(i, j, {{"XX", c}});
        } else if (spec.preset == "xy") {
          add_pair(i, j, {{"XX", c}, {"YY", c}});
        } else {
          add_pair(i, j, {{"XX", c}, {"YY", c}, {"ZZ", c}});
        }
      }
    }
  } else {
    throw std::invalid_argument("unknown model preset: " + spec.preset);
  }

  if (spec.preset != "explicit") {
    const FieldSpec& f = spec.fields;
    if (f.x != 0.0 || f.y != 0.0 || f.z != 0.0) {
      for (int i = 0; i < n; ++i) {
        InteractionTerm t;
        t.support = Region({i}, n);
        if (f.x != 0.0) t.strings.emplace_back(PauliString::from_letters(n, {{i, 'X'}}), f.x);
        if (f.y != 0.0) t.strings.emplace_back(PauliString::from_letters(n, {{i, 'Y'}}), f.y);
        if (f.z != 0.0) t.strings.emplace_back(PauliString::from_letters(n, {{i, 'Z'}}), f.z);
        terms.push_back(std::move(t));
      }
    }
  }

  return Hamiltonian(lattice, std::move(terms), spec.alpha);
}

AssumptionCertificate certify_assumption(const Hamiltonian& h) {
  AssumptionCertificate cert;
  cert.alpha = h.alpha();
  const Lattice& lat = h.lattice();
  const int n = lat.size();
  // pair_sum[(i,j)] = sum of ||h_Z|| over terms whose support contains both.
  std::map<std::pair<int, int>, double> pair_sum;
  for (const auto& term : h.terms()) {
    const auto& sup = term.support.sites();
    if (sup.size() < 2) continue;
    for (std::size_t a = 0; a < sup.size(); ++a)
      for (std::size_t b = a + 1; b < sup.size(); ++b)
        pair_sum[{sup[a], sup[b]}] += term.op_norm;
  }
  (void)n;
  for (const auto& [pair, sum] : pair_sum) {
    int d = lat.distance(pair.first, pair.second);
    double required = sum * std::pow(d + 1.0, h.alpha());
    if (required > cert.j0_min) {
      cert.j0_min = required;
      cert.witness_i = pair.first;
      cert.witness_j = pair.second;
      cert.witness_distance = d;
    }
  }
  return cert;
}

double one_site_energy(const Hamiltonian& h) {
  double g = 0.0;
  for (int i = 0; i < h.lattice().size(); ++i) {
    double s = 0.0;
    for (int pi : h.site_terms()[i]) s += std::abs(h.pauli_terms()[pi].coeff);
    g = std::max(g, s);
  }
  return g;
}

DerivedConstants derived_constants(const Hamiltonian& h, const GeometricConstants& geo) {
  const int D = h.lattice().dimension();
  const double alpha = h.alpha();
  if (alpha <= D) throw std::invalid_argument("derived constants need alpha > D");
  DerivedConstants c;
  c.alpha = alpha;
  c.dimension = D;
  c.k = std::max(h.k(), 1);
  c.j0 = certify_assumption(h).j0_min;
  c.j = std::pow(3.0, c.k / 2.0) * c.j0;
  c.g = one_site_energy(h);
  c.gamma = geo.gamma;
  c.lambda = geo.lambda;
  c.gtilde = std::max(c.g * c.k, c.lambda * c.j);
  // 2 alpha - D - 1 > 0 follows from alpha > D >= 1.
  c.c0 = std::pow(2.0, alpha - D / 2.0 + 2.0) * c.j0 * c.gamma / (2.0 * alpha - D - 1.0) +
         80.0 * c.gtilde * c.gamma * std::pow(2.0, alpha - D / 2.0) / (alpha - D) *
             std::sqrt(2.0 * alpha - 2.0 * D + c.gamma);
  c.c2 = std::pow(2.0, alpha) * (2.0 + c.gamma / (alpha - D));
  c.tau_star = (c.gtilde > 0.0) ? 1.0 / (2.0 * std::exp(1.0) * c.gtilde)
                                : std::numeric_limits<double>::infinity();
  return c;
}

}  // namespace otoclab

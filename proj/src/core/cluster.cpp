#include "core/cluster.hpp"

#include <cmath>
#include <numeric>

namespace otoclab {

namespace {

std::vector<std::uint64_t> support_mask(const PauliString& p) {
  std::vector<std::uint64_t> m(p.x_words().size());
  for (std::size_t w = 0; w < m.size(); ++w) m[w] = p.x_words()[w] | p.z_words()[w];
  return m;
}

bool masks_overlap(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  for (std::size_t w = 0; w < a.size() && w < b.size(); ++w)
    if (a[w] & b[w]) return true;
  return false;
}

void mask_or(std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t w = 0; w < b.size(); ++w) a[w] |= b[w];
}

bool mask_contains(const std::vector<std::uint64_t>& a, int site) {
  std::size_t w = static_cast<std::size_t>(site) / 64;
  return w < a.size() && (a[w] >> (site % 64)) & 1u;
}

double factorial(int m) {
  double f = 1.0;
  for (int j = 2; j <= m; ++j) f *= j;
  return f;
}

}  // namespace

bool StringW::union_contains(int site) const { return mask_contains(union_mask, site); }

std::vector<int> StringW::union_sites(int lattice_size) const {
  std::vector<int> out;
  for (int s = 0; s < lattice_size; ++s)
    if (mask_contains(union_mask, s)) out.push_back(s);
  return out;
}

RootConstraint RootConstraint::all() { return {}; }

RootConstraint RootConstraint::contains_site(int site) {
  RootConstraint rc;
  rc.kind = Kind::ContainsSite;
  rc.site = site;
  return rc;
}

RootConstraint RootConstraint::surface_set(const Lattice& lat, const Region& x, int max_level) {
  RootConstraint rc;
  rc.kind = Kind::SurfaceSet;
  rc.surface_level = surface_distances(lat, x);
  rc.max_level = max_level;
  return rc;
}

RootConstraint RootConstraint::fixed_seed(const PauliString& seed) {
  RootConstraint rc;
  rc.kind = Kind::FixedSeed;
  rc.seed = seed;
  return rc;
}

namespace {

struct Enumerator {
  const Hamiltonian& h;
  int order;
  std::size_t budget;
  const std::function<void(const StringW&)>& sink;
  EnumerationResult result;
  StringW current;

  bool extend(int depth) {
    if (depth == order) {
      if (result.yielded >= budget) {
        result.complete = false;
        return false;
      }
      ++result.yielded;
      sink(current);
      return true;
    }
    const auto& terms = h.pauli_terms();
    for (std::size_t ti = 0; ti < terms.size(); ++ti) {
      const auto& pt = terms[ti];
      auto tm = support_mask(pt.op);
      if (!masks_overlap(current.union_mask, tm)) continue;
      auto saved_mask = current.union_mask;
      PauliString saved_nested = current.nested;
      double saved_product = current.coupling_product;

      current.elements.push_back(static_cast<int>(ti));
      mask_or(current.union_mask, tm);
      current.coupling_product *= pt.coeff;
      if (!current.nested.is_zero()) current.nested = pt.op.half_commutator(current.nested);
      bool keep_going = extend(depth + 1);
      current.elements.pop_back();
      current.union_mask = std::move(saved_mask);
      current.nested = std::move(saved_nested);
      current.coupling_product = saved_product;
      if (!keep_going) return false;
    }
    return true;
  }
};

bool root_admits(const RootConstraint& rc, const PauliString& op) {
  switch (rc.kind) {
    case RootConstraint::Kind::AllTerms:
      return true;
    case RootConstraint::Kind::ContainsSite:
      return op.site_in_support(rc.site);
    case RootConstraint::Kind::SurfaceSet: {
      int level = std::numeric_limits<int>::min();
      for (int s : op.support()) level = std::max(level, rc.surface_level[s]);
      return level <= rc.max_level;
    }
    case RootConstraint::Kind::FixedSeed:
      return false;  // roots are supplied, not matched
  }
  return false;
}

}  // namespace

EnumerationResult enumerate_connected_strings(const Hamiltonian& h, int order,
                                              const RootConstraint& root, std::size_t budget,
                                              const std::function<void(const StringW&)>& sink) {
  if (order < 0) throw std::invalid_argument("string order must be non-negative");
  Enumerator en{h, order, budget, sink, {}, {}};

  auto run_root = [&](const PauliString& op, double coeff, int term_index) {
    en.current = StringW{};
    en.current.root_op = op;
    en.current.root_coeff = coeff;
    en.current.root_term_index = term_index;
    en.current.coupling_product = coeff;
    en.current.nested = op;
    en.current.union_mask = support_mask(op);
    return en.extend(0);
  };

  if (root.kind == RootConstraint::Kind::FixedSeed) {
    run_root(root.seed, root.seed_coeff, -1);
  } else {
    const auto& terms = h.pauli_terms();
    for (std::size_t ti = 0; ti < terms.size(); ++ti) {
      if (!root_admits(root, terms[ti].op)) continue;
      if (!run_root(terms[ti].op, terms[ti].coeff, static_cast<int>(ti))) break;
    }
  }
  return en.result;
}

PauliString nested_commutator(const Hamiltonian& h, const StringW& w) {
  PauliString acc = w.root_op;
  for (int ti : w.elements) {
    if (acc.is_zero()) break;
    acc = h.pauli_terms()[ti].op.half_commutator(acc);
  }
  return acc;
}

LemmaS3Audit lemma_s3_audit(const Hamiltonian& h, int site_a, int site_b, int order,
                            const DerivedConstants& consts, std::size_t budget) {
  h.lattice().check_site(site_a);
  h.lattice().check_site(site_b);
  LemmaS3Audit audit;
  audit.distance = h.lattice().distance(site_a, site_b);
  auto res = enumerate_connected_strings(
      h, order, RootConstraint::all(), budget, [&](const StringW& w) {
        if (w.union_contains(site_a) && w.union_contains(site_b))
          audit.lhs += std::abs(w.coupling_product);
      });
  audit.complete = res.complete;
  audit.strings_counted = res.yielded;
  audit.rhs = factorial(order) * (order + 1.0) * (order + 1.0) *
              std::pow(consts.gtilde, order + 1) * std::pow(audit.distance + 1.0, -consts.alpha);
  return audit;
}

std::vector<ConnectionGraph> enumerate_graphs(int order, int max_order) {
  if (order < 0) throw std::invalid_argument("graph order must be non-negative");
  if (order > max_order) throw resource_limit_error("graph enumeration above the order budget");
  std::vector<ConnectionGraph> out;
  ConnectionGraph g;
  g.parent.assign(order, 0);
  // Mixed-radix counter: vertex j may attach to any of 0..j-1.
  while (true) {
    out.push_back(g);
    int j = order - 1;
    while (j >= 0) {
      if (g.parent[j] < j) {
        ++g.parent[j];
        break;
      }
      g.parent[j] = 0;
      --j;
    }
    if (j < 0) break;
  }
  return out;
}

Decomposition decompose_string(const Hamiltonian& h, const StringW& w) {
  if (w.order() < 1) throw std::invalid_argument("decomposition needs order >= 1");
  PauliString nested = nested_commutator(h, w);
  if (nested.is_zero())
    throw std::invalid_argument("decomposition requires a nonzero nested commutator");

  Decomposition d;
  d.part1 = {1};
  d.part2 = {0};
  auto u1 = support_mask(h.pauli_terms()[w.elements[0]].op);
  auto u2 = support_mask(w.root_op);
  PauliString acc = h.pauli_terms()[w.elements[0]].op.half_commutator(w.root_op);

  for (int p = 2; p <= w.order(); ++p) {
    const PauliString& zp = h.pauli_terms()[w.elements[p - 1]].op;
    acc = zp.half_commutator(acc);
    auto zm = support_mask(zp);
    bool meets1 = masks_overlap(u1, zm);
    bool meets2 = masks_overlap(u2, zm);
    if (!meets1 && !meets2)
      throw std::logic_error("string violates the connectivity condition");
    bool to_part1;
    if (!meets1) {
      to_part1 = false;
    } else if (!meets2) {
      to_part1 = true;
    } else {
      auto lm = support_mask(acc);
      bool a1 = masks_overlap(u1, lm);
      bool a2 = masks_overlap(u2, lm);
      if (a1 && a2) {
        to_part1 = true;  // free choice, fixed deterministically
      } else if (!a1) {
        to_part1 = true;  // the deficient side absorbs the new element
      } else {
        to_part1 = false;
      }
    }
    if (to_part1) {
      d.part1.push_back(p);
      mask_or(u1, zm);
    } else {
      d.part2.push_back(p);
      mask_or(u2, zm);
    }
  }
  return d;
}

namespace {

const PauliString& position_op(const Hamiltonian& h, const StringW& w, int pos) {
  return pos == 0 ? w.root_op : h.pauli_terms()[w.elements[pos - 1]].op;
}

// Every element of the part reaches the root through pairwise support
// overlaps within the part (plus the root itself).
bool part_connected_to_root(const Hamiltonian& h, const StringW& w, const std::vector<int>& part) {
  std::vector<int> nodes = part;
  if (std::find(nodes.begin(), nodes.end(), 0) == nodes.end()) nodes.push_back(0);
  std::vector<int> uf(nodes.size());
  std::iota(uf.begin(), uf.end(), 0);
  std::function<int(int)> find = [&](int a) { return uf[a] == a ? a : uf[a] = find(uf[a]); };
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    auto ma = support_mask(position_op(h, w, nodes[a]));
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      auto mb = support_mask(position_op(h, w, nodes[b]));
      if (masks_overlap(ma, mb)) uf[find(static_cast<int>(a))] = find(static_cast<int>(b));
    }
  }
  int root_node = 0;
  for (std::size_t a = 0; a < nodes.size(); ++a)
    if (nodes[a] == 0) root_node = static_cast<int>(a);
  for (std::size_t a = 0; a < nodes.size(); ++a)
    if (find(static_cast<int>(a)) != find(root_node)) return false;
  return true;
}

}  // namespace

DecompositionCheck check_decomposition(const Hamiltonian& h, const StringW& w,
                                       const Decomposition& d) {
  DecompositionCheck out;
  PauliString nested = nested_commutator(h, w);
  if (nested.is_zero()) return out;
  auto lm = support_mask(nested);
  auto union_of = [&](const std::vector<int>& part) {
    std::vector<std::uint64_t> m;
    for (int pos : part) mask_or(m, support_mask(position_op(h, w, pos)));
    return m;
  };
  auto u1 = union_of(d.part1);
  auto u2 = union_of(d.part2);
  out.parts_meet_result = masks_overlap(u1, lm) && masks_overlap(u2, lm);
  out.connected_to_root =
      part_connected_to_root(h, w, d.part1) && part_connected_to_root(h, w, d.part2);
  return out;
}

StringSum cluster_series_layer(const Hamiltonian& h, const PauliString& seed, int order,
                               std::size_t budget) {
  StringSum layer;
  layer.sites = h.lattice().size();
  auto res = enumerate_connected_strings(
      h, order, RootConstraint::fixed_seed(seed), budget, [&](const StringW& w) {
        if (w.nested.is_zero()) return;
        layer.add(w.nested, std::ldexp(w.coupling_product, order));
      });
  if (!res.complete)
    throw expansion_budget_error("cluster series exceeded the string budget", order, res.yielded);
  return layer;
}

}  // namespace otoclab

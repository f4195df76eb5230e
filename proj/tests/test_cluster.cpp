#include <doctest.h>

#include <cmath>
#include <set>

#include "core/cluster.hpp"
#include "oracles.hpp"

using namespace otoclab;

namespace {

Hamiltonian ising_chain(int n, double alpha, double bz) {
  Lattice lat(1, {n}, Boundary::Open);
  ModelSpec spec;
  spec.preset = "ising";
  spec.coupling = 1.0;
  spec.alpha = alpha;
  spec.fields.z = bz;
  return build_model(spec, lat);
}

// Dyadic couplings so that coupling products and layer sums are exact in
// binary floating point.
Hamiltonian dyadic_model(int n) {
  Lattice lat(1, {n}, Boundary::Open);
  ModelSpec spec;
  spec.preset = "explicit";
  spec.alpha = 2.0;
  for (int i = 0; i + 1 < n; ++i) {
    spec.explicit_terms.push_back(
        {{"+1*X" + std::to_string(i) + " X" + std::to_string(i + 1)}, {i % 2 ? 0.5 : 1.0}});
  }
  for (int i = 0; i + 2 < n; ++i) {
    spec.explicit_terms.push_back(
        {{"+1*Z" + std::to_string(i) + " Z" + std::to_string(i + 2)}, {0.25}});
  }
  for (int i = 0; i < n; ++i) {
    spec.explicit_terms.push_back({{"+1*Z" + std::to_string(i)}, {0.5}});
  }
  return build_model(spec, lat);
}

std::vector<StringW> collect(const Hamiltonian& h, int order, const RootConstraint& rc,
                             std::size_t budget = kDefaultStringBudget) {
  std::vector<StringW> out;
  enumerate_connected_strings(h, order, rc, budget, [&](const StringW& w) { out.push_back(w); });
  return out;
}

}  // namespace

TEST_CASE("cluster_enumeration") {
  SUBCASE("order zero yields the admissible roots") {
    Hamiltonian h = ising_chain(2, 2.0, 0.5);  // terms: X0X1, Z0, Z1
    CHECK(collect(h, 0, RootConstraint::all()).size() == 3);
    CHECK(collect(h, 0, RootConstraint::contains_site(0)).size() == 2);
  }
  SUBCASE("two-site model with field at order one, hand count") {
    Hamiltonian h = ising_chain(2, 2.0, 0.5);
    auto strings = collect(h, 1, RootConstraint::contains_site(0));
    // Root X0X1 connects to all three terms; root Z0 connects to X0X1 and Z0.
    CHECK(strings.size() == 5);
  }
  SUBCASE("every yielded string satisfies the connectivity condition") {
    Hamiltonian h = ising_chain(4, 2.0, 0.3);
    auto strings = collect(h, 3, RootConstraint::all());
    for (const auto& w : strings) {
      std::vector<std::uint64_t> grown(1, 0);
      auto add_mask = [&](const PauliString& p) {
        for (std::size_t k = 0; k < p.x_words().size(); ++k)
          grown[k] |= p.x_words()[k] | p.z_words()[k];
      };
      add_mask(w.root_op);
      for (int ti : w.elements) {
        const auto& op = h.pauli_terms()[ti].op;
        bool overlaps = false;
        for (std::size_t k = 0; k < op.x_words().size(); ++k)
          overlaps |= ((op.x_words()[k] | op.z_words()[k]) & grown[k]) != 0;
        CHECK(overlaps);
        add_mask(op);
      }
    }
  }
  SUBCASE("generator agrees with a brute-force filter of all tuples") {
    Hamiltonian h = ising_chain(3, 2.0, 0.4);
    const auto& terms = h.pauli_terms();
    for (int m : {1, 2}) {
      auto generated = collect(h, m, RootConstraint::all());
      std::set<std::vector<int>> got;
      for (const auto& w : generated) {
        std::vector<int> key{w.root_term_index};
        key.insert(key.end(), w.elements.begin(), w.elements.end());
        CHECK(got.insert(key).second);  // no duplicates
      }
      std::set<std::vector<int>> expected;
      std::vector<int> tuple(m + 1);
      std::function<void(int)> rec = [&](int depth) {
        if (depth == m + 1) {
          // connectivity filter
          Region u({}, 0);
          std::vector<int> sites;
          auto support_of = [&](int ti) { return terms[ti].op.support(); };
          std::vector<int> acc = support_of(tuple[0]);
          bool ok = true;
          for (int j = 1; j <= m; ++j) {
            auto sj = support_of(tuple[j]);
            bool overlap = false;
            for (int s : sj)
              if (std::find(acc.begin(), acc.end(), s) != acc.end()) overlap = true;
            if (!overlap) {
              ok = false;
              break;
            }
            for (int s : sj)
              if (std::find(acc.begin(), acc.end(), s) == acc.end()) acc.push_back(s);
          }
          if (ok) expected.insert(tuple);
          return;
        }
        for (int ti = 0; ti < static_cast<int>(terms.size()); ++ti) {
          tuple[depth] = ti;
          rec(depth + 1);
        }
      };
      rec(0);
      CHECK(got == expected);
    }
  }
  SUBCASE("budget reports partial enumeration") {
    Hamiltonian h = ising_chain(4, 2.0, 0.3);
    std::size_t seen = 0;
    auto res = enumerate_connected_strings(h, 2, RootConstraint::all(), 10,
                                           [&](const StringW&) { ++seen; });
    CHECK(!res.complete);
    CHECK(res.yielded == 10);
    CHECK(seen == 10);
  }
  SUBCASE("surface-set roots select terms inside the extended region") {
    Hamiltonian h = ising_chain(6, 2.0, 0.0);
    Region x({0, 1}, 6);
    // Level 1 admits supports within {0,1,2}: pairs (0,1), (1,2) plus the
    // long-range (0,2) term.
    auto rc = RootConstraint::surface_set(h.lattice(), x, 1);
    auto roots = collect(h, 0, rc);
    std::set<std::vector<int>> supports;
    for (const auto& w : roots) supports.insert(w.root_op.support());
    CHECK(supports ==
          std::set<std::vector<int>>{{0, 1}, {1, 2}, {0, 2}});
  }
}

TEST_CASE("cluster_nested_commutator") {
  Hamiltonian h = ising_chain(3, 2.0, 0.5);
  SUBCASE("order zero returns the seed") {
    auto strings = collect(h, 0, RootConstraint::fixed_seed(PauliString::parse("+1*X0", 3)));
    REQUIRE(strings.size() == 1);
    CHECK(strings[0].nested == PauliString::parse("+1*X0", 3));
  }
  SUBCASE("seed X0 under ZZ gives the dense-verified half commutator") {
    Lattice lat(1, {2}, Boundary::Open);
    ModelSpec spec;
    spec.preset = "explicit";
    spec.alpha = 2.0;
    spec.explicit_terms.push_back({{"+1*Z0 Z1"}, {1.0}});
    Hamiltonian zz = build_model(spec, lat);
    auto strings = collect(zz, 1, RootConstraint::fixed_seed(PauliString::parse("+1*X0", 2)));
    REQUIRE(strings.size() == 1);
    const StringW& w = strings[0];
    PauliString recomputed = nested_commutator(zz, w);
    CHECK(recomputed == w.nested);
    Mat seed = oracles::kron_pauli(PauliString::parse("+1*X0", 2), 2);
    Mat term = oracles::kron_pauli(PauliString::parse("+1*Z0 Z1", 2), 2);
    Mat expect = 0.5 * (term * seed - seed * term);
    CHECK((to_dense(w.nested, 2).m - expect).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("disconnected appendix vanishes") {
    StringW w;
    w.root_op = PauliString::parse("+1*X0", 3);
    // Z1 Z2 shares no site with X0's support after the first hop never links.
    w.elements = {};
    for (std::size_t ti = 0; ti < h.pauli_terms().size(); ++ti)
      if (h.pauli_terms()[ti].op.support() == std::vector<int>{1, 2}) {
        w.elements.push_back(static_cast<int>(ti));
        break;
      }
    REQUIRE(w.elements.size() == 1);
    CHECK(nested_commutator(h, w).is_zero());
  }
}

TEST_CASE("cluster_lemma_s3") {
  for (int n : {4, 6}) {
    Hamiltonian h = ising_chain(n, 2.0, 0.5);
    GeometricConstants geo = certify_lattice(h.lattice(), 2.0, h.lattice().diameter());
    DerivedConstants consts = derived_constants(h, geo);
    for (int m : {0, 1, 2}) {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          auto audit = lemma_s3_audit(h, i, j, m, consts);
          CHECK(audit.complete);
          CHECK(audit.lhs <= audit.rhs * (1 + 1e-12));
        }
      }
    }
  }
  SUBCASE("order zero lhs is the direct pair sum") {
    Hamiltonian h = ising_chain(4, 2.0, 0.0);
    auto audit = lemma_s3_audit(h, 0, 1, 0, derived_constants(
        h, certify_lattice(h.lattice(), 2.0, 3)));
    CHECK(audit.lhs == doctest::Approx(1.0).epsilon(1e-14));  // only X0X1 spans both
  }
  SUBCASE("zero hamiltonian has empty sums") {
    Lattice lat(1, {4}, Boundary::Open);
    ModelSpec spec;
    spec.preset = "ising";
    spec.coupling = 0.0;
    spec.alpha = 2.0;
    Hamiltonian h = build_model(spec, lat);
    GeometricConstants geo = certify_lattice(lat, 2.0, 3);
    DerivedConstants consts{};
    consts.alpha = 2.0;
    auto audit = lemma_s3_audit(h, 0, 1, 1, consts);
    CHECK(audit.lhs == 0.0);
  }
}

TEST_CASE("cluster_graphs") {
  CHECK(enumerate_graphs(0).size() == 1);  // the empty edge list
  CHECK(enumerate_graphs(1).size() == 1);
  CHECK(enumerate_graphs(3).size() == 6);
  CHECK(enumerate_graphs(5).size() == 120);
  CHECK(enumerate_graphs(7).size() == 5040);
  SUBCASE("structure: first edge roots at zero, later edges point backward") {
    for (const auto& g : enumerate_graphs(4)) {
      REQUIRE(g.parent.size() == 4);
      CHECK(g.parent[0] == 0);
      for (int j = 0; j < 4; ++j) {
        CHECK(g.parent[j] >= 0);
        CHECK(g.parent[j] <= j);
      }
    }
  }
  SUBCASE("all graphs distinct") {
    auto graphs = enumerate_graphs(5);
    std::set<std::vector<int>> seen;
    for (const auto& g : graphs) CHECK(seen.insert(g.parent).second);
  }
  SUBCASE("budget enforcement") {
    CHECK_THROWS_AS(enumerate_graphs(8), resource_limit_error);
  }
}

TEST_CASE("cluster_decomposition") {
  Hamiltonian h = ising_chain(4, 2.0, 0.5);
  SUBCASE("order one follows the base case") {
    auto strings = collect(h, 1, RootConstraint::all());
    bool saw_nonzero = false;
    for (const auto& w : strings) {
      if (w.nested.is_zero()) continue;
      saw_nonzero = true;
      auto d = decompose_string(h, w);
      CHECK(d.part1 == std::vector<int>{1});
      CHECK(d.part2 == std::vector<int>{0});
      CHECK(check_decomposition(h, w, d).ok());
    }
    CHECK(saw_nonzero);
  }
  SUBCASE("hand-built three-element chain string") {
    Hamiltonian chain = ising_chain(4, 2.0, 0.0);
    auto find_term = [&](const std::vector<int>& support) {
      for (std::size_t ti = 0; ti < chain.pauli_terms().size(); ++ti)
        if (chain.pauli_terms()[ti].op.support() == support) return static_cast<int>(ti);
      throw std::logic_error("term not found");
    };
    StringW w;
    w.root_op = PauliString::parse("+1*Z1", 4);
    w.elements = {find_term({1, 2}), find_term({2, 3})};
    REQUIRE(!nested_commutator(chain, w).is_zero());
    auto d = decompose_string(chain, w);
    auto chk = check_decomposition(chain, w, d);
    CHECK(chk.connected_to_root);
    CHECK(chk.parts_meet_result);
  }
  SUBCASE("exhaustive audit at orders up to three") {
    std::size_t audited = 0;
    for (int m : {1, 2, 3}) {
      auto strings = collect(h, m, RootConstraint::all());
      for (const auto& w : strings) {
        if (w.nested.is_zero()) continue;
        auto d = decompose_string(h, w);
        CHECK(static_cast<int>(d.part1.size() + d.part2.size()) == m + 1);
        auto chk = check_decomposition(h, w, d);
        CHECK(chk.connected_to_root);
        CHECK(chk.parts_meet_result);
        ++audited;
      }
    }
    CHECK(audited > 100);
  }
  SUBCASE("zero-commutator strings rejected") {
    auto strings = collect(h, 2, RootConstraint::all());
    for (const auto& w : strings) {
      if (!w.nested.is_zero()) continue;
      CHECK_THROWS_AS(decompose_string(h, w), std::invalid_argument);
      break;
    }
  }
}

TEST_CASE("cluster_series_matches_expansion_layers") {
  SUBCASE("dyadic model: exact equality") {
    Hamiltonian h = dyadic_model(4);
    PauliString seed = PauliString::parse("+1*X0", 4);
    auto layers = bch_layers(h, seed, 4, /*prune=*/0.0);
    for (int m = 0; m <= 4; ++m) {
      StringSum cluster = cluster_series_layer(h, seed, m);
      CHECK(cluster.coeffs.size() == layers.layers[m].coeffs.size());
      for (const auto& [key, value] : layers.layers[m].coeffs) {
        auto it = cluster.coeffs.find(key);
        REQUIRE(it != cluster.coeffs.end());
        CHECK(it->second == value);  // bitwise: dyadic sums are exact
      }
    }
  }
  SUBCASE("generic ising model within floating-point tolerance") {
    Hamiltonian h = ising_chain(4, 2.0, 0.3);
    PauliString seed = PauliString::parse("+1*Z1", 4);
    auto layers = bch_layers(h, seed, 3, /*prune=*/0.0);
    for (int m = 0; m <= 3; ++m) {
      StringSum cluster = cluster_series_layer(h, seed, m);
      double scale = 1.0;
      for (const auto& [k, v] : layers.layers[m].coeffs) scale = std::max(scale, std::abs(v));
      for (const auto& [key, value] : layers.layers[m].coeffs) {
        auto it = cluster.coeffs.find(key);
        REQUIRE(it != cluster.coeffs.end());
        CHECK(std::abs(it->second - value) <= 1e-13 * scale);
      }
      CHECK(cluster.coeffs.size() == layers.layers[m].coeffs.size());
    }
  }
}

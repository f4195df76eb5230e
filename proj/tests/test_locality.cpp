#include <doctest.h>

#include <cmath>
#include <random>

#include "core/locality.hpp"
#include "oracles.hpp"

using namespace otoclab;

namespace {

Hamiltonian two_site_zz() {
  Lattice lat(1, {2}, Boundary::Open);
  ModelSpec spec;
  spec.preset = "explicit";
  spec.alpha = 2.0;
  spec.explicit_terms.push_back({{"+1*Z0 Z1"}, {1.0}});
  return build_model(spec, lat);
}

Hamiltonian chain_ising(int n, double alpha, double bz = 0.5) {
  Lattice lat(1, {n}, Boundary::Open);
  ModelSpec spec;
  spec.preset = "ising";
  spec.coupling = 1.0;
  spec.alpha = alpha;
  spec.fields.z = bz;
  return build_model(spec, lat);
}

}  // namespace

TEST_CASE("norms_holder") {
  SUBCASE("identity and single pauli normalizations") {
    CHECK(schatten_norm(Mat::Identity(8, 8), NormKind::NormalizedFrobenius) == doctest::Approx(1.0));
    Mat z0 = to_dense(PauliString::parse("+1*Z0", 3), 3).m;
    CHECK(schatten_norm(z0, NormKind::NormalizedFrobenius) == doctest::Approx(1.0));
    CHECK(schatten_norm(z0, NormKind::Operator) == doctest::Approx(1.0));
    CHECK(schatten_norm(z0, NormKind::Trace) == doctest::Approx(8.0));
    CHECK(schatten_norm(z0, NormKind::Frobenius) == doctest::Approx(std::sqrt(8.0)));
  }
  SUBCASE("generalized Holder inequality on random pairs") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
      Mat a = random_matrix(32, rng());
      Mat b = random_matrix(32, rng());
      double lhs = schatten_norm(a * b, NormKind::NormalizedFrobenius);
      double rhs = schatten_norm(a, NormKind::NormalizedFrobenius) *
                   schatten_norm(b, NormKind::Operator);
      CHECK(lhs <= rhs * (1 + 1e-10));
    }
  }
  SUBCASE("norm ordering F <= operator") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 30; ++trial) {
      Mat a = trial % 2 ? Mat(random_hermitian(16, rng())) : Mat(random_matrix(16, rng()));
      CHECK(schatten_norm(a, NormKind::NormalizedFrobenius) <=
            schatten_norm(a, NormKind::Operator) * (1 + 1e-10));
    }
  }
  SUBCASE("svd route and hermitian route agree") {
    std::mt19937_64 rng(33);
    Mat h = random_hermitian(24, rng());
    Eigen::BDCSVD<Mat> svd(h);
    CHECK(schatten_norm(h, NormKind::Operator) ==
          doctest::Approx(svd.singularValues()(0)).epsilon(1e-10));
    CHECK(schatten_norm(h, NormKind::Trace) ==
          doctest::Approx(svd.singularValues().sum()).epsilon(1e-10));
  }
}

TEST_CASE("restrict_closed_form") {
  SUBCASE("traceless pauli vanishes off its support") {
    DenseOp x0 = to_dense(PauliString::parse("+1*X0", 2), 2);
    DenseOp r = local_restrict(x0, Region({1}, 2));
    CHECK(r.m.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("two-site ZZ closed form") {
    Hamiltonian h = two_site_zz();
    Evolver ev(h);
    DenseOp x0 = to_dense(PauliString::parse("+1*X0", 2), 2);
    for (double t : {0.2, 0.7, 1.4}) {
      DenseOp wt = ev.evolve(x0, t);
      DenseOp r = local_restrict(wt, Region({0}, 2));
      Mat expect = std::cos(2 * t) * x0.m;
      CHECK((r.m - expect).cwiseAbs().maxCoeff() < 1e-12);
      double err = schatten_norm(wt.m - r.m, NormKind::NormalizedFrobenius);
      CHECK(err == doctest::Approx(std::abs(std::sin(2 * t))).epsilon(1e-10));
    }
  }
  SUBCASE("operators already supported inside are fixed points") {
    std::mt19937_64 rng(41);
    Mat local = random_hermitian(4, rng());
    // Embed on sites {0, 2} of a 3-site register by Kronecker with identity.
    Mat embedded = Mat::Zero(8, 8);
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) {
        if (((a >> 1) & 1) != ((b >> 1) & 1)) continue;
        int ra = ((a >> 2) << 1) | (a & 1);
        int rb = ((b >> 2) << 1) | (b & 1);
        embedded(a, b) = local(ra, rb);
      }
    DenseOp op{embedded, 3};
    Region keep({0, 2}, 3);
    CHECK(supported_on(op, keep));
    DenseOp r = local_restrict(op, keep);
    CHECK((r.m - embedded).cwiseAbs().maxCoeff() < 1e-12);
    // Idempotent.
    CHECK((local_restrict(r, keep).m - r.m).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("restriction commutes with everything outside and shrinks norms") {
    std::mt19937_64 rng(42);
    DenseOp op{random_hermitian(16, rng()), 4};
    Region keep({1, 2}, 4);
    DenseOp r = local_restrict(op, keep);
    CHECK(schatten_norm(r.m, NormKind::Operator) <=
          schatten_norm(op.m, NormKind::Operator) * (1 + 1e-12));
    Mat z3 = to_dense(PauliString::parse("+1*Z3", 4), 4).m;
    Mat x0 = to_dense(PauliString::parse("+1*X0", 4), 4).m;
    CHECK((r.m * z3 - z3 * r.m).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((r.m * x0 - x0 * r.m).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("full region returns the operator exactly") {
    std::mt19937_64 rng(43);
    DenseOp op{random_matrix(8, rng()), 3};
    CHECK((local_restrict(op, Region::full(3)).m - op.m).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("restrict_is_frobenius_projection") {
  // The normalized partial trace is never beaten by any candidate supported
  // on the kept region.
  std::mt19937_64 rng(44);
  Lattice lat(1, {4}, Boundary::Open);
  Region keep({0, 1}, 4);
  for (int trial = 0; trial < 40; ++trial) {
    DenseOp op{random_hermitian(16, rng()), 4};
    DenseOp best = local_restrict(op, keep);
    double best_err = schatten_norm(op.m - best.m, NormKind::NormalizedFrobenius);
    for (int candidate = 0; candidate < 25; ++candidate) {
      Mat local = random_hermitian(4, rng());
      Mat embedded = Mat::Zero(16, 16);
      for (int a = 0; a < 16; ++a)
        for (int b = 0; b < 16; ++b) {
          if ((a >> 2) != (b >> 2)) continue;
          embedded(a, b) = local(a & 3, b & 3);
        }
      double err = schatten_norm(op.m - embedded, NormKind::NormalizedFrobenius);
      CHECK(best_err <= err + 1e-12);
    }
  }
}

TEST_CASE("approx_error_cases") {
  Hamiltonian h = chain_ising(6, 2.0);
  Evolver ev(h);
  const Lattice& lat = h.lattice();
  DenseOp w = to_dense(PauliString::parse("+1*X2", 6), 6);
  Region x({2}, 6);
  SUBCASE("radius covering the lattice gives zero error") {
    auto rec = approx_error(ev, lat, w, x, 0.9, 5, NormKind::NormalizedFrobenius);
    CHECK(rec.error < 1e-12);
  }
  SUBCASE("zero time gives zero error") {
    auto rec = approx_error(ev, lat, w, x, 0.0, 1, NormKind::NormalizedFrobenius);
    CHECK(rec.error < 1e-14);
  }
  SUBCASE("error decreases with radius") {
    double prev = 1e9;
    for (int r = 0; r <= 5; ++r) {
      auto rec = approx_error(ev, lat, w, x, 0.6, r, NormKind::NormalizedFrobenius);
      CHECK(rec.error <= prev + 1e-12);
      prev = rec.error;
    }
  }
}

TEST_CASE("otoc_closed_form") {
  Hamiltonian h = two_site_zz();
  Evolver ev(h);
  DenseOp w = to_dense(PauliString::parse("+1*X0", 2), 2);
  PauliString v = PauliString::parse("+1*X1", 2);
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(0.1 * k);
  auto c = otoc(ev, w, v, times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    double expect = 4 * std::pow(std::sin(2 * times[k]), 2);
    CHECK(c[k] == doctest::Approx(expect).epsilon(1e-10));
    CHECK(c[k] >= -1e-12);
    CHECK(c[k] <= 4 + 1e-12);
  }
  SUBCASE("disjoint probes commute at time zero") {
    CHECK(c[0] < 1e-14);
  }
  SUBCASE("time symmetry for this real model") {
    auto plus = otoc(ev, w, v, {0.4});
    auto minus = otoc(ev, w, v, {-0.4});
    CHECK(plus[0] == doctest::Approx(minus[0]).epsilon(1e-12));
  }
}

TEST_CASE("otoc_bounded_by_frobenius_error") {
  // C(R,t) <= 4 * (approximation error at radius R-1)^2 with the optimal
  // restriction as approximant.
  Hamiltonian h = chain_ising(7, 2.0);
  Evolver ev(h);
  const Lattice& lat = h.lattice();
  int i = 1;
  DenseOp w = to_dense(PauliString::parse("+1*X1", 7), 7);
  for (int big_r : {2, 3, 4}) {
    int v_site = i + big_r;
    PauliString v = PauliString::from_letters(7, {{v_site, 'X'}});
    for (double t : {0.2, 0.5, 1.0}) {
      double c = otoc(ev, w, v, {t})[0];
      auto rec = approx_error(ev, lat, w, Region({i}, 7), t, big_r - 1,
                              NormKind::NormalizedFrobenius);
      CHECK(c <= 4 * rec.error * rec.error * (1 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("recursion_degenerate") {
  Hamiltonian h = chain_ising(6, 2.0);
  Evolver ev(h);
  const Lattice& lat = h.lattice();
  DenseOp w = to_dense(PauliString::parse("+1*X2", 6), 6);

  SUBCASE("one step equals the direct approximation") {
    auto tr = unitary_connection(ev, lat, w, 2, 0.7, 1, 2, NormKind::NormalizedFrobenius);
    auto rec = approx_error(ev, lat, w, Region({2}, 6), 0.7, 2, NormKind::NormalizedFrobenius);
    REQUIRE(tr.step_errors.size() == 1);
    CHECK(tr.step_errors[0] == doctest::Approx(rec.error).epsilon(1e-12));
    CHECK(tr.telescoped == doctest::Approx(tr.direct_error).epsilon(1e-9));
  }
  SUBCASE("zero time gives zero errors and the original operator") {
    auto tr = unitary_connection(ev, lat, w, 2, 0.0, 3, 3, NormKind::NormalizedFrobenius);
    CHECK(tr.telescoped < 1e-13);
    CHECK((tr.final_op.m - w.m).cwiseAbs().maxCoeff() < 1e-13);
  }
  SUBCASE("telescoping inequality in both norms") {
    for (auto kind : {NormKind::NormalizedFrobenius, NormKind::Operator}) {
      for (int mt : {1, 2, 3}) {
        for (int r : {2, 4}) {
          auto tr = unitary_connection(ev, lat, w, 2, 0.9, mt, r, kind);
          CHECK(tr.direct_error <= tr.telescoped * (1 + 1e-9) + 1e-13);
        }
      }
    }
  }
  SUBCASE("final operator is supported on the target ball") {
    auto tr = unitary_connection(ev, lat, w, 2, 0.8, 2, 2, NormKind::NormalizedFrobenius);
    CHECK(supported_on(tr.final_op, ball(lat, 2, 2)));
    CHECK(tr.regions.back() == ball(lat, 2, 2));
  }
  SUBCASE("radius rounding flag and exact final region") {
    auto tr = unitary_connection(ev, lat, w, 2, 0.8, 2, 3, NormKind::NormalizedFrobenius);
    CHECK(tr.radius_rounded);
    CHECK(tr.regions.back() == ball(lat, 2, 3));
  }
}

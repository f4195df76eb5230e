#include <doctest.h>

#include <cmath>
#include <random>

#include "core/evolve.hpp"
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

Hamiltonian small_ising(int n, double alpha, double bz) {
  Lattice lat(1, {n}, Boundary::Open);
  ModelSpec spec;
  spec.preset = "ising";
  spec.coupling = 1.0;
  spec.alpha = alpha;
  spec.fields.z = bz;
  return build_model(spec, lat);
}

}  // namespace

TEST_CASE("evolve_closed_form") {
  Hamiltonian h = two_site_zz();
  Evolver ev(h);
  DenseOp x0 = to_dense(PauliString::parse("+1*X0", 2), 2);

  SUBCASE("t = 0 leaves the operator untouched") {
    CHECK(ev.evolve(x0, 0.0).m.isApprox(x0.m));
  }
  SUBCASE("matches the 4x4 exponential oracle entrywise") {
    for (double t : {0.1, 0.5, 1.3, -0.7}) {
      Mat hd = h.to_dense().m;
      Mat u = oracles::expm_taylor(std::complex<double>(0, 1) * t * hd);
      Mat expect = u * x0.m * u.adjoint();
      CHECK((ev.evolve(x0, t).m - expect).cwiseAbs().maxCoeff() < 1e-12);
      // Closed form: cos(2t) X0 + sin(2t) weight on Y0 Z1.
      Mat closed = std::cos(2 * t) * oracles::kron_pauli(PauliString::parse("+1*X0", 2), 2) +
                   std::sin(2 * t) * oracles::kron_pauli(PauliString::parse("+1*Y0 Z1", 2), 2);
      CHECK((ev.evolve(x0, t).m - closed).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("the hamiltonian itself is stationary") {
    DenseOp hd{h.to_dense().m, 2};
    CHECK((ev.evolve(hd, 0.9).m - hd.m).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("non-finite time rejected") {
    CHECK_THROWS_AS(ev.evolve(x0, std::nan("")), std::invalid_argument);
  }
}

TEST_CASE("evolve_unitary_invariance_and_group_property") {
  Hamiltonian h = small_ising(6, 2.0, 0.4);
  Evolver ev(h);
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 4; ++trial) {
    DenseOp w{random_hermitian(1 << 6, rng()), 6};
    double f0 = schatten_norm(w.m, NormKind::NormalizedFrobenius);
    double o0 = schatten_norm(w.m, NormKind::Operator);
    DenseOp wt = ev.evolve(w, 0.8);
    CHECK(schatten_norm(wt.m, NormKind::NormalizedFrobenius) == doctest::Approx(f0).epsilon(1e-10));
    CHECK(schatten_norm(wt.m, NormKind::Operator) == doctest::Approx(o0).epsilon(1e-10));

    Eigen::SelfAdjointEigenSolver<Mat> a(w.m), b(wt.m);
    CHECK((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff() < 1e-9);

    DenseOp two_step = ev.evolve(ev.evolve(w, 0.3), 0.5);
    CHECK((two_step.m - wt.m).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("bch_first_order") {
  Hamiltonian h = two_site_zz();
  PauliString x0 = PauliString::parse("+1*X0", 2);
  SUBCASE("order zero is the seed") {
    StringSum s = bch_expand(h, x0, 0.37, 0);
    REQUIRE(s.coeffs.size() == 1);
    CHECK(s.coeffs.begin()->second == std::complex<double>(1, 0));
  }
  SUBCASE("first order matches the hand Taylor step") {
    double t = 0.25;
    StringSum s = bch_expand(h, x0, t, 1);
    // X0 - 2t Y0 Z1.
    REQUIRE(s.coeffs.size() == 2);
    auto x_term = s.coeffs.find(PauliString::parse("+1*X0", 2));
    auto yz_term = s.coeffs.find(PauliString::parse("+1*Y0 Z1", 2));
    REQUIRE(x_term != s.coeffs.end());
    REQUIRE(yz_term != s.coeffs.end());
    CHECK(std::abs(x_term->second - std::complex<double>(1, 0)) < 1e-15);
    CHECK(std::abs(yz_term->second - std::complex<double>(-2 * t, 0)) < 1e-15);
  }
}

TEST_CASE("bch_dense_convergence") {
  Hamiltonian h = small_ising(4, 2.0, 0.5);
  Evolver ev(h);
  GeometricConstants geo = certify_lattice(h.lattice(), 2.0, h.lattice().diameter());
  DerivedConstants consts = derived_constants(h, geo);
  PauliString seed = PauliString::parse("+1*X0", 4);
  DenseOp w = to_dense(seed, 4);

  for (double t : {0.5 * consts.tau_star, consts.tau_star}) {
    DenseOp exact = ev.evolve(w, t);
    BchExpansion layers = bch_layers(h, seed, 20);
    double prev = std::numeric_limits<double>::infinity();
    double last = prev;
    for (int order = 0; order <= 20; order += 2) {
      BchExpansion truncated;
      truncated.sites = layers.sites;
      truncated.order = order;
      truncated.layers.assign(layers.layers.begin(), layers.layers.begin() + order + 1);
      DenseOp approx = truncated.partial_sum(t).to_dense();
      double err = schatten_norm(exact.m - approx.m, NormKind::NormalizedFrobenius);
      CHECK(err <= prev * (1 + 1e-9) + 1e-12);
      prev = err;
      last = err;
    }
    CHECK(last < 1e-6);
  }
}

TEST_CASE("bch_hermiticity_and_connectivity_audit") {
  Hamiltonian h = small_ising(5, 2.0, 0.3);
  PauliString seed = PauliString::parse("+1*Z2", 5);
  BchExpansion layers = bch_layers(h, seed, 4);
  for (int m = 0; m < static_cast<int>(layers.layers.size()); ++m) {
    // Real seed, real couplings: adjoint layers alternate Hermitian and
    // anti-Hermitian, so coefficients are purely real or purely imaginary.
    for (const auto& [s, c] : layers.layers[m].coeffs) {
      (void)s;
      double spurious = (m % 2 == 0) ? std::abs(c.imag()) : std::abs(c.real());
      CHECK(spurious < 1e-12 * std::max(1.0, std::abs(c)));
    }
  }
  StringSum sum = bch_expand(h, seed, 0.2, 4);
  CHECK(sum.is_hermitian(1e-12));

  // Budget guard trips with partial diagnostics.
  CHECK_THROWS_AS(bch_layers(h, seed, 6, kDefaultPruneThreshold, 4), expansion_budget_error);
}

TEST_CASE("stochastic_estimator") {
  SUBCASE("identity gives exactly one for every sample") {
    auto est = stochastic_frobenius_squared(dense_identity(4), 16, 7);
    CHECK(est.estimate == 1.0);
    CHECK(est.stderr_ == 0.0);
  }
  SUBCASE("single pauli is frobenius-normalized") {
    DenseOp z0 = to_dense(PauliString::parse("+1*Z0", 4), 4);
    auto est = stochastic_frobenius_squared(z0, 32, 11);
    CHECK(est.estimate == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("random hermitian matches the exact normalized trace within 3 sigma") {
    std::mt19937_64 rng(13);
    Mat a = random_hermitian(1 << 6, rng());
    DenseOp op{a, 6};
    double exact = std::pow(schatten_norm(a, NormKind::NormalizedFrobenius), 2);
    auto est = stochastic_frobenius_squared(op, 4000, 17);
    CHECK(std::abs(est.estimate - exact) <= 3 * est.stderr_);
  }
  SUBCASE("fixed seed reproduces, different seed varies") {
    std::mt19937_64 rng(14);
    DenseOp op{random_hermitian(1 << 5, rng()), 5};
    auto a = stochastic_frobenius_squared(op, 64, 5);
    auto b = stochastic_frobenius_squared(op, 64, 5);
    auto c = stochastic_frobenius_squared(op, 64, 6);
    CHECK(a.estimate == b.estimate);
    CHECK(a.estimate != c.estimate);
  }
  SUBCASE("string-sum apply path agrees with the dense path") {
    Hamiltonian h = small_ising(5, 2.0, 0.2);
    StringSum s = bch_expand(h, PauliString::parse("+1*X1", 5), 0.15, 6);
    auto via_strings = stochastic_frobenius_squared(s, 128, 23);
    auto via_dense = stochastic_frobenius_squared(s.to_dense(), 128, 23);
    CHECK(via_strings.estimate == doctest::Approx(via_dense.estimate).epsilon(1e-12));
  }
  SUBCASE("needs at least two samples") {
    CHECK_THROWS_AS(stochastic_frobenius_squared(dense_identity(2), 1, 1),
                    std::invalid_argument);
  }
}

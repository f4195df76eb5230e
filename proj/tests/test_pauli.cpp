#include <doctest.h>

#include <random>

#include "core/dense.hpp"
#include "core/pauli.hpp"
#include "oracles.hpp"

using namespace otoclab;

TEST_CASE("pauli_to_dense_kron_oracle") {
  CHECK(to_dense(PauliString(1), 1).m.isApprox(Mat::Identity(2, 2)));
  {
    DenseOp z0 = to_dense(PauliString::parse("+1*Z0", 1), 1);
    Mat expect(2, 2);
    expect << 1, 0, 0, -1;
    CHECK(z0.m.isApprox(expect));
  }
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng() % 4);
    PauliString p = oracles::random_pauli(n, rng);
    CHECK((to_dense(p, n).m - oracles::kron_pauli(p, n)).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(to_dense(PauliString(20), 20), resource_limit_error);
}

TEST_CASE("pauli_products_dense_oracle") {
  SUBCASE("identity and fixed cases") {
    PauliString x1 = PauliString::parse("+1*X1", 3);
    PauliString y1 = PauliString::parse("+1*Y1", 3);
    PauliString prod = x1.multiplied(y1);
    CHECK(prod.str() == "+i*Z1");
    CHECK(x1.multiplied(PauliString(3)) == x1);

    PauliString a = PauliString::parse("+1*X1 X2", 4);
    PauliString b = PauliString::parse("+1*Z2 Z3", 4);
    CHECK(a.multiplied(b).str() == "-i*X1 Y2 Z3");
  }
  SUBCASE("ten thousand random pairs match the dense product exactly") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10000; ++trial) {
      int n = 1 + static_cast<int>(rng() % 5);
      PauliString p = oracles::random_pauli(n, rng);
      PauliString q = oracles::random_pauli(n, rng);
      Mat expect = oracles::kron_pauli(p, n) * oracles::kron_pauli(q, n);
      Mat got = to_dense(p.multiplied(q), n).m;
      CHECK((got - expect).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("self product against the adjoint gives the identity") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
      PauliString p = oracles::random_pauli(4, rng);
      PauliString prod = p.multiplied(p.adjoint());
      CHECK(prod.phaseless().is_identity());
      CHECK(prod.phase_exponent() == 0);
    }
  }
}

TEST_CASE("pauli_commutators_dense_oracle") {
  SUBCASE("disjoint supports commute") {
    PauliString x1 = PauliString::parse("+1*X1", 3);
    PauliString x2 = PauliString::parse("+1*X2", 3);
    CHECK(x1.commutes_with(x2));
    CHECK(x1.half_commutator(x2).is_zero());
  }
  SUBCASE("single-site anticommutator") {
    PauliString x = PauliString::parse("+1*X0", 1);
    PauliString y = PauliString::parse("+1*Y0", 1);
    CHECK(x.half_commutator(y).str() == "+i*Z0");
  }
  SUBCASE("support can shrink strictly") {
    PauliString p = PauliString::parse("+1*X1 X2 X3 X4", 5);
    PauliString q = PauliString::parse("+1*X1 X2 X3 Y4", 5);
    PauliString half = p.half_commutator(q);
    CHECK(half.support() == std::vector<int>{4});
    Mat expect = 0.5 * (oracles::kron_pauli(p, 5) * oracles::kron_pauli(q, 5) -
                        oracles::kron_pauli(q, 5) * oracles::kron_pauli(p, 5));
    CHECK((to_dense(half, 5).m - expect).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("random pairs match the dense commutator branch") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10000; ++trial) {
      int n = 1 + static_cast<int>(rng() % 5);
      PauliString p = oracles::random_pauli(n, rng);
      PauliString q = oracles::random_pauli(n, rng);
      Mat dp = oracles::kron_pauli(p, n), dq = oracles::kron_pauli(q, n);
      Mat comm = dp * dq - dq * dp;
      PauliString half = p.half_commutator(q);
      if (half.is_zero()) {
        CHECK(comm.cwiseAbs().maxCoeff() == 0.0);
      } else {
        CHECK((comm - 2.0 * to_dense(half, n).m).cwiseAbs().maxCoeff() == 0.0);
      }
      // Commutation parity agrees with letter-difference counting.
      int differing = 0;
      for (int s = 0; s < n; ++s) {
        char lp = p.letter(s), lq = q.letter(s);
        if (lp != 'I' && lq != 'I' && lp != lq) ++differing;
      }
      CHECK(p.commutes_with(q) == (differing % 2 == 0));
    }
  }
}

TEST_CASE("pauli_text_roundtrip") {
  CHECK(PauliString::parse("i*X0 Z3 Y7", 8).str() == "+i*X0 Z3 Y7");
  CHECK(PauliString::parse("-i*Y2", 4).str() == "-i*Y2");
  CHECK(PauliString::parse("+1", 4).str() == "+1");
  CHECK(PauliString::parse("0", 4).is_zero());
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    PauliString p = oracles::random_pauli(9, rng);
    CHECK(PauliString::parse(p.str(), 9) == p);
  }
  CHECK_THROWS_AS(PauliString::parse("+2*X0", 2), std::invalid_argument);
  CHECK_THROWS_AS(PauliString::parse("Q0", 2), std::invalid_argument);
  CHECK_THROWS_AS(PauliString::parse("X9", 2), std::out_of_range);
}

TEST_CASE("pauli_hermiticity_and_unitarity_dense") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    PauliString p = oracles::random_pauli(4, rng, /*with_phase=*/false);
    Mat d = to_dense(p, 4).m;
    CHECK((d * d.adjoint() - Mat::Identity(16, 16)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  }
}

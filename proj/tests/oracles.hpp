// Independent reference implementations used as test oracles. These must stay
// decoupled from the code paths they check: distances are enumerated from
// scratch, dense Paulis come from explicit Kronecker products, and the matrix
// exponential is a scaled-and-squared Taylor series.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <unsupported/Eigen/KroneckerProduct>
#include <vector>

#include "core/dense.hpp"
#include "core/lattice.hpp"
#include "core/pauli.hpp"

namespace oracles {

using otoclab::Mat;

inline Mat pauli_letter(char l) {
  Mat m(2, 2);
  const std::complex<double> i(0, 1);
  switch (l) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("bad letter");
  }
  return m;
}

// Site 0 is the least-significant bit, so it sits rightmost in the Kronecker
// chain.
inline Mat kron_pauli(const otoclab::PauliString& p, int sites) {
  if (p.is_zero()) return Mat::Zero(1 << sites, 1 << sites);
  Mat acc = pauli_letter(p.letter(sites - 1));
  for (int s = sites - 2; s >= 0; --s)
    acc = Eigen::kroneckerProduct(acc, pauli_letter(p.letter(s))).eval();
  return p.phase_value() * acc;
}

// exp(A) by scaling and squaring a plain Taylor series.
inline Mat expm_taylor(const Mat& a) {
  const int squarings = 10;
  Mat scaled = a / std::pow(2.0, squarings);
  Mat acc = Mat::Identity(a.rows(), a.cols());
  Mat term = acc;
  for (int k = 1; k <= 24; ++k) {
    term = (term * scaled / static_cast<double>(k)).eval();
    acc += term;
  }
  for (int s = 0; s < squarings; ++s) acc = (acc * acc).eval();
  return acc;
}

// Graph distance by breadth-first search over explicitly enumerated edges.
inline int bfs_distance(const otoclab::Lattice& lat, int a, int b) {
  std::vector<int> dist(lat.size(), -1);
  std::vector<int> queue{a};
  dist[a] = 0;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    int u = queue[q];
    if (u == b) return dist[u];
    for (int v : lat.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist[b];
}

inline otoclab::PauliString random_pauli(int sites, std::mt19937_64& rng, bool with_phase = true) {
  std::uniform_int_distribution<int> letter(0, 3);
  std::uniform_int_distribution<int> phase(0, 3);
  std::vector<std::pair<int, char>> letters;
  const char names[4] = {'I', 'X', 'Y', 'Z'};
  for (int s = 0; s < sites; ++s) {
    char l = names[letter(rng)];
    if (l != 'I') letters.emplace_back(s, l);
  }
  return otoclab::PauliString::from_letters(sites, letters, with_phase ? phase(rng) : 0);
}

}  // namespace oracles

#pragma once

#include <vector>

#include "core/dense.hpp"
#include "core/evolve.hpp"

namespace otoclab {

struct ApproxRecord {
  Region region;        // the region the approximant lives on
  double time = 0.0;
  NormKind kind = NormKind::NormalizedFrobenius;
  double error = 0.0;
  std::string method;   // "direct" or "recursion"
};

/// Evolves W (supported on X), restricts to X extended by `radius`, and
/// returns the chosen norm of the difference. The restriction is the
/// Frobenius-optimal approximant, so the record is a valid witness for any
/// existence-style bound.
ApproxRecord approx_error(const Evolver& ev, const Lattice& lat, const DenseOp& w,
                          const Region& x, double t, int radius, NormKind kind);

/// OTOC between two normalized probes: the squared normalized Frobenius norm
/// of [W(t), V]. Values lie in [0, 4].
std::vector<double> otoc(const Evolver& ev, const DenseOp& w, const PauliString& v,
                         const std::vector<double>& times);

/// One execution of the evolve-then-restrict recursion: time is cut into
/// steps of dt = t/step_count, the target radius into increments, and the
/// operator is alternately evolved and projected onto the growing balls. The
/// per-step errors telescope into an upper bound on the true error of the
/// final local operator.
struct RecursionTrace {
  double dt = 0.0;
  int step_count = 0;
  int dr = 0;                      // radius increment (floor), final region forced to i[r]
  bool radius_rounded = false;     // true when r was not a multiple of step_count
  std::vector<Region> regions;     // X_1 .. X_{step_count}
  std::vector<double> step_errors; // per-step approximation errors
  double telescoped = 0.0;         // sum of step errors
  double direct_error = 0.0;       // || W(t) - final || in the same norm
  NormKind kind = NormKind::NormalizedFrobenius;
  DenseOp final_op;
};

RecursionTrace unitary_connection(const Evolver& ev, const Lattice& lat, const DenseOp& w,
                                  int site, double t, int step_count, int radius, NormKind kind);

/// Same recursion measured in several norms at once (one evolution pass).
std::vector<RecursionTrace> unitary_connection_multi(const Evolver& ev, const Lattice& lat,
                                                     const DenseOp& w, int site, double t,
                                                     int step_count, int radius,
                                                     const std::vector<NormKind>& kinds);

}  // namespace otoclab

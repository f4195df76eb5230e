#pragma once

#include <string>

#include "core/hamiltonian.hpp"
#include "core/lattice.hpp"

namespace otoclab {

/// A bound evaluation was requested outside its regime of validity (time step
/// above the certified threshold, exponent below the required range, ...).
struct bound_domain_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Inputs for the rigorous right-hand sides. The derived constants come from
/// certification; c1/c2 for the operator-norm route are configuration inputs
/// only asserted to exist, so results using them are shape checks unless the
/// user certifies values. c0_scale != 1 marks a sensitivity sweep.
struct BoundConstants {
  DerivedConstants consts;
  double c1_config = 1.0;
  double c2_config = 1.0;
  double c0_scale = 1.0;

  double c0() const { return consts.c0 * c0_scale; }
};

/// Light-cone exponent (2 alpha - 2D) / (2 alpha - D + 1); in (0,1) for
/// D < alpha < infinity.
double zeta(double alpha, int dimension);

/// Scrambling-time scaling n^(zeta/D), prefactor documented as unit.
double scrambling_time(int n, double alpha, int dimension);

/// Full Frobenius light-cone bound
///   2^(D-1) c0 dt^(-alpha+(D+1)/2) t^(alpha-(D-1)/2) r^(-alpha+D).
/// Requires 0 < dt <= tau_star.
double theorem1_rhs(int r, double t, const BoundConstants& bc, double dt);

/// General-support version with seed radius r0; reduces at D=1 to the
/// gamma-weighted form gamma c0 dt^(-alpha+1) t^alpha r^(-alpha+1).
double corollary_rhs(int r, int r0, double t, const BoundConstants& bc, double dt);

/// Telescoped operator-norm bound
///   2 c1 gamma^2 e^(c2 dt) dt^(D-alpha) / (alpha-D-1)^2 r^(2D-alpha) t^(alpha-D).
/// `valid` is false when alpha <= 2D (the bound is then vacuous).
struct OpNormBound {
  double value = 0.0;
  bool valid = false;
};
OpNormBound opnorm_bound_rhs(int r, double t, const BoundConstants& bc, double dt);

/// Per-step operator-norm bound
///    2 c1 gamma / (alpha-D-1)^2 |boundary| e^(c2 dt) dr^(-alpha+D+1).
double hk_short_step_rhs(std::size_t boundary_size, int dr, double dt, const BoundConstants& bc);

/// Short-time Frobenius bound c0 |t| sqrt(gamma^-1 |shell(X, r/2)| r^(-2alpha+D+1)),
/// with the shell measured on the actual lattice. Odd r uses the ceil(r/2)
/// shell and is flagged. Requires |t| <= tau_star.
struct TheoremS3Value {
  double value = 0.0;
  int shell_offset = 0;
  std::size_t shell_size = 0;
  bool parity_rounded = false;
};
TheoremS3Value theoremS3_rhs(const Lattice& lat, const Region& x, int r, double t,
                             const BoundConstants& bc);

}  // namespace otoclab

#include "core/bounds.hpp"

#include <cmath>

namespace otoclab {

namespace {
void require_time_step(const BoundConstants& bc, double dt) {
  if (!(dt > 0.0)) throw bound_domain_error("time step must be positive");
  if (dt > bc.consts.tau_star)
    throw bound_domain_error("time step exceeds the certified threshold tau_star");
}
}  // namespace

double zeta(double alpha, int dimension) {
  if (alpha <= dimension) throw bound_domain_error("zeta needs alpha > D");
  return (2.0 * alpha - 2.0 * dimension) / (2.0 * alpha - dimension + 1.0);
}

double scrambling_time(int n, double alpha, int dimension) {
  if (n < 1) throw bound_domain_error("system size must be positive");
  return std::pow(static_cast<double>(n), zeta(alpha, dimension) / dimension);
}

double theorem1_rhs(int r, double t, const BoundConstants& bc, double dt) {
  require_time_step(bc, dt);
  const double alpha = bc.consts.alpha;
  const int D = bc.consts.dimension;
  if (t == 0.0) return 0.0;
  return std::pow(2.0, D - 1) * bc.c0() * std::pow(dt, -alpha + (D + 1) / 2.0) *
         std::pow(std::abs(t), alpha - (D - 1) / 2.0) * std::pow(static_cast<double>(r), -alpha + D);
}

double corollary_rhs(int r, int r0, double t, const BoundConstants& bc, double dt) {
  require_time_step(bc, dt);
  if (r0 < 0) throw bound_domain_error("seed radius must be non-negative");
  const double alpha = bc.consts.alpha;
  const int D = bc.consts.dimension;
  if (t == 0.0) return 0.0;
  // The printed D=1 reduction carries gamma instead of 2^(D-1).
  const double prefactor = (D == 1) ? bc.consts.gamma : std::pow(2.0, D - 1);
  return prefactor * bc.c0() * std::pow(dt, -alpha + (D + 1) / 2.0) *
         std::pow(std::abs(t), alpha - (D - 1) / 2.0) *
         std::pow(static_cast<double>(r + r0), (D - 1) / 2.0) *
         std::pow(static_cast<double>(r), -alpha + (D + 1) / 2.0);
}

OpNormBound opnorm_bound_rhs(int r, double t, const BoundConstants& bc, double dt) {
  const double alpha = bc.consts.alpha;
  const int D = bc.consts.dimension;
  if (alpha <= D + 1)
    throw bound_domain_error("operator-norm route degenerates for alpha <= D+1");
  if (!(dt > 0.0)) throw bound_domain_error("time step must be positive");
  OpNormBound out;
  out.valid = alpha > 2 * D;
  if (t == 0.0) return out;
  const double gamma = bc.consts.gamma;
  out.value = 2.0 * bc.c1_config * gamma * gamma * std::exp(bc.c2_config * dt) *
              std::pow(dt, -alpha + D) / ((alpha - D - 1) * (alpha - D - 1)) *
              std::pow(static_cast<double>(r), 2.0 * D - alpha) *
              std::pow(std::abs(t), alpha - D);
  return out;
}

double hk_short_step_rhs(std::size_t boundary_size, int dr, double dt,
                         const BoundConstants& bc) {
  const double alpha = bc.consts.alpha;
  const int D = bc.consts.dimension;
  if (alpha <= D + 1)
    throw bound_domain_error("operator-norm route degenerates for alpha <= D+1");
  if (dr < 1) throw bound_domain_error("radius increment must be at least 1");
  return 2.0 * bc.c1_config * bc.consts.gamma / ((alpha - D - 1) * (alpha - D - 1)) *
         static_cast<double>(boundary_size) * std::exp(bc.c2_config * dt) *
         std::pow(static_cast<double>(dr), -alpha + D + 1);
}

TheoremS3Value theoremS3_rhs(const Lattice& lat, const Region& x, int r, double t,
                             const BoundConstants& bc) {
  if (r < 1) throw bound_domain_error("extension radius must be at least 1");
  if (std::abs(t) > bc.consts.tau_star)
    throw bound_domain_error("time exceeds the certified threshold tau_star");
  const double alpha = bc.consts.alpha;
  const int D = bc.consts.dimension;
  TheoremS3Value out;
  out.parity_rounded = (r % 2) != 0;
  out.shell_offset = (r + 1) / 2;
  out.shell_size = shell(lat, x, out.shell_offset).size();
  if (t == 0.0) return out;
  out.value = bc.c0() * std::abs(t) *
              std::sqrt(static_cast<double>(out.shell_size) / bc.consts.gamma *
                        std::pow(static_cast<double>(r), -2.0 * alpha + D + 1));
  return out;
}

}  // namespace otoclab

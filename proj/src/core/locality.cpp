#include "core/locality.hpp"

#include <cmath>

namespace otoclab {

ApproxRecord approx_error(const Evolver& ev, const Lattice& lat, const DenseOp& w,
                          const Region& x, double t, int radius, NormKind kind) {
  Region target = extend_region(lat, x, radius);
  DenseOp evolved = ev.evolve(w, t);
  DenseOp restricted = local_restrict(evolved, target);
  ApproxRecord rec;
  rec.region = target;
  rec.time = t;
  rec.kind = kind;
  rec.method = "direct";
  rec.error = schatten_norm(evolved.m - restricted.m, kind);
  return rec;
}

std::vector<double> otoc(const Evolver& ev, const DenseOp& w, const PauliString& v,
                         const std::vector<double>& times) {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    DenseOp wt = ev.evolve(w, t);
    Mat comm = pauli_mult_right(wt.m, v) - pauli_mult_left(v, wt.m);
    double f = schatten_norm(comm, NormKind::NormalizedFrobenius);
    out.push_back(f * f);
  }
  return out;
}

std::vector<RecursionTrace> unitary_connection_multi(const Evolver& ev, const Lattice& lat,
                                                     const DenseOp& w, int site, double t,
                                                     int step_count, int radius,
                                                     const std::vector<NormKind>& kinds) {
  if (step_count < 1) throw std::invalid_argument("recursion needs at least one step");
  if (radius < 0) throw std::invalid_argument("recursion radius must be non-negative");
  lat.check_site(site);
  const double dt = t / step_count;
  const int dr = radius / step_count;
  const bool rounded = (dr * step_count != radius);

  std::vector<RecursionTrace> traces(kinds.size());
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    traces[k].dt = dt;
    traces[k].step_count = step_count;
    traces[k].dr = dr;
    traces[k].radius_rounded = rounded;
    traces[k].kind = kinds[k];
  }

  DenseOp current = w;
  for (int m = 0; m < step_count; ++m) {
    // X_{m+1} = i[(m+1) dr], with the final region forced to i[radius] so the
    // guarantee region is exact; rounding slack lands in the last step.
    int rm = (m + 1 == step_count) ? radius : (m + 1) * dr;
    Region region = ball(lat, site, rm);
    DenseOp evolved = ev.evolve(current, dt);
    DenseOp restricted = local_restrict(evolved, region);
    Mat diff = evolved.m - restricted.m;
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      double e = schatten_norm(diff, kinds[k]);
      traces[k].regions.push_back(region);
      traces[k].step_errors.push_back(e);
      traces[k].telescoped += e;
    }
    current = std::move(restricted);
  }

  DenseOp exact = ev.evolve(w, t);
  Mat diff = exact.m - current.m;
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    traces[k].direct_error = schatten_norm(diff, kinds[k]);
    traces[k].final_op = current;
  }
  return traces;
}

RecursionTrace unitary_connection(const Evolver& ev, const Lattice& lat, const DenseOp& w,
                                  int site, double t, int step_count, int radius, NormKind kind) {
  return unitary_connection_multi(ev, lat, w, site, t, step_count, radius, {kind})[0];
}

}  // namespace otoclab

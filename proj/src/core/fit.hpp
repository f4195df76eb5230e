#pragma once

#include <optional>
#include <vector>

#include "core/bounds.hpp"

namespace otoclab {

struct FrontPoint {
  int distance = 0;    // R
  double arrival = 0;  // t*(R)
};

struct FrontExtraction {
  std::vector<FrontPoint> front;
  std::vector<int> no_crossing;  // distances whose curve never reaches the threshold
  double threshold = 0.0;
};

/// One OTOC curve C(R, t) sampled on a time grid.
struct OtocCurve {
  int distance = 0;
  std::vector<double> times;
  std::vector<double> values;
};

/// Earliest threshold crossing per distance, linearly interpolated between
/// the bracketing samples. Distances that never cross are reported separately.
FrontExtraction front_extract(const std::vector<OtocCurve>& grid, double threshold);

struct FrontFit {
  double exponent = 0.0;   // fitted zeta-hat
  double prefactor = 0.0;  // fitted rate scale
  double residual_rms = 0.0;
  std::vector<double> residuals;
  std::size_t points = 0;
};

/// Log-log least squares of arrival time against distance: t* = prefactor *
/// R^exponent. Needs at least three positive points.
FrontFit fit_exponent(const std::vector<FrontPoint>& front);

struct ConeCheckPoint {
  int distance = 0;
  double arrival = 0.0;
  double bound_value = 0.0;  // 4 * theorem1_rhs(R-1, t*)^2
  bool degenerate = false;   // t* = 0: no crossing can occur there either
  bool pass = false;
};

/// The measured front must lie inside the theoretical cone: at each front
/// point the composed OTOC bound evaluated at (R-1, t*) must still allow the
/// threshold value.
std::vector<ConeCheckPoint> cone_containment(const std::vector<FrontPoint>& front,
                                             double threshold, const BoundConstants& bc,
                                             double dt);

}  // namespace otoclab

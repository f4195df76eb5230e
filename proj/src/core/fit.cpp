#include "core/fit.hpp"

#include <cmath>

namespace otoclab {

FrontExtraction front_extract(const std::vector<OtocCurve>& grid, double threshold) {
  if (grid.empty()) throw std::invalid_argument("empty OTOC grid");
  if (!(threshold > 0.0) || !(threshold < 4.0))
    throw std::invalid_argument("front threshold must lie in (0, 4)");
  FrontExtraction out;
  out.threshold = threshold;
  for (const auto& curve : grid) {
    if (curve.times.size() != curve.values.size() || curve.times.empty())
      throw std::invalid_argument("malformed OTOC curve");
    std::optional<double> arrival;
    if (curve.values.front() >= threshold) {
      arrival = curve.times.front();
    } else {
      for (std::size_t k = 1; k < curve.values.size(); ++k) {
        if (curve.values[k] >= threshold) {
          double c0 = curve.values[k - 1], c1 = curve.values[k];
          double t0 = curve.times[k - 1], t1 = curve.times[k];
          arrival = t0 + (threshold - c0) * (t1 - t0) / (c1 - c0);
          break;
        }
      }
    }
    if (arrival) {
      out.front.push_back({curve.distance, *arrival});
    } else {
      out.no_crossing.push_back(curve.distance);
    }
  }
  return out;
}

FrontFit fit_exponent(const std::vector<FrontPoint>& front) {
  if (front.size() < 3) throw std::invalid_argument("exponent fit needs at least three points");
  FrontFit fit;
  fit.points = front.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : front) {
    if (p.distance <= 0 || !(p.arrival > 0.0))
      throw std::invalid_argument("front points must be positive for a log-log fit");
    double x = std::log(static_cast<double>(p.distance));
    double y = std::log(p.arrival);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(front.size());
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("degenerate fit: all distances equal");
  fit.exponent = (n * sxy - sx * sy) / denom;
  double intercept = (sy - fit.exponent * sx) / n;
  fit.prefactor = std::exp(intercept);
  double ss = 0;
  for (const auto& p : front) {
    double predicted = intercept + fit.exponent * std::log(static_cast<double>(p.distance));
    double r = std::log(p.arrival) - predicted;
    fit.residuals.push_back(r);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  return fit;
}

std::vector<ConeCheckPoint> cone_containment(const std::vector<FrontPoint>& front,
                                             double threshold, const BoundConstants& bc,
                                             double dt) {
  std::vector<ConeCheckPoint> out;
  out.reserve(front.size());
  for (const auto& p : front) {
    ConeCheckPoint cp;
    cp.distance = p.distance;
    cp.arrival = p.arrival;
    if (p.distance < 2) continue;  // R-1 >= 1 needed for the composed bound
    if (p.arrival == 0.0) {
      // The OTOC cannot reach the threshold at t = 0 either; the bound chain
      // is vacuously consistent but carries no information.
      cp.degenerate = true;
      cp.pass = true;
      out.push_back(cp);
      continue;
    }
    double rhs = theorem1_rhs(p.distance - 1, p.arrival, bc, dt);
    cp.bound_value = 4.0 * rhs * rhs;
    cp.pass = cp.bound_value >= threshold;
    out.push_back(cp);
  }
  return out;
}

}  // namespace otoclab

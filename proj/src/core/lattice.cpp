#include "core/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <numeric>

namespace otoclab {

Lattice::Lattice(int dimension, std::vector<int> extents, Boundary boundary)
    : dim_(dimension), extents_(std::move(extents)), boundary_(boundary) {
  if (dim_ < 1) throw std::invalid_argument("lattice dimension must be positive");
  if (static_cast<int>(extents_.size()) != dim_)
    throw std::invalid_argument("lattice extents must list one length per axis");
  n_ = 1;
  strides_.resize(dim_);
  for (int a = 0; a < dim_; ++a) {
    if (extents_[a] < 1) throw std::invalid_argument("lattice extents must be positive");
    strides_[a] = n_;
    if (n_ > (1 << 24) / extents_[a])
      throw std::invalid_argument("lattice too large");
    n_ *= extents_[a];
  }
  diameter_ = 0;
  for (int a = 0; a < dim_; ++a) {
    int ext = extents_[a];
    diameter_ += (boundary_ == Boundary::Periodic) ? ext / 2 : ext - 1;
  }
}

std::vector<int> Lattice::coords(int site) const {
  check_site(site);
  std::vector<int> c(dim_);
  for (int a = 0; a < dim_; ++a) {
    c[a] = site % extents_[a];
    site /= extents_[a];
  }
  return c;
}

int Lattice::site_at(const std::vector<int>& c) const {
  if (static_cast<int>(c.size()) != dim_)
    throw std::invalid_argument("coordinate arity mismatch");
  int site = 0;
  for (int a = 0; a < dim_; ++a) {
    if (c[a] < 0 || c[a] >= extents_[a]) throw std::out_of_range("coordinate out of range");
    site += c[a] * strides_[a];
  }
  return site;
}

int Lattice::distance(int a, int b) const {
  check_site(a);
  check_site(b);
  int d = 0;
  for (int ax = 0; ax < dim_; ++ax) {
    int ca = (a / strides_[ax]) % extents_[ax];
    int cb = (b / strides_[ax]) % extents_[ax];
    int da = std::abs(ca - cb);
    if (boundary_ == Boundary::Periodic) da = std::min(da, extents_[ax] - da);
    d += da;
  }
  return d;
}

std::vector<int> Lattice::neighbors(int site) const {
  check_site(site);
  std::vector<int> out;
  out.reserve(2 * dim_);
  for (int ax = 0; ax < dim_; ++ax) {
    int ext = extents_[ax];
    if (ext == 1) continue;
    int c = (site / strides_[ax]) % ext;
    int base = site - c * strides_[ax];
    for (int step : {-1, +1}) {
      int cc = c + step;
      if (boundary_ == Boundary::Periodic) {
        cc = (cc + ext) % ext;
      } else if (cc < 0 || cc >= ext) {
        continue;
      }
      int nb = base + cc * strides_[ax];
      if (nb != site) out.push_back(nb);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void Lattice::check_site(int site) const {
  if (site < 0 || site >= n_) throw std::out_of_range("site index out of range");
}

Region::Region(std::vector<int> sites, int lattice_size)
    : sites_(std::move(sites)), lattice_size_(lattice_size) {
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
  if (!sites_.empty() && (sites_.front() < 0 || sites_.back() >= lattice_size_))
    throw std::out_of_range("region site out of range");
}

Region Region::full(int lattice_size) {
  std::vector<int> s(lattice_size);
  std::iota(s.begin(), s.end(), 0);
  return Region(std::move(s), lattice_size);
}

Region Region::single(int site, int lattice_size) {
  return Region({site}, lattice_size);
}

bool Region::contains(int site) const {
  return std::binary_search(sites_.begin(), sites_.end(), site);
}

bool Region::is_subset_of(const Region& other) const {
  return std::includes(other.sites_.begin(), other.sites_.end(), sites_.begin(), sites_.end());
}

Region Region::complement() const {
  std::vector<int> out;
  out.reserve(lattice_size_ - sites_.size());
  std::size_t k = 0;
  for (int i = 0; i < lattice_size_; ++i) {
    if (k < sites_.size() && sites_[k] == i) {
      ++k;
    } else {
      out.push_back(i);
    }
  }
  return Region(std::move(out), lattice_size_);
}

Region Region::unite(const Region& other) const {
  std::vector<int> out;
  std::set_union(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                 std::back_inserter(out));
  return Region(std::move(out), std::max(lattice_size_, other.lattice_size_));
}

Region Region::intersect(const Region& other) const {
  std::vector<int> out;
  std::set_intersection(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                        std::back_inserter(out));
  return Region(std::move(out), std::max(lattice_size_, other.lattice_size_));
}

bool Region::intersects(const Region& other) const {
  std::size_t i = 0, j = 0;
  while (i < sites_.size() && j < other.sites_.size()) {
    if (sites_[i] == other.sites_[j]) return true;
    if (sites_[i] < other.sites_[j]) ++i; else ++j;
  }
  return false;
}

Region ball(const Lattice& lat, int site, int radius) {
  lat.check_site(site);
  if (radius < 0) throw std::invalid_argument("ball radius must be non-negative");
  std::vector<int> out;
  for (int j = 0; j < lat.size(); ++j)
    if (lat.distance(site, j) <= radius) out.push_back(j);
  return Region(std::move(out), lat.size());
}

Region extend_region(const Lattice& lat, const Region& x, int radius) {
  if (x.empty()) throw std::invalid_argument("cannot extend an empty region");
  if (radius < 0) throw std::invalid_argument("extension radius must be non-negative");
  if (radius == 0) return x;
  std::vector<int> out;
  for (int j = 0; j < lat.size(); ++j) {
    for (int i : x.sites()) {
      if (lat.distance(i, j) <= radius) {
        out.push_back(j);
        break;
      }
    }
  }
  return Region(std::move(out), lat.size());
}

int region_diameter(const Lattice& lat, const Region& x) {
  int d = 0;
  const auto& s = x.sites();
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      d = std::max(d, lat.distance(s[i], s[j]));
  return d;
}

int region_distance(const Lattice& lat, const Region& x, int site) {
  if (x.empty()) throw std::invalid_argument("distance to empty region");
  int best = lat.diameter();
  for (int i : x.sites()) best = std::min(best, lat.distance(i, site));
  return best;
}

Region inner_boundary(const Lattice& lat, const Region& x) {
  std::vector<int> out;
  for (int i : x.sites()) {
    for (int nb : lat.neighbors(i)) {
      if (!x.contains(nb)) {
        out.push_back(i);
        break;
      }
    }
  }
  return Region(std::move(out), lat.size());
}

std::vector<int> surface_distances(const Lattice& lat, const Region& x) {
  if (x.empty()) throw degenerate_region_error("region has no sites");
  if (x.is_full()) throw degenerate_region_error("full lattice has no surface");
  Region surf = inner_boundary(lat, x);
  // Multi-source BFS over the site graph.
  std::vector<int> dist(lat.size(), -1);
  std::deque<int> queue;
  for (int i : surf.sites()) {
    dist[i] = 0;
    queue.push_back(i);
  }
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    for (int nb : lat.neighbors(i)) {
      if (dist[nb] < 0) {
        dist[nb] = dist[i] + 1;
        queue.push_back(nb);
      }
    }
  }
  std::vector<int> signed_dist(lat.size());
  for (int i = 0; i < lat.size(); ++i) {
    if (dist[i] < 0) throw std::logic_error("disconnected lattice");
    signed_dist[i] = x.contains(i) ? -dist[i] : dist[i];
  }
  return signed_dist;
}

Region shell(const Lattice& lat, const Region& x, int s) {
  auto d = surface_distances(lat, x);
  std::vector<int> out;
  for (int i = 0; i < lat.size(); ++i)
    if (d[i] == s) out.push_back(i);
  return Region(std::move(out), lat.size());
}

GeometricConstants certify_gamma(const Lattice& lat, int max_r) {
  if (max_r < 1) throw std::invalid_argument("gamma certificate needs max_r >= 1");
  GeometricConstants geo;
  geo.gamma = 1.0;
  geo.gamma_max_radius = max_r;
  const int D = lat.dimension();
  double two_family_gamma = 1.0;
  double shell_gamma = 1.0;
  std::vector<int> dist(lat.size());
  std::vector<int> shell_count(lat.diameter() + 2, 0);
  for (int i = 0; i < lat.size(); ++i) {
    std::fill(shell_count.begin(), shell_count.end(), 0);
    for (int j = 0; j < lat.size(); ++j) {
      dist[j] = lat.distance(i, j);
      ++shell_count[dist[j]];
    }
    long ball_size = 0;
    for (int r = 0; r <= std::min(max_r, static_cast<int>(shell_count.size()) - 1); ++r) {
      ball_size += shell_count[r];
      if (r < 1) continue;
      // Inner surface of i[r]: distance-r sites with a strictly farther neighbor.
      long surf = 0;
      for (int j = 0; j < lat.size(); ++j) {
        if (dist[j] != r) continue;
        for (int nb : lat.neighbors(j)) {
          if (dist[nb] > r) {
            ++surf;
            break;
          }
        }
      }
      double rv = static_cast<double>(r);
      double vol_ratio = ball_size / std::pow(rv, D);
      double surf_ratio = surf / std::pow(rv, D - 1);
      double fam = std::max(vol_ratio, surf_ratio);
      if (fam > two_family_gamma) {
        two_family_gamma = fam;
        geo.gamma_witness_site = i;
        geo.gamma_witness_radius = r;
      }
      shell_gamma = std::max(shell_gamma, shell_count[r] / std::pow(rv, D - 1));
    }
  }
  geo.gamma = std::max(two_family_gamma, shell_gamma);
  geo.shell_family_covered = shell_gamma <= two_family_gamma;
  return geo;
}

GeometricConstants certify_lambda(const Lattice& lat, double alpha) {
  if (alpha <= lat.dimension())
    throw std::invalid_argument("decay exponent must exceed the lattice dimension");
  GeometricConstants geo;
  geo.lambda_alpha = alpha;
  const int n = lat.size();
  std::vector<double> kernel(lat.diameter() + 1);
  for (int d = 0; d <= lat.diameter(); ++d) kernel[d] = std::pow(d + 1.0, -alpha);
  // Distance rows reused across the pair loop.
  std::vector<std::vector<int>> drow(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) drow[a][b] = lat.distance(a, b);
  double best = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      double conv = 0.0;
      for (int m = 0; m < n; ++m) conv += kernel[drow[a][m]] * kernel[drow[m][b]];
      double ratio = conv / kernel[drow[a][b]];
      if (ratio > best) {
        best = ratio;
        geo.lambda_witness_a = a;
        geo.lambda_witness_b = b;
      }
    }
  }
  geo.lambda = best;
  return geo;
}

GeometricConstants certify_lattice(const Lattice& lat, double alpha, int max_r) {
  GeometricConstants g = certify_gamma(lat, max_r);
  GeometricConstants l = certify_lambda(lat, alpha);
  g.lambda = l.lambda;
  g.lambda_alpha = l.lambda_alpha;
  g.lambda_witness_a = l.lambda_witness_a;
  g.lambda_witness_b = l.lambda_witness_b;
  return g;
}

DecaySumCheck decay_sum_check(const Lattice& lat, int i_prime, int r, double a,
                              const GeometricConstants& geo) {
  if (a <= lat.dimension())
    throw std::invalid_argument("decay exponent must exceed the lattice dimension");
  lat.check_site(i_prime);
  DecaySumCheck out;
  for (int j = 0; j < lat.size(); ++j) {
    int d = lat.distance(i_prime, j);
    if (d > r) out.lhs += std::pow(d + 1.0, -a);
  }
  out.rhs = geo.gamma / (a - lat.dimension()) * std::pow(r + 1.0, -a + lat.dimension());
  return out;
}

}  // namespace otoclab

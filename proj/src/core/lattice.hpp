#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace otoclab {

enum class Boundary { Open, Periodic };

/// Thrown by operations that require a proper sub-region (e.g. shells of the
/// whole lattice have no surface to measure from).
struct degenerate_region_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// D-dimensional hypercubic site graph. Sites are indexed row-major over the
/// coordinates, axis 0 fastest; the indexing is fixed so that runs are
/// byte-reproducible. Distance is the shortest-path length on the
/// nearest-neighbor graph (L1 between coordinates, per-axis wrapped for
/// periodic boundaries). Immutable after construction.
class Lattice {
 public:
  Lattice(int dimension, std::vector<int> extents, Boundary boundary);

  int dimension() const { return dim_; }
  const std::vector<int>& extents() const { return extents_; }
  Boundary boundary() const { return boundary_; }
  int size() const { return n_; }

  std::vector<int> coords(int site) const;
  int site_at(const std::vector<int>& c) const;

  int distance(int a, int b) const;
  /// Largest pairwise distance on the lattice.
  int diameter() const { return diameter_; }
  std::vector<int> neighbors(int site) const;

  void check_site(int site) const;

 private:
  int dim_;
  std::vector<int> extents_;
  Boundary boundary_;
  int n_;
  std::vector<int> strides_;
  int diameter_;
};

/// Sorted set of site indices on a lattice of `lattice_size` sites.
class Region {
 public:
  Region() = default;
  Region(std::vector<int> sites, int lattice_size);
  static Region full(int lattice_size);
  static Region single(int site, int lattice_size);

  const std::vector<int>& sites() const { return sites_; }
  int lattice_size() const { return lattice_size_; }
  std::size_t size() const { return sites_.size(); }
  bool empty() const { return sites_.empty(); }
  bool is_full() const { return static_cast<int>(sites_.size()) == lattice_size_; }
  bool contains(int site) const;
  bool is_subset_of(const Region& other) const;

  Region complement() const;
  Region unite(const Region& other) const;
  Region intersect(const Region& other) const;
  bool intersects(const Region& other) const;

  bool operator==(const Region& other) const = default;

 private:
  std::vector<int> sites_;
  int lattice_size_ = 0;
};

Region ball(const Lattice& lat, int site, int radius);
Region extend_region(const Lattice& lat, const Region& x, int radius);
int region_diameter(const Lattice& lat, const Region& x);
int region_distance(const Lattice& lat, const Region& x, int site);

/// Inner surface of X: sites of X with a nearest neighbor in the complement.
/// Empty for X = full lattice.
Region inner_boundary(const Lattice& lat, const Region& x);

/// Signed graph distance from the inner surface of X, for every site.
/// Entry is <= 0 inside X (minus the distance to the surface) and > 0 outside.
/// Requires a proper nonempty X.
std::vector<int> surface_distances(const Lattice& lat, const Region& x);

/// Shell at signed offset s from the surface of X: s <= 0 selects sites of X
/// at distance |s| from the inner surface, s > 0 selects complement sites at
/// distance s. shell(X, 0) is the inner surface itself.
Region shell(const Lattice& lat, const Region& x, int s);

/// Certified geometric constants of a finite lattice. `gamma` bounds ball
/// volumes and surfaces, gamma >= 1; `lambda` bounds the convolution of two
/// power-law decay kernels for a given decay exponent. Both are exact maxima
/// over the finite lattice, so they are the tightest constants valid there;
/// the certificate range records what was checked.
struct GeometricConstants {
  double gamma = 1.0;
  int gamma_max_radius = 0;          // balls certified for 1 <= r <= this
  int gamma_witness_site = -1;       // saturating site
  int gamma_witness_radius = 0;      // saturating radius
  // True when the exact-distance shells {j : d(i,j)=r} also satisfy the
  // surface inequality with the same gamma. Holds on hypercubic lattices;
  // the decay-sum bound relies on it.
  bool shell_family_covered = true;

  double lambda = 0.0;
  double lambda_alpha = 0.0;
  int lambda_witness_a = -1;
  int lambda_witness_b = -1;
};

/// Minimal gamma >= 1 with |i[r]| <= gamma r^D and |boundary(i[r])| <= gamma
/// r^(D-1) for every site and every 1 <= r <= max_r. Also certifies the
/// exact-distance shell sizes against the same gamma (see
/// GeometricConstants::shell_family_covered).
GeometricConstants certify_gamma(const Lattice& lat, int max_r);

/// Tightest lambda with sum_i0 (d(a,i0)+1)^-alpha (d(i0,b)+1)^-alpha
/// <= lambda (d(a,b)+1)^-alpha over all site pairs. Requires alpha > D.
GeometricConstants certify_lambda(const Lattice& lat, double alpha);

/// Both certificates in one record.
GeometricConstants certify_lattice(const Lattice& lat, double alpha, int max_r);

struct DecaySumCheck {
  double lhs = 0.0;  // sum over sites farther than r of (d+1)^-a
  double rhs = 0.0;  // gamma/(a-D) (r+1)^(D-a)
};

/// Exact tail sum of the decay kernel around i_prime against its certified
/// upper bound. Requires a > D.
DecaySumCheck decay_sum_check(const Lattice& lat, int i_prime, int r, double a,
                              const GeometricConstants& geo);

}  // namespace otoclab

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace smnn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Tolerance on barycentric signs when deciding containment.
inline constexpr double kBarycentricTol = 1e-9;

/// A finite, ordered set of points in R^dim. Construction checks that every
/// point has `dim` finite coordinates; coincident points are allowed here and
/// rejected by build_delaunay.
class PointCloud {
 public:
  PointCloud() = default;
  PointCloud(std::size_t dim, std::vector<Vector> points);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const Vector& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Vector>& points() const noexcept { return points_; }

  /// Length of the axis-aligned bounding box diagonal.
  double diameter() const;
  Vector centroid() const;

 private:
  std::size_t dim_ = 0;
  std::vector<Vector> points_;
};

/// n+1 sorted vertex indices into the owning cloud.
struct Simplex {
  std::vector<std::size_t> vertex_ids;

  friend bool operator==(const Simplex&, const Simplex&) = default;
};

/// An (n-1)-face that belongs to exactly one maximal simplex. The hyperplane
/// normal·y + offset = 0 contains the facet, and the opposite vertex lies on
/// the negative side.
struct BoundaryFacet {
  std::vector<std::size_t> facet_ids;
  std::size_t opposite_id = 0;
  Vector normal;
  double offset = 0.0;

  double signed_distance(const Vector& x) const { return normal.dot(x) + offset; }
};

/// Result of a successful point location. `coords` are aligned with the
/// vertex_ids of the located simplex, nonnegative and summing to one.
struct Location {
  std::size_t simplex = 0;
  Vector coords;
};

/// Delaunay triangulation of a point cloud: its maximal simplices and the
/// boundary facets of their union. Immutable once constructed; all queries
/// are const and safe to call concurrently.
class Triangulation {
 public:
  Triangulation() = default;
  /// Derives boundary facets (with outward normals) from the simplices.
  Triangulation(PointCloud cloud, std::vector<Simplex> maximal);
  /// Restores a persisted triangulation without recomputing the boundary.
  Triangulation(PointCloud cloud, std::vector<Simplex> maximal,
                std::vector<BoundaryFacet> boundary);

  const PointCloud& cloud() const noexcept { return cloud_; }
  std::size_t dim() const noexcept { return cloud_.dim(); }
  const std::vector<Simplex>& maximal() const noexcept { return maximal_; }
  const std::vector<BoundaryFacet>& boundary() const noexcept { return boundary_; }

  /// Raw barycentric coordinates of x in maximal simplex `s` (may be negative).
  Vector barycentric(std::size_t s, const Vector& x) const;

  /// Lowest-index maximal simplex containing x (within kBarycentricTol), with
  /// clamped, renormalised coordinates. Empty when x is outside the hull.
  std::optional<Location> locate(const Vector& x) const;

  /// Indices into boundary() of the facets whose hyperplane strictly
  /// separates x from the opposite vertex. Throws NoVisibleFacet if none.
  std::vector<std::size_t> visible_boundary_facets(const Vector& x) const;

 private:
  void cache_inverses();

  PointCloud cloud_;
  std::vector<Simplex> maximal_;
  std::vector<BoundaryFacet> boundary_;
  // Per simplex: inverse of the edge matrix [v1-v0, ..., vn-v0].
  std::vector<Matrix> inverse_;
};

/// Delaunay triangulation via the lower convex hull of the points lifted to
/// the paraboloid in R^{n+1}. Co-spherical ties are broken by shifting point
/// i by i * 1e-10 * diameter along (1, ..., 1) for the hull computation only;
/// zero-volume simplices left on the hull by that shift are discarded.
Triangulation build_delaunay(const PointCloud& cloud);

/// Barycentric coordinates of x with respect to n+1 vertices in R^n.
/// Coordinates are not clamped. Throws SingularSimplex when the edge matrix
/// has condition estimate above 1e12.
Vector barycentric_solve(std::span<const Vector> vertices, const Vector& x);

/// True iff q lies strictly inside the circumsphere of the simplex. The
/// squared-distance comparison uses tolerance 1e-7 * max(1, r^2).
bool circumsphere_contains(std::span<const Vector> simplex_points, const Vector& q);

/// |det [v1-v0, ..., vn-v0]| divided by (longest edge)^n.
double normalized_volume(std::span<const Vector> vertices);

/// Unit normal of the hyperplane through n points in R^n (sign arbitrary).
Vector hyperplane_normal(std::span<const Vector> points);

/// Gathers the coordinates of a simplex's vertices from a cloud.
std::vector<Vector> simplex_points(const PointCloud& cloud, const Simplex& s);

}  // namespace smnn

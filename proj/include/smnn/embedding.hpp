#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "smnn/geometry.hpp"

namespace smnn {

struct XiEntry {
  std::size_t index = 0;  // support index t
  double value = 0.0;     // xi_t
};

/// Sparse barycentric embedding of one query. Entries hold only the nonzero
/// coordinates on real support vertices; mass assigned to the projected
/// sphere vertex is kept apart in `sphere_mass` and has no weight column.
struct SparseXi {
  std::vector<XiEntry> entries;
  double sphere_mass = 0.0;
  std::optional<Vector> sphere_point;                   // w^x, set on the out-of-hull path
  std::optional<std::vector<std::size_t>> facet_used;   // support ids of the facet

  bool out_of_hull() const noexcept { return sphere_point.has_value(); }
  double total_mass() const;
  /// Dense m-vector of entries (sphere mass excluded).
  Vector dense(std::size_t m) const;
};

/// Training data translated so its centroid is the origin, a bounding radius
/// R, and the Delaunay triangulation of the translated support points.
class EmbeddingSpace {
 public:
  EmbeddingSpace() = default;
  EmbeddingSpace(Vector centroid, double radius, Triangulation tri,
                 std::vector<std::size_t> support_rows);

  std::size_t dim() const noexcept { return tri_.dim(); }
  std::size_t support_size() const noexcept { return tri_.cloud().size(); }
  const Vector& centroid() const noexcept { return centroid_; }
  double radius() const noexcept { return radius_; }
  const PointCloud& support() const noexcept { return tri_.cloud(); }
  const Triangulation& triangulation() const noexcept { return tri_; }
  /// Row of the training set each support point came from (may be empty for
  /// spaces restored from a file that did not record them).
  const std::vector<std::size_t>& support_rows() const noexcept { return support_rows_; }

  Vector translate(const Vector& raw) const { return raw - centroid_; }
  Vector untranslate(const Vector& x) const { return x + centroid_; }

  /// Whether the origin (the training centroid) lies in the support hull.
  bool origin_inside() const;

 private:
  Vector centroid_;
  double radius_ = 0.0;
  Triangulation tri_;
  std::vector<std::size_t> support_rows_;
};

/// Centers on the mean of all training points, sets R to the largest
/// translated training norm plus `radius_margin`, and triangulates the
/// support rows. Support rows that coincide with an earlier support point are
/// dropped. Emits a warning on stderr when the origin is outside the hull.
EmbeddingSpace fit_space(const PointCloud& train_points,
                         std::span<const std::size_t> support_indices,
                         double radius_margin = 1.0);

/// Same as fit_space with an explicit radius, which must exceed every
/// translated support norm. Training points may fall outside the ball.
EmbeddingSpace fit_space_with_radius(const PointCloud& train_points,
                                     std::span<const std::size_t> support_indices,
                                     double radius);

/// R * x / |x| for a translated point x.
Vector project_to_sphere(const EmbeddingSpace& space, const Vector& x);

/// Sparse embedding of a raw (untranslated) query in the closed ball.
SparseXi xi(const EmbeddingSpace& space, const Vector& x_raw);

/// Embedding of a translated point through the virtual simplex formed by
/// boundary facet `facet` and the sphere projection of x. Coordinates are
/// clamped at zero and renormalised. Throws SingularSimplex if degenerate.
SparseXi virtual_xi(const EmbeddingSpace& space, const Vector& x, std::size_t facet);

}  // namespace smnn

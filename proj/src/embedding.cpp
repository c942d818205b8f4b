#include "smnn/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include "smnn/error.hpp"

namespace smnn {

namespace {

constexpr double kBallTol = 1e-9;
constexpr double kRelaxedTol = 1e-6;

// Values below the containment tolerance are snapped to zero, then the
// vector is renormalised to sum to one.
Vector snap_and_normalize(Vector b) {
  for (Eigen::Index i = 0; i < b.size(); ++i)
    if (b(i) < kBarycentricTol) b(i) = 0.0;
  b /= b.sum();
  return b;
}

std::vector<Vector> virtual_vertices(const EmbeddingSpace& space, const Vector& w,
                                     const BoundaryFacet& facet) {
  std::vector<Vector> verts;
  verts.reserve(facet.facet_ids.size() + 1);
  verts.push_back(w);
  for (auto id : facet.facet_ids) verts.push_back(space.support()[id]);
  return verts;
}

std::optional<Vector> raw_virtual(const EmbeddingSpace& space, const Vector& x, const Vector& w,
                                  const BoundaryFacet& facet) {
  try {
    return barycentric_solve(virtual_vertices(space, w, facet), x);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SingularSimplex) return std::nullopt;
    throw;
  }
}

SparseXi assemble_virtual(const BoundaryFacet& facet, const Vector& w, Vector b) {
  b = snap_and_normalize(std::move(b));
  SparseXi out;
  out.sphere_mass = b(0);
  for (std::size_t j = 0; j < facet.facet_ids.size(); ++j) {
    const double v = b(static_cast<Eigen::Index>(j + 1));
    if (v > 0.0) out.entries.push_back({facet.facet_ids[j], v});
  }
  out.sphere_point = w;
  out.facet_used = facet.facet_ids;
  return out;
}

// Among `candidates`, the facet whose virtual coordinates have the largest
// minimum (ties to the lowest index), restricted to minima >= -tol.
std::optional<std::pair<std::size_t, Vector>> most_interior(
    const EmbeddingSpace& space, const Vector& x, const Vector& w,
    const std::vector<std::size_t>& candidates, double tol) {
  std::optional<std::pair<std::size_t, Vector>> best;
  double best_min = -std::numeric_limits<double>::infinity();
  for (auto f : candidates) {
    auto b = raw_virtual(space, x, w, space.triangulation().boundary()[f]);
    if (!b) continue;
    const double lo = b->minCoeff();
    if (lo < -tol) continue;
    if (lo > best_min) {
      best_min = lo;
      best.emplace(f, std::move(*b));
    }
  }
  return best;
}

double max_norm(const PointCloud& train, const Vector& centroid) {
  double r = 0.0;
  for (const auto& p : train.points()) r = std::max(r, (p - centroid).norm());
  return r;
}

EmbeddingSpace make_space(const PointCloud& train, std::span<const std::size_t> support_indices,
                          const Vector& centroid, double radius) {
  if (support_indices.empty())
    throw Error(ErrorKind::InvalidArgument, "support set is empty");
  std::vector<Vector> pts;
  std::vector<std::size_t> rows;
  for (auto row : support_indices) {
    if (row >= train.size())
      throw Error(ErrorKind::InvalidArgument, "support index " + std::to_string(row) +
                                                  " out of range for " + std::to_string(train.size()) + " rows");
    const Vector p = train[row] - centroid;
    const bool duplicate = std::any_of(pts.begin(), pts.end(),
                                       [&](const Vector& q) { return (p - q).norm() < 1e-9; });
    if (duplicate) continue;
    pts.push_back(p);
    rows.push_back(row);
  }
  PointCloud support(train.dim(), std::move(pts));
  for (const auto& u : support.points())
    if (!(u.norm() < radius))
      throw Error(ErrorKind::InvalidMargin, "radius must exceed every support point norm");
  EmbeddingSpace space(centroid, radius, build_delaunay(support), std::move(rows));
  if (!space.origin_inside())
    std::cerr << "warning: training centroid lies outside the support hull\n";
  return space;
}

}  // namespace

double SparseXi::total_mass() const {
  double s = sphere_mass;
  for (const auto& e : entries) s += e.value;
  return s;
}

Vector SparseXi::dense(std::size_t m) const {
  Vector d = Vector::Zero(static_cast<Eigen::Index>(m));
  for (const auto& e : entries) d(static_cast<Eigen::Index>(e.index)) = e.value;
  return d;
}

EmbeddingSpace::EmbeddingSpace(Vector centroid, double radius, Triangulation tri,
                               std::vector<std::size_t> support_rows)
    : centroid_(std::move(centroid)),
      radius_(radius),
      tri_(std::move(tri)),
      support_rows_(std::move(support_rows)) {}

bool EmbeddingSpace::origin_inside() const {
  return tri_.locate(Vector::Zero(static_cast<Eigen::Index>(dim()))).has_value();
}

EmbeddingSpace fit_space(const PointCloud& train_points, std::span<const std::size_t> support_indices,
                         double radius_margin) {
  if (!(radius_margin > 0.0)) throw Error(ErrorKind::InvalidMargin, "radius margin must be positive");
  const Vector centroid = train_points.centroid();
  return make_space(train_points, support_indices, centroid,
                    max_norm(train_points, centroid) + radius_margin);
}

EmbeddingSpace fit_space_with_radius(const PointCloud& train_points,
                                     std::span<const std::size_t> support_indices, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidMargin, "radius must be positive");
  return make_space(train_points, support_indices, train_points.centroid(), radius);
}

Vector project_to_sphere(const EmbeddingSpace& space, const Vector& x) {
  const double len = x.norm();
  if (len < 1e-12) throw Error(ErrorKind::ZeroNorm, "cannot project the origin onto the sphere");
  return space.radius() * x / len;
}

SparseXi virtual_xi(const EmbeddingSpace& space, const Vector& x, std::size_t facet) {
  const auto& f = space.triangulation().boundary().at(facet);
  const Vector w = project_to_sphere(space, x);
  auto b = raw_virtual(space, x, w, f);
  if (!b) throw Error(ErrorKind::SingularSimplex, "virtual simplex is degenerate");
  return assemble_virtual(f, w, std::move(*b));
}

SparseXi xi(const EmbeddingSpace& space, const Vector& x_raw) {
  if (static_cast<std::size_t>(x_raw.size()) != space.dim())
    throw Error(ErrorKind::DimensionMismatch, "query has " + std::to_string(x_raw.size()) +
                                                  " coordinates, model expects " + std::to_string(space.dim()));
  const Vector x = space.translate(x_raw);
  if (x.norm() > space.radius() + kBallTol)
    throw Error(ErrorKind::OutsideBall, "query norm " + std::to_string(x.norm()) +
                                            " exceeds radius " + std::to_string(space.radius()));

  const auto& tri = space.triangulation();
  if (auto loc = tri.locate(x)) {
    SparseXi out;
    const auto& ids = tri.maximal()[loc->simplex].vertex_ids;
    for (std::size_t j = 0; j < ids.size(); ++j) {
      const double v = loc->coords(static_cast<Eigen::Index>(j));
      if (v > 0.0) out.entries.push_back({ids[j], v});
    }
    return out;
  }

  const Vector w = project_to_sphere(space, x);
  const auto gamma = tri.visible_boundary_facets(x);
  auto chosen = most_interior(space, x, w, gamma, kBarycentricTol);
  if (!chosen) {
    std::vector<std::size_t> all(tri.boundary().size());
    for (std::size_t f = 0; f < all.size(); ++f) all[f] = f;
    chosen = most_interior(space, x, w, all, kRelaxedTol);
  }
  if (!chosen) {
    // Nearest facet: the visible facet whose coordinates are least negative.
    chosen = most_interior(space, x, w, gamma, std::numeric_limits<double>::infinity());
  }
  if (!chosen)
    throw Error(ErrorKind::NoContainingVirtualSimplex, "no boundary facet yields a valid virtual simplex");
  return assemble_virtual(tri.boundary()[chosen->first], w, std::move(chosen->second));
}

}  // namespace smnn

#include "smnn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "smnn/error.hpp"

namespace smnn {

namespace {

using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// Generalised cross product of the rows of an (d-1) x d matrix.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> cofactor_normal(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& edges) {
  const Eigen::Index cols = edges.cols();
  const Eigen::Index rows = edges.rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> normal(cols);
  if (rows == 0) {
    normal.setOnes();
    return normal;
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> minor(rows, rows);
  for (Eigen::Index k = 0; k < cols; ++k) {
    for (Eigen::Index c = 0, mc = 0; c < cols; ++c) {
      if (c == k) continue;
      minor.col(mc++) = edges.col(c);
    }
    const Scalar det = minor.determinant();
    normal(k) = (k % 2 == 0) ? det : -det;
  }
  return normal;
}

// Greedily picks points maximising the distance to the affine span of the
// points already chosen. Returns the chosen indices and the smallest of the
// accepted distances (relative to the cloud scale the caller uses).
template <typename VectorT>
std::pair<std::vector<std::size_t>, long double> spanning_points(
    const std::vector<VectorT>& pts, std::size_t wanted) {
  std::vector<std::size_t> chosen{0};
  std::vector<LVector> basis;
  long double smallest = std::numeric_limits<long double>::infinity();
  const LVector origin = pts[0].template cast<long double>();
  while (chosen.size() < wanted) {
    long double best = -1.0L;
    std::size_t best_id = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      LVector r = pts[i].template cast<long double>() - origin;
      for (const auto& b : basis) r -= r.dot(b) * b;
      const long double dist = r.norm();
      if (dist > best) {
        best = dist;
        best_id = i;
      }
    }
    smallest = std::min(smallest, best);
    if (best <= 0.0L) break;
    LVector r = pts[best_id].template cast<long double>() - origin;
    for (const auto& b : basis) r -= r.dot(b) * b;
    basis.push_back(r / r.norm());
    chosen.push_back(best_id);
  }
  return {chosen, smallest};
}

struct HullFacet {
  std::vector<std::size_t> ids;  // sorted
  LVector normal;                // unit, outward
  long double offset = 0.0L;
};

// Incremental convex hull in R^d; points are inserted in index order after
// an initial d-simplex. Only the facet list is maintained: the horizon of a
// new point is the set of ridges owned by exactly one visible facet.
class IncrementalHull {
 public:
  explicit IncrementalHull(std::vector<LVector> pts) : pts_(std::move(pts)), dim_(pts_[0].size()) {}

  void run(const std::vector<std::size_t>& initial) {
    interior_ = LVector::Zero(dim_);
    for (auto id : initial) interior_ += pts_[id];
    interior_ /= static_cast<long double>(initial.size());
    for (std::size_t skip = 0; skip < initial.size(); ++skip) {
      std::vector<std::size_t> ids;
      for (std::size_t j = 0; j < initial.size(); ++j)
        if (j != skip) ids.push_back(initial[j]);
      facets_.push_back(make_facet(std::move(ids)));
    }
    std::vector<bool> used(pts_.size(), false);
    for (auto id : initial) used[id] = true;
    for (std::size_t i = 0; i < pts_.size(); ++i)
      if (!used[i]) insert(i);
  }

  const std::vector<HullFacet>& facets() const { return facets_; }

 private:
  static constexpr long double kVisibleEps = 1e-14L;

  HullFacet make_facet(std::vector<std::size_t> ids) const {
    std::sort(ids.begin(), ids.end());
    LMatrix edges(dim_ - 1, dim_);
    for (std::size_t r = 1; r < ids.size(); ++r)
      edges.row(static_cast<Eigen::Index>(r - 1)) = (pts_[ids[r]] - pts_[ids[0]]).transpose();
    LVector normal = cofactor_normal<long double>(edges);
    normal /= normal.norm();
    long double offset = -normal.dot(pts_[ids[0]]);
    if (normal.dot(interior_) + offset > 0.0L) {
      normal = -normal;
      offset = -offset;
    }
    return {std::move(ids), std::move(normal), offset};
  }

  void insert(std::size_t id) {
    const LVector& p = pts_[id];
    std::vector<HullFacet> kept;
    std::map<std::vector<std::size_t>, int> ridge_count;
    kept.reserve(facets_.size());
    bool any_visible = false;
    for (auto& f : facets_) {
      if (f.normal.dot(p) + f.offset > kVisibleEps) {
        any_visible = true;
        for (std::size_t skip = 0; skip < f.ids.size(); ++skip) {
          std::vector<std::size_t> ridge;
          ridge.reserve(f.ids.size() - 1);
          for (std::size_t j = 0; j < f.ids.size(); ++j)
            if (j != skip) ridge.push_back(f.ids[j]);
          ++ridge_count[ridge];
        }
      } else {
        kept.push_back(std::move(f));
      }
    }
    if (!any_visible) {
      facets_ = std::move(kept);
      return;  // numerically on or inside the hull
    }
    for (const auto& [ridge, count] : ridge_count) {
      if (count != 1) continue;
      std::vector<std::size_t> ids = ridge;
      ids.push_back(id);
      kept.push_back(make_facet(std::move(ids)));
    }
    facets_ = std::move(kept);
  }

  std::vector<LVector> pts_;
  Eigen::Index dim_;
  LVector interior_;
  std::vector<HullFacet> facets_;
};

// Coordinates within the tolerance of zero (on either side) become zero.
Vector clamp_and_normalize(Vector b) {
  for (Eigen::Index i = 0; i < b.size(); ++i)
    if (b(i) < kBarycentricTol) b(i) = 0.0;
  b /= b.sum();
  return b;
}

}  // namespace

// ---------------------------------------------------------------------------

PointCloud::PointCloud(std::size_t dim, std::vector<Vector> points)
    : dim_(dim), points_(std::move(points)) {
  if (dim_ == 0) throw Error(ErrorKind::DimensionMismatch, "point dimension must be positive");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (static_cast<std::size_t>(points_[i].size()) != dim_)
      throw Error(ErrorKind::DimensionMismatch,
                  "point " + std::to_string(i) + " has " + std::to_string(points_[i].size()) +
                      " coordinates, expected " + std::to_string(dim_));
    if (!points_[i].allFinite())
      throw Error(ErrorKind::InvalidArgument, "point " + std::to_string(i) + " is not finite");
  }
}

double PointCloud::diameter() const {
  if (points_.empty()) return 0.0;
  Vector lo = points_[0], hi = points_[0];
  for (const auto& p : points_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

Vector PointCloud::centroid() const {
  Vector c = Vector::Zero(static_cast<Eigen::Index>(dim_));
  for (const auto& p : points_) c += p;
  if (!points_.empty()) c /= static_cast<double>(points_.size());
  return c;
}

std::vector<Vector> simplex_points(const PointCloud& cloud, const Simplex& s) {
  std::vector<Vector> out;
  out.reserve(s.vertex_ids.size());
  for (auto id : s.vertex_ids) out.push_back(cloud[id]);
  return out;
}

Vector hyperplane_normal(std::span<const Vector> points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Matrix edges(n - 1, n);
  for (Eigen::Index r = 1; r < n; ++r) edges.row(r - 1) = (points[r] - points[0]).transpose();
  Vector normal = cofactor_normal<double>(edges);
  const double len = normal.norm();
  if (len == 0.0) throw Error(ErrorKind::SingularSimplex, "facet points are affinely dependent");
  return normal / len;
}

double normalized_volume(std::span<const Vector> vertices) {
  const auto n = static_cast<Eigen::Index>(vertices.size()) - 1;
  Matrix edges(n, n);
  double longest = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) edges.col(j) = vertices[j + 1] - vertices[0];
  for (std::size_t a = 0; a < vertices.size(); ++a)
    for (std::size_t b = a + 1; b < vertices.size(); ++b)
      longest = std::max(longest, (vertices[a] - vertices[b]).norm());
  if (longest == 0.0) return 0.0;
  return std::abs(edges.determinant()) / std::pow(longest, static_cast<double>(n));
}

Vector barycentric_solve(std::span<const Vector> vertices, const Vector& x) {
  const auto n = static_cast<Eigen::Index>(vertices.size()) - 1;
  if (n < 1 || x.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "need n+1 vertices in R^n and a point in R^n");
  Matrix edges(n, n);
  for (Eigen::Index j = 0; j < n; ++j) edges.col(j) = vertices[j + 1] - vertices[0];
  Eigen::PartialPivLU<Matrix> lu(edges);
  if (!(lu.rcond() > 1e-12)) throw Error(ErrorKind::SingularSimplex, "simplex is numerically degenerate");
  const Vector lambda = lu.solve(x - vertices[0]);
  Vector b(n + 1);
  b(0) = 1.0 - lambda.sum();
  b.tail(n) = lambda;
  return b;
}

bool circumsphere_contains(std::span<const Vector> simplex_points, const Vector& q) {
  const auto n = static_cast<Eigen::Index>(simplex_points.size()) - 1;
  Matrix a(n, n);
  Vector rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector e = simplex_points[i + 1] - simplex_points[0];
    a.row(i) = 2.0 * e.transpose();
    rhs(i) = e.squaredNorm();
  }
  Eigen::PartialPivLU<Matrix> lu(a);
  if (!(lu.rcond() > 1e-12)) throw Error(ErrorKind::SingularSimplex, "simplex is numerically degenerate");
  const Vector offset = lu.solve(rhs);
  const double r2 = offset.squaredNorm();
  const double d2 = (q - simplex_points[0] - offset).squaredNorm();
  return d2 < r2 - 1e-7 * std::max(1.0, r2);
}

// ---------------------------------------------------------------------------

Triangulation::Triangulation(PointCloud cloud, std::vector<Simplex> maximal)
    : cloud_(std::move(cloud)), maximal_(std::move(maximal)) {
  const std::size_t n = cloud_.dim();
  std::map<std::vector<std::size_t>, std::vector<std::pair<std::size_t, std::size_t>>> faces;
  for (std::size_t s = 0; s < maximal_.size(); ++s) {
    const auto& ids = maximal_[s].vertex_ids;
    for (std::size_t skip = 0; skip <= n; ++skip) {
      std::vector<std::size_t> face;
      face.reserve(n);
      for (std::size_t j = 0; j <= n; ++j)
        if (j != skip) face.push_back(ids[j]);
      faces[face].emplace_back(s, ids[skip]);
    }
  }
  for (const auto& [face, owners] : faces) {
    if (owners.size() != 1) continue;
    BoundaryFacet facet;
    facet.facet_ids = face;
    facet.opposite_id = owners.front().second;
    std::vector<Vector> pts;
    for (auto id : face) pts.push_back(cloud_[id]);
    facet.normal = hyperplane_normal(pts);
    facet.offset = -facet.normal.dot(pts.front());
    if (facet.signed_distance(cloud_[facet.opposite_id]) > 0.0) {
      facet.normal = -facet.normal;
      facet.offset = -facet.offset;
    }
    boundary_.push_back(std::move(facet));
  }
  cache_inverses();
}

Triangulation::Triangulation(PointCloud cloud, std::vector<Simplex> maximal,
                             std::vector<BoundaryFacet> boundary)
    : cloud_(std::move(cloud)), maximal_(std::move(maximal)), boundary_(std::move(boundary)) {
  cache_inverses();
}

void Triangulation::cache_inverses() {
  const auto n = static_cast<Eigen::Index>(cloud_.dim());
  inverse_.clear();
  inverse_.reserve(maximal_.size());
  for (const auto& s : maximal_) {
    if (s.vertex_ids.size() != static_cast<std::size_t>(n + 1))
      throw Error(ErrorKind::DimensionMismatch, "simplex does not have n+1 vertices");
    Matrix edges(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      edges.col(j) = cloud_[s.vertex_ids[j + 1]] - cloud_[s.vertex_ids[0]];
    inverse_.push_back(Eigen::PartialPivLU<Matrix>(edges).inverse());
  }
}

Vector Triangulation::barycentric(std::size_t s, const Vector& x) const {
  const auto n = static_cast<Eigen::Index>(cloud_.dim());
  const Vector lambda = inverse_[s] * (x - cloud_[maximal_[s].vertex_ids[0]]);
  Vector b(n + 1);
  b(0) = 1.0 - lambda.sum();
  b.tail(n) = lambda;
  return b;
}

std::optional<Location> Triangulation::locate(const Vector& x) const {
  for (std::size_t s = 0; s < maximal_.size(); ++s) {
    Vector b = barycentric(s, x);
    if (b.minCoeff() >= -kBarycentricTol) return Location{s, clamp_and_normalize(std::move(b))};
  }
  return std::nullopt;
}

std::vector<std::size_t> Triangulation::visible_boundary_facets(const Vector& x) const {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < boundary_.size(); ++f)
    if (boundary_[f].signed_distance(x) > 0.0) out.push_back(f);
  if (out.empty()) throw Error(ErrorKind::NoVisibleFacet, "query is not beyond any boundary facet");
  return out;
}

// ---------------------------------------------------------------------------

Triangulation build_delaunay(const PointCloud& cloud) {
  const std::size_t n = cloud.dim();
  const std::size_t m = cloud.size();
  if (m < n + 1)
    throw Error(ErrorKind::DimensionTooSmall,
                "need at least " + std::to_string(n + 1) + " points, got " + std::to_string(m));

  const double diameter = cloud.diameter();
  const Vector center = cloud.centroid();
  std::vector<Vector> normalized;
  normalized.reserve(m);
  for (const auto& p : cloud.points()) normalized.push_back((p - center) / diameter);

  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if ((cloud[i] - cloud[j]).norm() < 1e-9)
        throw Error(ErrorKind::DegenerateSupport,
                    "points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");

  if (spanning_points(normalized, n + 1).second < 1e-9)
    throw Error(ErrorKind::DegenerateSupport, "points lie in a proper affine subspace");

  if (m == n + 1) {
    std::vector<std::size_t> ids(m);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    return Triangulation(cloud, {Simplex{std::move(ids)}});
  }

  // Tie-breaking shift and lift; both are used only to decide combinatorics.
  constexpr long double kShift = 1e-10L;
  std::vector<LVector> lifted;
  lifted.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    LVector q(static_cast<Eigen::Index>(n + 1));
    LVector p = normalized[i].cast<long double>();
    p.array() += kShift * static_cast<long double>(i);
    q.head(static_cast<Eigen::Index>(n)) = p;
    q(static_cast<Eigen::Index>(n)) = p.squaredNorm();
    lifted.push_back(std::move(q));
  }

  auto [initial, spread] = spanning_points(lifted, n + 2);
  if (initial.size() < n + 2 || spread < 1e-14L)
    throw Error(ErrorKind::DegenerateSupport, "lifted points are degenerate");

  IncrementalHull hull(std::move(lifted));
  hull.run(initial);

  std::vector<Simplex> simplices;
  for (const auto& f : hull.facets()) {
    if (!(f.normal(static_cast<Eigen::Index>(n)) < 0.0L)) continue;
    Simplex s{f.ids};
    if (normalized_volume(simplex_points(cloud, s)) <= 1e-12) continue;
    simplices.push_back(std::move(s));
  }
  std::sort(simplices.begin(), simplices.end(),
            [](const Simplex& a, const Simplex& b) { return a.vertex_ids < b.vertex_ids; });
  return Triangulation(cloud, std::move(simplices));
}

}  // namespace smnn

#include "smnn/sampling.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>

#include "smnn/error.hpp"

namespace smnn {

namespace {

// Picks uniformly among the indices attaining the extreme value.
std::size_t pick_tied(const std::vector<std::size_t>& tied, std::mt19937_64& rng) {
  if (tied.size() == 1) return tied.front();
  std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
  return tied[pick(rng)];
}

// Farthest-point traversal. Calls `visit(selected, cover)` after each
// selection; stops when visit returns false or every point is selected.
template <typename Visit>
std::vector<std::size_t> traverse(const PointCloud& points, std::uint64_t seed, Visit visit) {
  std::vector<std::size_t> selected;
  if (points.empty()) return selected;
  std::mt19937_64 rng(seed);
  const Vector c = points.centroid();

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d = (points[i] - c).norm();
    if (d < best) {
      best = d;
      tied.assign(1, i);
    } else if (d == best) {
      tied.push_back(i);
    }
  }
  std::vector<double> nearest(points.size(), std::numeric_limits<double>::infinity());
  std::size_t next = pick_tied(tied, rng);
  while (true) {
    selected.push_back(next);
    for (std::size_t i = 0; i < points.size(); ++i)
      nearest[i] = std::min(nearest[i], (points[i] - points[next]).norm());
    double cover = -1.0;
    tied.clear();
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (nearest[i] > cover) {
        cover = nearest[i];
        tied.assign(1, i);
      } else if (nearest[i] == cover) {
        tied.push_back(i);
      }
    }
    if (!visit(selected, cover) || cover == 0.0) break;
    next = pick_tied(tied, rng);
  }
  return selected;
}

}  // namespace

PointCloud centered(const PointCloud& points) {
  const Vector c = points.centroid();
  std::vector<Vector> out;
  out.reserve(points.size());
  for (const auto& p : points.points()) out.push_back(p - c);
  return PointCloud(points.dim(), std::move(out));
}

double epsilon_from_kappa(const PointCloud& centered_points, double kappa) {
  if (!(kappa > 0.0)) throw Error(ErrorKind::InvalidArgument, "kappa must be positive");
  double r = 0.0;
  for (const auto& p : centered_points.points()) r = std::max(r, p.norm());
  return (r + 0.5) / kappa;
}

std::vector<std::size_t> epsilon_representative(const PointCloud& points, double epsilon,
                                                std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  return traverse(points, seed, [&](const auto&, double cover) { return !(cover < epsilon); });
}

std::vector<double> cover_radii(const PointCloud& points, std::uint64_t seed) {
  std::vector<double> radii;
  traverse(points, seed, [&](const auto&, double cover) {
    radii.push_back(cover);
    return true;
  });
  return radii;
}

double epsilon_for_size(const PointCloud& points, std::size_t size, std::uint64_t seed) {
  if (size == 0 || size > points.size())
    throw Error(ErrorKind::InvalidArgument, "support size must be in [1, number of points]");
  const auto radii = cover_radii(points, seed);
  if (size > radii.size())
    throw Error(ErrorKind::InvalidArgument, "only " + std::to_string(radii.size()) + " distinct points");
  // Size k is returned for cover radii r_k < eps <= r_{k-1}.
  const double below = radii[size - 1];
  if (size == 1) return below > 0.0 ? 1.5 * below : 1.0;
  const double above = radii[size - 2];
  if (!(below < above))
    throw Error(ErrorKind::InvalidArgument, "no epsilon yields exactly " + std::to_string(size) + " points");
  return 0.5 * (below + above);
}

double SamplerConfig::resolve_epsilon(const PointCloud& points) const {
  if (mode == Mode::Kappa) return epsilon_from_kappa(centered(points), kappa);
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  return epsilon;
}

std::vector<std::size_t> select_support(const PointCloud& points, const SamplerConfig& config) {
  return epsilon_representative(points, config.resolve_epsilon(points), config.seed);
}

}  // namespace smnn

#pragma once

#include <cstdint>
#include <vector>

#include "smnn/geometry.hpp"

namespace smnn {

/// How a support set is chosen. A support set is just a list of training row
/// indices, so other samplers can be added without touching the model.
struct SamplerConfig {
  enum class Mode { Epsilon, Kappa };
  Mode mode = Mode::Epsilon;
  double epsilon = 0.0;
  double kappa = 0.0;
  std::uint64_t seed = 0;

  /// Resolves the cover radius for `points` (translated to their centroid
  /// when the kappa rule applies).
  double resolve_epsilon(const PointCloud& points) const;
};

/// (max_v |v| + 1/2) / kappa for points already centered at the origin.
double epsilon_from_kappa(const PointCloud& centered, double kappa);

/// Greedy farthest-point traversal from the point nearest the centroid,
/// stopping once every point is closer than epsilon to a selected point.
/// The seed only breaks exact distance ties.
std::vector<std::size_t> epsilon_representative(const PointCloud& points, double epsilon,
                                                std::uint64_t seed = 0);

/// Cover radius after each selection of the farthest-point traversal:
/// entry i is the largest distance to the first i+1 selected points.
std::vector<double> cover_radii(const PointCloud& points, std::uint64_t seed = 0);

/// An epsilon for which epsilon_representative returns exactly `size`
/// points. Throws InvalidArgument if ties make that size unreachable.
double epsilon_for_size(const PointCloud& points, std::size_t size, std::uint64_t seed = 0);

/// Points translated so their centroid is the origin.
PointCloud centered(const PointCloud& points);

std::vector<std::size_t> select_support(const PointCloud& points, const SamplerConfig& config);

}  // namespace smnn

#pragma once

#include <string>
#include <vector>

#include "smnn/geometry.hpp"

namespace smnn {

/// Points with one label name per point.
struct LabeledDataset {
  PointCloud points;
  std::vector<std::string> labels;
  std::vector<std::string> feature_names;  // empty means f1..fn

  std::size_t size() const noexcept { return points.size(); }
  std::size_t dim() const noexcept { return points.dim(); }
  /// Checks label count and that at least two distinct labels are present.
  void validate() const;
  LabeledDataset subset(const std::vector<std::size_t>& rows) const;
};

}  // namespace smnn

#pragma once

#include <vector>

#include <json.hpp>

#include "smnn/dataset.hpp"
#include "smnn/model.hpp"

namespace smnn {

struct EvalReport {
  double accuracy = 0.0;
  double mean_loss = 0.0;
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
  std::size_t n = 0;
  std::size_t n_out_of_hull = 0;   // took the sphere path or fell outside the ball
  std::size_t n_outside_ball = 0;  // scored as chance-level misclassifications
};

/// Scores every row. Rows outside the model's ball count as misclassified
/// with loss log(k) instead of aborting.
EvalReport evaluate(const SmnnModel& model, const LabeledDataset& data);

nlohmann::json to_json(const EvalReport& report);

}  // namespace smnn

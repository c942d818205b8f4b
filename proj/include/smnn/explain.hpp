#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "smnn/model.hpp"

namespace smnn {

/// One support vertex of the simplex containing the query.
struct Contributor {
  std::size_t support_index = 0;
  Vector coordinates;  // original (untranslated) coordinates of u^t
  std::string label;
  double xi_value = 0.0;
  Vector contributions;  // entry j = W(j, t) * xi_t, on the logit scale
};

struct Explanation {
  Vector query;
  std::string predicted_label;
  Vector probabilities;
  std::vector<Contributor> contributors;
  double sphere_mass = 0.0;
  bool out_of_hull = false;
};

/// Contributors are exactly the nonzero xi entries, so summing their
/// contribution vectors gives the logits.
Explanation explain(const SmnnModel& model, const Vector& x_raw);

nlohmann::json to_json(const Explanation& e);

/// Grouped bar chart: one group per contributor, one signed bar per class.
/// Output bytes depend only on the inputs.
std::string render_explanation_svg(const Explanation& e, const std::vector<std::string>& class_names);

}  // namespace smnn

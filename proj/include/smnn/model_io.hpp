#pragma once

#include <string>

#include <json.hpp>

#include "smnn/model.hpp"

namespace smnn {

inline constexpr int kModelSchemaVersion = 1;

/// Self-describing model document: labels, centroid, radius, translated
/// support points and labels, triangulation (simplices and oriented boundary
/// facets), row-major weights and provenance. Doubles round-trip exactly.
nlohmann::json model_to_json(const SmnnModel& model);
SmnnModel model_from_json(const nlohmann::json& doc);

void save_model(const SmnnModel& model, const std::string& path);
SmnnModel load_model(const std::string& path);

}  // namespace smnn

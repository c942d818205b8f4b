#include "smnn/model_io.hpp"

#include <fstream>
#include <sstream>

#include "smnn/error.hpp"

namespace smnn {

namespace {

using nlohmann::json;

json vec_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vector json_vec(const json& a, std::size_t expected, const char* what) {
  if (!a.is_array() || a.size() != expected)
    throw Error(ErrorKind::ParseError, std::string(what) + ": expected " + std::to_string(expected) + " values");
  Vector v(static_cast<Eigen::Index>(expected));
  for (std::size_t i = 0; i < expected; ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  return v;
}

std::vector<std::size_t> json_ids(const json& a, std::size_t expected, std::size_t bound, const char* what) {
  if (!a.is_array() || a.size() != expected)
    throw Error(ErrorKind::ParseError, std::string(what) + ": expected " + std::to_string(expected) + " indices");
  std::vector<std::size_t> ids;
  for (const auto& v : a) {
    const auto id = v.get<std::size_t>();
    if (id >= bound) throw Error(ErrorKind::ParseError, std::string(what) + ": index out of range");
    ids.push_back(id);
  }
  return ids;
}

}  // namespace

json model_to_json(const SmnnModel& model) {
  const auto& space = model.space();
  const auto& tri = space.triangulation();

  json support = json::array();
  for (const auto& p : space.support().points()) support.push_back(vec_json(p));
  json simplices = json::array();
  for (const auto& s : tri.maximal()) simplices.push_back(s.vertex_ids);
  json facets = json::array();
  for (const auto& f : tri.boundary())
    facets.push_back({{"facet_ids", f.facet_ids},
                      {"opposite_id", f.opposite_id},
                      {"normal", vec_json(f.normal)},
                      {"offset", f.offset}});
  json weights = json::array();
  for (Eigen::Index j = 0; j < model.weights().rows(); ++j)
    for (Eigen::Index t = 0; t < model.weights().cols(); ++t) weights.push_back(model.weights()(j, t));

  const auto& p = model.provenance();
  return {{"schema_version", kModelSchemaVersion},
          {"dim", space.dim()},
          {"k", model.num_classes()},
          {"labels", model.encoding().names()},
          {"centroid", vec_json(space.centroid())},
          {"radius", space.radius()},
          {"support_points", std::move(support)},
          {"support_labels", model.support_labels()},
          {"support_rows", space.support_rows()},
          {"maximal_simplices", std::move(simplices)},
          {"boundary_facets", std::move(facets)},
          {"weights", std::move(weights)},
          {"provenance",
           {{"seed", p.seed},
            {"epochs", p.epochs},
            {"learning_rate", p.learning_rate},
            {"init_mode", p.init_mode},
            {"sampler", p.sampler},
            {"sampler_parameter", p.sampler_parameter},
            {"epsilon", p.epsilon},
            {"radius_margin", p.radius_margin}}}};
}

SmnnModel model_from_json(const json& doc) {
  try {
    if (doc.at("schema_version").get<int>() != kModelSchemaVersion)
      throw Error(ErrorKind::ParseError, "unsupported model schema_version");
    const auto n = doc.at("dim").get<std::size_t>();
    const auto k = doc.at("k").get<std::size_t>();
    LabelEncoding encoding(doc.at("labels").get<std::vector<std::string>>());
    if (encoding.size() != k) throw Error(ErrorKind::ParseError, "labels: expected k names");

    const auto& support_json = doc.at("support_points");
    const std::size_t m = support_json.size();
    std::vector<Vector> support;
    for (const auto& p : support_json) support.push_back(json_vec(p, n, "support_points"));
    PointCloud cloud(n, std::move(support));

    std::vector<Simplex> simplices;
    for (const auto& s : doc.at("maximal_simplices"))
      simplices.push_back({json_ids(s, n + 1, m, "maximal_simplices")});
    std::vector<BoundaryFacet> facets;
    for (const auto& f : doc.at("boundary_facets")) {
      BoundaryFacet facet;
      facet.facet_ids = json_ids(f.at("facet_ids"), n, m, "facet_ids");
      facet.opposite_id = json_ids(json::array({f.at("opposite_id")}), 1, m, "opposite_id").front();
      facet.normal = json_vec(f.at("normal"), n, "normal");
      facet.offset = f.at("offset").get<double>();
      facets.push_back(std::move(facet));
    }

    auto rows = doc.value("support_rows", std::vector<std::size_t>{});
    EmbeddingSpace space(json_vec(doc.at("centroid"), n, "centroid"), doc.at("radius").get<double>(),
                         Triangulation(std::move(cloud), std::move(simplices), std::move(facets)),
                         std::move(rows));

    const auto support_labels = json_ids(doc.at("support_labels"), m, k, "support_labels");
    const Vector flat = json_vec(doc.at("weights"), k * m, "weights");
    Matrix weights(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t t = 0; t < m; ++t)
        weights(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t)) =
            flat(static_cast<Eigen::Index>(j * m + t));

    Provenance prov;
    if (doc.contains("provenance")) {
      const auto& p = doc.at("provenance");
      prov.seed = p.value("seed", std::uint64_t{0});
      prov.epochs = p.value("epochs", 0);
      prov.learning_rate = p.value("learning_rate", 0.0);
      prov.init_mode = p.value("init_mode", std::string("uniform01"));
      prov.sampler = p.value("sampler", std::string("all"));
      prov.sampler_parameter = p.value("sampler_parameter", 0.0);
      prov.epsilon = p.value("epsilon", 0.0);
      prov.radius_margin = p.value("radius_margin", 1.0);
    }
    return SmnnModel(std::move(space), std::move(encoding), std::move(weights), support_labels, prov);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("model file: ") + e.what());
  }
}

void save_model(const SmnnModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
  out << model_to_json(model).dump(1) << '\n';
}

SmnnModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, "model file '" + path + "': " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace smnn

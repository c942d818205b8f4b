#include "smnn/explain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace smnn {

namespace {

nlohmann::json to_array(const Vector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759",
                                    "#76b7b2", "#edc948", "#b07aa1", "#9c755f"};

}  // namespace

Explanation explain(const SmnnModel& model, const Vector& x_raw) {
  const SparseXi embedding = xi(model.space(), x_raw);
  Explanation e;
  e.query = x_raw;
  e.probabilities = model.forward(embedding);
  e.predicted_label = model.encoding().name(argmax(e.probabilities));
  e.sphere_mass = embedding.sphere_mass;
  e.out_of_hull = embedding.out_of_hull();
  for (const auto& entry : embedding.entries) {
    Contributor c;
    c.support_index = entry.index;
    c.coordinates = model.space().untranslate(model.space().support()[entry.index]);
    c.label = model.encoding().name(model.support_labels()[entry.index]);
    c.xi_value = entry.value;
    c.contributions = model.weights().col(static_cast<Eigen::Index>(entry.index)) * entry.value;
    e.contributors.push_back(std::move(c));
  }
  return e;
}

nlohmann::json to_json(const Explanation& e) {
  nlohmann::json contributors = nlohmann::json::array();
  for (const auto& c : e.contributors) {
    contributors.push_back({{"support_index", c.support_index},
                            {"coordinates", to_array(c.coordinates)},
                            {"label", c.label},
                            {"xi_value", c.xi_value},
                            {"contributions", to_array(c.contributions)}});
  }
  return {{"query", to_array(e.query)},
          {"predicted_label", e.predicted_label},
          {"probabilities", to_array(e.probabilities)},
          {"contributors", std::move(contributors)},
          {"sphere_mass", e.sphere_mass},
          {"out_of_hull", e.out_of_hull}};
}

std::string render_explanation_svg(const Explanation& e, const std::vector<std::string>& class_names) {
  const std::size_t k = static_cast<std::size_t>(e.probabilities.size());
  const std::size_t groups = std::max<std::size_t>(e.contributors.size(), 1);
  constexpr double bar_w = 18.0, group_gap = 24.0, margin = 50.0, plot_h = 240.0;
  const double group_w = static_cast<double>(k) * bar_w;
  const double width = 2 * margin + static_cast<double>(groups) * (group_w + group_gap);
  const double height = plot_h + 2 * margin + 20.0 * static_cast<double>(k);

  double extent = 0.0;
  for (const auto& c : e.contributors) extent = std::max(extent, c.contributions.cwiseAbs().maxCoeff());
  if (extent == 0.0) extent = 1.0;
  const double scale = (plot_h / 2.0) / extent;
  const double axis_y = margin + plot_h / 2.0;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" + fmt(height) +
         "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(width) + "\" height=\"" + fmt(height) + "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(margin) + "\" y=\"" + fmt(margin / 2.0) +
         "\" font-family=\"sans-serif\" font-size=\"14\">prediction: " + escape(e.predicted_label) +
         (e.out_of_hull ? " (outside data hull, sphere mass " + fmt(e.sphere_mass) + ")" : std::string()) +
         "</text>\n";
  svg += "<line class=\"axis\" x1=\"" + fmt(margin) + "\" y1=\"" + fmt(axis_y) + "\" x2=\"" +
         fmt(width - margin) + "\" y2=\"" + fmt(axis_y) + "\" stroke=\"black\"/>\n";

  for (std::size_t g = 0; g < e.contributors.size(); ++g) {
    const auto& c = e.contributors[g];
    const double x0 = margin + static_cast<double>(g) * (group_w + group_gap) + group_gap / 2.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double v = c.contributions(static_cast<Eigen::Index>(j));
      const double h = std::abs(v) * scale;
      const double y = v >= 0.0 ? axis_y - h : axis_y;
      svg += "<rect class=\"bar\" x=\"" + fmt(x0 + static_cast<double>(j) * bar_w) + "\" y=\"" + fmt(y) +
             "\" width=\"" + fmt(bar_w - 2.0) + "\" height=\"" + fmt(h) + "\" fill=\"" + kPalette[j % 8] +
             "\"><title>" + fmt(v) + "</title></rect>\n";
    }
    svg += "<text x=\"" + fmt(x0) + "\" y=\"" + fmt(margin + plot_h + 16.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\">u" + std::to_string(c.support_index) + " (" +
           escape(c.label) + ")</text>\n";
  }
  for (std::size_t j = 0; j < k; ++j) {
    const double y = margin + plot_h + 32.0 + 20.0 * static_cast<double>(j);
    const std::string name = j < class_names.size() ? class_names[j] : "class " + std::to_string(j + 1);
    svg += "<rect x=\"" + fmt(margin) + "\" y=\"" + fmt(y - 10.0) + "\" width=\"12\" height=\"12\" fill=\"" +
           kPalette[j % 8] + "\"/>\n";
    svg += "<text x=\"" + fmt(margin + 18.0) + "\" y=\"" + fmt(y) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(name) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace smnn

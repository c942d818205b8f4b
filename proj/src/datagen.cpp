#include "smnn/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "smnn/error.hpp"

namespace smnn {

void LabeledDataset::validate() const {
  if (labels.size() != points.size())
    throw Error(ErrorKind::DimensionMismatch, std::to_string(labels.size()) + " labels for " +
                                                  std::to_string(points.size()) + " points");
  if (std::set<std::string>(labels.begin(), labels.end()).size() < 2)
    throw Error(ErrorKind::InvalidArgument, "dataset needs at least two distinct labels");
}

LabeledDataset LabeledDataset::subset(const std::vector<std::size_t>& rows) const {
  std::vector<Vector> pts;
  std::vector<std::string> lbl;
  pts.reserve(rows.size());
  lbl.reserve(rows.size());
  for (auto r : rows) {
    pts.push_back(points[r]);
    lbl.push_back(labels[r]);
  }
  return {PointCloud(points.dim(), std::move(pts)), std::move(lbl), feature_names};
}

// ---------------------------------------------------------------------------

LabeledDataset gen_spiral(const SpiralOptions& o) {
  if (o.n_samples < 4 || o.n_samples % 2 != 0)
    throw Error(ErrorKind::InvalidCount, "spiral needs an even sample count of at least 4");
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const std::size_t per_arm = o.n_samples / 2;
  std::vector<Vector> pts;
  std::vector<std::string> labels;
  for (int arm = 0; arm < 2; ++arm) {
    for (std::size_t i = 0; i < per_arm; ++i) {
      const double s = static_cast<double>(i) / static_cast<double>(per_arm - 1);
      const double theta = o.turns * 2.0 * std::numbers::pi * s + arm * std::numbers::pi;
      Vector p(2);
      p << s * std::cos(theta), s * std::sin(theta);
      if (o.noise_sd > 0.0) {
        p(0) += o.noise_sd * noise(rng);
        p(1) += o.noise_sd * noise(rng);
      }
      pts.push_back(std::move(p));
      labels.push_back(std::to_string(arm));
    }
  }
  return {PointCloud(2, std::move(pts)), std::move(labels), {}};
}

LabeledDataset gen_clusters(const ClusterOptions& o) {
  if (o.n_features < 2) throw Error(ErrorKind::InvalidArgument, "n_features must be at least 2");
  if (o.n_samples < 10) throw Error(ErrorKind::InvalidCount, "n_samples must be at least 10");
  if (o.clusters_per_class < 1) throw Error(ErrorKind::InvalidCount, "need at least one cluster per class");
  if (o.flip_fraction < 0.0 || o.flip_fraction > 1.0)
    throw Error(ErrorKind::InvalidArgument, "flip_fraction must lie in [0, 1]");
  const std::size_t n_clusters = 2 * o.clusters_per_class;
  if (o.n_features < 63 && n_clusters > (std::size_t{1} << o.n_features))
    throw Error(ErrorKind::TooManyClusters, std::to_string(n_clusters) + " clusters exceed the " +
                                                std::to_string(std::size_t{1} << o.n_features) +
                                                " hypercube vertices");

  std::mt19937_64 rng(o.seed);
  std::bernoulli_distribution coin(0.5);
  std::set<std::vector<bool>> used;
  std::vector<Vector> centroids;
  while (centroids.size() < n_clusters) {
    std::vector<bool> signs(o.n_features);
    for (std::size_t f = 0; f < o.n_features; ++f) signs[f] = coin(rng);
    if (!used.insert(signs).second) continue;
    Vector c(static_cast<Eigen::Index>(o.n_features));
    for (std::size_t f = 0; f < o.n_features; ++f) c(static_cast<Eigen::Index>(f)) = signs[f] ? o.class_sep : -o.class_sep;
    centroids.push_back(std::move(c));
  }

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vector> pts;
  std::vector<std::size_t> cls;
  for (std::size_t c = 0; c < n_clusters; ++c) {
    const std::size_t count = o.n_samples / n_clusters + (c < o.n_samples % n_clusters ? 1 : 0);
    for (std::size_t i = 0; i < count; ++i) {
      Vector p = centroids[c];
      for (Eigen::Index f = 0; f < p.size(); ++f) p(f) += gauss(rng);
      pts.push_back(std::move(p));
      cls.push_back(c % 2);
    }
  }

  const auto n_flip = static_cast<std::size_t>(std::llround(o.flip_fraction * static_cast<double>(pts.size())));
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 0; i < n_flip; ++i) cls[order[i]] = 1 - cls[order[i]];

  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Vector> shuffled;
  std::vector<std::string> labels;
  for (auto r : order) {
    shuffled.push_back(pts[r]);
    labels.push_back(std::to_string(cls[r]));
  }
  return {PointCloud(o.n_features, std::move(shuffled)), std::move(labels), {}};
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

LabeledDataset parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!trim(line).empty()) {
      header = split_line(line);
      break;
    }
  }
  if (header.size() < 2) throw Error(ErrorKind::ParseError, "row 1: header needs at least one feature and a label");
  const std::size_t n = header.size() - 1;

  std::vector<Vector> pts;
  std::vector<std::string> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size())
      throw Error(ErrorKind::ParseError, "row " + std::to_string(line_no) + ": expected " +
                                             std::to_string(header.size()) + " columns, got " +
                                             std::to_string(cells.size()));
    Vector p(static_cast<Eigen::Index>(n));
    for (std::size_t c = 0; c < n; ++c) {
      const std::string cell = trim(cells[c]);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v))
        throw Error(ErrorKind::ParseError, "row " + std::to_string(line_no) + ", column " +
                                               std::to_string(c + 1) + ": '" + cell + "' is not a number");
      p(static_cast<Eigen::Index>(c)) = v;
    }
    pts.push_back(std::move(p));
    labels.push_back(trim(cells[n]));
  }
  std::vector<std::string> names;
  for (std::size_t c = 0; c < n; ++c) names.push_back(trim(header[c]));
  return {PointCloud(n, std::move(pts)), std::move(labels), std::move(names)};
}

LabeledDataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::string to_csv(const LabeledDataset& data) {
  std::string out;
  for (std::size_t c = 0; c < data.dim(); ++c) {
    out += c < data.feature_names.size() ? data.feature_names[c] : "f" + std::to_string(c + 1);
    out += ',';
  }
  out += "label\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (Eigen::Index c = 0; c < data.points[i].size(); ++c) {
      out += format_double(data.points[i](c));
      out += ',';
    }
    out += data.labels[i];
    out += '\n';
  }
  return out;
}

void save_csv(const LabeledDataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
  out << to_csv(data);
}

// ---------------------------------------------------------------------------

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    const LabeledDataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error(ErrorKind::InvalidArgument, "train fraction must lie in (0, 1)");
  std::map<std::string, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < data.size(); ++i) by_label[data.labels[i]].push_back(i);

  const auto total = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(data.size())));
  struct Quota {
    std::size_t take;
    double remainder;
  };
  std::vector<Quota> quotas;
  std::size_t assigned = 0;
  for (const auto& [label, rows] : by_label) {
    const double exact = train_fraction * static_cast<double>(rows.size());
    const auto take = static_cast<std::size_t>(std::floor(exact));
    quotas.push_back({take, exact - static_cast<double>(take)});
    assigned += take;
  }
  std::vector<std::size_t> rank(quotas.size());
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  std::stable_sort(rank.begin(), rank.end(),
                   [&](std::size_t a, std::size_t b) { return quotas[a].remainder > quotas[b].remainder; });
  for (std::size_t r = 0; assigned < total && r < rank.size(); ++r, ++assigned) ++quotas[rank[r]].take;

  std::size_t q = 0;
  for (const auto& [label, rows] : by_label) {
    auto& take = quotas[q++].take;
    if (rows.size() >= 2) take = std::clamp<std::size_t>(take, 1, rows.size() - 1);
  }

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> train_rows, test_rows;
  q = 0;
  for (auto& [label, rows] : by_label) {
    std::shuffle(rows.begin(), rows.end(), rng);
    const std::size_t take = quotas[q++].take;
    train_rows.insert(train_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
    test_rows.insert(test_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(take), rows.end());
  }
  std::shuffle(train_rows.begin(), train_rows.end(), rng);
  std::shuffle(test_rows.begin(), test_rows.end(), rng);
  return {std::move(train_rows), std::move(test_rows)};
}

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& data, double train_fraction,
                                                std::uint64_t seed) {
  auto [train_rows, test_rows] = split_indices(data, train_fraction, seed);
  return {data.subset(train_rows), data.subset(test_rows)};
}

}  // namespace smnn

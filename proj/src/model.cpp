#include "smnn/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <set>

#include "smnn/error.hpp"

namespace smnn {

namespace {

bool parse_number(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

LabelEncoding::LabelEncoding(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two classes");
  std::set<std::string> seen(names_.begin(), names_.end());
  if (seen.size() != names_.size()) throw Error(ErrorKind::InvalidArgument, "class names must be distinct");
}

LabelEncoding LabelEncoding::from_labels(std::span<const std::string> labels) {
  const std::set<std::string> distinct(labels.begin(), labels.end());
  std::vector<std::string> names(distinct.begin(), distinct.end());
  bool numeric = true;
  for (const auto& n : names) {
    double v = 0.0;
    if (!parse_number(n, v)) {
      numeric = false;
      break;
    }
  }
  if (numeric) {
    std::stable_sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
      double x = 0.0, y = 0.0;
      parse_number(a, x);
      parse_number(b, y);
      return x < y;
    });
  }
  return LabelEncoding(std::move(names));
}

std::size_t LabelEncoding::index(const std::string& label) const {
  auto it = std::find(names_.begin(), names_.end(), label);
  if (it == names_.end()) throw Error(ErrorKind::InvalidArgument, "unknown label '" + label + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

bool LabelEncoding::contains(const std::string& label) const {
  return std::find(names_.begin(), names_.end(), label) != names_.end();
}

Vector LabelEncoding::one_hot(std::size_t j) const {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(names_.size()));
  v(static_cast<Eigen::Index>(j)) = 1.0;
  return v;
}

std::string_view to_string(InitMode mode) noexcept {
  return mode == InitMode::OneHot ? "one_hot" : "uniform01";
}

InitMode parse_init_mode(std::string_view text) {
  if (text == "uniform01") return InitMode::Uniform01;
  if (text == "one_hot") return InitMode::OneHot;
  throw Error(ErrorKind::InvalidArgument, "unknown init mode '" + std::string(text) + "'");
}

Matrix init_weights(InitMode mode, std::uint64_t seed, std::size_t k, std::size_t m,
                    std::span<const std::size_t> support_labels) {
  const auto rows = static_cast<Eigen::Index>(k);
  const auto cols = static_cast<Eigen::Index>(m);
  Matrix w = Matrix::Zero(rows, cols);
  if (mode == InitMode::OneHot) {
    if (support_labels.size() != m)
      throw Error(ErrorKind::DimensionMismatch, "one_hot init needs one label per support point");
    for (Eigen::Index t = 0; t < cols; ++t) w(static_cast<Eigen::Index>(support_labels[t]), t) = 1.0;
    return w;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Eigen::Index t = 0; t < cols; ++t)
    for (Eigen::Index j = 0; j < rows; ++j) w(j, t) = unit(rng);
  return w;
}

Vector softmax(const Vector& z) {
  const Vector e = (z.array() - z.maxCoeff()).exp();
  return e / e.sum();
}

std::size_t argmax(const Vector& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v(i) > v(best)) best = i;
  return static_cast<std::size_t>(best);
}

double cross_entropy(const Vector& probabilities, std::size_t true_index) {
  return -std::log(std::max(probabilities(static_cast<Eigen::Index>(true_index)), 1e-12));
}

SmnnModel::SmnnModel(EmbeddingSpace space, LabelEncoding encoding, Matrix weights,
                     std::vector<std::size_t> support_labels, Provenance provenance)
    : space_(std::move(space)),
      encoding_(std::move(encoding)),
      weights_(std::move(weights)),
      support_labels_(std::move(support_labels)),
      provenance_(std::move(provenance)) {
  if (static_cast<std::size_t>(weights_.rows()) != encoding_.size() ||
      static_cast<std::size_t>(weights_.cols()) != space_.support_size())
    throw Error(ErrorKind::DimensionMismatch, "weight matrix must be k x m");
  if (support_labels_.size() != space_.support_size())
    throw Error(ErrorKind::DimensionMismatch, "need one label per support point");
  if (!weights_.allFinite()) throw Error(ErrorKind::InvalidArgument, "weights must be finite");
}

Vector SmnnModel::logits(const SparseXi& xi) const {
  Vector z = Vector::Zero(weights_.rows());
  for (const auto& e : xi.entries) z += e.value * weights_.col(static_cast<Eigen::Index>(e.index));
  return z;
}

Vector SmnnModel::forward(const Vector& x_raw) const { return forward(xi(space_, x_raw)); }

std::size_t SmnnModel::predict_index(const Vector& x_raw) const { return argmax(forward(x_raw)); }

const std::string& SmnnModel::predict(const Vector& x_raw) const {
  return encoding_.name(predict_index(x_raw));
}

double SmnnModel::loss(const Vector& x_raw, const std::string& true_label) const {
  return cross_entropy(forward(x_raw), encoding_.index(true_label));
}

}  // namespace smnn

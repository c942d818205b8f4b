#include "smnn/training.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

#include "smnn/error.hpp"

namespace smnn {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw Error(ErrorKind::InvalidArgument, "learning rate must be positive");
  if (epochs < 1) throw Error(ErrorKind::InvalidArgument, "epochs must be at least 1");
}

CachedEmbedding precompute_embeddings(const EmbeddingSpace& space, const PointCloud& train_points,
                                      std::span<const std::size_t> train_labels) {
  if (train_labels.size() != train_points.size())
    throw Error(ErrorKind::DimensionMismatch, "need one label per training point");
  CachedEmbedding cache;
  cache.reserve(train_points.size());
  for (std::size_t i = 0; i < train_points.size(); ++i)
    cache.push_back({xi(space, train_points[i]), train_labels[i]});
  return cache;
}

namespace {

Vector probabilities(const Matrix& weights, const SparseXi& xi) {
  Vector z = Vector::Zero(weights.rows());
  for (const auto& e : xi.entries) z += e.value * weights.col(static_cast<Eigen::Index>(e.index));
  return softmax(z);
}

}  // namespace

SparseGradient gradient(const Matrix& weights, const SparseXi& xi, std::size_t y_index) {
  Vector residual = probabilities(weights, xi);
  residual(static_cast<Eigen::Index>(y_index)) -= 1.0;
  SparseGradient g;
  g.values.resize(weights.rows(), static_cast<Eigen::Index>(xi.entries.size()));
  for (std::size_t c = 0; c < xi.entries.size(); ++c) {
    g.columns.push_back(xi.entries[c].index);
    g.values.col(static_cast<Eigen::Index>(c)) = residual * xi.entries[c].value;
  }
  return g;
}

void sgd_step(Matrix& weights, const SparseXi& xi, std::size_t y_index, double learning_rate) {
  const SparseGradient g = gradient(weights, xi, y_index);
  for (std::size_t c = 0; c < g.columns.size(); ++c)
    weights.col(static_cast<Eigen::Index>(g.columns[c])) -=
        learning_rate * g.values.col(static_cast<Eigen::Index>(c));
}

TrainReport run_sgd(Matrix& weights, const CachedEmbedding& cache, const TrainConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  TrainReport report;
  report.epochs.reserve(static_cast<std::size_t>(config.epochs));
  std::vector<std::size_t> order(cache.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle) std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (auto row : order) {
      const auto& [xi_row, label] = cache[row];
      Vector s = probabilities(weights, xi_row);
      loss_sum += cross_entropy(s, label);
      if (argmax(s) == label) ++correct;
      s(static_cast<Eigen::Index>(label)) -= 1.0;
      for (const auto& e : xi_row.entries)
        weights.col(static_cast<Eigen::Index>(e.index)) -= config.learning_rate * e.value * s;
    }
    const double n = cache.empty() ? 1.0 : static_cast<double>(cache.size());
    report.epochs.push_back({loss_sum / n, static_cast<double>(correct) / n});
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

TrainResult train(const LabeledDataset& data, std::span<const std::size_t> support_indices,
                  const TrainConfig& config) {
  config.validate();
  data.validate();
  const LabelEncoding encoding = LabelEncoding::from_labels(data.labels);
  std::vector<std::size_t> labels;
  labels.reserve(data.size());
  for (const auto& l : data.labels) labels.push_back(encoding.index(l));

  EmbeddingSpace space = config.radius
                             ? fit_space_with_radius(data.points, support_indices, *config.radius)
                             : fit_space(data.points, support_indices, config.radius_margin);
  std::vector<std::size_t> support_labels;
  for (auto row : space.support_rows()) support_labels.push_back(labels[row]);

  const CachedEmbedding cache = precompute_embeddings(space, data.points, labels);
  Matrix weights = init_weights(config.init_mode, config.seed, encoding.size(),
                                space.support_size(), support_labels);
  TrainReport report = run_sgd(weights, cache, config);

  Provenance prov;
  prov.seed = config.seed;
  prov.epochs = config.epochs;
  prov.learning_rate = config.learning_rate;
  prov.init_mode = std::string(to_string(config.init_mode));
  prov.radius_margin = config.radius_margin;
  return {SmnnModel(std::move(space), encoding, std::move(weights), std::move(support_labels), prov),
          std::move(report)};
}

}  // namespace smnn

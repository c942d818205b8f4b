#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "smnn/dataset.hpp"
#include "smnn/model.hpp"

namespace smnn {

struct TrainConfig {
  double learning_rate = 0.1;
  int epochs = 500;
  std::uint64_t seed = 0;
  InitMode init_mode = InitMode::Uniform01;
  bool shuffle = true;
  double radius_margin = 1.0;
  std::optional<double> radius;  // overrides the margin rule when set

  void validate() const;
};

struct EpochStats {
  double mean_loss = 0.0;  // averaged over samples, each taken before its own update
  double accuracy = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  double wall_seconds = 0.0;
};

struct CachedRow {
  SparseXi xi;
  std::size_t label = 0;
};

/// Embeddings of every training row. The triangulation is never touched
/// again once these are computed.
using CachedEmbedding = std::vector<CachedRow>;

CachedEmbedding precompute_embeddings(const EmbeddingSpace& space, const PointCloud& train_points,
                                      std::span<const std::size_t> train_labels);

/// Nonzero block of dL/dW for one sample: column c of `values` is the
/// gradient of column `columns[c]` of W, (s - y) * xi_t.
struct SparseGradient {
  std::vector<std::size_t> columns;
  Matrix values;
};

SparseGradient gradient(const Matrix& weights, const SparseXi& xi, std::size_t y_index);

/// W(:, t) -= lr * (s - y) * xi_t for the touched columns only.
void sgd_step(Matrix& weights, const SparseXi& xi, std::size_t y_index, double learning_rate);

/// Runs per-sample SGD over the cached rows for config.epochs epochs.
TrainReport run_sgd(Matrix& weights, const CachedEmbedding& cache, const TrainConfig& config);

struct TrainResult {
  SmnnModel model;
  TrainReport report;
};

/// Fits the space on all training points, embeds them, initialises the
/// weights and runs SGD. Deterministic for a fixed config.
TrainResult train(const LabeledDataset& data, std::span<const std::size_t> support_indices,
                  const TrainConfig& config);

}  // namespace smnn

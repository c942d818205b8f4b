#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "smnn/dataset.hpp"

namespace smnn {

struct SpiralOptions {
  std::size_t n_samples = 400;
  double noise_sd = 0.02;
  double turns = 0.65;
  std::uint64_t seed = 0;
};

/// Two interleaved Archimedean arms labelled "0" and "1". Arm a places
/// n_samples/2 points at evenly spaced s in [0, 1] with radius s and angle
/// turns * 2 pi * s + a pi, then adds isotropic Gaussian noise.
LabeledDataset gen_spiral(const SpiralOptions& options);

struct ClusterOptions {
  std::size_t n_samples = 5000;
  std::size_t n_features = 2;
  std::size_t clusters_per_class = 2;
  double class_sep = 1.0;
  double flip_fraction = 0.02;
  std::uint64_t seed = 0;
};

/// Binary data: 2 * clusters_per_class unit Gaussian blobs centred on
/// distinct random vertices of the hypercube {-class_sep, +class_sep}^n;
/// cluster c belongs to class c % 2. A flip_fraction of the rows then have
/// their label swapped to the other class. Rows are shuffled.
LabeledDataset gen_clusters(const ClusterOptions& options);

/// CSV with a header row; the last column is the label.
LabeledDataset load_csv(const std::string& path);
LabeledDataset parse_csv(const std::string& text);
void save_csv(const LabeledDataset& data, const std::string& path);
std::string to_csv(const LabeledDataset& data);

/// Stratified seeded split. The train side gets floor(fraction * N) rows,
/// apportioned across classes by largest remainder; every class with at
/// least two rows keeps one row on each side.
std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& data, double train_fraction,
                                                std::uint64_t seed);

/// Row indices of the train and test sides produced by split().
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    const LabeledDataset& data, double train_fraction, std::uint64_t seed);

}  // namespace smnn

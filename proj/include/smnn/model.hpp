#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smnn/embedding.hpp"

namespace smnn {

/// Ordered, distinct class names. Class indices are 0-based.
class LabelEncoding {
 public:
  LabelEncoding() = default;
  explicit LabelEncoding(std::vector<std::string> names);

  /// Distinct labels in sorted order; numeric when every label parses as a
  /// number, lexicographic otherwise.
  static LabelEncoding from_labels(std::span<const std::string> labels);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t j) const { return names_.at(j); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  /// Throws InvalidArgument for an unknown label.
  std::size_t index(const std::string& label) const;
  bool contains(const std::string& label) const;
  Vector one_hot(std::size_t j) const;

 private:
  std::vector<std::string> names_;
};

enum class InitMode { Uniform01, OneHot };

std::string_view to_string(InitMode mode) noexcept;
InitMode parse_init_mode(std::string_view text);

/// k x m weight matrix. Uniform01 draws i.i.d. values in [0, 1) from a
/// generator seeded with `seed`; OneHot sets column t to the one-hot vector of
/// support_labels[t].
Matrix init_weights(InitMode mode, std::uint64_t seed, std::size_t k, std::size_t m,
                    std::span<const std::size_t> support_labels);

/// Softmax with max-subtraction.
Vector softmax(const Vector& z);
/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(const Vector& v);
/// -log(max(p[true_index], 1e-12)).
double cross_entropy(const Vector& probabilities, std::size_t true_index);

/// How a model was produced; persisted alongside it.
struct Provenance {
  std::uint64_t seed = 0;
  int epochs = 0;
  double learning_rate = 0.0;
  std::string init_mode = "uniform01";
  std::string sampler = "all";  // all | file | epsilon | kappa | size
  double sampler_parameter = 0.0;
  double epsilon = 0.0;
  double radius_margin = 1.0;
};

/// phi_U(x) = softmax(W * xi_U(x)) over a fitted embedding space.
class SmnnModel {
 public:
  SmnnModel() = default;
  SmnnModel(EmbeddingSpace space, LabelEncoding encoding, Matrix weights,
            std::vector<std::size_t> support_labels, Provenance provenance = {});

  const EmbeddingSpace& space() const noexcept { return space_; }
  const LabelEncoding& encoding() const noexcept { return encoding_; }
  const Matrix& weights() const noexcept { return weights_; }
  Matrix& mutable_weights() noexcept { return weights_; }
  const std::vector<std::size_t>& support_labels() const noexcept { return support_labels_; }
  const Provenance& provenance() const noexcept { return provenance_; }
  Provenance& mutable_provenance() noexcept { return provenance_; }

  std::size_t num_classes() const noexcept { return encoding_.size(); }
  std::size_t support_size() const noexcept { return space_.support_size(); }

  /// z_j = sum over entries of W(j, t) * xi_t. Sphere mass contributes nothing.
  Vector logits(const SparseXi& xi) const;
  Vector forward(const SparseXi& xi) const { return softmax(logits(xi)); }
  Vector forward(const Vector& x_raw) const;
  std::size_t predict_index(const Vector& x_raw) const;
  const std::string& predict(const Vector& x_raw) const;
  double loss(const Vector& x_raw, const std::string& true_label) const;

 private:
  EmbeddingSpace space_;
  LabelEncoding encoding_;
  Matrix weights_;
  std::vector<std::size_t> support_labels_;
  Provenance provenance_;
};

}  // namespace smnn

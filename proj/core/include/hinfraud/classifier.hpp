#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hinfraud/matrix.hpp"

namespace hinfraud {

enum class ClassifierKind { logistic_regression, random_forest };

std::string_view to_string(ClassifierKind kind);
std::optional<ClassifierKind> classifier_kind_from_string(std::string_view name);

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::random_forest;

  // logistic regression: full-batch gradient descent with L2
  double learning_rate = 0.1;
  int epochs = 200;
  double l2 = 1e-4;

  // random forest: bagged depth-limited trees, Gini splits
  int tree_count = 100;
  int max_depth = 12;
  double feature_subsample = 0.0;  // fraction of features tried per split; 0 means sqrt

  double threshold = 0.5;  // decision cutoff; proba >= threshold predicts fraud
  bool class_weighting = false;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double leaf_value = 0.0;  // fraud fraction at the leaf
};

struct TrainedModel {
  ClassifierKind kind = ClassifierKind::logistic_regression;
  std::size_t feature_count = 0;

  // logistic
  std::vector<double> weights;
  double bias = 0.0;

  // forest
  std::vector<std::vector<TreeNode>> trees;

  std::string to_json_text() const;
  static TrainedModel from_json_text(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static TrainedModel load(const std::filesystem::path& path);
};

// Deterministic given spec.seed. Requires at least one example of each class
// and finite features.
TrainedModel fit(const ClassifierSpec& spec, const Matrix& x, std::span<const std::uint8_t> y,
                 unsigned threads = 0);

// Logistic: sigmoid of the affine score. Forest: fraction of trees voting
// fraud (a tree votes fraud when its leaf fraud fraction is >= 0.5).
std::vector<double> predict_proba(const TrainedModel& model, const Matrix& x);

// label = 1 iff proba >= threshold
std::vector<std::uint8_t> predict_labels(const TrainedModel& model, const Matrix& x,
                                         double threshold);
std::vector<std::uint8_t> labels_from_proba(std::span<const double> proba, double threshold);

// Gradient of the L2-regularized mean log-loss at (weights, bias); exposed
// for the finite-difference check.
std::vector<double> logistic_loss_gradient(const Matrix& x, std::span<const std::uint8_t> y,
                                           std::span<const double> weights, double bias, double l2,
                                           double* bias_gradient);
double logistic_loss(const Matrix& x, std::span<const std::uint8_t> y,
                     std::span<const double> weights, double bias, double l2);

}  // namespace hinfraud

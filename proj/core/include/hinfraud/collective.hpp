#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hinfraud/classifier.hpp"
#include "hinfraud/eval.hpp"
#include "hinfraud/features.hpp"
#include "hinfraud/labels.hpp"
#include "hinfraud/metapath.hpp"

namespace hinfraud {

struct LoopConfig {
  int max_iterations = 10;
  double early_stop_fraction = 0.001;  // stop once the test-label change falls below this
  ClassifierSpec classifier;
  bool self_exclusion = true;
  bool soft_labels = false;  // aggregate predicted probabilities instead of hard labels
  unsigned threads = 0;

  void validate() const;
};

struct IterationRecord {
  int iteration = 0;  // 0 is the baseline (features X only)
  std::vector<std::uint8_t> test_labels;
  // Fraction of test labels that changed vs the previous iteration; absent
  // for the baseline entry.
  std::optional<double> label_change;
  std::optional<Metrics> metrics;  // vs ground truth, when provided
};

struct LoopHistory {
  std::vector<IterationRecord> iterations;
  int converged_at = -1;  // first iteration whose label change fell below epsilon
  bool converged() const { return converged_at >= 0; }

  double seconds_features = 0.0;
  double seconds_fit = 0.0;
  double seconds_predict = 0.0;
};

struct BaselineResult {
  TrainedModel model;
  std::vector<double> test_proba;
  std::vector<std::uint8_t> test_labels;
};

struct CollectiveResult {
  std::vector<std::uint8_t> final_test_labels;
  std::vector<double> final_test_proba;
  LoopHistory history;
  Matrix final_meta;  // meta features computed from the final label state
  bool non_convergence_warning = false;
};

// Hamming distance divided by length.
double label_change_fraction(std::span<const std::uint8_t> previous,
                             std::span<const std::uint8_t> current);

// Fits the classifier on X only and predicts the test partition; these
// predictions seed the collective loop's label state.
BaselineResult run_baseline(const Matrix& x, const LabelState& labels,
                            const ClassifierSpec& spec, unsigned threads = 0);

// The iterative loop: freeze a label snapshot, recompute meta features, refit
// on [X, Z], repredict the test partition, until the test labels settle or
// max_iterations is reached. Labels' test entries and y_proba are updated in
// place. `ground_truth` (full-length, optional) enables per-iteration metrics.
// `snapshot_observer`, when set, receives each iteration's frozen label
// vector before features are computed.
CollectiveResult run_collective(
    const PathSet& paths, const Matrix& x, LabelState& labels, const LoopConfig& config,
    std::span<const std::uint8_t> ground_truth = {},
    const std::function<void(int, std::span<const double>)>& snapshot_observer = nullptr);

}  // namespace hinfraud

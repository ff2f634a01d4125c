#include "hinfraud/collective.hpp"

#include <chrono>

#include "hinfraud/error.hpp"
#include "hinfraud/log.hpp"
#include "hinfraud/rng.hpp"

namespace hinfraud {

void LoopConfig::validate() const {
  if (max_iterations < 1) raise(ErrorKind::config_invalid, "max iterations must be >= 1");
  if (!(early_stop_fraction >= 0.0) || !(early_stop_fraction < 1.0)) {
    raise(ErrorKind::config_invalid, "early stop fraction must lie in [0, 1)");
  }
  classifier.validate();
}

double label_change_fraction(std::span<const std::uint8_t> previous,
                             std::span<const std::uint8_t> current) {
  if (previous.size() != current.size()) {
    raise(ErrorKind::length_mismatch, "label vectors differ in length");
  }
  if (previous.empty()) return 0.0;
  std::size_t changed = 0;
  for (std::size_t i = 0; i < previous.size(); ++i) changed += previous[i] != current[i];
  return static_cast<double>(changed) / static_cast<double>(previous.size());
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> label_snapshot(const LabelState& labels, bool soft) {
  std::vector<double> y(labels.size(), 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    switch (labels.mask[i]) {
      case Partition::train:
        y[i] = static_cast<double>(labels.y[i]);
        break;
      case Partition::test:
        y[i] = soft && !labels.y_proba.empty() ? labels.y_proba[i]
                                               : static_cast<double>(labels.y[i]);
        break;
      case Partition::excluded:
        break;
    }
  }
  return y;
}

std::optional<Metrics> metrics_against_truth(std::span<const std::uint8_t> ground_truth,
                                             const std::vector<std::uint32_t>& test_idx,
                                             std::span<const std::uint8_t> test_labels) {
  if (ground_truth.empty()) return std::nullopt;
  std::vector<std::uint8_t> truth(test_idx.size());
  for (std::size_t k = 0; k < test_idx.size(); ++k) truth[k] = ground_truth[test_idx[k]];
  return compute_metrics(truth, test_labels);
}

}  // namespace

BaselineResult run_baseline(const Matrix& x, const LabelState& labels, const ClassifierSpec& spec,
                            unsigned threads) {
  const auto train_idx = labels.train_indices();
  const auto test_idx = labels.test_indices();
  if (train_idx.empty()) raise(ErrorKind::config_invalid, "empty train partition");

  const Matrix x_train = x.select_rows(train_idx);
  std::vector<std::uint8_t> y_train(train_idx.size());
  for (std::size_t k = 0; k < train_idx.size(); ++k) y_train[k] = labels.y[train_idx[k]];

  BaselineResult result;
  result.model = fit(spec, x_train, y_train, threads);
  if (!test_idx.empty()) {
    const Matrix x_test = x.select_rows(test_idx);
    result.test_proba = predict_proba(result.model, x_test);
    result.test_labels = labels_from_proba(result.test_proba, spec.threshold);
  }
  return result;
}

CollectiveResult run_collective(
    const PathSet& paths, const Matrix& x, LabelState& labels, const LoopConfig& config,
    std::span<const std::uint8_t> ground_truth,
    const std::function<void(int, std::span<const double>)>& snapshot_observer) {
  config.validate();
  const auto train_idx = labels.train_indices();
  const auto test_idx = labels.test_indices();
  if (test_idx.empty()) raise(ErrorKind::empty_test_set, "collective loop needs test transactions");

  std::vector<std::uint8_t> y_train(train_idx.size());
  for (std::size_t k = 0; k < train_idx.size(); ++k) y_train[k] = labels.y[train_idx[k]];
  const std::vector<std::uint8_t> train_truth_before = y_train;

  CollectiveResult result;
  auto& history = result.history;

  // iteration 0: the baseline initializes the test labels
  auto started = Clock::now();
  ClassifierSpec baseline_spec = config.classifier;
  baseline_spec.seed = derive_seed(config.classifier.seed, "collective.iteration", 0);
  const BaselineResult baseline = run_baseline(x, labels, baseline_spec, config.threads);
  history.seconds_fit += seconds_since(started);
  for (std::size_t k = 0; k < test_idx.size(); ++k) {
    labels.y[test_idx[k]] = baseline.test_labels[k];
  }
  labels.y_proba.assign(labels.size(), 0.0);
  for (std::size_t k = 0; k < test_idx.size(); ++k) {
    labels.y_proba[test_idx[k]] = baseline.test_proba[k];
  }

  IterationRecord record0;
  record0.iteration = 0;
  record0.test_labels = baseline.test_labels;
  record0.metrics = metrics_against_truth(ground_truth, test_idx, baseline.test_labels);
  history.iterations.push_back(std::move(record0));

  FeatureOptions feature_options;
  feature_options.self_exclusion = config.self_exclusion;
  feature_options.prior = labels.train_fraud_rate();

  std::vector<std::uint8_t> previous_labels = baseline.test_labels;
  std::vector<double> current_proba = baseline.test_proba;
  Matrix meta;

  for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
    // Jacobi update: every feature this round sees the same frozen snapshot
    const std::vector<double> snapshot = label_snapshot(labels, config.soft_labels);
    if (snapshot_observer) snapshot_observer(iteration, snapshot);

    started = Clock::now();
    meta = compute_all_features(paths, snapshot, feature_options, config.threads);
    history.seconds_features += seconds_since(started);

    const Matrix x_aug = Matrix::hstack(x, meta);

    started = Clock::now();
    ClassifierSpec spec = config.classifier;
    spec.seed = derive_seed(config.classifier.seed, "collective.iteration",
                            static_cast<std::uint64_t>(iteration));
    const TrainedModel model = fit(spec, x_aug.select_rows(train_idx), y_train, config.threads);
    history.seconds_fit += seconds_since(started);

    started = Clock::now();
    current_proba = predict_proba(model, x_aug.select_rows(test_idx));
    history.seconds_predict += seconds_since(started);
    const auto current_labels = labels_from_proba(current_proba, spec.threshold);

    for (std::size_t k = 0; k < test_idx.size(); ++k) {
      labels.y[test_idx[k]] = current_labels[k];
      labels.y_proba[test_idx[k]] = current_proba[k];
    }

    IterationRecord record;
    record.iteration = iteration;
    record.test_labels = current_labels;
    record.label_change = label_change_fraction(previous_labels, current_labels);
    record.metrics = metrics_against_truth(ground_truth, test_idx, current_labels);
    history.iterations.push_back(record);

    // train labels are ground truth; the loop must never touch them
    for (std::size_t k = 0; k < train_idx.size(); ++k) {
      if (labels.y[train_idx[k]] != train_truth_before[k]) {
        raise(ErrorKind::config_invalid, "train label mutated during the collective loop");
      }
    }

    previous_labels = current_labels;
    if (*record.label_change < config.early_stop_fraction) {
      history.converged_at = iteration;
      break;
    }
  }

  if (history.converged_at < 0 && config.early_stop_fraction > 0.0) {
    result.non_convergence_warning = true;
    HINFRAUD_LOG_WARN("collective loop hit max_iterations=%d without label change < %g",
                      config.max_iterations, config.early_stop_fraction);
  }
  result.final_test_labels = previous_labels;
  result.final_test_proba = current_proba;
  // meta features of the settled state, for the significance case study
  const std::vector<double> final_snapshot = label_snapshot(labels, config.soft_labels);
  result.final_meta = compute_all_features(paths, final_snapshot, feature_options, config.threads);
  return result;
}

}  // namespace hinfraud

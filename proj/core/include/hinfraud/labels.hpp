#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "hinfraud/hin.hpp"

namespace hinfraud {

// `excluded` marks transactions outside the active window of a sliding-window
// run; they are invisible to both fitting and feature aggregation.
enum class Partition : std::uint8_t { train = 0, test = 1, excluded = 2 };

// Raw content of a labels file, in transaction index order.
struct LabelsFile {
  std::vector<std::uint8_t> y;
  std::vector<std::int64_t> timestamps;
};

// Reads `transaction_id,label,timestamp` rows (header required). Every
// transaction must be labeled exactly once.
LabelsFile load_labels(const std::filesystem::path& path, const NodeIndex& transactions);

// Working label state for the collective loop. Train entries of y are frozen
// ground truth; test entries hold the loop's current predictions.
struct LabelState {
  std::vector<std::uint8_t> y;
  std::vector<Partition> mask;
  std::vector<std::int64_t> timestamps;
  std::vector<double> y_proba;  // last predicted probabilities, empty until predicted

  std::size_t size() const { return y.size(); }

  std::vector<std::uint32_t> train_indices() const;
  std::vector<std::uint32_t> test_indices() const;

  // Fraud rate over the train partition; the zero-degree feature fallback.
  double train_fraud_rate() const;
};

// Chronological holdout: the latest ceil(test_fraction * n) transactions by
// (timestamp, index) order become the test partition.
LabelState make_label_state(const LabelsFile& labels, double test_fraction);

// Explicit masks; transactions in neither list are excluded.
LabelState make_label_state(const LabelsFile& labels, const std::vector<std::uint32_t>& train_idx,
                            const std::vector<std::uint32_t>& test_idx);

}  // namespace hinfraud

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hinfraud {

struct Metrics {
  double recall = 0.0;
  double precision = 0.0;
  double f_score = 0.0;
  double accuracy = 0.0;
};

// Standard binary metrics. Zero-denominator conventions: precision and
// recall are 0 when undefined, F is 0 when either component is 0.
Metrics compute_metrics(std::span<const std::uint8_t> y_true, std::span<const std::uint8_t> y_pred);

// Relative improvement over a baseline metric, in percent.
double rela_impr(double metric_method, double metric_baseline);

struct SplitWindow {
  std::vector<std::uint32_t> train_idx;
  std::vector<std::uint32_t> test_idx;
};

// Chronological sliding windows: the covered time range is cut into
// window_count + 1 equal spans; window w trains on spans 1..w and tests on
// span w+1. Test spans are pairwise disjoint and ordered in time.
std::vector<SplitWindow> sliding_window_split(std::span<const std::int64_t> timestamps,
                                              int window_count);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of
// freedom and a two-sided p-value. Requires both groups to have >= 2 values
// and at least one group with nonzero variance.
WelchResult welch_t_test(std::span<const double> group_a, std::span<const double> group_b);

// Convenience split: group_labels == 1 goes to group a (fraud), 0 to b.
WelchResult welch_t_test(std::span<const double> values,
                         std::span<const std::uint8_t> group_labels);

}  // namespace hinfraud

#include "hinfraud/eval.hpp"

#include <algorithm>
#include <cmath>

#include "hinfraud/error.hpp"
#include "hinfraud/stats.hpp"

namespace hinfraud {

Metrics compute_metrics(std::span<const std::uint8_t> y_true,
                        std::span<const std::uint8_t> y_pred) {
  if (y_true.size() != y_pred.size()) {
    raise(ErrorKind::length_mismatch, "metric vectors differ in length");
  }
  double tp = 0.0;
  double fp = 0.0;
  double fn = 0.0;
  double tn = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool truth = y_true[i] != 0;
    const bool pred = y_pred[i] != 0;
    if (truth && pred) ++tp;
    else if (!truth && pred) ++fp;
    else if (truth && !pred) ++fn;
    else ++tn;
  }
  Metrics m;
  m.recall = (tp + fn) > 0.0 ? tp / (tp + fn) : 0.0;
  m.precision = (tp + fp) > 0.0 ? tp / (tp + fp) : 0.0;
  m.f_score = (m.precision > 0.0 && m.recall > 0.0)
                  ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                  : 0.0;
  m.accuracy = y_true.empty() ? 0.0 : (tp + tn) / static_cast<double>(y_true.size());
  return m;
}

double rela_impr(double metric_method, double metric_baseline) {
  if (!(metric_baseline > 0.0)) {
    raise(ErrorKind::baseline_zero, "baseline metric must be positive");
  }
  return (metric_method / metric_baseline - 1.0) * 100.0;
}

std::vector<SplitWindow> sliding_window_split(std::span<const std::int64_t> timestamps,
                                              int window_count) {
  if (window_count < 1) raise(ErrorKind::config_invalid, "window count must be >= 1");
  if (timestamps.empty()) raise(ErrorKind::insufficient_span, "no timestamps");
  const auto [min_it, max_it] = std::minmax_element(timestamps.begin(), timestamps.end());
  const std::int64_t t_min = *min_it;
  const std::int64_t t_max = *max_it;
  const auto spans = static_cast<std::int64_t>(window_count) + 1;
  const std::int64_t range = t_max - t_min + 1;
  if (range < spans) {
    raise(ErrorKind::insufficient_span, "timestamps cover " + std::to_string(range) +
                                            " units, need at least " + std::to_string(spans));
  }

  // span index in [0, spans), by equal time division
  const auto span_of = [&](std::int64_t t) {
    const auto s = static_cast<std::int64_t>((static_cast<__int128>(t - t_min) * spans) / range);
    return static_cast<int>(std::min<std::int64_t>(s, spans - 1));
  };

  std::vector<SplitWindow> windows(window_count);
  for (std::uint32_t i = 0; i < timestamps.size(); ++i) {
    const int s = span_of(timestamps[i]);
    for (int w = 0; w < window_count; ++w) {
      // window w (0-based): train spans <= w, test span w+1
      if (s <= w) windows[w].train_idx.push_back(i);
      else if (s == w + 1) windows[w].test_idx.push_back(i);
    }
  }
  return windows;
}

WelchResult welch_t_test(std::span<const double> group_a, std::span<const double> group_b) {
  const auto na = static_cast<double>(group_a.size());
  const auto nb = static_cast<double>(group_b.size());
  if (group_a.size() < 2 || group_b.size() < 2) {
    raise(ErrorKind::degenerate_group, "both groups need at least 2 values");
  }
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (const double v : group_a) mean_a += v;
  for (const double v : group_b) mean_b += v;
  mean_a /= na;
  mean_b /= nb;
  double var_a = 0.0;
  double var_b = 0.0;
  for (const double v : group_a) var_a += (v - mean_a) * (v - mean_a);
  for (const double v : group_b) var_b += (v - mean_b) * (v - mean_b);
  var_a /= na - 1.0;
  var_b /= nb - 1.0;
  if (var_a <= 0.0 && var_b <= 0.0) {
    raise(ErrorKind::degenerate_group, "both groups have zero variance");
  }

  const double sa = var_a / na;
  const double sb = var_b / nb;
  WelchResult r;
  r.t = (mean_a - mean_b) / std::sqrt(sa + sb);
  r.df = (sa + sb) * (sa + sb) /
         (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
  r.p = student_t_two_sided_p(r.t, r.df);
  return r;
}

WelchResult welch_t_test(std::span<const double> values,
                         std::span<const std::uint8_t> group_labels) {
  if (values.size() != group_labels.size()) {
    raise(ErrorKind::length_mismatch, "values vs group labels");
  }
  std::vector<double> a;
  std::vector<double> b;
  for (std::size_t i = 0; i < values.size(); ++i) {
    (group_labels[i] != 0 ? a : b).push_back(values[i]);
  }
  return welch_t_test(a, b);
}

}  // namespace hinfraud

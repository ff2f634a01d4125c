#include "hinfraud/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>

#include "hinfraud/error.hpp"
#include "hinfraud/features.hpp"

namespace hinfraud {

std::string_view to_string(BenchMode mode) {
  return mode == BenchMode::dense ? "dense" : "decomposed";
}

std::uint64_t feature_checksum(std::span<const double> z) {
  // FNV-1a over the raw bytes
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const double v : z) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (bits >> (8 * byte)) & 0xffULL;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

namespace {

constexpr double kZeroWeightTolerance = 1e-12;

struct DenseRun {
  std::vector<double> z;
  std::size_t peak_values = 0;
};

// The precompute-the-full-meta-path route: P = P1 * P2^T as a sparse matrix
// (nearly full for shared-attribute paths), then the row-normalized label
// aggregation over P.
DenseRun dense_feature(const DownsizedPath& left, const DownsizedPath& right,
                       std::span<const double> y, double prior, std::size_t values_cap) {
  const CsrMatrix right_t = right.matrix.transpose();
  const CsrMatrix product = left.matrix.multiply(right_t, values_cap);
  const auto n = product.rows();

  DenseRun run;
  run.z.assign(n, 0.0);
  for (CsrMatrix::Index i = 0; i < n; ++i) {
    const auto cols = product.row_cols(i);
    const auto vals = product.row_vals(i);
    double numerator = 0.0;
    double weight = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      numerator += vals[k] * y[cols[k]];
      weight += vals[k];
    }
    run.z[i] = weight > kZeroWeightTolerance ? std::clamp(numerator / weight, 0.0, 1.0) : prior;
  }
  run.peak_values = product.nnz() + right_t.nnz() + 2 * static_cast<std::size_t>(n);
  return run;
}

}  // namespace

BenchResult benchmark_pair(const PathSet& paths, std::size_t pair_index, BenchMode mode,
                           std::span<const double> y, double prior, const BenchOptions& options) {
  if (pair_index >= paths.pairs.size()) raise(ErrorKind::config_invalid, "pair index out of range");
  const auto& pair = paths.pairs[pair_index];
  const auto& left = paths.paths[pair.left];
  const auto& right = paths.paths[pair.right];

  FeatureOptions feature_options;
  feature_options.self_exclusion = false;
  feature_options.prior = prior;

  BenchResult result;
  result.pair_index = pair_index;
  result.mode = mode;

  std::vector<double> timings;
  std::vector<double> z;
  std::size_t peak = 0;
  const int total_runs = options.warmup + options.repeats;
  for (int run = 0; run < total_runs; ++run) {
    const auto start = std::chrono::steady_clock::now();
    if (mode == BenchMode::dense) {
      auto dense = dense_feature(left, right, y, prior, options.dense_values_cap);
      z = std::move(dense.z);
      peak = dense.peak_values;
    } else {
      FeatureStats stats;
      z = feature_fast(left, right, y, feature_options, &stats);
      peak = stats.peak_intermediate_values;
    }
    const auto elapsed = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    if (run >= options.warmup) timings.push_back(elapsed);
  }
  std::sort(timings.begin(), timings.end());
  result.wall_ms_median = timings[timings.size() / 2];
  result.peak_intermediate_values = peak;
  result.checksum = feature_checksum(z);
  return result;
}

}  // namespace hinfraud

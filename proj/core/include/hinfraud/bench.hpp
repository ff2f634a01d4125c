#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hinfraud/metapath.hpp"

namespace hinfraud {

enum class BenchMode { dense, decomposed };

std::string_view to_string(BenchMode mode);

struct BenchResult {
  std::size_t pair_index = 0;
  BenchMode mode = BenchMode::decomposed;
  double wall_ms_median = 0.0;
  // Stored scalar values of the largest intermediate the mode holds at once:
  // the materialized full meta-path product for dense, the per-end-type work
  // vectors for decomposed.
  std::size_t peak_intermediate_values = 0;
  std::uint64_t checksum = 0;
};

struct BenchOptions {
  int repeats = 5;       // timed runs; median reported
  int warmup = 1;
  // Cap on stored values of the dense mode's materialized product.
  std::size_t dense_values_cap = 150000000;
};

// Times one meta-path feature computation. Dense mode materializes the full
// transaction-to-transaction product and aggregates over it (the
// precompute-everything route); decomposed mode runs the two-sided
// normalized aggregation. Both run without self-exclusion so that simple
// left paths yield bit-identical feature vectors, which the checksum
// verifies.
BenchResult benchmark_pair(const PathSet& paths, std::size_t pair_index, BenchMode mode,
                           std::span<const double> y, double prior,
                           const BenchOptions& options = {});

std::uint64_t feature_checksum(std::span<const double> z);

}  // namespace hinfraud

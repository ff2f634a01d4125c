#include "hinfraud/features.hpp"

#include <algorithm>
#include <cmath>

#include "hinfraud/error.hpp"
#include "hinfraud/parallel.hpp"

namespace hinfraud {

namespace {

constexpr double kZeroWeightTolerance = 1e-12;

void check_pair_shapes(const DownsizedPath& left, const DownsizedPath& right,
                       std::span<const double> y) {
  if (left.trace.end_type() != right.trace.end_type() ||
      left.matrix.cols() != right.matrix.cols()) {
    raise(ErrorKind::end_type_mismatch, "paired paths must share their end type");
  }
  if (left.matrix.rows() != right.matrix.rows() || y.size() != left.matrix.rows()) {
    raise(ErrorKind::length_mismatch, "label vector length does not match transaction count");
  }
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

std::vector<double> feature_fast(const DownsizedPath& left, const DownsizedPath& right,
                                 std::span<const double> y, const FeatureOptions& options,
                                 FeatureStats* stats) {
  check_pair_shapes(left, right, y);
  const auto n = left.matrix.rows();
  const auto n_t = left.matrix.cols();
  const auto& s = right.col_sums;

  // v = P2^T y, folded into u = D2 v; columns with no P2 mass stay dead
  std::vector<double> u(n_t, 0.0);
  for (CsrMatrix::Index j = 0; j < n; ++j) {
    const double yj = y[j];
    if (yj == 0.0) continue;
    const auto cols = right.matrix.row_cols(j);
    const auto vals = right.matrix.row_vals(j);
    for (std::size_t k = 0; k < cols.size(); ++k) u[cols[k]] += vals[k] * yj;
  }
  for (CsrMatrix::Index t = 0; t < n_t; ++t) u[t] = s[t] > 0.0 ? u[t] / s[t] : 0.0;

  std::vector<double> z(n, 0.0);
  for (CsrMatrix::Index i = 0; i < n; ++i) {
    const auto cols = left.matrix.row_cols(i);
    const auto vals = left.matrix.row_vals(i);
    double numerator = 0.0;
    double weight = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (s[cols[k]] > 0.0) {
        numerator += vals[k] * u[cols[k]];
        weight += vals[k];
      }
    }
    if (options.self_exclusion) {
      // diagonal of P1 D2 P2^T by merging the two sorted rows
      const auto rcols = right.matrix.row_cols(i);
      const auto rvals = right.matrix.row_vals(i);
      double diagonal = 0.0;
      std::size_t a = 0;
      std::size_t b = 0;
      while (a < cols.size() && b < rcols.size()) {
        if (cols[a] < rcols[b]) {
          ++a;
        } else if (cols[a] > rcols[b]) {
          ++b;
        } else {
          if (s[cols[a]] > 0.0) diagonal += vals[a] * rvals[b] / s[cols[a]];
          ++a;
          ++b;
        }
      }
      numerator -= diagonal * y[i];
      weight -= diagonal;
    }
    z[i] = weight > kZeroWeightTolerance ? clamp_unit(numerator / weight) : options.prior;
  }

  if (stats != nullptr) {
    stats->peak_intermediate_values = static_cast<std::size_t>(n) + 2 * static_cast<std::size_t>(n_t);
  }
  return z;
}

std::vector<double> feature_dense_oracle(const DownsizedPath& left, const DownsizedPath& right,
                                         std::span<const double> y,
                                         const FeatureOptions& options) {
  check_pair_shapes(left, right, y);
  const auto n = left.matrix.rows();
  if (n > options.oracle_cap) {
    raise(ErrorKind::oracle_cap_exceeded,
          std::to_string(n) + " transactions exceed the dense oracle cap of " +
              std::to_string(options.oracle_cap));
  }
  const auto n_t = left.matrix.cols();

  // P = P1 * P2^T, fully materialized
  std::vector<double> dense(static_cast<std::size_t>(n) * n, 0.0);
  const CsrMatrix right_t = right.matrix.transpose();
  for (CsrMatrix::Index i = 0; i < n; ++i) {
    double* row = dense.data() + static_cast<std::size_t>(i) * n;
    const auto cols = left.matrix.row_cols(i);
    const auto vals = left.matrix.row_vals(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const CsrMatrix::Index t = cols[k];
      const double v = vals[k];
      const auto tcols = right_t.row_cols(t);
      const auto tvals = right_t.row_vals(t);
      for (std::size_t m = 0; m < tcols.size(); ++m) row[tcols[m]] += v * tvals[m];
    }
  }
  (void)n_t;

  std::vector<double> z(n, 0.0);
  for (CsrMatrix::Index i = 0; i < n; ++i) {
    const double* row = dense.data() + static_cast<std::size_t>(i) * n;
    double numerator = 0.0;
    double weight = 0.0;
    for (CsrMatrix::Index j = 0; j < n; ++j) {
      numerator += row[j] * y[j];
      weight += row[j];
    }
    if (options.self_exclusion) {
      numerator -= row[i] * y[i];
      weight -= row[i];
    }
    z[i] = weight > kZeroWeightTolerance ? clamp_unit(numerator / weight) : options.prior;
  }
  return z;
}

std::vector<double> apply_self_exclusion(const DownsizedPath& left, const DownsizedPath& right,
                                         std::span<const double> y, std::span<const double> z_raw,
                                         const FeatureOptions& options) {
  check_pair_shapes(left, right, y);
  if (z_raw.size() != y.size()) raise(ErrorKind::length_mismatch, "z_raw length");
  const auto n = left.matrix.rows();
  const auto& s = right.col_sums;

  std::vector<double> z(n, 0.0);
  for (CsrMatrix::Index i = 0; i < n; ++i) {
    const auto cols = left.matrix.row_cols(i);
    const auto vals = left.matrix.row_vals(i);
    double weight = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (s[cols[k]] > 0.0) weight += vals[k];
    }
    double diagonal = 0.0;
    const auto rcols = right.matrix.row_cols(i);
    const auto rvals = right.matrix.row_vals(i);
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < cols.size() && b < rcols.size()) {
      if (cols[a] < rcols[b]) {
        ++a;
      } else if (cols[a] > rcols[b]) {
        ++b;
      } else {
        if (s[cols[a]] > 0.0) diagonal += vals[a] * rvals[b] / s[cols[a]];
        ++a;
        ++b;
      }
    }
    const double numerator = (weight > kZeroWeightTolerance ? z_raw[i] * weight : 0.0) - diagonal * y[i];
    const double corrected_weight = weight - diagonal;
    z[i] = corrected_weight > kZeroWeightTolerance ? clamp_unit(numerator / corrected_weight)
                                                   : options.prior;
  }
  return z;
}

Matrix compute_all_features(const PathSet& paths, std::span<const double> y,
                            const FeatureOptions& options, unsigned threads) {
  const std::size_t n = paths.paths.empty() ? y.size() : paths.paths.front().matrix.rows();
  Matrix meta(n, paths.pairs.size());
  parallel_for(paths.pairs.size(), threads, [&](std::size_t c) {
    const auto& pair = paths.pairs[c];
    const auto column =
        feature_fast(paths.paths[pair.left], paths.paths[pair.right], y, options, nullptr);
    meta.set_column(c, column);
  });
  return meta;
}

std::vector<std::size_t> duplicate_columns(const Matrix& meta) {
  std::vector<std::size_t> first_equal(meta.cols());
  for (std::size_t c = 0; c < meta.cols(); ++c) {
    first_equal[c] = c;
    for (std::size_t prev = 0; prev < c; ++prev) {
      bool equal = true;
      for (std::size_t r = 0; r < meta.rows(); ++r) {
        if (meta(r, prev) != meta(r, c)) {
          equal = false;
          break;
        }
      }
      if (equal) {
        first_equal[c] = prev;
        break;
      }
    }
  }
  return first_equal;
}

}  // namespace hinfraud

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hinfraud/matrix.hpp"
#include "hinfraud/metapath.hpp"

namespace hinfraud {

struct FeatureOptions {
  // Remove each transaction's own label from its aggregate. On by default:
  // a training transaction's label must not leak into its own feature.
  bool self_exclusion = true;
  // Value for transactions whose aggregation weight is zero (no linked
  // transactions carry any label mass). Callers set this to the training
  // fraud rate.
  double prior = 0.0;
  // Largest transaction count the dense n x n reference will materialize.
  std::size_t oracle_cap = 2000;
};

struct FeatureStats {
  // Working-set size of the computation, counted in stored scalar values.
  std::size_t peak_intermediate_values = 0;
};

// z = D1 * P1 * (D2 * P2^T * y) without ever forming the n x n meta-path
// product. D2 normalizes per end-type node (column sums of P2), D1 per
// transaction (live row weight of P1). End-type nodes that no transaction
// reaches through P2 carry no label mass and are excluded from both the
// numerator and the weight; rows with zero live weight fall back to the
// prior. Cost is O(nnz(P1) + nnz(P2) + n + n_t).
std::vector<double> feature_fast(const DownsizedPath& left, const DownsizedPath& right,
                                 std::span<const double> y, const FeatureOptions& options,
                                 FeatureStats* stats = nullptr);

// The plain weighted label fraction z = D * P * y over the fully
// materialized dense product P = P1 * P2^T. Reference and benchmark route
// only; refuses instances above options.oracle_cap transactions.
std::vector<double> feature_dense_oracle(const DownsizedPath& left, const DownsizedPath& right,
                                         std::span<const double> y, const FeatureOptions& options);

// Standalone self-exclusion correction: removes each transaction's diagonal
// contribution P[i,i] = sum_t P1[i,t] * d2[t] * P2[i,t] from the raw
// normalized feature and renormalizes; zero-weight rows fall back to the
// prior.
std::vector<double> apply_self_exclusion(const DownsizedPath& left, const DownsizedPath& right,
                                         std::span<const double> y, std::span<const double> z_raw,
                                         const FeatureOptions& options);

// One feature column per pair, in pair order, computed by feature_fast.
Matrix compute_all_features(const PathSet& paths, std::span<const double> y,
                            const FeatureOptions& options, unsigned threads = 0);

// Base features joined with the meta-path feature columns.
struct FeatureTable {
  Matrix base;
  Matrix meta;
  std::vector<MetaPathPair> provenance;

  Matrix combined() const { return Matrix::hstack(base, meta); }
};

// Indices of meta columns that are byte-identical to an earlier column;
// entry k is the first column equal to column k, or k itself when unique.
std::vector<std::size_t> duplicate_columns(const Matrix& meta);

}  // namespace hinfraud

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hinfraud/csr.hpp"
#include "hinfraud/hin.hpp"
#include "hinfraud/schema.hpp"

namespace hinfraud {

// A walk through the schema starting at the transaction type, with strictly
// decreasing node-type counts at every step.
struct PathTrace {
  std::vector<std::uint32_t> node_types;  // node_types[0] is the transaction type
  std::vector<LinkRef> links;             // links.size() == node_types.size() - 1

  std::uint32_t end_type() const { return node_types.back(); }
  bool is_trivial() const { return links.empty(); }
};

// A trace materialized as the chain product of its link adjacencies: a sparse
// n x n_end matrix whose entries are path counts from each transaction to
// each end-type node.
struct DownsizedPath {
  PathTrace trace;
  CsrMatrix matrix;
  bool is_simple = false;          // every link many_to_one or one_to_one
  std::vector<double> row_sums;    // per transaction, cached
  std::vector<double> col_sums;    // per end-type node, cached
};

// An ordered pair of downsized paths sharing an end type; the full
// transaction-to-transaction meta-path is left x right^T. Ordered: (i, j) and
// (j, i) normalize differently and are distinct features.
struct MetaPathPair {
  std::size_t left = 0;
  std::size_t right = 0;
  std::uint32_t end_type = 0;
  std::string semantics;
};

// Breadth-first search over the schema (declared links and their inverses)
// for all traces with strictly decreasing node counts. The trivial trace
// (just the transaction type) is always index 0.
std::vector<PathTrace> enumerate_downsized(const HinSchema& schema,
                                           const std::vector<std::uint32_t>& node_counts);

bool trace_is_simple(const HinSchema& schema, const PathTrace& trace);

// Left-to-right sparse chain product of the trace's links.
DownsizedPath materialize(const Hin& hin, const PathTrace& trace);

// All ordered pairs with matching end types, except the identity/identity
// pair (0, 0) whose feature would be the transaction's own label.
std::vector<MetaPathPair> pair_traces(const std::vector<PathTrace>& traces, const HinSchema& schema);

// Arrow-notation rendering: forward links of the left trace, then the right
// trace's links inverted and reversed, back to the transaction type.
std::string render_semantics(const PathTrace& left, const PathTrace& right, const HinSchema& schema);

// Materialized traces plus their pairing; the unit the feature stage and the
// collective loop consume.
struct PathSet {
  std::vector<DownsizedPath> paths;
  std::vector<MetaPathPair> pairs;

  // Copy with the rows of transactions outside `keep` emptied, as if the
  // graph contained only the kept transactions. Used by sliding windows.
  PathSet masked_rows(const std::vector<std::uint8_t>& keep) const;
};

PathSet build_paths(const Hin& hin, unsigned threads = 0);

std::vector<MetaPathPair> pair_paths(const std::vector<DownsizedPath>& paths,
                                     const HinSchema& schema);

}  // namespace hinfraud

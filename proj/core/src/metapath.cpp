#include "hinfraud/metapath.hpp"

#include <algorithm>

#include "hinfraud/error.hpp"
#include "hinfraud/parallel.hpp"

namespace hinfraud {

std::vector<PathTrace> enumerate_downsized(const HinSchema& schema,
                                           const std::vector<std::uint32_t>& node_counts) {
  if (node_counts.size() != schema.node_type_count()) {
    raise(ErrorKind::schema_mismatch, "node counts do not match schema");
  }
  // candidate steps in a fixed order: each declared link, then its inverse
  std::vector<LinkRef> steps;
  steps.reserve(schema.link_type_count() * 2);
  for (std::uint32_t l = 0; l < schema.link_type_count(); ++l) {
    steps.push_back(LinkRef{l, false});
    steps.push_back(LinkRef{l, true});
  }

  std::vector<PathTrace> traces;
  traces.push_back(PathTrace{{schema.target_type()}, {}});
  // queue == output: strict count decrease bounds the depth, so the BFS
  // frontier can simply walk the growing list
  for (std::size_t p = 0; p < traces.size(); ++p) {
    for (const LinkRef step : steps) {
      const auto src = schema.link_source(step);
      const auto dst = schema.link_target(step);
      if (src != traces[p].end_type()) continue;
      if (node_counts[src] <= node_counts[dst]) continue;
      PathTrace next = traces[p];
      next.node_types.push_back(dst);
      next.links.push_back(step);
      traces.push_back(std::move(next));
    }
  }
  return traces;
}

bool trace_is_simple(const HinSchema& schema, const PathTrace& trace) {
  for (const LinkRef link : trace.links) {
    const auto c = schema.link_cardinality(link);
    if (c != Cardinality::many_to_one && c != Cardinality::one_to_one) return false;
  }
  return true;
}

DownsizedPath materialize(const Hin& hin, const PathTrace& trace) {
  DownsizedPath out;
  out.trace = trace;
  out.is_simple = trace_is_simple(hin.schema(), trace);
  if (trace.is_trivial()) {
    out.matrix = CsrMatrix::identity(hin.transaction_count());
  } else {
    CsrMatrix product = hin.adjacency(trace.links.front());
    for (std::size_t k = 1; k < trace.links.size(); ++k) {
      product = product.multiply(hin.adjacency(trace.links[k]));
    }
    out.matrix = std::move(product);
  }
  out.row_sums = out.matrix.row_sums();
  out.col_sums = out.matrix.col_sums();
  return out;
}

std::vector<MetaPathPair> pair_traces(const std::vector<PathTrace>& traces,
                                      const HinSchema& schema) {
  std::vector<MetaPathPair> pairs;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    for (std::size_t j = 0; j < traces.size(); ++j) {
      if (i == 0 && j == 0) continue;
      if (traces[i].end_type() != traces[j].end_type()) continue;
      MetaPathPair pair;
      pair.left = i;
      pair.right = j;
      pair.end_type = traces[i].end_type();
      pair.semantics = render_semantics(traces[i], traces[j], schema);
      pairs.push_back(std::move(pair));
    }
  }
  return pairs;
}

std::vector<MetaPathPair> pair_paths(const std::vector<DownsizedPath>& paths,
                                     const HinSchema& schema) {
  std::vector<PathTrace> traces;
  traces.reserve(paths.size());
  for (const auto& p : paths) traces.push_back(p.trace);
  return pair_traces(traces, schema);
}

std::string render_semantics(const PathTrace& left, const PathTrace& right,
                             const HinSchema& schema) {
  if (left.end_type() != right.end_type()) {
    raise(ErrorKind::end_type_mismatch, "cannot render a pair with different end types");
  }
  std::string out = schema.node_type(left.node_types[0]).name;
  for (std::size_t k = 0; k < left.links.size(); ++k) {
    out += "→";
    out += schema.link_name(left.links[k]);
    out += "→";
    out += schema.node_type(left.node_types[k + 1]).name;
  }
  for (std::size_t k = right.links.size(); k-- > 0;) {
    out += "→";
    out += schema.link_name(HinSchema::inverse(right.links[k]));
    out += "→";
    out += schema.node_type(right.node_types[k]).name;
  }
  return out;
}

PathSet build_paths(const Hin& hin, unsigned threads) {
  const auto traces = enumerate_downsized(hin.schema(), hin.node_counts());
  PathSet set;
  set.paths.resize(traces.size());
  // force the lazily built transposes up front so workers only read
  for (const auto& trace : traces) {
    for (const LinkRef link : trace.links) (void)hin.adjacency(link);
  }
  parallel_for(traces.size(), threads,
               [&](std::size_t i) { set.paths[i] = materialize(hin, traces[i]); });
  set.pairs = pair_traces(traces, hin.schema());
  return set;
}

PathSet PathSet::masked_rows(const std::vector<std::uint8_t>& keep) const {
  PathSet out;
  out.pairs = pairs;
  out.paths.resize(paths.size());
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const auto& src = paths[p];
    DownsizedPath dst;
    dst.trace = src.trace;
    dst.is_simple = src.is_simple;
    dst.matrix = src.matrix.filter_rows(keep);
    dst.row_sums = dst.matrix.row_sums();
    dst.col_sums = dst.matrix.col_sums();
    out.paths[p] = std::move(dst);
  }
  return out;
}

}  // namespace hinfraud

#pragma once

// Shared fixtures and independent reference implementations. Everything here
// deliberately avoids the library's sparse kernels: references use dense
// arithmetic or plain graph walks so they can catch bugs in the real path.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hinfraud/features.hpp"
#include "hinfraud/hin.hpp"
#include "hinfraud/metapath.hpp"
#include "hinfraud/rng.hpp"
#include "hinfraud/schema.hpp"

namespace hinfraud::testing {

using Dense = std::vector<std::vector<double>>;

inline Dense dense_of(const CsrMatrix& m) {
  Dense out(m.rows(), std::vector<double>(m.cols(), 0.0));
  for (CsrMatrix::Index r = 0; r < m.rows(); ++r) {
    const auto cols = m.row_cols(r);
    const auto vals = m.row_vals(r);
    for (std::size_t k = 0; k < cols.size(); ++k) out[r][cols[k]] = vals[k];
  }
  return out;
}

inline Dense dense_mm(const Dense& a, const Dense& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.empty() ? 0 : b[0].size();
  const std::size_t inner = b.size();
  Dense out(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

// Toy schema: transaction(100) -> unit(10) -> class(3), transaction -> site(5).
inline HinSchema toy_schema() {
  std::vector<NodeTypeDecl> nodes{
      {"transaction", true}, {"unit", false}, {"class", false}, {"site", false}};
  std::vector<LinkTypeDecl> links{
      {"toUnit", "transaction", "unit", Cardinality::many_to_one},
      {"toClass", "unit", "class", Cardinality::many_to_one},
      {"toSite", "transaction", "site", Cardinality::many_to_one},
  };
  return HinSchema(std::move(nodes), std::move(links));
}

inline std::vector<std::uint32_t> toy_counts() { return {100, 10, 3, 5}; }

// Exhaustive reference for the downsized-trace search: depth-first expansion
// of every strictly count-decreasing link sequence, collected as link-name
// sequences.
inline std::set<std::vector<std::string>> brute_force_traces(
    const HinSchema& schema, const std::vector<std::uint32_t>& counts) {
  std::set<std::vector<std::string>> found;
  struct Frame {
    std::uint32_t at;
    std::vector<std::string> links;
  };
  std::vector<Frame> stack{{schema.target_type(), {}}};
  while (!stack.empty()) {
    Frame frame = stack.back();
    stack.pop_back();
    found.insert(frame.links);
    for (std::uint32_t l = 0; l < schema.link_type_count(); ++l) {
      for (const bool inverted : {false, true}) {
        const LinkRef ref{l, inverted};
        if (schema.link_source(ref) != frame.at) continue;
        if (counts[schema.link_source(ref)] <= counts[schema.link_target(ref)]) continue;
        Frame next = frame;
        next.at = schema.link_target(ref);
        next.links.push_back(schema.link_name(ref));
        stack.push_back(std::move(next));
      }
    }
  }
  return found;
}

inline std::vector<std::string> trace_link_names(const HinSchema& schema, const PathTrace& trace) {
  std::vector<std::string> names;
  for (const auto link : trace.links) names.push_back(schema.link_name(link));
  return names;
}

// Dense evaluation of the two-sided normalized aggregation
// D1 * P1 * (D2 * P2^T * y), with the library's documented zero-mass
// conventions: end nodes without P2 mass drop out of numerator and weight,
// zero-weight rows take the prior.
inline std::vector<double> dense_two_sided_reference(const DownsizedPath& left,
                                                     const DownsizedPath& right,
                                                     const std::vector<double>& y,
                                                     const FeatureOptions& options) {
  const Dense p1 = dense_of(left.matrix);
  const Dense p2 = dense_of(right.matrix);
  const std::size_t n = p1.size();
  const std::size_t nt = p1.empty() ? 0 : p1[0].size();

  std::vector<double> s(nt, 0.0);
  std::vector<double> v(nt, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t t = 0; t < nt; ++t) {
      s[t] += p2[j][t];
      v[t] += p2[j][t] * y[j];
    }
  }
  std::vector<double> z(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double numerator = 0.0;
    double weight = 0.0;
    double diagonal = 0.0;
    for (std::size_t t = 0; t < nt; ++t) {
      if (s[t] <= 0.0) continue;
      numerator += p1[i][t] * v[t] / s[t];
      weight += p1[i][t];
      diagonal += p1[i][t] * p2[i][t] / s[t];
    }
    if (options.self_exclusion) {
      numerator -= diagonal * y[i];
      weight -= diagonal;
    }
    z[i] = weight > 1e-12 ? std::min(1.0, std::max(0.0, numerator / weight)) : options.prior;
  }
  return z;
}

// Random heterogeneous graphs for the property batteries. Type 0 is the
// target and always has the largest count.
struct RandomHinSpec {
  std::uint32_t max_transactions = 500;
  std::uint32_t max_types = 6;
  std::uint32_t max_links = 6;
};

inline Hin make_random_hin(Rng& rng, const RandomHinSpec& spec = {}) {
  const auto m = 2 + static_cast<std::uint32_t>(rng.next_below(spec.max_types - 1));
  std::vector<std::uint32_t> counts(m);
  counts[0] = 30 + static_cast<std::uint32_t>(rng.next_below(spec.max_transactions - 29));
  for (std::uint32_t t = 1; t < m; ++t) {
    counts[t] = 2 + static_cast<std::uint32_t>(rng.next_below(counts[0]));
    counts[t] = std::min(counts[t], counts[0] - 1);
  }

  std::vector<NodeTypeDecl> nodes;
  for (std::uint32_t t = 0; t < m; ++t) {
    nodes.push_back({"type" + std::to_string(t), t == 0});
  }
  const auto r = 1 + rng.next_below(spec.max_links);
  std::vector<LinkTypeDecl> links;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> edges;
  for (std::uint64_t l = 0; l < r; ++l) {
    const auto src = static_cast<std::uint32_t>(rng.next_below(m));
    auto dst = static_cast<std::uint32_t>(rng.next_below(m));
    if (dst == src) dst = (dst + 1) % m;
    const auto roll = rng.next_below(10);
    const Cardinality card = roll < 5   ? Cardinality::many_to_one
                             : roll < 7 ? Cardinality::one_to_one
                                        : Cardinality::many_to_many;
    links.push_back({"link" + std::to_string(l), "type" + std::to_string(src),
                     "type" + std::to_string(dst), card});

    std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
    const auto ns = counts[src];
    const auto nd = counts[dst];
    if (card == Cardinality::many_to_one) {
      for (std::uint32_t i = 0; i < ns; ++i) {
        if (rng.next_double() < 0.9) e.emplace_back(i, static_cast<std::uint32_t>(rng.next_below(nd)));
      }
    } else if (card == Cardinality::one_to_one) {
      std::vector<std::uint32_t> targets(nd);
      for (std::uint32_t i = 0; i < nd; ++i) targets[i] = i;
      for (std::uint32_t i = 0; i + 1 < nd; ++i) {
        const auto pick = i + rng.next_below(nd - i);
        std::swap(targets[i], targets[pick]);
      }
      const auto pairs = std::min(ns, nd);
      for (std::uint32_t i = 0; i < pairs; ++i) {
        if (rng.next_double() < 0.8) e.emplace_back(i, targets[i]);
      }
    } else {
      for (std::uint32_t i = 0; i < ns; ++i) {
        const auto degree = rng.next_below(4);
        for (std::uint64_t d = 0; d < degree; ++d) {
          e.emplace_back(i, static_cast<std::uint32_t>(rng.next_below(nd)));
        }
      }
    }
    edges.push_back(std::move(e));
  }
  return Hin::from_indexed(HinSchema(std::move(nodes), std::move(links)), counts, edges);
}

inline std::vector<double> random_binary_labels(Rng& rng, std::size_t n, double fraud_rate = 0.3) {
  std::vector<double> y(n, 0.0);
  for (auto& v : y) v = rng.next_double() < fraud_rate ? 1.0 : 0.0;
  return y;
}

}  // namespace hinfraud::testing

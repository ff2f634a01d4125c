#include <doctest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "hinfraud/metapath.hpp"

using namespace hinfraud;
using namespace hinfraud::testing;

namespace {

std::set<std::vector<std::string>> as_link_name_set(const HinSchema& schema,
                                                    const std::vector<PathTrace>& traces) {
  std::set<std::vector<std::string>> out;
  for (const auto& t : traces) out.insert(trace_link_names(schema, t));
  return out;
}

bool is_strict_infix(const std::vector<std::string>& needle,
                     const std::vector<std::string>& haystack) {
  if (needle.size() >= haystack.size()) return false;
  for (std::size_t offset = 0; offset + needle.size() <= haystack.size(); ++offset) {
    if (std::equal(needle.begin(), needle.end(), haystack.begin() + offset)) return true;
  }
  return false;
}

// the toy graph with a concrete edge assignment
Hin toy_hin() {
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> edges(3);
  for (std::uint32_t t = 0; t < 100; ++t) edges[0].emplace_back(t, t % 10);   // toUnit
  for (std::uint32_t u = 0; u < 10; ++u) edges[1].emplace_back(u, u % 3);     // toClass
  for (std::uint32_t t = 0; t < 100; ++t) edges[2].emplace_back(t, t % 5);    // toSite
  return Hin::from_indexed(toy_schema(), toy_counts(), edges);
}

}  // namespace

TEST_CASE("toy schema enumerates exactly the four decreasing traces") {
  const auto traces = enumerate_downsized(toy_schema(), toy_counts());
  REQUIRE(traces.size() == 4);
  CHECK(traces[0].is_trivial());
  CHECK(traces[0].node_types == std::vector<std::uint32_t>{0});

  const auto names = as_link_name_set(toy_schema(), traces);
  const std::set<std::vector<std::string>> expected{
      {}, {"toUnit"}, {"toUnit", "toClass"}, {"toSite"}};
  CHECK(names == expected);
}

TEST_CASE("single node type yields only the trivial trace") {
  HinSchema schema({{"transaction", true}}, {});
  const auto traces = enumerate_downsized(schema, {42});
  CHECK(traces.size() == 1);
  CHECK(traces[0].is_trivial());
}

TEST_CASE("equal counts are never expanded") {
  HinSchema schema({{"transaction", true}, {"mirror", false}},
                   {{"fwd", "transaction", "mirror", Cardinality::many_to_one},
                    {"bwd", "mirror", "transaction", Cardinality::many_to_one}});
  const auto traces = enumerate_downsized(schema, {50, 50});
  CHECK(traces.size() == 1);
}

TEST_CASE("enumeration matches the exhaustive reference on random schemas") {
  Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const auto hin = make_random_hin(rng);
    const auto traces = enumerate_downsized(hin.schema(), hin.node_counts());
    const auto expected = brute_force_traces(hin.schema(), hin.node_counts());
    const auto actual = as_link_name_set(hin.schema(), traces);
    CHECK(actual == expected);
    CHECK(traces.size() == expected.size());  // no duplicate traces
  }
}

TEST_CASE("pairing on the toy schema") {
  const auto traces = enumerate_downsized(toy_schema(), toy_counts());
  const auto pairs = pair_traces(traces, toy_schema());
  REQUIRE(pairs.size() == 3);  // c = 3
  std::set<std::pair<std::size_t, std::size_t>> got;
  for (const auto& p : pairs) got.insert({p.left, p.right});
  // unit/unit, class/class, site/site
  CHECK(got == std::set<std::pair<std::size_t, std::size_t>>{{1, 1}, {2, 2}, {3, 3}});
}

TEST_CASE("two distinct traces with a shared end type give four ordered pairs") {
  HinSchema schema({{"transaction", true}, {"mid_a", false}, {"mid_b", false}, {"shared", false}},
                   {{"viaA", "transaction", "mid_a", Cardinality::many_to_one},
                    {"viaB", "transaction", "mid_b", Cardinality::many_to_one},
                    {"aEnd", "mid_a", "shared", Cardinality::many_to_one},
                    {"bEnd", "mid_b", "shared", Cardinality::many_to_one}});
  const auto traces = enumerate_downsized(schema, {100, 20, 30, 5});
  const auto pairs = pair_traces(traces, schema);
  std::vector<MetaPathPair> at_shared;
  for (const auto& p : pairs) {
    if (p.end_type == 3) at_shared.push_back(p);
  }
  CHECK(at_shared.size() == 4);  // (a,a) (a,b) (b,a) (b,b)
  // the two mixed pairs are distinct features with distinct renderings
  std::set<std::string> renderings;
  for (const auto& p : at_shared) renderings.insert(p.semantics);
  CHECK(renderings.size() == 4);
}

TEST_CASE("only the trivial trace means no pairs") {
  HinSchema schema({{"transaction", true}}, {});
  const auto traces = enumerate_downsized(schema, {10});
  CHECK(pair_traces(traces, schema).empty());
}

TEST_CASE("render_semantics produces the arrow notation") {
  HinSchema schema({{"transaction", true}, {"source", false}},
                   {{"fromSource", "transaction", "source", Cardinality::many_to_one}});
  const auto traces = enumerate_downsized(schema, {100, 5});
  REQUIRE(traces.size() == 2);
  const auto text = render_semantics(traces[1], traces[1], schema);
  CHECK(text == "transaction→fromSource→source→fromSource⁻¹→transaction");
}

TEST_CASE("rendering is order sensitive") {
  const auto traces = enumerate_downsized(toy_schema(), toy_counts());
  // traces 1 ([toUnit]) and 2 ([toUnit,toClass]) do not share an end type, so
  // build an artificial sibling: compare (1,1) against itself mirrored is
  // identical, while distinct traces differ
  const auto a = render_semantics(traces[1], traces[1], toy_schema());
  const auto b = render_semantics(traces[2], traces[2], toy_schema());
  CHECK(a != b);
}

TEST_CASE("no pair's link sequence is contained in another pair's") {
  const auto traces = enumerate_downsized(toy_schema(), toy_counts());
  const auto pairs = pair_traces(traces, toy_schema());
  std::vector<std::vector<std::string>> sequences;
  for (const auto& p : pairs) {
    auto seq = trace_link_names(toy_schema(), traces[p.left]);
    auto right = trace_link_names(toy_schema(), traces[p.right]);
    for (auto it = right.rbegin(); it != right.rend(); ++it) {
      seq.push_back(toy_schema().invert_link_name(*it));
    }
    sequences.push_back(std::move(seq));
  }
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    for (std::size_t j = 0; j < sequences.size(); ++j) {
      if (i == j) continue;
      CHECK_FALSE(is_strict_infix(sequences[i], sequences[j]));
    }
  }
}

TEST_CASE("materialize: trivial trace is the identity") {
  const auto hin = toy_hin();
  const auto traces = enumerate_downsized(hin.schema(), hin.node_counts());
  const auto path = materialize(hin, traces[0]);
  CHECK(path.matrix == CsrMatrix::identity(100));
  CHECK(path.is_simple);
}

TEST_CASE("materialize: many_to_one chain keeps one unit entry per row") {
  const auto hin = toy_hin();
  const auto traces = enumerate_downsized(hin.schema(), hin.node_counts());
  for (const auto& trace : traces) {
    const auto path = materialize(hin, trace);
    CHECK(path.is_simple);  // the toy schema has only many_to_one links
    CHECK(path.matrix.max_row_nnz() == 1);
    CHECK(path.matrix.rows() == 100);
  }
}

TEST_CASE("simple path column sums count the transactions mapped to each end node") {
  const auto hin = toy_hin();
  const auto traces = enumerate_downsized(hin.schema(), hin.node_counts());
  for (const auto& trace : traces) {
    if (trace.is_trivial()) continue;
    const auto path = materialize(hin, trace);
    double total = 0.0;
    for (const auto s : path.col_sums) total += s;
    CHECK(total == doctest::Approx(100.0));  // every transaction lands somewhere here
  }
}

TEST_CASE("materialize agrees with dense chain products and is association independent") {
  Rng rng(32);
  int checked = 0;
  for (int trial = 0; trial < 15 && checked < 10; ++trial) {
    const auto hin = make_random_hin(rng);
    const auto traces = enumerate_downsized(hin.schema(), hin.node_counts());
    for (const auto& trace : traces) {
      if (trace.links.size() < 2) continue;
      const auto path = materialize(hin, trace);

      // dense left-to-right
      Dense dense = dense_of(hin.adjacency(trace.links[0]));
      for (std::size_t k = 1; k < trace.links.size(); ++k) {
        dense = dense_mm(dense, dense_of(hin.adjacency(trace.links[k])));
      }
      const auto actual = dense_of(path.matrix);
      REQUIRE(actual.size() == dense.size());
      bool all_equal = true;
      for (std::size_t i = 0; i < dense.size(); ++i) {
        for (std::size_t j = 0; j < dense[i].size(); ++j) {
          if (std::abs(actual[i][j] - dense[i][j]) > 1e-9) all_equal = false;
        }
      }
      CHECK(all_equal);

      // right-to-left association through the sparse kernel
      CsrMatrix right_assoc = hin.adjacency(trace.links.back());
      for (std::size_t k = trace.links.size() - 1; k-- > 0;) {
        right_assoc = hin.adjacency(trace.links[k]).multiply(right_assoc);
      }
      CHECK(path.matrix == right_assoc);
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("complex path entries are path counts") {
  // 4 transactions, 3 items, 2 titles; txn0 holds items {0,1} under one title
  HinSchema schema({{"transaction", true}, {"item", false}, {"title", false}},
                   {{"containsItem", "transaction", "item", Cardinality::many_to_many},
                    {"isTitle", "item", "title", Cardinality::many_to_one}});
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> edges(2);
  edges[0] = {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}, {3, 0}};
  edges[1] = {{0, 0}, {1, 0}, {2, 1}};
  const auto hin = Hin::from_indexed(schema, {4, 3, 2}, edges);

  const auto traces = enumerate_downsized(hin.schema(), hin.node_counts());
  const PathTrace* to_title = nullptr;
  for (const auto& t : traces) {
    if (t.links.size() == 2) to_title = &t;
  }
  REQUIRE(to_title != nullptr);
  const auto path = materialize(hin, *to_title);
  CHECK_FALSE(path.is_simple);
  // hand-enumerated walk counts transaction -> item -> title
  CHECK(path.matrix.value_at(0, 0) == 2.0);  // t0 via items 0 and 1
  CHECK(path.matrix.value_at(0, 1) == 0.0);
  CHECK(path.matrix.value_at(1, 0) == 1.0);
  CHECK(path.matrix.value_at(1, 1) == 1.0);
  CHECK(path.matrix.value_at(2, 1) == 1.0);
  CHECK(path.matrix.value_at(3, 0) == 1.0);
}

TEST_CASE("masked path set empties excluded transaction rows") {
  const auto hin = toy_hin();
  const auto set = build_paths(hin);
  std::vector<std::uint8_t> keep(100, 1);
  keep[7] = 0;
  const auto masked = set.masked_rows(keep);
  for (std::size_t p = 0; p < masked.paths.size(); ++p) {
    CHECK(masked.paths[p].matrix.row_nnz(7) == 0);
    CHECK(masked.paths[p].row_sums[7] == 0.0);
  }
  CHECK(masked.pairs.size() == set.pairs.size());
}

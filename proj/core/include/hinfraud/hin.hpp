#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hinfraud/csr.hpp"
#include "hinfraud/schema.hpp"

namespace hinfraud {

// Bijection between opaque external ids and dense indices, in file order.
class NodeIndex {
 public:
  std::uint32_t add(std::string id);  // ParseError on duplicate
  std::optional<std::uint32_t> index_of(std::string_view id) const;
  const std::string& id_of(std::uint32_t index) const { return ids_[index]; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(ids_.size()); }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::uint32_t> to_index_;
};

// The typed graph: one 0/1 sparse adjacency matrix per declared link type,
// plus lazily materialized transposes for the inverse relations. Immutable
// after load; safe for any number of concurrent readers.
class Hin {
 public:
  Hin(HinSchema schema, std::vector<NodeIndex> node_index, std::vector<CsrMatrix> adjacency);

  static Hin load(const HinSchema& schema,
                  const std::vector<std::pair<std::string, std::filesystem::path>>& node_files,
                  const std::vector<std::pair<std::string, std::filesystem::path>>& edge_files);
  static Hin load(const std::filesystem::path& schema_file,
                  const std::vector<std::pair<std::string, std::filesystem::path>>& node_files,
                  const std::vector<std::pair<std::string, std::filesystem::path>>& edge_files);

  // Loads a dataset directory: schema.json, nodes/<type>.txt, edges/<link>.csv.
  static Hin load_dir(const std::filesystem::path& dir);

  // Builds a Hin from in-memory index pairs (ids synthesized as <type>_<i>).
  static Hin from_indexed(
      HinSchema schema, const std::vector<std::uint32_t>& node_counts,
      const std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>& edges_per_link);

  const HinSchema& schema() const { return schema_; }
  const NodeIndex& nodes(std::uint32_t type) const { return node_index_[type]; }
  std::uint32_t node_count(std::uint32_t type) const { return node_index_[type].size(); }
  std::vector<std::uint32_t> node_counts() const;
  std::uint32_t transaction_count() const { return node_count(schema_.target_type()); }

  // Adjacency of a declared link or its inverse (the transpose, built on
  // first use and cached; storage is shared by all readers).
  const CsrMatrix& adjacency(LinkRef ref) const;
  const CsrMatrix& adjacency(std::string_view link_name) const;

  // Row sums of the link's adjacency.
  std::vector<double> degree_vector(LinkRef ref) const;
  std::vector<double> degree_vector(std::string_view link_name) const;

 private:
  LinkRef must_resolve(std::string_view link_name) const;

  HinSchema schema_;
  std::vector<NodeIndex> node_index_;
  std::vector<CsrMatrix> forward_;

  struct InverseCache {
    std::mutex mutex;
    std::vector<std::unique_ptr<CsrMatrix>> built;
  };
  std::unique_ptr<InverseCache> inverse_;
};

}  // namespace hinfraud

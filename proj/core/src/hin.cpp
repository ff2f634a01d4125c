#include "hinfraud/hin.hpp"

#include <algorithm>
#include <fstream>

#include "hinfraud/error.hpp"
#include "hinfraud/log.hpp"

namespace hinfraud {

std::uint32_t NodeIndex::add(std::string id) {
  const auto index = static_cast<std::uint32_t>(ids_.size());
  if (!to_index_.emplace(id, index).second) {
    raise(ErrorKind::parse_error, "duplicate node id '" + id + "'");
  }
  ids_.push_back(std::move(id));
  return index;
}

std::optional<std::uint32_t> NodeIndex::index_of(std::string_view id) const {
  const auto it = to_index_.find(std::string(id));
  if (it == to_index_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::vector<std::string> read_id_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::io_error, "cannot open node file " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out.push_back(line);
  }
  return out;
}

void validate_cardinality(const HinSchema& schema, std::uint32_t link, const CsrMatrix& adj,
                          const NodeIndex& src_nodes, const NodeIndex& dst_nodes) {
  const auto& decl = schema.link_type(link);
  const bool row_constrained =
      decl.cardinality == Cardinality::many_to_one || decl.cardinality == Cardinality::one_to_one;
  if (row_constrained) {
    for (CsrMatrix::Index r = 0; r < adj.rows(); ++r) {
      if (adj.row_nnz(r) > 1) {
        raise(ErrorKind::cardinality_violation,
              "link '" + decl.name + "' declared " + std::string(to_string(decl.cardinality)) +
                  " but node '" + src_nodes.id_of(r) + "' has " + std::to_string(adj.row_nnz(r)) +
                  " outgoing edges");
      }
    }
  }
  if (decl.cardinality == Cardinality::one_to_one) {
    const auto sums = adj.col_sums();
    for (CsrMatrix::Index c = 0; c < adj.cols(); ++c) {
      if (sums[c] > 1.0) {
        raise(ErrorKind::cardinality_violation,
              "link '" + decl.name + "' declared one_to_one but node '" + dst_nodes.id_of(c) +
                  "' has " + std::to_string(static_cast<long long>(sums[c])) + " incoming edges");
      }
    }
  }
}

}  // namespace

Hin::Hin(HinSchema schema, std::vector<NodeIndex> node_index, std::vector<CsrMatrix> adjacency)
    : schema_(std::move(schema)),
      node_index_(std::move(node_index)),
      forward_(std::move(adjacency)),
      inverse_(std::make_unique<InverseCache>()) {
  inverse_->built.resize(forward_.size());
}

Hin Hin::load(const HinSchema& schema,
              const std::vector<std::pair<std::string, std::filesystem::path>>& node_files,
              const std::vector<std::pair<std::string, std::filesystem::path>>& edge_files) {
  std::vector<NodeIndex> node_index(schema.node_type_count());
  std::vector<bool> have_nodes(schema.node_type_count(), false);
  for (const auto& [type_name, path] : node_files) {
    const auto type = schema.find_node_type(type_name);
    if (!type) raise(ErrorKind::schema_mismatch, "node file given for unknown type '" + type_name + "'");
    for (auto& id : read_id_lines(path)) node_index[*type].add(std::move(id));
    have_nodes[*type] = true;
  }
  for (std::uint32_t t = 0; t < schema.node_type_count(); ++t) {
    if (!have_nodes[t]) {
      raise(ErrorKind::schema_mismatch, "no node file for type '" + schema.node_type(t).name + "'");
    }
  }

  std::vector<CsrMatrix> adjacency(schema.link_type_count());
  std::vector<bool> have_edges(schema.link_type_count(), false);
  for (const auto& [link_name, path] : edge_files) {
    const auto link = schema.find_link_type(link_name);
    if (!link) raise(ErrorKind::schema_mismatch, "edge file given for unknown link '" + link_name + "'");
    const auto src_type = schema.link_source(LinkRef{*link, false});
    const auto dst_type = schema.link_target(LinkRef{*link, false});
    const auto& src_nodes = node_index[src_type];
    const auto& dst_nodes = node_index[dst_type];

    std::ifstream in(path);
    if (!in) raise(ErrorKind::io_error, "cannot open edge file " + path.string());
    std::vector<std::pair<CsrMatrix::Index, CsrMatrix::Index>> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) {
        raise(ErrorKind::parse_error, path.string() + ":" + std::to_string(line_no) +
                                          ": expected 'src_id,dst_id'");
      }
      const auto src_id = line.substr(0, comma);
      const auto dst_id = line.substr(comma + 1);
      const auto src = src_nodes.index_of(src_id);
      if (!src) {
        raise(ErrorKind::unknown_node_id,
              "link '" + link_name + "' references id '" + src_id + "' absent from type '" +
                  schema.node_type(src_type).name + "'");
      }
      const auto dst = dst_nodes.index_of(dst_id);
      if (!dst) {
        raise(ErrorKind::unknown_node_id,
              "link '" + link_name + "' references id '" + dst_id + "' absent from type '" +
                  schema.node_type(dst_type).name + "'");
      }
      pairs.emplace_back(*src, *dst);
    }
    std::size_t collapsed = 0;
    adjacency[*link] =
        CsrMatrix::binary_from_pairs(src_nodes.size(), dst_nodes.size(), std::move(pairs), &collapsed);
    if (collapsed > 0) {
      HINFRAUD_LOG_WARN("link '%s': collapsed %zu duplicate edges", link_name.c_str(), collapsed);
    }
    validate_cardinality(schema, *link, adjacency[*link], src_nodes, dst_nodes);
    have_edges[*link] = true;
  }
  for (std::uint32_t l = 0; l < schema.link_type_count(); ++l) {
    if (!have_edges[l]) {
      raise(ErrorKind::schema_mismatch, "no edge file for link '" + schema.link_type(l).name + "'");
    }
  }
  return Hin(schema, std::move(node_index), std::move(adjacency));
}

Hin Hin::load(const std::filesystem::path& schema_file,
              const std::vector<std::pair<std::string, std::filesystem::path>>& node_files,
              const std::vector<std::pair<std::string, std::filesystem::path>>& edge_files) {
  return load(HinSchema::from_json_file(schema_file), node_files, edge_files);
}

Hin Hin::load_dir(const std::filesystem::path& dir) {
  const auto schema = HinSchema::from_json_file(dir / "schema.json");
  std::vector<std::pair<std::string, std::filesystem::path>> node_files;
  for (std::uint32_t t = 0; t < schema.node_type_count(); ++t) {
    const auto& name = schema.node_type(t).name;
    node_files.emplace_back(name, dir / "nodes" / (name + ".txt"));
  }
  std::vector<std::pair<std::string, std::filesystem::path>> edge_files;
  for (std::uint32_t l = 0; l < schema.link_type_count(); ++l) {
    const auto& name = schema.link_type(l).name;
    edge_files.emplace_back(name, dir / "edges" / (name + ".csv"));
  }
  return load(schema, node_files, edge_files);
}

Hin Hin::from_indexed(
    HinSchema schema, const std::vector<std::uint32_t>& node_counts,
    const std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>& edges_per_link) {
  if (node_counts.size() != schema.node_type_count() ||
      edges_per_link.size() != schema.link_type_count()) {
    raise(ErrorKind::schema_mismatch, "from_indexed: counts do not match schema");
  }
  std::vector<NodeIndex> node_index(schema.node_type_count());
  for (std::uint32_t t = 0; t < schema.node_type_count(); ++t) {
    for (std::uint32_t i = 0; i < node_counts[t]; ++i) {
      node_index[t].add(schema.node_type(t).name + "_" + std::to_string(i));
    }
  }
  std::vector<CsrMatrix> adjacency(schema.link_type_count());
  for (std::uint32_t l = 0; l < schema.link_type_count(); ++l) {
    const auto src_type = schema.link_source(LinkRef{l, false});
    const auto dst_type = schema.link_target(LinkRef{l, false});
    adjacency[l] = CsrMatrix::binary_from_pairs(node_counts[src_type], node_counts[dst_type],
                                                edges_per_link[l]);
    validate_cardinality(schema, l, adjacency[l], node_index[src_type], node_index[dst_type]);
  }
  return Hin(std::move(schema), std::move(node_index), std::move(adjacency));
}

std::vector<std::uint32_t> Hin::node_counts() const {
  std::vector<std::uint32_t> counts(node_index_.size());
  for (std::size_t t = 0; t < node_index_.size(); ++t) counts[t] = node_index_[t].size();
  return counts;
}

const CsrMatrix& Hin::adjacency(LinkRef ref) const {
  if (ref.link >= forward_.size()) raise(ErrorKind::unknown_link, "link index out of range");
  if (!ref.inverted) return forward_[ref.link];
  std::lock_guard<std::mutex> lock(inverse_->mutex);
  auto& slot = inverse_->built[ref.link];
  if (!slot) slot = std::make_unique<CsrMatrix>(forward_[ref.link].transpose());
  return *slot;
}

const CsrMatrix& Hin::adjacency(std::string_view link_name) const {
  return adjacency(must_resolve(link_name));
}

std::vector<double> Hin::degree_vector(LinkRef ref) const { return adjacency(ref).row_sums(); }

std::vector<double> Hin::degree_vector(std::string_view link_name) const {
  return degree_vector(must_resolve(link_name));
}

LinkRef Hin::must_resolve(std::string_view link_name) const {
  const auto ref = schema_.resolve_link(link_name);
  if (!ref) raise(ErrorKind::unknown_link, "no link type named '" + std::string(link_name) + "'");
  return *ref;
}

}  // namespace hinfraud

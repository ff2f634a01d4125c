#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hinfraud {

enum class Cardinality { many_to_one, one_to_one, one_to_many, many_to_many };

// Cardinality of the inverted relation.
constexpr Cardinality mirrored(Cardinality c) {
  switch (c) {
    case Cardinality::many_to_one: return Cardinality::one_to_many;
    case Cardinality::one_to_many: return Cardinality::many_to_one;
    default: return c;
  }
}

std::string_view to_string(Cardinality c);
std::optional<Cardinality> cardinality_from_string(std::string_view name);

struct NodeTypeDecl {
  std::string name;
  bool is_target = false;
};

struct LinkTypeDecl {
  std::string name;
  std::string source;
  std::string target;
  Cardinality cardinality = Cardinality::many_to_many;
};

// A link type as used in traversals: either a declared link or its inverse.
struct LinkRef {
  std::uint32_t link = 0;
  bool inverted = false;

  bool operator==(const LinkRef&) const = default;
};

// Suffix appended to a declared link name to name its inverse.
inline constexpr std::string_view kInverseSuffix = "⁻¹";

// The type-level graph: node types with roles and link types with endpoints
// and declared cardinality. Immutable once constructed; construction
// validates all schema invariants.
class HinSchema {
 public:
  HinSchema(std::vector<NodeTypeDecl> node_types, std::vector<LinkTypeDecl> link_types);

  static HinSchema from_json_text(std::string_view text);
  static HinSchema from_json_file(const std::filesystem::path& path);
  std::string to_json_text() const;

  std::size_t node_type_count() const { return node_types_.size(); }
  std::size_t link_type_count() const { return link_types_.size(); }
  const NodeTypeDecl& node_type(std::uint32_t i) const { return node_types_[i]; }
  const LinkTypeDecl& link_type(std::uint32_t i) const { return link_types_[i]; }

  // Index of the transaction node type.
  std::uint32_t target_type() const { return target_type_; }

  std::optional<std::uint32_t> find_node_type(std::string_view name) const;
  std::optional<std::uint32_t> find_link_type(std::string_view name) const;

  // Resolves a link name, accepting the inverse-suffix form.
  std::optional<LinkRef> resolve_link(std::string_view name) const;

  std::string link_name(LinkRef ref) const;
  std::string invert_link_name(std::string_view name) const;

  static LinkRef inverse(LinkRef ref) { return {ref.link, !ref.inverted}; }

  std::uint32_t link_source(LinkRef ref) const;
  std::uint32_t link_target(LinkRef ref) const;
  Cardinality link_cardinality(LinkRef ref) const;

 private:
  std::vector<NodeTypeDecl> node_types_;
  std::vector<LinkTypeDecl> link_types_;
  std::unordered_map<std::string, std::uint32_t> node_type_by_name_;
  std::unordered_map<std::string, std::uint32_t> link_type_by_name_;
  std::vector<std::uint32_t> link_source_;
  std::vector<std::uint32_t> link_target_;
  std::uint32_t target_type_ = 0;
};

}  // namespace hinfraud

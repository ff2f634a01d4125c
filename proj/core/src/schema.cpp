#include "hinfraud/schema.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hinfraud/error.hpp"

namespace hinfraud {

std::string_view to_string(Cardinality c) {
  switch (c) {
    case Cardinality::many_to_one: return "many_to_one";
    case Cardinality::one_to_one: return "one_to_one";
    case Cardinality::one_to_many: return "one_to_many";
    case Cardinality::many_to_many: return "many_to_many";
  }
  return "?";
}

std::optional<Cardinality> cardinality_from_string(std::string_view name) {
  if (name == "many_to_one") return Cardinality::many_to_one;
  if (name == "one_to_one") return Cardinality::one_to_one;
  if (name == "one_to_many") return Cardinality::one_to_many;
  if (name == "many_to_many") return Cardinality::many_to_many;
  return std::nullopt;
}

HinSchema::HinSchema(std::vector<NodeTypeDecl> node_types, std::vector<LinkTypeDecl> link_types)
    : node_types_(std::move(node_types)), link_types_(std::move(link_types)) {
  if (node_types_.empty()) raise(ErrorKind::schema_mismatch, "schema declares no node types");

  int target_count = 0;
  for (std::uint32_t i = 0; i < node_types_.size(); ++i) {
    const auto& nt = node_types_[i];
    if (!node_type_by_name_.emplace(nt.name, i).second) {
      raise(ErrorKind::schema_mismatch, "duplicate node type name '" + nt.name + "'");
    }
    if (nt.is_target) {
      target_type_ = i;
      ++target_count;
    }
  }
  if (target_count != 1) {
    raise(ErrorKind::schema_mismatch, "exactly one node type must have the target role, found " +
                                          std::to_string(target_count));
  }

  link_source_.resize(link_types_.size());
  link_target_.resize(link_types_.size());
  for (std::uint32_t i = 0; i < link_types_.size(); ++i) {
    const auto& lt = link_types_[i];
    if (lt.name.size() >= kInverseSuffix.size() &&
        lt.name.ends_with(kInverseSuffix)) {
      raise(ErrorKind::schema_mismatch,
            "link type name '" + lt.name + "' collides with the inverse-name suffix");
    }
    if (!link_type_by_name_.emplace(lt.name, i).second) {
      raise(ErrorKind::schema_mismatch, "duplicate link type name '" + lt.name + "'");
    }
    if (lt.cardinality == Cardinality::one_to_many) {
      raise(ErrorKind::schema_mismatch, "link type '" + lt.name +
                                            "' declares one_to_many; declare the mirrored "
                                            "many_to_one link instead");
    }
    const auto src = find_node_type(lt.source);
    const auto dst = find_node_type(lt.target);
    if (!src) raise(ErrorKind::schema_mismatch, "link '" + lt.name + "' has unknown source type '" + lt.source + "'");
    if (!dst) raise(ErrorKind::schema_mismatch, "link '" + lt.name + "' has unknown target type '" + lt.target + "'");
    link_source_[i] = *src;
    link_target_[i] = *dst;
  }
}

std::optional<std::uint32_t> HinSchema::find_node_type(std::string_view name) const {
  const auto it = node_type_by_name_.find(std::string(name));
  if (it == node_type_by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> HinSchema::find_link_type(std::string_view name) const {
  const auto it = link_type_by_name_.find(std::string(name));
  if (it == link_type_by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<LinkRef> HinSchema::resolve_link(std::string_view name) const {
  if (name.size() > kInverseSuffix.size() && name.ends_with(kInverseSuffix)) {
    const auto base = name.substr(0, name.size() - kInverseSuffix.size());
    if (const auto i = find_link_type(base)) return LinkRef{*i, true};
    return std::nullopt;
  }
  if (const auto i = find_link_type(name)) return LinkRef{*i, false};
  return std::nullopt;
}

std::string HinSchema::link_name(LinkRef ref) const {
  const auto& base = link_types_[ref.link].name;
  if (!ref.inverted) return base;
  return base + std::string(kInverseSuffix);
}

std::string HinSchema::invert_link_name(std::string_view name) const {
  const auto ref = resolve_link(name);
  if (!ref) raise(ErrorKind::unknown_link, "no link type named '" + std::string(name) + "'");
  return link_name(inverse(*ref));
}

std::uint32_t HinSchema::link_source(LinkRef ref) const {
  return ref.inverted ? link_target_[ref.link] : link_source_[ref.link];
}

std::uint32_t HinSchema::link_target(LinkRef ref) const {
  return ref.inverted ? link_source_[ref.link] : link_target_[ref.link];
}

Cardinality HinSchema::link_cardinality(LinkRef ref) const {
  const Cardinality c = link_types_[ref.link].cardinality;
  return ref.inverted ? mirrored(c) : c;
}

namespace {

HinSchema schema_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("node_types") || !j.contains("link_types")) {
    raise(ErrorKind::parse_error, "schema file needs node_types and link_types sections");
  }
  std::vector<NodeTypeDecl> nodes;
  for (const auto& n : j.at("node_types")) {
    NodeTypeDecl decl;
    decl.name = n.at("name").get<std::string>();
    const auto role = n.value("role", std::string("attribute"));
    if (role == "target") {
      decl.is_target = true;
    } else if (role != "attribute") {
      raise(ErrorKind::parse_error, "node type '" + decl.name + "' has unknown role '" + role + "'");
    }
    nodes.push_back(std::move(decl));
  }
  std::vector<LinkTypeDecl> links;
  for (const auto& l : j.at("link_types")) {
    LinkTypeDecl decl;
    decl.name = l.at("name").get<std::string>();
    decl.source = l.at("source").get<std::string>();
    decl.target = l.at("target").get<std::string>();
    const auto card = l.at("cardinality").get<std::string>();
    const auto parsed = cardinality_from_string(card);
    if (!parsed) raise(ErrorKind::parse_error, "link '" + decl.name + "' has unknown cardinality '" + card + "'");
    decl.cardinality = *parsed;
    links.push_back(std::move(decl));
  }
  return HinSchema(std::move(nodes), std::move(links));
}

}  // namespace

HinSchema HinSchema::from_json_text(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) raise(ErrorKind::parse_error, "schema is not valid JSON");
  return schema_from_json(j);
}

HinSchema HinSchema::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::io_error, "cannot open schema file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

std::string HinSchema::to_json_text() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& nt : node_types_) {
    nodes.push_back({{"name", nt.name}, {"role", nt.is_target ? "target" : "attribute"}});
  }
  nlohmann::json links = nlohmann::json::array();
  for (const auto& lt : link_types_) {
    links.push_back({{"name", lt.name},
                     {"source", lt.source},
                     {"target", lt.target},
                     {"cardinality", std::string(to_string(lt.cardinality))}});
  }
  nlohmann::json j{{"node_types", nodes}, {"link_types", links}};
  return j.dump(2) + "\n";
}

}  // namespace hinfraud

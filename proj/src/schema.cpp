#include "jsa/schema.hpp"

#include <algorithm>
#include <cmath>

namespace jsa {

namespace {

bool is_known_type_name(const std::string& name) {
  for (const char* t : kSchemaTypeNames) {
    if (name == t) return true;
  }
  return false;
}

bool is_annotation_keyword(const std::string& key) {
  for (const char* k : kAnnotationKeywords) {
    if (key == k) return true;
  }
  return false;
}

[[noreturn]] void type_mismatch(const std::string& keyword,
                                const std::string& expected) {
  throw SchemaError("keyword type mismatch: '" + keyword + "' must be " +
                    expected);
}

std::uint64_t require_nonneg_integer(const Json& value,
                                     const std::string& keyword) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer()) {
    auto v = value.get<std::int64_t>();
    if (v < 0) type_mismatch(keyword, "a non-negative integer");
    return static_cast<std::uint64_t>(v);
  }
  if (value.is_number_float()) {
    double d = value.get<double>();
    if (d >= 0 && std::trunc(d) == d && d <= 9007199254740992.0) {
      return static_cast<std::uint64_t>(d);
    }
  }
  type_mismatch(keyword, "a non-negative integer");
}

SchemaNode node_from_json(const Json& value, bool is_root);

SchemaNode subschema_from_json(const Json& value) {
  return node_from_json(value, /*is_root=*/false);
}

SchemaNode node_from_json(const Json& value, bool is_root) {
  SchemaNode node;
  if (value.is_boolean()) {
    node.unsatisfiable = !value.get<bool>();
    return node;
  }
  if (!value.is_object()) {
    throw SchemaError("schema must be an object or boolean");
  }
  for (const auto& [key, raw] : value.items()) {
    if (key == "type") {
      if (raw.is_string()) {
        std::string t = raw.get<std::string>();
        if (!is_known_type_name(t)) type_mismatch("type", "a known type name");
        node.types.insert(std::move(t));
      } else if (raw.is_array()) {
        for (const auto& entry : raw) {
          if (!entry.is_string() ||
              !is_known_type_name(entry.get<std::string>())) {
            type_mismatch("type", "a type name or array of type names");
          }
          node.types.insert(entry.get<std::string>());
        }
      } else {
        type_mismatch("type", "a type name or array of type names");
      }
    } else if (key == "properties") {
      if (!raw.is_object()) type_mismatch("properties", "an object");
      for (const auto& [name, sub] : raw.items()) {
        node.properties.emplace(name, subschema_from_json(sub));
      }
    } else if (key == "required") {
      if (!raw.is_array()) type_mismatch("required", "an array of strings");
      for (const auto& entry : raw) {
        if (!entry.is_string()) type_mismatch("required", "an array of strings");
        node.required.insert(entry.get<std::string>());
      }
    } else if (key == "additionalProperties") {
      if (!raw.is_boolean()) type_mismatch("additionalProperties", "a boolean");
      node.additionalProperties = raw.get<bool>();
    } else if (key == "items") {
      if (!raw.is_object() && !raw.is_boolean()) {
        type_mismatch("items", "a schema");
      }
      node.items = Box<SchemaNode>(subschema_from_json(raw));
    } else if (key == "minItems") {
      node.minItems = require_nonneg_integer(raw, key);
    } else if (key == "maxItems") {
      node.maxItems = require_nonneg_integer(raw, key);
    } else if (key == "minLength") {
      node.minLength = require_nonneg_integer(raw, key);
    } else if (key == "maxLength") {
      node.maxLength = require_nonneg_integer(raw, key);
    } else if (key == "minimum") {
      if (!raw.is_number()) type_mismatch("minimum", "a number");
      node.minimum = to_canonical(raw);
    } else if (key == "maximum") {
      if (!raw.is_number()) type_mismatch("maximum", "a number");
      node.maximum = to_canonical(raw);
    } else if (key == "uniqueItems") {
      if (!raw.is_boolean()) type_mismatch("uniqueItems", "a boolean");
      node.uniqueItems = raw.get<bool>();
    } else if (key == "format") {
      if (!raw.is_string()) type_mismatch("format", "a string");
      node.format = raw.get<std::string>();
    } else if (key == "enum") {
      if (!raw.is_array()) type_mismatch("enum", "an array");
      node.enumValues = to_canonical(raw);
    } else if (key == "$ref") {
      if (!raw.is_string()) type_mismatch("$ref", "a string");
      std::string r = raw.get<std::string>();
      if (is_local_definition_ref(r)) {
        node.ref = std::move(r);
      } else {
        node.unknownKeywords[key] = raw;  // out-of-vocabulary ref shapes
      }
    } else if (key == "definitions" && is_root) {
      if (!raw.is_object()) type_mismatch("definitions", "an object");
      for (const auto& [name, sub] : raw.items()) {
        node.definitions.emplace(name, subschema_from_json(sub));
      }
    } else if (is_annotation_keyword(key)) {
      if (!raw.is_string()) type_mismatch(key, "a string");
      node.annotations[key] = raw.get<std::string>();
    } else {
      node.unknownKeywords[key] = raw;
    }
  }
  return node;
}

void check_refs_resolve(const SchemaNode& root) {
  for (const auto& [ptr, node] : walk(root)) {
    if (!node->ref) continue;
    std::string name =
        unescape_pointer_segment(node->ref->substr(std::string_view("#/definitions/").size()));
    if (root.definitions.find(name) == root.definitions.end()) {
      throw SchemaError("unresolvable $ref '" + *node->ref + "' at '" +
                        ptr.to_string() + "'");
    }
  }
}

}  // namespace

bool is_local_definition_ref(std::string_view ref) {
  constexpr std::string_view prefix = "#/definitions/";
  return ref.size() > prefix.size() && ref.substr(0, prefix.size()) == prefix &&
         ref.find('/', prefix.size()) == std::string_view::npos;
}

bool SchemaNode::is_empty_permissive() const {
  return !unsatisfiable && types.empty() && properties.empty() &&
         required.empty() && !additionalProperties && !items && !minItems &&
         !maxItems && !minLength && !maxLength && !minimum && !maximum &&
         !uniqueItems && !format && !enumValues && !ref && definitions.empty() &&
         annotations.empty() && unknownKeywords.empty();
}

bool SchemaNode::operator==(const SchemaNode& other) const {
  return schema_to_json(*this) == schema_to_json(other);
}

SchemaNode parse_schema(std::string_view text) {
  Json value;
  try {
    value = parse_json(text);
  } catch (const JsonError& e) {
    throw SchemaError(e.what());
  }
  return schema_from_json(value);
}

SchemaNode schema_from_json(const Json& value) {
  SchemaNode root = node_from_json(value, /*is_root=*/true);
  check_refs_resolve(root);
  return root;
}

CanonicalJson schema_to_json(const SchemaNode& node) {
  if (node.unsatisfiable) return CanonicalJson(false);
  CanonicalJson out = CanonicalJson::object();
  if (!node.types.empty()) {
    if (node.types.size() == 1) {
      out["type"] = *node.types.begin();
    } else {
      out["type"] = CanonicalJson(node.types);  // sorted set -> sorted array
    }
  }
  if (!node.properties.empty()) {
    CanonicalJson props = CanonicalJson::object();
    for (const auto& [name, sub] : node.properties) {
      props[name] = schema_to_json(sub);
    }
    out["properties"] = std::move(props);
  }
  if (!node.required.empty()) out["required"] = CanonicalJson(node.required);
  if (node.additionalProperties) {
    out["additionalProperties"] = *node.additionalProperties;
  }
  if (node.items) out["items"] = schema_to_json(**node.items);
  if (node.minItems) out["minItems"] = *node.minItems;
  if (node.maxItems) out["maxItems"] = *node.maxItems;
  if (node.minLength) out["minLength"] = *node.minLength;
  if (node.maxLength) out["maxLength"] = *node.maxLength;
  if (node.minimum) out["minimum"] = *node.minimum;
  if (node.maximum) out["maximum"] = *node.maximum;
  if (node.uniqueItems) out["uniqueItems"] = *node.uniqueItems;
  if (node.format) out["format"] = *node.format;
  if (node.enumValues) out["enum"] = *node.enumValues;
  if (node.ref) out["$ref"] = *node.ref;
  if (!node.definitions.empty()) {
    CanonicalJson defs = CanonicalJson::object();
    for (const auto& [name, sub] : node.definitions) {
      defs[name] = schema_to_json(sub);
    }
    out["definitions"] = std::move(defs);
  }
  for (const auto& [key, text] : node.annotations) out[key] = text;
  for (const auto& [key, raw] : node.unknownKeywords.items()) {
    out[key] = to_canonical(raw);
  }
  return out;
}

std::string serialize_canonical(const SchemaNode& node) {
  return canonical_dump(schema_to_json(node));
}

SchemaNode strip_annotations(const SchemaNode& node) {
  SchemaNode out = node;
  out.annotations.clear();
  for (auto& [name, sub] : out.properties) sub = strip_annotations(sub);
  if (out.items) out.items = Box<SchemaNode>(strip_annotations(**out.items));
  for (auto& [name, sub] : out.definitions) sub = strip_annotations(sub);
  return out;
}

namespace {

void walk_into(const SchemaNode& node, const Pointer& ptr,
               std::vector<std::pair<Pointer, const SchemaNode*>>& out) {
  out.emplace_back(ptr, &node);
  for (const auto& [name, sub] : node.properties) {
    walk_into(sub, ptr.child("properties").child(name), out);
  }
  if (node.items) {
    walk_into(**node.items, ptr.child("items"), out);
  }
}

}  // namespace

std::vector<std::pair<Pointer, const SchemaNode*>> walk(const SchemaNode& root) {
  std::vector<std::pair<Pointer, const SchemaNode*>> out;
  walk_into(root, Pointer{}, out);
  Pointer base;
  for (const auto& [name, sub] : root.definitions) {
    walk_into(sub, base.child("definitions").child(name), out);
  }
  return out;
}

const SchemaNode& resolve_ref(const SchemaNode& root, std::string_view ref) {
  if (!is_local_definition_ref(ref)) {
    throw SchemaError("unsupported $ref shape: " + std::string(ref));
  }
  std::string name = unescape_pointer_segment(
      ref.substr(std::string_view("#/definitions/").size()));
  auto it = root.definitions.find(name);
  if (it == root.definitions.end()) {
    throw SchemaError("unresolvable $ref: " + std::string(ref));
  }
  return it->second;
}

const SchemaNode& resolve(const SchemaNode& root, const Pointer& ptr) {
  const SchemaNode* node = &root;
  const auto& segments = ptr.segments();
  std::size_t i = 0;
  int derefs = 0;
  while (i < segments.size()) {
    const std::string& segment = segments[i];
    if (segment == "properties" && i + 1 < segments.size()) {
      auto it = node->properties.find(segments[i + 1]);
      if (it != node->properties.end()) {
        node = &it->second;
        i += 2;
        continue;
      }
    } else if (segment == "items" && node->items) {
      node = &**node->items;
      ++i;
      continue;
    } else if (segment == "definitions" && i + 1 < segments.size()) {
      auto it = node->definitions.find(segments[i + 1]);
      if (it != node->definitions.end()) {
        node = &it->second;
        i += 2;
        continue;
      }
    }
    // Navigation may continue through a reference.
    if (node->ref && derefs < 64) {
      node = &resolve_ref(root, *node->ref);
      ++derefs;
      continue;
    }
    throw SchemaError("unresolvable pointer segment '" + segment + "' in '" +
                      ptr.to_string() + "'");
  }
  return *node;
}

}  // namespace jsa

#include "jsa/discovery.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace jsa {

namespace {

bool has_numeric_type(const SchemaNode& n) {
  return n.has_type("integer") || n.has_type("number");
}

CanonicalJson canonical_number(const Json& v) { return to_canonical(v); }

int compare_scalar_numbers(const CanonicalJson& a, const CanonicalJson& b) {
  auto is_int = [](const CanonicalJson& x) {
    return x.is_number_integer() || x.is_number_unsigned();
  };
  if (is_int(a) && is_int(b)) {
    // canonical integers fit in int64 except full-range uint64, which this
    // domain does not produce; fall back to double there
    if (!a.is_number_unsigned() || a.get<std::uint64_t>() <= INT64_MAX) {
      if (!b.is_number_unsigned() || b.get<std::uint64_t>() <= INT64_MAX) {
        auto x = a.get<std::int64_t>();
        auto y = b.get<std::int64_t>();
        return x < y ? -1 : (x == y ? 0 : 1);
      }
    }
  }
  double x = a.get<double>();
  double y = b.get<double>();
  return x < y ? -1 : (x == y ? 0 : 1);
}

}  // namespace

SchemaNode infer_document(const Json& doc) {
  SchemaNode node;
  switch (doc.type()) {
    case Json::value_t::null:
      node.types.insert("null");
      break;
    case Json::value_t::boolean:
      node.types.insert("boolean");
      break;
    case Json::value_t::string: {
      node.types.insert("string");
      std::size_t len = codepoint_count(doc.get_ref<const std::string&>());
      node.minLength = len;
      node.maxLength = len;
      break;
    }
    case Json::value_t::number_integer:
    case Json::value_t::number_unsigned:
    case Json::value_t::number_float: {
      CanonicalJson value = canonical_number(doc);
      bool integral = value.is_number_integer() || value.is_number_unsigned();
      node.types.insert(integral ? "integer" : "number");
      node.minimum = value;
      node.maximum = value;
      break;
    }
    case Json::value_t::array: {
      node.types.insert("array");
      node.minItems = doc.size();
      node.maxItems = doc.size();
      std::set<std::string> distinct;
      for (const auto& element : doc) distinct.insert(canonical_dump(element));
      node.uniqueItems = distinct.size() == doc.size();
      if (!doc.empty()) {
        SchemaNode items = infer_document(doc.front());
        for (std::size_t i = 1; i < doc.size(); ++i) {
          items = merge_schemas(items, infer_document(doc[i]));
        }
        node.items = Box<SchemaNode>(std::move(items));
      }
      break;
    }
    case Json::value_t::object: {
      node.types.insert("object");
      for (const auto& [key, child] : doc.items()) {
        node.properties.emplace(key, infer_document(child));
        node.required.insert(key);
      }
      node.additionalProperties = false;
      break;
    }
    default:
      throw SchemaError("cannot infer a schema for a non-JSON value");
  }
  return node;
}

SchemaNode merge_schemas(const SchemaNode& a, const SchemaNode& b) {
  SchemaNode out;

  out.types = a.types;
  out.types.insert(b.types.begin(), b.types.end());
  if (out.types.count("number")) out.types.erase("integer");

  const bool aString = a.has_type("string"), bString = b.has_type("string");
  const bool aNumeric = has_numeric_type(a), bNumeric = has_numeric_type(b);
  const bool aArray = a.has_type("array"), bArray = b.has_type("array");
  const bool aObject = a.has_type("object"), bObject = b.has_type("object");

  // A bound survives a one-sided merge only when the other side never
  // observed values of that type; otherwise the extremum is unknown.
  auto merge_low = [](const auto& x, const auto& y, bool xApplies,
                      bool yApplies, auto less) {
    using Opt = std::decay_t<decltype(x)>;
    if (x && y) return less(*x, *y) ? x : y;
    if (x && !yApplies) return x;
    if (y && !xApplies) return y;
    return Opt{};
  };
  auto merge_high = [](const auto& x, const auto& y, bool xApplies,
                       bool yApplies, auto less) {
    using Opt = std::decay_t<decltype(x)>;
    if (x && y) return less(*x, *y) ? y : x;
    if (x && !yApplies) return x;
    if (y && !xApplies) return y;
    return Opt{};
  };
  auto uint_less = [](std::uint64_t l, std::uint64_t r) { return l < r; };
  auto num_less = [](const CanonicalJson& l, const CanonicalJson& r) {
    return compare_scalar_numbers(l, r) < 0;
  };

  out.minLength = merge_low(a.minLength, b.minLength, aString, bString, uint_less);
  out.maxLength = merge_high(a.maxLength, b.maxLength, aString, bString, uint_less);
  out.minItems = merge_low(a.minItems, b.minItems, aArray, bArray, uint_less);
  out.maxItems = merge_high(a.maxItems, b.maxItems, aArray, bArray, uint_less);
  out.minimum = merge_low(a.minimum, b.minimum, aNumeric, bNumeric, num_less);
  out.maximum = merge_high(a.maximum, b.maximum, aNumeric, bNumeric, num_less);

  if (a.uniqueItems && b.uniqueItems) {
    out.uniqueItems = *a.uniqueItems && *b.uniqueItems;
  } else if (a.uniqueItems && !bArray) {
    out.uniqueItems = a.uniqueItems;
  } else if (b.uniqueItems && !aArray) {
    out.uniqueItems = b.uniqueItems;
  }

  if (a.items && b.items) {
    out.items = Box<SchemaNode>(merge_schemas(**a.items, **b.items));
  } else if (a.items) {
    out.items = a.items;
  } else if (b.items) {
    out.items = b.items;
  }

  if (aObject && bObject) {
    for (const auto& [name, sub] : a.properties) {
      auto it = b.properties.find(name);
      out.properties.emplace(
          name, it == b.properties.end() ? sub : merge_schemas(sub, it->second));
    }
    for (const auto& [name, sub] : b.properties) {
      if (!a.properties.count(name)) out.properties.emplace(name, sub);
    }
    std::set_intersection(a.required.begin(), a.required.end(),
                          b.required.begin(), b.required.end(),
                          std::inserter(out.required, out.required.end()));
    bool aClosed = a.additionalProperties && !*a.additionalProperties;
    bool bClosed = b.additionalProperties && !*b.additionalProperties;
    if (aClosed && bClosed) out.additionalProperties = false;
  } else if (aObject) {
    out.properties = a.properties;
    out.required = a.required;
    out.additionalProperties = a.additionalProperties;
  } else if (bObject) {
    out.properties = b.properties;
    out.required = b.required;
    out.additionalProperties = b.additionalProperties;
  }

  if (a.format && b.format && *a.format == *b.format) out.format = a.format;

  if (a.enumValues && b.enumValues) {
    CanonicalJson values = CanonicalJson::array();
    std::set<std::string> seen;
    for (const auto& source : {*a.enumValues, *b.enumValues}) {
      for (const auto& v : source) {
        if (seen.insert(canonical_dump(v)).second) values.push_back(v);
      }
    }
    out.enumValues = std::move(values);
  }

  out.unsatisfiable = a.unsatisfiable && b.unsatisfiable;
  if (a.unsatisfiable != b.unsatisfiable) {
    return a.unsatisfiable ? b : a;  // observed union: the satisfiable side
  }
  return out;
}

SchemaNode discover(const std::vector<Json>& docs) {
  if (docs.empty()) {
    throw SchemaError("cannot discover a schema from an empty collection");
  }
  SchemaNode result = infer_document(docs.front());
  for (std::size_t i = 1; i < docs.size(); ++i) {
    result = merge_schemas(result, infer_document(docs[i]));
  }
  return result;
}

namespace {

bool hoistable(const SchemaNode& node) {
  return node.has_type("object") && !node.properties.empty();
}

KeySetSignature signature_of(const SchemaNode& node) {
  KeySetSignature keys;
  keys.reserve(node.properties.size());
  for (const auto& [name, sub] : node.properties) keys.push_back(name);
  return keys;
}

// Pre-order over properties (sorted) then items; the root itself is never
// a candidate.
void collect_occurrences(const SchemaNode& node, bool isRoot,
                         std::vector<std::pair<KeySetSignature,
                                               const SchemaNode*>>& out) {
  if (!isRoot && hoistable(node)) {
    out.emplace_back(signature_of(node), &node);
  }
  for (const auto& [name, sub] : node.properties) {
    collect_occurrences(sub, false, out);
  }
  if (node.items) collect_occurrences(**node.items, false, out);
}

SchemaNode ref_node(const std::string& name) {
  SchemaNode node;
  node.ref = "#/definitions/" + escape_pointer_segment(name);
  return node;
}

void rewrite_children(SchemaNode& node,
                      const std::map<KeySetSignature, std::string>& names) {
  for (auto& [name, sub] : node.properties) {
    auto it = hoistable(sub) ? names.find(signature_of(sub)) : names.end();
    if (it != names.end()) {
      sub = ref_node(it->second);
    } else {
      rewrite_children(sub, names);
    }
  }
  if (node.items) {
    SchemaNode& sub = **node.items;
    auto it = hoistable(sub) ? names.find(signature_of(sub)) : names.end();
    if (it != names.end()) {
      node.items = Box<SchemaNode>(ref_node(it->second));
    } else {
      rewrite_children(sub, names);
    }
  }
}

}  // namespace

DiscoveredSchema hoist_definitions(const SchemaNode& root, int minCount,
                                   int documentCount) {
  std::vector<std::pair<KeySetSignature, const SchemaNode*>> occurrences;
  collect_occurrences(root, true, occurrences);

  std::map<KeySetSignature, int> counts;
  for (const auto& [sig, node] : occurrences) counts[sig] += 1;

  DiscoveredSchema out;
  out.documentCount = documentCount;
  std::map<KeySetSignature, std::string> names;
  for (const auto& [sig, node] : occurrences) {
    if (counts[sig] >= minCount && !names.count(sig)) {
      std::string name = "defn" + std::to_string(out.order.size());
      names.emplace(sig, name);
      out.order.push_back(std::move(name));
    }
  }

  std::map<std::string, SchemaNode> bodies;
  for (const auto& [sig, node] : occurrences) {
    auto it = names.find(sig);
    if (it == names.end()) continue;
    auto inserted = bodies.find(it->second);
    if (inserted == bodies.end()) {
      bodies.emplace(it->second, *node);
    } else {
      inserted->second = merge_schemas(inserted->second, *node);
    }
  }
  for (auto& [name, body] : bodies) rewrite_children(body, names);

  out.root = root;
  rewrite_children(out.root, names);
  out.root.definitions = std::move(bodies);
  return out;
}

namespace {

SchemaNode dereference_node(const SchemaNode& node, const SchemaNode& root,
                            std::set<std::string>& active) {
  if (node.ref) {
    std::string name = unescape_pointer_segment(
        node.ref->substr(std::string_view("#/definitions/").size()));
    if (!active.insert(name).second) {
      throw SchemaError("$ref cycle through '#/definitions/" + name +
                        "' while dereferencing");
    }
    SchemaNode result = dereference_node(resolve_ref(root, *node.ref), root, active);
    active.erase(name);
    return result;
  }
  SchemaNode out = node;
  for (auto& [name, sub] : out.properties) {
    sub = dereference_node(sub, root, active);
  }
  if (out.items) {
    out.items = Box<SchemaNode>(dereference_node(**out.items, root, active));
  }
  out.definitions.clear();
  return out;
}

}  // namespace

SchemaNode dereference_all(const SchemaNode& root) {
  std::set<std::string> active;
  return dereference_node(root, root, active);
}

}  // namespace jsa

#include "jsa/validate.hpp"

#include <cmath>
#include <set>

namespace jsa {

namespace {

bool is_integral_number(const Json& v) {
  if (v.is_number_integer() || v.is_number_unsigned()) return true;
  if (v.is_number_float()) {
    double d = v.get<double>();
    return std::isfinite(d) && std::trunc(d) == d;
  }
  return false;
}

bool matches_type(const Json& v, const std::string& type) {
  if (type == "null") return v.is_null();
  if (type == "boolean") return v.is_boolean();
  if (type == "string") return v.is_string();
  if (type == "array") return v.is_array();
  if (type == "object") return v.is_object();
  if (type == "number") return v.is_number();
  if (type == "integer") return v.is_number() && is_integral_number(v);
  return false;
}

std::string type_of(const Json& v) {
  switch (v.type()) {
    case Json::value_t::null: return "null";
    case Json::value_t::boolean: return "boolean";
    case Json::value_t::string: return "string";
    case Json::value_t::array: return "array";
    case Json::value_t::object: return "object";
    default: return v.is_number() ? "number" : "unknown";
  }
}

// <0, 0, >0 for a<b, a==b, a>b over JSON numbers.
int compare_numbers(const Json& a, const CanonicalJson& b) {
  // integer fast path avoids double rounding for 64-bit values
  auto both_integer = [](const auto& x) {
    return x.is_number_integer() || x.is_number_unsigned();
  };
  if (both_integer(a) && both_integer(b) && !a.is_number_unsigned() &&
      !b.is_number_unsigned()) {
    auto x = a.template get<std::int64_t>();
    auto y = b.get<std::int64_t>();
    return x < y ? -1 : (x == y ? 0 : 1);
  }
  double x = a.template get<double>();
  double y = b.get<double>();
  return x < y ? -1 : (x == y ? 0 : 1);
}

struct Context {
  const SchemaNode* root;
  std::vector<Violation>* out;
};

void check(const SchemaNode& node, const Json& inst, const Pointer& at,
           std::set<std::string>& activeRefs, const Context& ctx);

void check_children(const SchemaNode& node, const Json& inst,
                    const Pointer& at, const Context& ctx) {
  if (inst.is_object()) {
    for (const auto& [name, sub] : node.properties) {
      auto it = inst.find(name);
      if (it != inst.end()) {
        std::set<std::string> fresh;
        check(sub, *it, at.child(name), fresh, ctx);
      }
    }
  }
  if (inst.is_array() && node.items) {
    std::size_t index = 0;
    for (const auto& element : inst) {
      std::set<std::string> fresh;
      check(**node.items, element, at.child(index), fresh, ctx);
      ++index;
    }
  }
}

void check(const SchemaNode& node, const Json& inst, const Pointer& at,
           std::set<std::string>& activeRefs, const Context& ctx) {
  auto violation = [&](const std::string& keyword, std::string message) {
    ctx.out->push_back(Violation{at, keyword, std::move(message)});
  };

  if (node.unsatisfiable) {
    violation("false", "schema rejects every instance");
    return;
  }

  if (node.ref) {
    std::string name = unescape_pointer_segment(
        node.ref->substr(std::string_view("#/definitions/").size()));
    if (activeRefs.count(name)) {
      throw SchemaError("$ref cycle through '#/definitions/" + name + "'");
    }
    const SchemaNode& target = resolve_ref(*ctx.root, *node.ref);
    activeRefs.insert(name);
    check(target, inst, at, activeRefs, ctx);
    activeRefs.erase(name);
  }

  if (!node.types.empty()) {
    bool matched = false;
    for (const auto& t : node.types) {
      if (matches_type(inst, t)) {
        matched = true;
        break;
      }
    }
    if (!matched) {
      violation("type", "instance type '" + type_of(inst) +
                            "' not permitted here");
    }
  }

  if (node.enumValues) {
    bool member = false;
    CanonicalJson canon = to_canonical(inst);
    for (const auto& candidate : *node.enumValues) {
      if (canon == candidate) {
        member = true;
        break;
      }
    }
    if (!member) violation("enum", "value not in enumeration");
  }

  if (inst.is_string()) {
    std::size_t len = codepoint_count(inst.get_ref<const std::string&>());
    if (node.minLength && len < *node.minLength) {
      violation("minLength", "string shorter than " +
                                 std::to_string(*node.minLength));
    }
    if (node.maxLength && len > *node.maxLength) {
      violation("maxLength",
                "string longer than " + std::to_string(*node.maxLength));
    }
  }

  if (inst.is_number()) {
    if (node.minimum && compare_numbers(inst, *node.minimum) < 0) {
      violation("minimum", "value below minimum");
    }
    if (node.maximum && compare_numbers(inst, *node.maximum) > 0) {
      violation("maximum", "value above maximum");
    }
  }

  if (inst.is_array()) {
    if (node.minItems && inst.size() < *node.minItems) {
      violation("minItems",
                "fewer than " + std::to_string(*node.minItems) + " items");
    }
    if (node.maxItems && inst.size() > *node.maxItems) {
      violation("maxItems",
                "more than " + std::to_string(*node.maxItems) + " items");
    }
    if (node.uniqueItems && *node.uniqueItems) {
      std::set<std::string> seen;
      for (const auto& element : inst) {
        if (!seen.insert(canonical_dump(element)).second) {
          violation("uniqueItems", "duplicate array elements");
          break;
        }
      }
    }
  }

  if (inst.is_object()) {
    for (const auto& name : node.required) {
      if (inst.find(name) == inst.end()) {
        violation("required", "missing required property '" + name + "'");
      }
    }
    if (node.additionalProperties && !*node.additionalProperties) {
      for (const auto& [name, child] : inst.items()) {
        if (node.properties.find(name) == node.properties.end()) {
          ctx.out->push_back(Violation{
              at.child(name), "additionalProperties",
              "property '" + name + "' not permitted"});
        }
      }
    }
  }

  check_children(node, inst, at, ctx);
}

}  // namespace

std::vector<Violation> validate(const SchemaNode& schema, const Json& instance) {
  std::vector<Violation> out;
  Context ctx{&schema, &out};
  std::set<std::string> activeRefs;
  check(schema, instance, Pointer{}, activeRefs, ctx);
  return out;
}

}  // namespace jsa

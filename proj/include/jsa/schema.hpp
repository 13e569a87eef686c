#ifndef JSA_SCHEMA_HPP_
#define JSA_SCHEMA_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jsa/json.hpp"
#include "jsa/pointer.hpp"

namespace jsa {

class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// Deep-copying single-value box so SchemaNode can hold itself (items).
template <typename T>
class Box {
 public:
  Box() : value_(std::make_unique<T>()) {}
  explicit Box(T value) : value_(std::make_unique<T>(std::move(value))) {}
  Box(const Box& other) : value_(std::make_unique<T>(*other.value_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) value_ = std::make_unique<T>(*other.value_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  T& operator*() { return *value_; }
  const T& operator*() const { return *value_; }
  T* operator->() { return value_.get(); }
  const T* operator->() const { return value_.get(); }

 private:
  std::unique_ptr<T> value_;
};

// The schema keyword surface this toolkit understands. Anything else rides
// in unknownKeywords verbatim and is ignored by validation.
struct SchemaNode {
  std::set<std::string> types;  // subset of {null,boolean,integer,number,string,array,object}
  std::map<std::string, SchemaNode> properties;
  std::set<std::string> required;
  std::optional<bool> additionalProperties;  // absent or true = permissive
  std::optional<Box<SchemaNode>> items;
  std::optional<std::uint64_t> minItems;
  std::optional<std::uint64_t> maxItems;
  std::optional<std::uint64_t> minLength;
  std::optional<std::uint64_t> maxLength;
  std::optional<CanonicalJson> minimum;  // number scalar
  std::optional<CanonicalJson> maximum;  // number scalar
  std::optional<bool> uniqueItems;
  std::optional<std::string> format;
  std::optional<CanonicalJson> enumValues;  // array
  std::optional<std::string> ref;           // "#/definitions/<name>"
  std::map<std::string, SchemaNode> definitions;  // root only
  std::map<std::string, std::string> annotations;  // title/description/$comment
  Json unknownKeywords = Json::object();
  bool unsatisfiable = false;  // boolean schema `false`

  bool is_empty_permissive() const;
  bool has_type(std::string_view t) const { return types.count(std::string(t)) > 0; }

  bool operator==(const SchemaNode& other) const;
};

inline const char* const kSchemaTypeNames[] = {
    "null", "boolean", "integer", "number", "string", "array", "object"};

inline const char* const kAnnotationKeywords[] = {"title", "description",
                                                  "$comment"};

// Known keywords populate typed fields, unknown keywords are preserved
// verbatim, boolean schemas map to permissive / unsatisfiable nodes.
// Throws SchemaError on syntax errors, keyword type mismatches, and
// dangling `#/definitions/...` refs.
SchemaNode parse_schema(std::string_view text);

// Same grammar, starting from an already parsed JSON value.
SchemaNode schema_from_json(const Json& value);

CanonicalJson schema_to_json(const SchemaNode& node);

// Deterministic: sorted keys, no whitespace, normalized numbers, ASCII.
std::string serialize_canonical(const SchemaNode& node);

// Removes title/description/$comment at every depth; everything else
// unchanged.
SchemaNode strip_annotations(const SchemaNode& node);

// Pre-order traversal: node, each property subschema (sorted by name),
// items, then (root only) each definition.
std::vector<std::pair<Pointer, const SchemaNode*>> walk(const SchemaNode& root);

// Follows a pointer produced by walk() or a `#/definitions/<name>`
// reference. Navigation continues through $ref nodes when segments remain.
// Throws SchemaError on unresolvable segments.
const SchemaNode& resolve(const SchemaNode& root, const Pointer& ptr);

// Resolves a `#/definitions/<name>` reference string against the root.
const SchemaNode& resolve_ref(const SchemaNode& root, std::string_view ref);

// True if `ref` has the `#/definitions/<name>` shape this toolkit types.
bool is_local_definition_ref(std::string_view ref);

}  // namespace jsa

#endif  // JSA_SCHEMA_HPP_

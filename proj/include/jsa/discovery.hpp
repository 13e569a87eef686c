#ifndef JSA_DISCOVERY_HPP_
#define JSA_DISCOVERY_HPP_

#include <string>
#include <vector>

#include "jsa/json.hpp"
#include "jsa/schema.hpp"

namespace jsa {

// A discovered schema after definition hoisting. Definition bodies live in
// root.definitions; `order` lists the names in numbering order.
struct DiscoveredSchema {
  SchemaNode root;
  std::vector<std::string> order;
  int documentCount = 1;
};

// Sorted property-name set identifying repeated object structure.
using KeySetSignature = std::vector<std::string>;

// Schema satisfied by exactly the observations in one document: strings get
// tight length bounds, numbers tight value bounds, arrays tight size bounds
// with merged element schemas, objects closed with every key required.
SchemaNode infer_document(const Json& doc);

// Least upper bound of two inferred schemas: type union (integer widens to
// number), bounds widened, required intersected, properties merged keywise.
// Commutative, associative, idempotent.
SchemaNode merge_schemas(const SchemaNode& a, const SchemaNode& b);

// Fold of merge_schemas over per-document inference. Every input document
// validates against the result. Throws SchemaError on an empty collection.
SchemaNode discover(const std::vector<Json>& docs);

// Replaces object subschemas whose property-name set occurs at least
// minCount times with refs to numbered definitions (defn0, defn1, ... in
// first-occurrence pre-order). Occurrences are merged into the definition
// body; sites become pure `$ref` nodes.
DiscoveredSchema hoist_definitions(const SchemaNode& root, int minCount = 2,
                                   int documentCount = 1);

// Expands every `$ref` back into the referenced definition body and drops
// the definitions map; used to compare semantics before/after hoisting.
SchemaNode dereference_all(const SchemaNode& root);

}  // namespace jsa

#endif  // JSA_DISCOVERY_HPP_

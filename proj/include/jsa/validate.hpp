#ifndef JSA_VALIDATE_HPP_
#define JSA_VALIDATE_HPP_

#include <string>
#include <vector>

#include "jsa/json.hpp"
#include "jsa/pointer.hpp"
#include "jsa/schema.hpp"

namespace jsa {

// A failed keyword check at a location in the instance.
struct Violation {
  Pointer location;  // into the instance
  std::string keyword;
  std::string message;

  bool operator==(const Violation& other) const = default;
};

// Validates `instance` against the supported keyword vocabulary. `format`
// is annotation-only and never fails. References are dereferenced against
// the root's definitions with cycle detection; unresolvable refs and ref
// cycles throw SchemaError.
std::vector<Violation> validate(const SchemaNode& schema, const Json& instance);

}  // namespace jsa

#endif  // JSA_VALIDATE_HPP_

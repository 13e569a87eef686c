#ifndef JSA_JSON_HPP_
#define JSA_JSON_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace jsa {

// Document values keep the key order they were parsed with; equality is
// structural (see structurally_equal).
using Json = nlohmann::ordered_json;

// Plain nlohmann::json sorts object keys, which is exactly the canonical
// ordering (byte-wise lexicographic == code-point order for UTF-8).
using CanonicalJson = nlohmann::json;

class JsonError : public std::runtime_error {
 public:
  explicit JsonError(const std::string& what) : std::runtime_error(what) {}
};

// Parse with position-reported syntax errors (wraps nlohmann exceptions
// into JsonError).
Json parse_json(std::string_view text);

// Canonical form: object keys sorted, integral floating-point numbers
// normalized to integers (so 2.0 and 2 serialize identically).
CanonicalJson to_canonical(const Json& value);
CanonicalJson to_canonical(const CanonicalJson& value);

// Deterministic single-line serialization of the canonical form; non-ASCII
// escaped so output length equals character count.
std::string canonical_dump(const Json& value);
std::string canonical_dump(const CanonicalJson& value);

// Key-order-independent equality with numeric cross-type comparison
// (1 == 1.0).
bool structurally_equal(const Json& a, const Json& b);

// FNV-1a with the seed folded in; stable across platforms and runs.
std::uint64_t stable_hash64(std::string_view data, std::uint64_t seed = 0);

// Number of Unicode code points in a UTF-8 string.
std::size_t codepoint_count(std::string_view utf8);

}  // namespace jsa

#endif  // JSA_JSON_HPP_

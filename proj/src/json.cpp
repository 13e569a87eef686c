#include "jsa/json.hpp"

#include <cmath>
#include <cstdlib>

namespace jsa {

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw JsonError(std::string("JSON syntax error at byte ") +
                    std::to_string(e.byte) + ": " + e.what());
  }
}

namespace {

template <typename In>
CanonicalJson canonicalize(const In& value) {
  switch (value.type()) {
    case In::value_t::object: {
      CanonicalJson out = CanonicalJson::object();
      for (const auto& [key, child] : value.items()) {
        out[key] = canonicalize(child);
      }
      return out;
    }
    case In::value_t::array: {
      CanonicalJson out = CanonicalJson::array();
      for (const auto& child : value) {
        out.push_back(canonicalize(child));
      }
      return out;
    }
    case In::value_t::number_float: {
      const double d = value.template get<double>();
      if (std::isfinite(d) && std::trunc(d) == d &&
          std::abs(d) <= 9007199254740992.0) {
        return CanonicalJson(static_cast<std::int64_t>(d));
      }
      return CanonicalJson(d);
    }
    default:
      return CanonicalJson(value);
  }
}

}  // namespace

CanonicalJson to_canonical(const Json& value) { return canonicalize(value); }
CanonicalJson to_canonical(const CanonicalJson& value) {
  return canonicalize(value);
}

std::string canonical_dump(const Json& value) {
  return to_canonical(value).dump(-1, ' ', true);
}

std::string canonical_dump(const CanonicalJson& value) {
  return to_canonical(value).dump(-1, ' ', true);
}

bool structurally_equal(const Json& a, const Json& b) {
  return to_canonical(a) == to_canonical(b);
}

std::uint64_t stable_hash64(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = 14695981039346656037ull ^ (seed * 1099511628211ull);
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  // splitmix finalizer to spread low-entropy inputs
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ull;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebull;
  h ^= h >> 31;
  return h;
}

std::size_t codepoint_count(std::string_view utf8) {
  std::size_t n = 0;
  for (unsigned char c : utf8) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace jsa

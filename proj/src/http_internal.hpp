#ifndef JSA_SRC_HTTP_INTERNAL_HPP_
#define JSA_SRC_HTTP_INTERNAL_HPP_

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <thread>

namespace jsa::internal {

struct ParsedUrl {
  std::string scheme;
  std::string hostport;  // host or host:port
  std::string path;      // leading '/', possibly with query
};

inline std::optional<ParsedUrl> parse_url(std::string_view url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) return std::nullopt;
  ParsedUrl out;
  out.scheme = std::string(url.substr(0, scheme_end));
  auto rest = url.substr(scheme_end + 3);
  auto slash = rest.find('/');
  if (slash == std::string_view::npos) {
    out.hostport = std::string(rest);
    out.path = "/";
  } else {
    out.hostport = std::string(rest.substr(0, slash));
    out.path = std::string(rest.substr(slash));
  }
  if (out.hostport.empty()) return std::nullopt;
  return out;
}

inline std::string percent_encode(std::string_view text) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    bool safe = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.' ||
                c == '~';
    if (safe) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xF];
    }
  }
  return out;
}

inline void backoff_sleep(int attempt, int baseMs) {
  if (baseMs <= 0) return;
  auto delay = std::chrono::milliseconds(baseMs * (1 << attempt));
  std::this_thread::sleep_for(delay);
}

}  // namespace jsa::internal

#endif  // JSA_SRC_HTTP_INTERNAL_HPP_

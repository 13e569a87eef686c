#include "jsa/pointer.hpp"

#include "jsa/json.hpp"

namespace jsa {

std::string escape_pointer_segment(std::string_view segment) {
  std::string out;
  out.reserve(segment.size());
  for (char c : segment) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string unescape_pointer_segment(std::string_view segment) {
  std::string out;
  out.reserve(segment.size());
  for (std::size_t i = 0; i < segment.size(); ++i) {
    if (segment[i] == '~') {
      if (i + 1 >= segment.size()) {
        throw JsonError("dangling '~' in JSON pointer segment");
      }
      char next = segment[i + 1];
      if (next == '0') {
        out += '~';
      } else if (next == '1') {
        out += '/';
      } else {
        throw JsonError(std::string("invalid pointer escape '~") + next + "'");
      }
      ++i;
    } else {
      out += segment[i];
    }
  }
  return out;
}

Pointer Pointer::parse(std::string_view text) {
  if (text.empty()) return Pointer{};
  if (text.front() != '/') {
    throw JsonError("JSON pointer must be empty or start with '/': " +
                    std::string(text));
  }
  std::vector<std::string> segments;
  std::size_t start = 1;
  while (true) {
    std::size_t slash = text.find('/', start);
    if (slash == std::string_view::npos) {
      segments.push_back(unescape_pointer_segment(text.substr(start)));
      break;
    }
    segments.push_back(
        unescape_pointer_segment(text.substr(start, slash - start)));
    start = slash + 1;
  }
  return Pointer{std::move(segments)};
}

Pointer Pointer::child(std::string_view segment) const {
  std::vector<std::string> segments = segments_;
  segments.emplace_back(segment);
  return Pointer{std::move(segments)};
}

Pointer Pointer::child(std::size_t index) const {
  return child(std::to_string(index));
}

std::string Pointer::to_string() const {
  std::string out;
  for (const auto& segment : segments_) {
    out += '/';
    out += escape_pointer_segment(segment);
  }
  return out;
}

}  // namespace jsa

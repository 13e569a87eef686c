#ifndef JSA_POINTER_HPP_
#define JSA_POINTER_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace jsa {

// JSON-Pointer path (RFC 6901): a list of unescaped reference tokens.
// The textual form joins tokens with '/' and escapes '~' as ~0, '/' as ~1.
class Pointer {
 public:
  Pointer() = default;
  explicit Pointer(std::vector<std::string> segments)
      : segments_(std::move(segments)) {}

  // Parses "" or "/a/b~1c"; throws JsonError on malformed escapes or a
  // non-empty pointer that does not start with '/'.
  static Pointer parse(std::string_view text);

  const std::vector<std::string>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }
  std::size_t size() const { return segments_.size(); }
  const std::string& back() const { return segments_.back(); }

  Pointer child(std::string_view segment) const;
  Pointer child(std::size_t index) const;

  std::string to_string() const;

  bool operator==(const Pointer& other) const = default;
  bool operator<(const Pointer& other) const {
    return segments_ < other.segments_;
  }

 private:
  std::vector<std::string> segments_;
};

std::string escape_pointer_segment(std::string_view segment);
std::string unescape_pointer_segment(std::string_view segment);

}  // namespace jsa

#endif  // JSA_POINTER_HPP_

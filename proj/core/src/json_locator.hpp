#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>

namespace nlheat::detail {

/// Byte offsets of every member key and array element in a JSON text,
/// addressed by JSON pointer. Assumes the text already parsed successfully.
class JsonLocator {
public:
  explicit JsonLocator(std::string text);

  std::pair<std::size_t, std::size_t> line_col(std::size_t offset) const;
  /// "line L, column C" for the pointer, falling back to its nearest ancestor.
  std::string where(const std::string& pointer) const;

private:
  std::size_t value(std::size_t pos, const std::string& path);
  std::size_t skip_ws(std::size_t pos) const;
  std::size_t string_end(std::size_t pos) const;

  std::string text_;
  std::map<std::string, std::size_t> offsets_;
};

std::string escape_pointer_token(const std::string& key);

}  // namespace nlheat::detail

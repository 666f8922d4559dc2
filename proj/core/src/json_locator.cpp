#include "json_locator.hpp"

#include <algorithm>
#include <string_view>

namespace nlheat::detail {

std::string escape_pointer_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

JsonLocator::JsonLocator(std::string text) : text_(std::move(text)) {
  offsets_[""] = skip_ws(0);
  value(skip_ws(0), "");
}

std::size_t JsonLocator::skip_ws(std::size_t pos) const {
  while (pos < text_.size() && (text_[pos] == ' ' || text_[pos] == '\t' || text_[pos] == '\n' || text_[pos] == '\r'))
    ++pos;
  return pos;
}

// Position just past the closing quote of the string starting at pos.
std::size_t JsonLocator::string_end(std::size_t pos) const {
  ++pos;
  while (pos < text_.size() && text_[pos] != '"') pos += text_[pos] == '\\' ? 2 : 1;
  return std::min(pos + 1, text_.size());
}

std::size_t JsonLocator::value(std::size_t pos, const std::string& path) {
  pos = skip_ws(pos);
  if (pos >= text_.size()) return pos;
  const char c = text_[pos];
  if (c == '{') {
    pos = skip_ws(pos + 1);
    while (pos < text_.size() && text_[pos] != '}') {
      const std::size_t key_start = pos;
      const std::size_t key_end = string_end(pos);
      const std::string key = text_.substr(key_start + 1, key_end - key_start - 2);
      const std::string child = path + "/" + escape_pointer_token(key);
      offsets_[child] = key_start;
      pos = skip_ws(key_end);
      if (pos < text_.size() && text_[pos] == ':') ++pos;
      pos = skip_ws(value(pos, child));
      if (pos < text_.size() && text_[pos] == ',') pos = skip_ws(pos + 1);
    }
    return pos + 1;
  }
  if (c == '[') {
    pos = skip_ws(pos + 1);
    std::size_t index = 0;
    while (pos < text_.size() && text_[pos] != ']') {
      const std::string child = path + "/" + std::to_string(index++);
      offsets_[child] = pos;
      pos = skip_ws(value(pos, child));
      if (pos < text_.size() && text_[pos] == ',') pos = skip_ws(pos + 1);
    }
    return pos + 1;
  }
  if (c == '"') return string_end(pos);
  while (pos < text_.size() && std::string_view(",}] \t\r\n").find(text_[pos]) == std::string_view::npos) ++pos;
  return pos;
}

std::pair<std::size_t, std::size_t> JsonLocator::line_col(std::size_t offset) const {
  offset = std::min(offset, text_.size());
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset; ++i) {
    if (text_[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::string JsonLocator::where(const std::string& pointer) const {
  std::string p = pointer;
  while (true) {
    const auto it = offsets_.find(p);
    if (it != offsets_.end()) {
      const auto [line, col] = line_col(it->second);
      return "line " + std::to_string(line) + ", column " + std::to_string(col);
    }
    if (p.empty()) return "line 1, column 1";
    p = p.substr(0, p.rfind('/'));
  }
}

}  // namespace nlheat::detail

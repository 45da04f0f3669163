#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pedtrack {

// Unusable user input: missing files, malformed headers, bad config values.
// The CLI maps this to exit code 2; everything else exits 1.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

inline std::string_view trim(std::string_view s) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

// Shortest decimal form that round-trips; keeps written files byte-stable.
inline std::string fmt_num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string fmt_num(int v) { return std::to_string(v); }

inline double parse_double(std::string_view raw, const std::string& context) {
  std::string_view s = trim(raw);
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw InputError(context + ": not a number: '" + std::string(s) + "'");
  return v;
}

inline long parse_long(std::string_view raw, const std::string& context) {
  std::string_view s = trim(raw);
  long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw InputError(context + ": not an integer: '" + std::string(s) + "'");
  return v;
}

inline int parse_int(std::string_view raw, const std::string& context) {
  return static_cast<int>(parse_long(raw, context));
}

}  // namespace pedtrack

#pragma once

#include "korenblum/errors.hpp"

#include <cctype>
#include <cstdlib>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace korenblum::detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

inline double parse_real(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw ParseError("expected a number");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw ParseError("not a number: '" + s + "'");
  return v;
}

inline long long parse_int(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw ParseError("expected an integer");
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) throw ParseError("not an integer: '" + s + "'");
  return v;
}

/// `a=1,b=2` -> {a:1, b:2}; bare words map to "".
inline std::map<std::string, std::string> parse_kv(std::string_view s) {
  std::map<std::string, std::string> out;
  if (trim(s).empty()) return out;
  for (const std::string& item : split(s, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      out[item] = "";
    } else {
      out[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }
  }
  return out;
}

}  // namespace korenblum::detail

#pragma once

// Reader for the plain variable-assignment subset of GNU make syntax.
//
// Only the four assignment operators are understood. No `$(...)` expansion,
// functions, conditionals, or includes are evaluated: the values recovered
// here are the literal right-hand sides, which is what generated Makefiles
// record their generator arguments in.

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace oppbridge {

/// Variable name to value, with continuation lines already joined.
using VariableMap = std::map<std::string, std::string, std::less<>>;

namespace detail {

inline constexpr std::string_view kBlank = " \t\r\f\v";

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(kBlank);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kBlank);
  return s.substr(first, last - first + 1);
}

inline std::string_view trim_left(std::string_view s) {
  const auto first = s.find_first_not_of(kBlank);
  return first == std::string_view::npos ? std::string_view{} : s.substr(first);
}

inline std::string_view trim_right(std::string_view s) {
  const auto last = s.find_last_not_of(kBlank);
  return last == std::string_view::npos ? std::string_view{} : s.substr(0, last + 1);
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

// A physical line continues when it ends in an odd number of backslashes.
inline bool continues(std::string_view line) {
  std::size_t n = 0;
  while (n < line.size() && line[line.size() - 1 - n] == '\\') ++n;
  return n % 2 == 1;
}

struct LogicalLine {
  std::string text;
  bool recipe = false;
};

// Joins backslash continuations: the backslash and the whitespace around the
// line break collapse into a single space.
inline std::vector<LogicalLine> logical_lines(std::string_view text) {
  std::vector<LogicalLine> out;
  const auto physical = split_lines(text);
  for (std::size_t i = 0; i < physical.size(); ++i) {
    LogicalLine line;
    line.recipe = !physical[i].empty() && physical[i].front() == '\t';
    std::string_view part = physical[i];
    while (continues(part) && i + 1 < physical.size()) {
      part.remove_suffix(1);
      line.text += trim_right(part);
      line.text += ' ';
      part = trim_left(physical[++i]);
    }
    if (continues(part)) part.remove_suffix(1);
    line.text += part;
    out.push_back(std::move(line));
  }
  return out;
}

inline bool valid_variable_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (c == ' ' || c == '\t' || c == ':' || c == '#' || c == '=') return false;
  }
  return true;
}

}  // namespace detail

/// Parses `NAME = v`, `NAME := v` (also `::=`), `NAME ?= v` and `NAME += v`
/// assignments. Recipe lines (leading tab) are ignored, `#` starts a comment
/// anywhere else, and lines that are not assignments are skipped.
inline VariableMap parse_makefile_variables(std::string_view text) {
  VariableMap vars;
  for (const auto& line : detail::logical_lines(text)) {
    if (line.recipe) continue;
    std::string_view body = line.text;
    if (auto hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) continue;

    std::string_view lhs = body.substr(0, eq);
    char op = '=';
    if (!lhs.empty() && (lhs.back() == ':' || lhs.back() == '?' || lhs.back() == '+')) {
      op = lhs.back();
      lhs.remove_suffix(1);
      if (op == ':' && !lhs.empty() && lhs.back() == ':') lhs.remove_suffix(1);
    }
    lhs = detail::trim(lhs);
    for (std::string_view prefix : {"export ", "override "}) {
      if (lhs.starts_with(prefix)) lhs = detail::trim(lhs.substr(prefix.size()));
    }
    if (!detail::valid_variable_name(lhs)) continue;

    const std::string value{detail::trim(body.substr(eq + 1))};
    const auto existing = vars.find(lhs);
    switch (op) {
      case '?':
        if (existing == vars.end()) vars.emplace(std::string{lhs}, value);
        break;
      case '+':
        if (existing == vars.end()) {
          vars.emplace(std::string{lhs}, value);
        } else if (existing->second.empty()) {
          existing->second = value;
        } else if (!value.empty()) {
          existing->second += ' ';
          existing->second += value;
        }
        break;
      default:
        vars.insert_or_assign(std::string{lhs}, value);
        break;
    }
  }
  return vars;
}

}  // namespace oppbridge

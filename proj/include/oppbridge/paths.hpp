#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "oppbridge/error.hpp"

namespace oppbridge {

namespace fs = std::filesystem;

/// Absolute, lexically normalized, without a trailing separator.
/// Symlinks are deliberately not resolved so output stays a function of the
/// spelled input.
inline fs::path normalize_path(const fs::path& p) {
  fs::path out = (p.is_absolute() ? p : fs::absolute(p)).lexically_normal();
  if (!out.has_filename() && out.has_relative_path()) out = out.parent_path();
  return out;
}

/// True if `p` is `root` or lies below it. Both must already be normalized.
inline bool is_within(const fs::path& root, const fs::path& p) {
  auto r = root.begin();
  auto q = p.begin();
  for (; r != root.end(); ++r, ++q) {
    if (q == p.end() || *r != *q) return false;
  }
  return true;
}

/// Forward-slash spelling used in every emitted file.
inline std::string to_generic(const fs::path& p) { return p.generic_string(); }

inline std::optional<std::string> try_read_file(const fs::path& p) {
  std::error_code ec;
  if (!fs::is_regular_file(p, ec)) return std::nullopt;
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string read_file(const fs::path& p) {
  auto text = try_read_file(p);
  if (!text) throw Error(Errc::Io, "cannot read " + p.string());
  return std::move(*text);
}

}  // namespace oppbridge

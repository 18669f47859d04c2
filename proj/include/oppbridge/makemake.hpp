#pragma once

// Recovery of build metadata from opp_makemake-generated Makefiles.
//
// A generated Makefile records the arguments it was generated with in the
// MAKEMAKE_OPTIONS variable. Those arguments name the produced binary, its
// kind and output directory, and the include directories and definitions a
// consumer needs. Together with the project's .nedfolders file this is all
// that is required to wrap the prebuilt binary as an imported target.

#include <algorithm>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "oppbridge/diagnostic.hpp"
#include "oppbridge/error.hpp"
#include "oppbridge/makefile.hpp"
#include "oppbridge/paths.hpp"
#include "oppbridge/tokenizer.hpp"

namespace oppbridge {

enum class TargetKind { executable, shared_lib, static_lib };

constexpr std::string_view to_string(TargetKind kind) noexcept {
  switch (kind) {
    case TargetKind::executable: return "executable";
    case TargetKind::shared_lib: return "shared_lib";
    case TargetKind::static_lib: return "static_lib";
  }
  return "unknown";
}

struct MakemakeInvocation {
  std::string target_name;
  TargetKind kind = TargetKind::executable;
  fs::path output_dir = "out";
  std::vector<fs::path> include_dirs;
  std::vector<std::string> defines;
  std::vector<std::string> link_libs;
  std::vector<fs::path> link_dirs;
  std::vector<fs::path> submake_dirs;
  std::vector<fs::path> excluded_dirs;
  bool deep = false;
  std::vector<std::string> unrecognized;

  friend bool operator==(const MakemakeInvocation&, const MakemakeInvocation&) = default;
};

/// One legacy project: where it lives, how it was generated, and which
/// folders hold its NED files. After extraction `invocation.include_dirs`
/// and `invocation.output_dir` are absolute.
struct ProjectMetadata {
  std::string name;
  fs::path project_root;
  MakemakeInvocation invocation;
  std::vector<fs::path> ned_folders;
  std::vector<Diagnostic> diagnostics;

  friend bool operator==(const ProjectMetadata&, const ProjectMetadata&) = default;
};

namespace detail {

template <typename T>
void push_unique(std::vector<T>& list, T value) {
  if (std::find(list.begin(), list.end(), value) == list.end()) {
    list.push_back(std::move(value));
  }
}

}  // namespace detail

/// Interprets opp_makemake arguments. `fallback_name` names the target when
/// no `-o` is given (callers pass the Makefile directory's last component).
inline MakemakeInvocation parse_makemake_options(const std::vector<std::string>& tokens,
                                                 std::string_view fallback_name = {}) {
  MakemakeInvocation inv;
  std::string name;

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& tok = tokens[i];

    // Value of a flag given either attached (-Ifoo) or detached (-I foo).
    auto argument = [&]() -> std::string {
      if (tok.size() > 2) return tok.substr(2);
      if (i + 1 >= tokens.size()) {
        throw Error(Errc::MissingArgument, "option '" + tok + "' requires an argument", {tok});
      }
      return tokens[++i];
    };

    if (tok == "--make-so" || tok == "-s") {
      inv.kind = TargetKind::shared_lib;
    } else if (tok == "--make-lib" || tok == "-a") {
      inv.kind = TargetKind::static_lib;
    } else if (tok == "--deep") {
      inv.deep = true;
    } else if (tok == "-f" || tok == "-r") {
      // regeneration flags; no effect on the produced binary
    } else if (tok.size() >= 2 && tok[0] == '-' && tok[1] != '-') {
      switch (tok[1]) {
        case 'o': name = argument(); break;
        case 'O': inv.output_dir = argument(); break;
        case 'I': detail::push_unique(inv.include_dirs, fs::path{argument()}); break;
        case 'D': detail::push_unique(inv.defines, argument()); break;
        case 'L': inv.link_dirs.emplace_back(argument()); break;
        case 'l': inv.link_libs.push_back(argument()); break;
        case 'd': inv.submake_dirs.emplace_back(argument()); break;
        case 'X': inv.excluded_dirs.emplace_back(argument()); break;
        default: inv.unrecognized.push_back(tok); break;
      }
    } else {
      inv.unrecognized.push_back(tok);
    }
  }

  inv.target_name = name.empty() ? std::string{fallback_name} : name;
  if (inv.target_name.empty()) {
    throw Error(Errc::InvalidValue, "no target name: missing -o and no fallback name");
  }
  return inv;
}

/// Reads a `.nedfolders` listing. Each entry is relative to `project_root`.
///
/// Blank text stands for a missing file and yields the project root as the
/// only NED folder. A file with content but no entries (only comments)
/// declares that the project has no NED folders at all.
inline std::vector<fs::path> parse_nedfolders(std::string_view text, const fs::path& project_root) {
  const fs::path root = normalize_path(project_root);
  if (text.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos) return {root};

  std::vector<fs::path> folders;
  for (auto line : detail::split_lines(text)) {
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const fs::path folder = normalize_path(root / fs::path{line});
    if (!is_within(root, folder)) {
      throw Error(Errc::PathEscape,
                  "NED folder '" + std::string{line} + "' lies outside project root " +
                      to_generic(root),
                  {std::string{line}});
    }
    detail::push_unique(folders, folder);
  }
  return folders;
}

/// Directory holding `.nedfolders`, searched upwards from the Makefile's
/// directory; the Makefile's directory itself when no such file exists.
inline fs::path find_project_root(const fs::path& makefile_dir) {
  std::error_code ec;
  for (fs::path dir = makefile_dir;; dir = dir.parent_path()) {
    if (fs::exists(dir / ".nedfolders", ec)) return dir;
    if (dir == dir.parent_path()) break;
  }
  return makefile_dir;
}

inline ProjectMetadata extract_project_metadata(const fs::path& makefile_path, std::string_view name) {
  const fs::path makefile = normalize_path(makefile_path);
  const fs::path makefile_dir = makefile.parent_path();

  const auto vars = parse_makefile_variables(read_file(makefile));
  const auto options = vars.find("MAKEMAKE_OPTIONS");
  if (options == vars.end()) {
    throw Error(Errc::NoMakemakeOptions,
                to_generic(makefile) + " defines no MAKEMAKE_OPTIONS; not generated by opp_makemake");
  }

  ProjectMetadata meta;
  meta.invocation =
      parse_makemake_options(tokenize_options(options->second), makefile_dir.filename().string());
  meta.name = name.empty() ? meta.invocation.target_name : std::string{name};
  meta.project_root = find_project_root(makefile_dir);

  for (auto& dir : meta.invocation.include_dirs) dir = normalize_path(makefile_dir / dir);
  meta.invocation.output_dir = normalize_path(makefile_dir / meta.invocation.output_dir);

  const auto nedfolders = try_read_file(meta.project_root / ".nedfolders");
  meta.ned_folders = parse_nedfolders(nedfolders.value_or(std::string{}), meta.project_root);

  if (meta.invocation.deep) {
    meta.diagnostics.push_back(
        {Severity::error, DiagnosticCode::DeepIncludesUnsupported, meta.name,
         "project is generated with --deep; deep includes cannot be imported"});
  }
  return meta;
}

}  // namespace oppbridge

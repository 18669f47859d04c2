#pragma once

// Discovery of an OMNeT++ installation from its directory shape.

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oppbridge/error.hpp"
#include "oppbridge/makefile.hpp"
#include "oppbridge/paths.hpp"

namespace oppbridge {

/// Library file naming convention of the target platform.
struct NamingRule {
  std::string prefix = "lib";
  std::string shared_suffix = ".so";
  std::string static_suffix = ".a";

  std::string file_name(std::string_view base, bool shared) const {
    return prefix + std::string{base} + (shared ? shared_suffix : static_suffix);
  }
};

/// Release and debug builds of one library. The debug file's stem is the
/// release stem with "d" appended.
struct LibraryPair {
  std::string base_name;
  std::optional<fs::path> release_path;
  std::optional<fs::path> debug_path;
  bool shared = true;

  friend bool operator==(const LibraryPair&, const LibraryPair&) = default;
};

struct OmnetppInstallation {
  fs::path root;
  std::string version;
  fs::path include_dir;
  fs::path lib_dir;
  std::vector<std::string> compile_definitions;
  std::vector<LibraryPair> libraries;

  friend bool operator==(const OmnetppInstallation&, const OmnetppInstallation&) = default;
};

struct MakefileIncInfo {
  std::string version;
  std::vector<std::string> compile_definitions;

  friend bool operator==(const MakefileIncInfo&, const MakefileIncInfo&) = default;
};

inline MakefileIncInfo parse_makefile_inc(std::string_view text) {
  const auto vars = parse_makefile_variables(text);
  MakefileIncInfo info;

  const auto version = vars.find("OMNETPP_VERSION");
  if (version == vars.end() || version->second.empty()) {
    throw Error(Errc::NoVersion, "Makefile.inc does not define OMNETPP_VERSION");
  }
  info.version = version->second;

  for (std::string_view var : {"CFLAGS", "CFLAGS_RELEASE", "CFLAGS_DEBUG", "DEFINES"}) {
    const auto it = vars.find(var);
    if (it == vars.end()) continue;
    std::string_view rest = it->second;
    while (!rest.empty()) {
      const auto start = rest.find_first_not_of(detail::kBlank);
      if (start == std::string_view::npos) break;
      rest.remove_prefix(start);
      const auto end = std::min(rest.find_first_of(detail::kBlank), rest.size());
      const auto token = rest.substr(0, end);
      rest.remove_prefix(end);
      if (token.size() > 2 && token.starts_with("-D")) {
        std::string def{token.substr(2)};
        if (std::find(info.compile_definitions.begin(), info.compile_definitions.end(), def) ==
            info.compile_definitions.end()) {
          info.compile_definitions.push_back(std::move(def));
        }
      }
    }
  }
  return info;
}

/// Pairs `<prefix>opp*<suffix>` files in `lib_dir` into release/debug pairs.
///
/// Shared libraries are scanned before static ones; a static library whose
/// stem was already claimed by a shared one is not scanned. Within one
/// suffix, stems are classified shortest first: a stem ending in "d" is the
/// debug member of the pair named by its d-stripped stem when that stem
/// exists and is itself a release member. Every other stem is the release
/// member of its own pair, so a lone "...d" library counts as release.
inline std::vector<LibraryPair> enumerate_libraries(const fs::path& lib_dir,
                                                    const NamingRule& naming = {}) {
  std::map<std::string, LibraryPair> pairs;
  std::set<std::string> claimed;
  std::error_code ec;

  for (const bool shared : {true, false}) {
    const std::string& suffix = shared ? naming.shared_suffix : naming.static_suffix;
    std::vector<std::string> stems;
    for (const auto& entry : fs::directory_iterator(lib_dir, ec)) {
      if (!entry.is_regular_file(ec)) continue;
      const std::string file = entry.path().filename().string();
      if (file.size() <= naming.prefix.size() + suffix.size()) continue;
      if (!file.starts_with(naming.prefix) || !file.ends_with(suffix)) continue;
      std::string stem = file.substr(naming.prefix.size(),
                                     file.size() - naming.prefix.size() - suffix.size());
      if (!stem.starts_with("opp") || claimed.contains(stem)) continue;
      stems.push_back(std::move(stem));
    }
    std::sort(stems.begin(), stems.end(), [](const std::string& a, const std::string& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });

    std::set<std::string> release_stems;
    for (const auto& stem : stems) {
      const fs::path path = normalize_path(lib_dir / naming.file_name(stem, shared));
      if (stem.back() == 'd') {
        const std::string base = stem.substr(0, stem.size() - 1);
        if (release_stems.contains(base)) {
          pairs.at(base).debug_path = path;
          continue;
        }
      }
      release_stems.insert(stem);
      pairs.emplace(stem, LibraryPair{stem, path, std::nullopt, shared});
    }
    claimed.insert(stems.begin(), stems.end());
  }

  std::vector<LibraryPair> out;
  out.reserve(pairs.size());
  for (auto& [_, pair] : pairs) out.push_back(std::move(pair));
  return out;
}

namespace detail {

inline bool is_executable_file(const fs::path& p) {
  std::error_code ec;
  const auto st = fs::status(p, ec);
  if (ec || !fs::is_regular_file(st)) return false;
  using fs::perms;
  return (st.permissions() & (perms::owner_exec | perms::group_exec | perms::others_exec)) !=
         perms::none;
}

}  // namespace detail

/// Tries candidate roots in order: `explicit_root`, `env_root`, then the
/// parent of every PATH entry that contains an `omnetpp` executable. A
/// candidate is accepted if it holds `Makefile.inc` and `include/omnetpp.h`.
inline OmnetppInstallation locate_installation(const std::optional<fs::path>& explicit_root,
                                               const std::optional<fs::path>& env_root,
                                               const std::vector<fs::path>& path_entries,
                                               const NamingRule& naming = {}) {
  std::vector<std::pair<fs::path, std::string>> candidates;
  auto add = [&](const fs::path& p, std::string origin) {
    candidates.emplace_back(normalize_path(p), std::move(origin));
  };
  if (explicit_root && !explicit_root->empty()) add(*explicit_root, "explicit root");
  if (env_root && !env_root->empty()) add(*env_root, "OMNETPP_ROOT");
  for (const auto& entry : path_entries) {
    if (entry.empty()) continue;
    if (detail::is_executable_file(entry / "omnetpp")) {
      add(normalize_path(entry).parent_path(), "PATH entry " + to_generic(entry));
    }
  }

  std::set<fs::path> tried;
  std::string report;
  for (const auto& [root, origin] : candidates) {
    if (!tried.insert(root).second) continue;
    std::string reason;
    const auto makefile_inc = try_read_file(root / "Makefile.inc");
    std::error_code ec;
    if (!makefile_inc) {
      reason = "no Makefile.inc";
    } else if (!fs::is_regular_file(root / "include" / "omnetpp.h", ec)) {
      reason = "no include/omnetpp.h";
    } else {
      try {
        auto info = parse_makefile_inc(*makefile_inc);
        OmnetppInstallation inst;
        inst.root = root;
        inst.version = std::move(info.version);
        inst.include_dir = root / "include";
        inst.lib_dir = root / "lib";
        inst.compile_definitions = std::move(info.compile_definitions);
        if (fs::is_directory(inst.lib_dir, ec)) {
          inst.libraries = enumerate_libraries(inst.lib_dir, naming);
        }
        return inst;
      } catch (const Error& e) {
        reason = e.what();
      }
    }
    report += "\n  " + to_generic(root) + " (" + origin + "): " + reason;
  }

  if (report.empty()) report = "\n  (no candidates: no root given and no omnetpp executable on PATH)";
  throw Error(Errc::NotFound, "OMNeT++ installation not found; candidates tried:" + report);
}

}  // namespace oppbridge

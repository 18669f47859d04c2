#pragma once

// Text generation for CMake import-target files, the OMNeT++ toolchain file
// and opp_run launch scripts. Output is byte-deterministic: LF line endings,
// a trailing newline, absolute forward-slash paths, nothing host- or
// time-dependent.

#include <algorithm>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oppbridge/error.hpp"
#include "oppbridge/makemake.hpp"
#include "oppbridge/omnetpp.hpp"
#include "oppbridge/paths.hpp"

namespace oppbridge {

inline constexpr std::string_view kGeneratedHeader = "# Generated by opp-bridge -- DO NOT EDIT";

struct EmittedArtifact {
  fs::path destination;  // empty: standard output
  std::string content;

  friend bool operator==(const EmittedArtifact&, const EmittedArtifact&) = default;
};

struct RunCommand {
  fs::path runner_path;
  std::vector<fs::path> ned_path;
  std::vector<fs::path> library_paths;
  fs::path ini_file;
};

enum class BuildMode { none, release_only, debug_only, both };

constexpr std::string_view to_string(BuildMode mode) noexcept {
  switch (mode) {
    case BuildMode::none: return "none";
    case BuildMode::release_only: return "release-only";
    case BuildMode::debug_only: return "debug-only";
    case BuildMode::both: return "both";
  }
  return "unknown";
}

inline fs::path release_library_path(const ProjectMetadata& meta, const NamingRule& naming = {}) {
  const bool shared = meta.invocation.kind == TargetKind::shared_lib;
  return meta.invocation.output_dir / naming.file_name(meta.invocation.target_name, shared);
}

inline fs::path debug_library_path(const ProjectMetadata& meta, const NamingRule& naming = {}) {
  const bool shared = meta.invocation.kind == TargetKind::shared_lib;
  return meta.invocation.output_dir /
         naming.file_name(meta.invocation.target_name + "d", shared);
}

/// Which builds of the project's library exist on disk. Executables have no
/// importable artifact and always report `none`.
inline BuildMode probe_build_mode(const ProjectMetadata& meta, const NamingRule& naming = {}) {
  if (meta.invocation.kind == TargetKind::executable) return BuildMode::none;
  std::error_code ec;
  const bool release = fs::exists(release_library_path(meta, naming), ec);
  const bool debug = fs::exists(debug_library_path(meta, naming), ec);
  if (release && debug) return BuildMode::both;
  if (release) return BuildMode::release_only;
  if (debug) return BuildMode::debug_only;
  return BuildMode::none;
}

inline BuildMode probe_build_mode(const OmnetppInstallation& inst) {
  bool release = false;
  bool debug = false;
  for (const auto& lib : inst.libraries) {
    release = release || lib.release_path.has_value();
    debug = debug || lib.debug_path.has_value();
  }
  if (release && debug) return BuildMode::both;
  if (release) return BuildMode::release_only;
  if (debug) return BuildMode::debug_only;
  return BuildMode::none;
}

namespace detail {

// Values are written inside a quoted CMake argument and joined into
// `;`-separated lists. Rather than escaping, refuse anything that would
// change meaning there.
inline const std::string& checked_cmake_value(const std::string& value, std::string_view what) {
  if (value.find_first_of(";\"\n\r") != std::string::npos) {
    throw Error(Errc::InvalidValue,
                std::string{what} + " contains ';', '\"' or a newline: " + value, {value});
  }
  return value;
}

inline std::string join_cmake_list(const std::vector<std::string>& items, std::string_view what) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ';';
    out += checked_cmake_value(items[i], what);
  }
  return out;
}

inline std::vector<std::string> generic_strings(const std::vector<fs::path>& paths) {
  std::vector<std::string> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(to_generic(p));
  return out;
}

struct ImportBlock {
  std::string target;
  std::string_view library_type;
  std::optional<fs::path> release;
  std::optional<fs::path> debug;
  std::vector<std::string> include_dirs;
  std::vector<std::string> definitions;
  std::vector<std::string> ned_folders;
};

inline void write_property(std::string& out, std::string_view property, const std::string& value) {
  out += "  ";
  out += property;
  out += " \"";
  out += value;
  out += "\"\n";
}

inline void write_import_block(std::string& out, const ImportBlock& block) {
  checked_cmake_value(block.target, "target name");
  out += "add_library(" + block.target + " " + std::string{block.library_type} + " IMPORTED)\n";
  out += "set_target_properties(" + block.target + " PROPERTIES\n";
  if (block.release) {
    write_property(out, "IMPORTED_LOCATION",
                   checked_cmake_value(to_generic(*block.release), "library path"));
  }
  if (block.debug) {
    write_property(out, "IMPORTED_LOCATION_DEBUG",
                   checked_cmake_value(to_generic(*block.debug), "library path"));
  }
  if (!block.include_dirs.empty()) {
    write_property(out, "INTERFACE_INCLUDE_DIRECTORIES",
                   join_cmake_list(block.include_dirs, "include directory"));
  }
  if (!block.definitions.empty()) {
    write_property(out, "INTERFACE_COMPILE_DEFINITIONS",
                   join_cmake_list(block.definitions, "compile definition"));
  }
  if (!block.ned_folders.empty()) {
    write_property(out, "NED_FOLDERS", join_cmake_list(block.ned_folders, "NED folder"));
  }
  out += ")\n";
}

}  // namespace detail

/// CMake file declaring `meta.name` as an imported library wrapping the
/// legacy project's prebuilt binary, with its include directories,
/// definitions and NED folders as target properties.
inline EmittedArtifact emit_import_target(const ProjectMetadata& meta, const NamingRule& naming = {},
                                          fs::path destination = {}) {
  if (meta.invocation.deep) {
    throw Error(Errc::DeepIncludesUnsupported,
                "project '" + meta.name + "' uses --deep; deep includes cannot be imported",
                {meta.name});
  }
  if (meta.invocation.kind == TargetKind::executable) {
    throw Error(Errc::ExecutableNotImportable,
                "project '" + meta.name + "' builds an executable; only libraries can be imported",
                {meta.name});
  }

  detail::ImportBlock block;
  block.target = meta.name;
  block.library_type = meta.invocation.kind == TargetKind::shared_lib ? "SHARED" : "STATIC";
  block.release = release_library_path(meta, naming);
  block.debug = debug_library_path(meta, naming);
  block.include_dirs = detail::generic_strings(meta.invocation.include_dirs);
  block.definitions = meta.invocation.defines;
  block.ned_folders = detail::generic_strings(meta.ned_folders);

  EmittedArtifact artifact{std::move(destination), std::string{kGeneratedHeader} + "\n"};
  detail::write_import_block(artifact.content, block);
  return artifact;
}

/// Imported `omnetpp::<lib>` targets for every library of the installation.
inline EmittedArtifact emit_toolchain_file(const OmnetppInstallation& inst, fs::path destination = {}) {
  EmittedArtifact artifact{std::move(destination), std::string{kGeneratedHeader} + "\n"};
  artifact.content += "# OMNeT++ version " + detail::checked_cmake_value(inst.version, "version") + "\n";

  std::vector<const LibraryPair*> sorted;
  for (const auto& lib : inst.libraries) sorted.push_back(&lib);
  std::sort(sorted.begin(), sorted.end(),
            [](const LibraryPair* a, const LibraryPair* b) { return a->base_name < b->base_name; });

  for (const LibraryPair* lib : sorted) {
    detail::ImportBlock block;
    block.target = "omnetpp::" + lib->base_name;
    block.library_type = lib->shared ? "SHARED" : "STATIC";
    block.release = lib->release_path;
    block.debug = lib->debug_path;
    block.include_dirs = {to_generic(inst.include_dir)};
    block.definitions = inst.compile_definitions;
    detail::write_import_block(artifact.content, block);
  }
  return artifact;
}

namespace detail {

// Everything but these is inert inside double quotes in a POSIX shell.
inline const std::string& checked_shell_word(const std::string& word, std::string_view what) {
  if (word.find_first_of("\"$`\\\n\r") != std::string::npos) {
    throw Error(Errc::InvalidValue,
                std::string{what} + " contains a character unsafe in a shell word: " + word, {word});
  }
  return word;
}

}  // namespace detail

/// POSIX shell script that execs opp_run with the NED path, the model
/// libraries and the ini file, forwarding extra arguments.
inline EmittedArtifact emit_run_script(const RunCommand& cmd, std::string_view separator = ":",
                                       fs::path destination = {}) {
  if (cmd.ned_path.empty()) {
    throw Error(Errc::InvalidValue, "run command needs at least one NED folder");
  }
  const std::string sep = detail::checked_shell_word(std::string{separator}, "NED path separator");

  std::string ned;
  for (std::size_t i = 0; i < cmd.ned_path.size(); ++i) {
    if (i) ned += sep;
    ned += detail::checked_shell_word(to_generic(cmd.ned_path[i]), "NED folder");
  }

  std::string line = "exec \"" + detail::checked_shell_word(to_generic(cmd.runner_path), "runner path") +
                     "\" -n \"" + ned + "\"";
  for (const auto& lib : cmd.library_paths) {
    line += " -l \"" + detail::checked_shell_word(to_generic(lib), "library path") + "\"";
  }
  line += " \"" + detail::checked_shell_word(to_generic(cmd.ini_file), "ini file") + "\" \"$@\"";

  return EmittedArtifact{std::move(destination), "#!/bin/sh\n" + line + "\n"};
}

}  // namespace oppbridge

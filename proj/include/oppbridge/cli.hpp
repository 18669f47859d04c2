#pragma once

// opp-bridge command-line front end.
//
// Exit codes: 0 success, 1 warnings only (`check`), 2 error or usage.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "oppbridge/diagnostic.hpp"
#include "oppbridge/emit.hpp"
#include "oppbridge/error.hpp"
#include "oppbridge/graph.hpp"
#include "oppbridge/makemake.hpp"
#include "oppbridge/manifest.hpp"
#include "oppbridge/omnetpp.hpp"

namespace oppbridge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitWarnings = 1;
inline constexpr int kExitError = 2;

/// The parts of the process environment the tool consults.
struct Environment {
  std::optional<fs::path> omnetpp_root;
  std::vector<fs::path> path_entries;

  static Environment from_process() {
    Environment env;
    if (const char* root = std::getenv("OMNETPP_ROOT"); root && *root) env.omnetpp_root = root;
    if (const char* path = std::getenv("PATH")) {
      std::string_view rest = path;
      while (true) {
        const auto colon = rest.find(':');
        if (colon != 0) env.path_entries.emplace_back(std::string{rest.substr(0, colon)});
        if (colon == std::string_view::npos) break;
        rest.remove_prefix(colon + 1);
      }
    }
    return env;
  }

  LocatorContext locator() const { return {omnetpp_root, path_entries, {}}; }
};

namespace detail {

inline void write_artifact(const EmittedArtifact& artifact, std::ostream& out, bool executable = false) {
  if (artifact.destination.empty()) {
    out << artifact.content;
    return;
  }
  std::error_code ec;
  if (artifact.destination.has_parent_path()) {
    fs::create_directories(artifact.destination.parent_path(), ec);
  }
  // Leave an identical file untouched so build tools see no change.
  if (try_read_file(artifact.destination) != artifact.content) {
    std::ofstream file(artifact.destination, std::ios::binary | std::ios::trunc);
    file << artifact.content;
    file.close();
    if (!file) throw Error(Errc::Io, "cannot write " + artifact.destination.string());
  }
  if (executable) {
    fs::permissions(artifact.destination,
                    fs::perms::owner_exec | fs::perms::group_exec | fs::perms::others_exec,
                    fs::perm_options::add, ec);
  }
}

inline std::string dot_quote(const std::string& name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline nlohmann::ordered_json optional_path(const std::optional<fs::path>& p) {
  return p ? nlohmann::ordered_json(to_generic(*p)) : nlohmann::ordered_json(nullptr);
}

}  // namespace detail

inline nlohmann::ordered_json installation_json(const OmnetppInstallation& inst) {
  nlohmann::ordered_json j;
  j["root"] = to_generic(inst.root);
  j["version"] = inst.version;
  j["include_dir"] = to_generic(inst.include_dir);
  j["lib_dir"] = to_generic(inst.lib_dir);
  j["compile_definitions"] = inst.compile_definitions;
  j["libraries"] = nlohmann::ordered_json::array();
  for (const auto& lib : inst.libraries) {
    nlohmann::ordered_json entry;
    entry["name"] = lib.base_name;
    entry["release"] = detail::optional_path(lib.release_path);
    entry["debug"] = detail::optional_path(lib.debug_path);
    j["libraries"].push_back(std::move(entry));
  }
  return j;
}

inline int cmd_locate(const std::optional<fs::path>& root, const Environment& env, std::ostream& out) {
  const auto inst = locate_installation(root, env.omnetpp_root, env.path_entries);
  out << installation_json(inst).dump(2) << '\n';
  return kExitOk;
}

inline int cmd_import(const fs::path& makefile, const std::string& name, const fs::path& out_file,
                      std::ostream& out, std::ostream& err) {
  const auto meta = extract_project_metadata(makefile, name);
  for (const auto& token : meta.invocation.unrecognized) {
    err << "warning: " << to_generic(makefile) << ": unrecognized opp_makemake option '" << token
        << "'\n";
  }
  detail::write_artifact(emit_import_target(meta, {}, out_file), out);
  return kExitOk;
}

inline int cmd_ned_folders(const fs::path& manifest, const std::string& target, const Environment& env,
                           std::ostream& out) {
  const auto graph = build_graph(load_manifest(manifest), env.locator());
  for (const auto& folder : resolve_ned_folders(graph, target)) out << to_generic(folder) << '\n';
  return kExitOk;
}

/// Run command for `target`: its resolved NED path plus the shared libraries
/// of every project it reaches, dependencies first.
inline RunCommand make_run_command(const ProjectGraph& graph, const std::string& target,
                                   const fs::path& ini_file) {
  RunCommand cmd;
  cmd.ned_path = resolve_ned_folders(graph, target);
  cmd.ini_file = ini_file;
  if (cmd.ned_path.empty()) cmd.ned_path.push_back(normalize_path(ini_file).parent_path());

  ProjectGraph reachable;
  const auto names = oppbridge::detail::reachable_from(graph, target);
  for (const auto& name : names) reachable.add_node(name, graph.node(name));
  for (const auto& name : names) {
    for (const auto& dep : graph.dependencies(name)) reachable.add_edge(name, dep);
  }
  for (const auto& name : topological_order(reachable)) {
    const auto* meta = std::get_if<ProjectMetadata>(&graph.node(name));
    if (meta && meta->invocation.kind == TargetKind::shared_lib) {
      cmd.library_paths.push_back(release_library_path(*meta));
    }
  }

  cmd.runner_path = "opp_run";
  if (graph.contains(std::string{kOmnetppNode})) {
    if (const auto* inst = std::get_if<OmnetppInstallation>(&graph.node(std::string{kOmnetppNode}))) {
      cmd.runner_path = inst->root / "bin" / "opp_run";
    }
  }
  return cmd;
}

inline int cmd_run_script(const fs::path& manifest, const std::string& target, const fs::path& ini,
                          const fs::path& out_file, const std::string& separator, const Environment& env,
                          std::ostream& out) {
  const auto graph = build_graph(load_manifest(manifest), env.locator());
  const auto cmd = make_run_command(graph, target, ini);
  detail::write_artifact(emit_run_script(cmd, separator, out_file), out, true);
  return kExitOk;
}

inline int cmd_check(const fs::path& manifest, const Environment& env, std::ostream& out) {
  std::vector<Diagnostic> diagnostics;
  try {
    diagnostics = check_graph(build_graph(load_manifest(manifest), env.locator()));
  } catch (const Error& e) {
    if (e.code() != Errc::DanglingDependency) throw;
    diagnostics.push_back({Severity::error, DiagnosticCode::DanglingDependency,
                           oppbridge::detail::join(e.subjects(), ","), e.what()});
  }

  int status = kExitOk;
  for (const auto& d : diagnostics) {
    out << format_diagnostic(d) << '\n';
    status = std::max(status, d.severity == Severity::error ? kExitError : kExitWarnings);
  }
  return status;
}

inline int cmd_graph(const fs::path& manifest, const Environment& env, std::ostream& out) {
  const auto graph = build_graph(load_manifest(manifest), env.locator());
  out << "digraph deps {\n";
  for (const auto& [name, _] : graph.nodes()) {
    for (const auto& dep : graph.dependencies(name)) {
      out << "  " << detail::dot_quote(name) << " -> " << detail::dot_quote(dep) << ";\n";
    }
  }
  out << "}\n";
  return kExitOk;
}

/// Parses `args` (including the program name) and runs one subcommand.
inline int run(const std::vector<std::string>& args, const Environment& env, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Import legacy OMNeT++ projects into CMake builds", "opp-bridge"};
  app.require_subcommand(1);

  std::optional<std::string> root;
  auto* locate = app.add_subcommand("locate", "Find the OMNeT++ installation and print it as JSON");
  locate->add_option("--root", root, "Installation root (overrides OMNETPP_ROOT and PATH)");

  std::string makefile;
  std::string name;
  std::string out_file;
  auto* import = app.add_subcommand("import", "Emit a CMake import-target file for a legacy project");
  import->add_option("--makefile", makefile, "Makefile generated by opp_makemake")->required();
  import->add_option("--name", name, "Name of the imported target")->required();
  import->add_option("--out", out_file, "Output file (default: standard output)");

  std::string manifest;
  std::string target;
  auto* ned = app.add_subcommand("ned-folders", "Print the transitive NED folders of a project");
  ned->add_option("--manifest", manifest, "Project manifest (JSON)")->required();
  ned->add_option("--target", target, "Project name")->required();

  std::string ini;
  std::string separator = ":";
  auto* run_script = app.add_subcommand("run-script", "Write an opp_run launch script for a project");
  run_script->add_option("--manifest", manifest, "Project manifest (JSON)")->required();
  run_script->add_option("--target", target, "Project name")->required();
  run_script->add_option("--ini", ini, "Simulation configuration file")->required();
  run_script->add_option("--out", out_file, "Script to write")->required();
  run_script->add_option("--sep", separator, "NED path separator")->capture_default_str();

  auto* graph = app.add_subcommand("graph", "Print the dependency graph in DOT format");
  graph->add_option("--manifest", manifest, "Project manifest (JSON)")->required();

  auto* check = app.add_subcommand("check", "Report dependency cycles, duplicate libraries and build-mode mismatches");
  check->add_option("--manifest", manifest, "Project manifest (JSON)")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "opp-bridge: " << e.what() << '\n' << app.help();
    return kExitError;
  }

  try {
    if (*locate) {
      std::optional<fs::path> explicit_root;
      if (root) explicit_root = *root;
      return cmd_locate(explicit_root, env, out);
    }
    if (*import) return cmd_import(makefile, name, out_file, out, err);
    if (*ned) return cmd_ned_folders(manifest, target, env, out);
    if (*run_script) return cmd_run_script(manifest, target, ini, out_file, separator, env, out);
    if (*graph) return cmd_graph(manifest, env, out);
    if (*check) return cmd_check(manifest, env, out);
  } catch (const Error& e) {
    err << "opp-bridge: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "opp-bridge: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace oppbridge::cli

#pragma once

// Multi-project dependency graph: transitive NED folder resolution,
// emission ordering and consistency diagnostics.

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "oppbridge/diagnostic.hpp"
#include "oppbridge/emit.hpp"
#include "oppbridge/error.hpp"
#include "oppbridge/makemake.hpp"
#include "oppbridge/manifest.hpp"
#include "oppbridge/omnetpp.hpp"

namespace oppbridge {

/// A legacy project, or the simulator installation itself.
using GraphNode = std::variant<ProjectMetadata, OmnetppInstallation>;

inline const std::vector<fs::path>& node_ned_folders(const GraphNode& node) {
  static const std::vector<fs::path> none;
  if (const auto* meta = std::get_if<ProjectMetadata>(&node)) return meta->ned_folders;
  return none;
}

/// Named nodes with ordered dependency edges. Edges can only be added
/// between existing nodes.
class ProjectGraph {
 public:
  void add_node(std::string name, GraphNode node) {
    if (name.empty()) throw Error(Errc::InvalidValue, "node name must not be empty");
    if (nodes_.contains(name)) {
      throw Error(Errc::InvalidValue, "duplicate node '" + name + "'", {name});
    }
    edges_[name];
    nodes_.emplace(std::move(name), std::move(node));
  }

  /// Repeated edges are kept once, at their first position.
  void add_edge(const std::string& from, const std::string& to) {
    for (const auto* end : {&from, &to}) {
      if (!nodes_.contains(*end)) {
        throw Error(Errc::DanglingDependency,
                    "dependency " + from + " -> " + to + " names undeclared project '" + *end + "'",
                    {from, to});
      }
    }
    auto& deps = edges_.at(from);
    if (std::find(deps.begin(), deps.end(), to) == deps.end()) deps.push_back(to);
  }

  bool contains(const std::string& name) const { return nodes_.contains(name); }

  const GraphNode& node(const std::string& name) const {
    const auto it = nodes_.find(name);
    if (it == nodes_.end()) throw Error(Errc::NotFound, "unknown project '" + name + "'", {name});
    return it->second;
  }

  const std::vector<std::string>& dependencies(const std::string& name) const {
    const auto it = edges_.find(name);
    if (it == edges_.end()) throw Error(Errc::NotFound, "unknown project '" + name + "'", {name});
    return it->second;
  }

  /// Nodes in name order.
  const std::map<std::string, GraphNode>& nodes() const { return nodes_; }

  std::size_t size() const { return nodes_.size(); }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& [_, deps] : edges_) n += deps.size();
    return n;
  }

 private:
  std::map<std::string, GraphNode> nodes_;
  std::map<std::string, std::vector<std::string>> edges_;
};

/// Where to look for the installation when `omnetpp` is referenced.
struct LocatorContext {
  std::optional<fs::path> env_root;
  std::vector<fs::path> path_entries;
  NamingRule naming;
};

/// Resolves every manifest project and wires declared dependencies as
/// edges. `omnetpp`, if referenced without being declared, is located via
/// the context.
inline ProjectGraph build_graph(const ManifestDocument& manifest, const LocatorContext& ctx = {}) {
  ProjectGraph graph;
  auto add_omnetpp = [&](const std::optional<fs::path>& explicit_root) {
    graph.add_node(std::string{kOmnetppNode},
                   locate_installation(explicit_root, ctx.env_root, ctx.path_entries, ctx.naming));
  };

  for (const auto& project : manifest.projects) {
    if (project.name == kOmnetppNode) {
      std::optional<fs::path> explicit_root = project.omnetpp_root;
      if (!explicit_root && !project.root.empty()) explicit_root = project.root;
      add_omnetpp(explicit_root);
    } else {
      graph.add_node(project.name, extract_project_metadata(project.makefile_path(), project.name));
    }
  }

  bool needs_omnetpp = false;
  for (const auto& project : manifest.projects) {
    for (const auto& dep : project.deps) {
      if (dep == kOmnetppNode && !graph.contains(dep)) needs_omnetpp = true;
    }
  }
  if (needs_omnetpp) add_omnetpp(std::nullopt);

  for (const auto& project : manifest.projects) {
    for (const auto& dep : project.deps) graph.add_edge(project.name, dep);
  }
  return graph;
}

namespace detail {

inline std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

[[noreturn]] inline void throw_cycle(std::vector<std::string> path) {
  std::string message = "dependency cycle: " + join(path, " -> ");
  throw Error(Errc::Cycle, std::move(message), std::move(path));
}

// Strongly connected components in deterministic order (Tarjan).
inline std::vector<std::vector<std::string>> strongly_connected_components(const ProjectGraph& graph) {
  std::map<std::string, int> index;
  std::map<std::string, int> lowlink;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  std::vector<std::vector<std::string>> components;
  int counter = 0;

  std::function<void(const std::string&)> connect = [&](const std::string& v) {
    index[v] = lowlink[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto& w : graph.dependencies(v)) {
      if (!index.contains(w)) {
        connect(w);
        lowlink[v] = std::min(lowlink[v], lowlink[w]);
      } else if (on_stack.contains(w)) {
        lowlink[v] = std::min(lowlink[v], index[w]);
      }
    }
    if (lowlink[v] == index[v]) {
      std::vector<std::string> component;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        component.push_back(w);
      } while (w != v);
      std::sort(component.begin(), component.end());
      components.push_back(std::move(component));
    }
  };

  for (const auto& [name, _] : graph.nodes()) {
    if (!index.contains(name)) connect(name);
  }
  std::sort(components.begin(), components.end());
  return components;
}

inline bool is_cyclic_component(const ProjectGraph& graph, const std::vector<std::string>& component) {
  if (component.size() > 1) return true;
  const auto& deps = graph.dependencies(component.front());
  return std::find(deps.begin(), deps.end(), component.front()) != deps.end();
}

// Shortest cycle through `start` using only nodes of `component`, as a path
// that begins and ends with `start`.
inline std::vector<std::string> cycle_path(const ProjectGraph& graph, const std::string& start,
                                           const std::vector<std::string>& component) {
  const std::set<std::string> allowed(component.begin(), component.end());
  std::map<std::string, std::string> parent;
  std::deque<std::string> queue{start};
  while (!queue.empty()) {
    const std::string v = queue.front();
    queue.pop_front();
    for (const auto& w : graph.dependencies(v)) {
      if (!allowed.contains(w)) continue;
      if (w == start) {
        std::vector<std::string> path{start};
        for (std::string u = v; u != start; u = parent.at(u)) path.push_back(u);
        path.push_back(start);
        std::reverse(path.begin() + 1, path.end() - 1);
        return path;
      }
      if (!parent.contains(w)) {
        parent.emplace(w, v);
        queue.push_back(w);
      }
    }
  }
  return {start, start};
}

inline std::set<std::string> reachable_from(const ProjectGraph& graph, const std::string& start) {
  std::set<std::string> seen{start};
  std::vector<std::string> todo{start};
  while (!todo.empty()) {
    const std::string v = std::move(todo.back());
    todo.pop_back();
    for (const auto& w : graph.dependencies(v)) {
      if (seen.insert(w).second) todo.push_back(w);
    }
  }
  return seen;
}

}  // namespace detail

/// All NED folders of `target` and everything it depends on: depth-first
/// pre-order over dependencies in declaration order, first occurrence kept.
inline std::vector<fs::path> resolve_ned_folders(const ProjectGraph& graph, const std::string& target) {
  if (!graph.contains(target)) {
    throw Error(Errc::NotFound, "unknown project '" + target + "'", {target});
  }

  std::vector<fs::path> folders;
  std::set<fs::path> emitted;
  std::set<std::string> visited;
  std::vector<std::string> stack;

  std::function<void(const std::string&)> visit = [&](const std::string& name) {
    if (const auto on_stack = std::find(stack.begin(), stack.end(), name); on_stack != stack.end()) {
      std::vector<std::string> path(on_stack, stack.end());
      path.push_back(name);
      detail::throw_cycle(std::move(path));
    }
    if (!visited.insert(name).second) return;
    for (const auto& folder : node_ned_folders(graph.node(name))) {
      if (emitted.insert(folder).second) folders.push_back(folder);
    }
    stack.push_back(name);
    for (const auto& dep : graph.dependencies(name)) visit(dep);
    stack.pop_back();
  };

  visit(target);
  return folders;
}

/// Dependencies before dependents; among nodes that are ready at the same
/// time, the lexicographically smallest name comes first.
inline std::vector<std::string> topological_order(const ProjectGraph& graph) {
  std::map<std::string, std::size_t> pending;
  std::map<std::string, std::vector<std::string>> dependents;
  for (const auto& [name, _] : graph.nodes()) {
    const auto& deps = graph.dependencies(name);
    pending[name] = deps.size();
    for (const auto& dep : deps) dependents[dep].push_back(name);
  }

  std::set<std::string> ready;
  for (const auto& [name, count] : pending) {
    if (count == 0) ready.insert(name);
  }

  std::vector<std::string> order;
  while (!ready.empty()) {
    const std::string next = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(next);
    for (const auto& dependent : dependents[next]) {
      if (--pending[dependent] == 0) ready.insert(dependent);
    }
  }

  if (order.size() != graph.size()) {
    for (const auto& component : detail::strongly_connected_components(graph)) {
      if (detail::is_cyclic_component(graph, component)) {
        detail::throw_cycle(detail::cycle_path(graph, component.front(), component));
      }
    }
  }
  return order;
}

/// Consistency diagnostics, sorted by (severity, code, subject):
///  - Cycle: every strongly connected component with more than one node,
///    or a self-loop.
///  - DuplicateLibrary: two projects reachable from a common dependent that
///    build the same target name from different roots.
///  - ModeMismatch: some nodes only have debug builds, others only release.
///  - DeepIncludesUnsupported: forwarded from metadata extraction.
inline std::vector<Diagnostic> check_graph(const ProjectGraph& graph, const NamingRule& naming = {}) {
  std::vector<Diagnostic> out;

  for (const auto& component : detail::strongly_connected_components(graph)) {
    if (!detail::is_cyclic_component(graph, component)) continue;
    out.push_back({Severity::error, DiagnosticCode::Cycle, detail::join(component, ","),
                   "dependency cycle: " +
                       detail::join(detail::cycle_path(graph, component.front(), component), " -> ")});
  }

  std::set<std::pair<std::string, std::string>> duplicates;
  for (const auto& [dependent, _] : graph.nodes()) {
    std::map<std::string, std::vector<const ProjectMetadata*>> by_target;
    for (const auto& name : detail::reachable_from(graph, dependent)) {
      if (const auto* meta = std::get_if<ProjectMetadata>(&graph.node(name))) {
        by_target[meta->invocation.target_name].push_back(meta);
      }
    }
    for (const auto& [target, metas] : by_target) {
      for (std::size_t i = 0; i < metas.size(); ++i) {
        for (std::size_t j = i + 1; j < metas.size(); ++j) {
          if (metas[i]->project_root != metas[j]->project_root) {
            duplicates.emplace(metas[i]->name, metas[j]->name);
          }
        }
      }
    }
  }
  for (const auto& [a, b] : duplicates) {
    const auto& ma = std::get<ProjectMetadata>(graph.node(a));
    const auto& mb = std::get<ProjectMetadata>(graph.node(b));
    out.push_back({Severity::warning, DiagnosticCode::DuplicateLibrary, a + "," + b,
                   "library '" + ma.invocation.target_name + "' is built from two roots: " +
                       to_generic(ma.project_root) + " and " + to_generic(mb.project_root)});
  }

  std::vector<std::string> debug_only;
  std::vector<std::string> release_only;
  for (const auto& [name, node] : graph.nodes()) {
    const BuildMode mode = std::visit(
        [&](const auto& n) {
          if constexpr (std::is_same_v<std::decay_t<decltype(n)>, ProjectMetadata>) {
            return probe_build_mode(n, naming);
          } else {
            return probe_build_mode(n);
          }
        },
        node);
    if (mode == BuildMode::debug_only) debug_only.push_back(name);
    if (mode == BuildMode::release_only) release_only.push_back(name);
  }
  if (!debug_only.empty() && !release_only.empty()) {
    std::vector<std::string> involved = debug_only;
    involved.insert(involved.end(), release_only.begin(), release_only.end());
    std::sort(involved.begin(), involved.end());
    out.push_back({Severity::warning, DiagnosticCode::ModeMismatch, detail::join(involved, ","),
                   "debug-only builds (" + detail::join(debug_only, ",") +
                       ") mixed with release-only builds (" + detail::join(release_only, ",") + ")"});
  }

  for (const auto& [_, node] : graph.nodes()) {
    if (const auto* meta = std::get_if<ProjectMetadata>(&node)) {
      out.insert(out.end(), meta->diagnostics.begin(), meta->diagnostics.end());
    }
  }

  sort_diagnostics(out);
  return out;
}

}  // namespace oppbridge

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oppbridge/graph.hpp"
#include "support/graph_oracle.hpp"
#include "support/test_support.hpp"

using namespace oppbridge;
using oppbridge::testing::fixtures_dir;
using oppbridge::testing::TempDir;
using oppbridge::testing::write_text;

namespace {

ProjectMetadata project(const std::string& name, std::vector<fs::path> ned = {},
                        const std::string& target = {}, const fs::path& root = "/p") {
  ProjectMetadata meta;
  meta.name = name;
  meta.project_root = root / name;
  meta.invocation.target_name = target.empty() ? name : target;
  meta.invocation.kind = TargetKind::shared_lib;
  meta.ned_folders = std::move(ned);
  return meta;
}

// Graph from {name: [deps...]}; every node gets the NED folder /ned/<name>.
ProjectGraph graph_of(const std::map<std::string, std::vector<std::string>>& adjacency) {
  ProjectGraph g;
  for (const auto& [name, _] : adjacency) g.add_node(name, project(name, {"/ned/" + name}));
  for (const auto& [name, deps] : adjacency) {
    for (const auto& dep : deps) g.add_edge(name, dep);
  }
  return g;
}

ProjectGraph artery_stack() { return build_graph(load_manifest(fixtures_dir() / "stack.json")); }

Error caught(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no oppbridge::Error thrown";
  return Error(Errc::Io, "none");
}

}  // namespace

TEST(Manifest, ParsesAndResolvesRelativePaths) {
  const auto doc = parse_manifest(R"({"projects": [
      {"name": "veins", "root": "veins", "makefile": "src/Makefile", "deps": ["omnetpp"]},
      {"name": "omnetpp", "omnetpp_root": "/opt/omnetpp"}]})",
                                  "/work");
  ASSERT_EQ(doc.projects.size(), 2u);
  EXPECT_EQ(doc.projects[0].makefile_path(), fs::path{"/work/veins/src/Makefile"});
  EXPECT_EQ(doc.projects[0].deps, std::vector<std::string>{"omnetpp"});
  EXPECT_EQ(doc.projects[1].omnetpp_root, fs::path{"/opt/omnetpp"});
  EXPECT_TRUE(doc.projects[1].root.empty());
}

TEST(Manifest, RejectsMalformedDocuments) {
  for (const char* text : {"not json", "[]", R"({"projects": {}})", R"({"projects": [{"root": "x"}]})",
                           R"({"projects": [{"name": "a"}]})", R"({"projects": [{"name": "", "root": "x"}]})",
                           R"({"projects": [{"name": "a", "root": 3}]})",
                           R"({"projects": [{"name": "a", "root": "x", "deps": "b"}]})",
                           R"({"projects": [{"name": "a", "root": "x", "deps": [1]}]})",
                           R"({"projects": [{"name": "a", "root": "x"}, {"name": "a", "root": "y"}]})"}) {
    EXPECT_EQ(caught([&] { parse_manifest(text, "/"); }).code(), Errc::InvalidManifest) << text;
  }
}

TEST(BuildGraph, ArteryStackShape) {
  const auto g = artery_stack();
  EXPECT_EQ(g.size(), 4u);
  EXPECT_EQ(g.edge_count(), 4u);
  EXPECT_EQ(g.dependencies("artery"), (std::vector<std::string>{"veins", "vanetza", "omnetpp"}));
  EXPECT_EQ(g.dependencies("veins"), std::vector<std::string>{"omnetpp"});
  EXPECT_TRUE(g.dependencies("vanetza").empty());
  EXPECT_TRUE(std::holds_alternative<OmnetppInstallation>(g.node("omnetpp")));
}

TEST(BuildGraph, UndeclaredOmnetppIsLocated) {
  TempDir tmp;
  const auto fixtures = fixtures_dir().generic_string();
  write_text(tmp / "m.json", R"({"projects": [{"name": "veins", "root": ")" + fixtures +
                                 R"(/veins", "deps": ["omnetpp"]}]})");
  LocatorContext ctx;
  ctx.env_root = fixtures_dir() / "omnetpp-4.6";
  const auto g = build_graph(load_manifest(tmp / "m.json"), ctx);
  EXPECT_EQ(g.size(), 2u);
  EXPECT_EQ(std::get<OmnetppInstallation>(g.node("omnetpp")).version, "4.6");

  EXPECT_EQ(caught([&] { build_graph(load_manifest(tmp / "m.json")); }).code(), Errc::NotFound);
}

TEST(BuildGraph, DanglingDependency) {
  const auto e = caught([] { build_graph(load_manifest(fixtures_dir() / "dangling.json")); });
  EXPECT_EQ(e.code(), Errc::DanglingDependency);
  EXPECT_EQ(e.subjects(), (std::vector<std::string>{"artery", "veins"}));
}

TEST(BuildGraph, EmptyManifest) { EXPECT_EQ(build_graph(load_manifest(fixtures_dir() / "empty.json")).size(), 0u); }

TEST(ResolveNedFolders, ArteryStackMatchesReachabilityUnionInPreOrder) {
  const auto g = artery_stack();
  const auto resolved = resolve_ned_folders(g, "artery");
  const auto root = fixtures_dir();
  EXPECT_EQ(resolved, (std::vector<fs::path>{root / "artery/src/artery", root / "veins/src/veins"}));

  std::set<fs::path> oracle;
  for (const auto& name : {"artery", "veins", "vanetza", "omnetpp"}) {
    for (const auto& f : node_ned_folders(g.node(name))) oracle.insert(f);
  }
  EXPECT_EQ(std::set<fs::path>(resolved.begin(), resolved.end()), oracle);
}

TEST(ResolveNedFolders, SingleNode) {
  ProjectGraph g;
  g.add_node("x", project("x", {"/x"}));
  EXPECT_EQ(resolve_ned_folders(g, "x"), std::vector<fs::path>{"/x"});
}

TEST(ResolveNedFolders, CycleReportsFullPath) {
  const auto g = graph_of({{"a", {"b"}}, {"b", {"a"}}});
  const auto e = caught([&] { resolve_ned_folders(g, "a"); });
  EXPECT_EQ(e.code(), Errc::Cycle);
  EXPECT_EQ(e.subjects(), (std::vector<std::string>{"a", "b", "a"}));
}

TEST(ResolveNedFolders, CycleBelowTarget) {
  const auto g = graph_of({{"t", {"a"}}, {"a", {"b"}}, {"b", {"c"}}, {"c", {"a"}}});
  EXPECT_EQ(caught([&] { resolve_ned_folders(g, "t"); }).subjects(),
            (std::vector<std::string>{"a", "b", "c", "a"}));
}

TEST(ResolveNedFolders, UnknownTarget) {
  EXPECT_EQ(caught([] { resolve_ned_folders(ProjectGraph{}, "nope"); }).code(), Errc::NotFound);
}

TEST(ResolveNedFolders, DiamondVisitsSharedDependencyOnce) {
  const auto g = graph_of({{"top", {"left", "right"}}, {"left", {"base"}}, {"right", {"base"}}, {"base", {}}});
  EXPECT_EQ(resolve_ned_folders(g, "top"),
            (std::vector<fs::path>{"/ned/top", "/ned/left", "/ned/base", "/ned/right"}));
}

TEST(ResolveNedFolders, FoldersSharedAcrossNodesAppearOnce) {
  ProjectGraph g;
  g.add_node("a", project("a", {"/n/1", "/n/2"}));
  g.add_node("b", project("b", {"/n/2", "/n/3", "/n/1"}));
  g.add_edge("a", "b");
  EXPECT_EQ(resolve_ned_folders(g, "a"), (std::vector<fs::path>{"/n/1", "/n/2", "/n/3"}));
}

TEST(ResolveNedFolders, RandomDagsMatchTransitiveClosure) {
  std::mt19937 rng(42);
  for (int round = 0; round < 100; ++round) {
    const auto dag = oppbridge::testing::random_dag(rng);
    const auto g = dag.to_graph();
    for (std::size_t t = 0; t < dag.names.size(); ++t) {
      const auto resolved = resolve_ned_folders(g, dag.names[t]);
      ASSERT_EQ(oppbridge::testing::as_strings(resolved), oppbridge::testing::oracle_ned_union(dag, t));
      ASSERT_EQ(resolved.size(), oppbridge::testing::as_strings(resolved).size());

      // own folders come first, in their own (deduplicated) order
      std::vector<fs::path> own;
      for (const auto& f : dag.folders[t]) {
        if (std::find(own.begin(), own.end(), f) == own.end()) own.emplace_back(f);
      }
      ASSERT_GE(resolved.size(), own.size());
      ASSERT_TRUE(std::equal(own.begin(), own.end(), resolved.begin()));
    }
  }
}

TEST(ResolveNedFolders, AddingAnEdgeNeverRemovesFolders) {
  std::mt19937 rng(5);
  for (int round = 0; round < 50; ++round) {
    auto dag = oppbridge::testing::random_dag(rng, 20);
    const auto before = dag.to_graph();
    // a forward edge between two nodes keeps the graph acyclic
    const auto n = dag.names.size();
    const auto reach = oppbridge::testing::transitive_closure(dag.adjacent);
    std::vector<std::pair<std::size_t, std::size_t>> options;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && !dag.adjacent[i][j] && !reach[j][i]) options.emplace_back(i, j);
      }
    }
    if (options.empty()) continue;
    const auto [from, to] = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    dag.adjacent[from][to] = true;
    const auto after = dag.to_graph();
    for (const auto& name : dag.names) {
      const auto old_set = oppbridge::testing::as_strings(resolve_ned_folders(before, name));
      const auto new_set = oppbridge::testing::as_strings(resolve_ned_folders(after, name));
      ASSERT_TRUE(std::includes(new_set.begin(), new_set.end(), old_set.begin(), old_set.end()));
    }
  }
}

TEST(ResolveNedFolders, ForcedCyclesTerminateWithCycleError) {
  std::mt19937 rng(99);
  for (int round = 0; round < 100; ++round) {
    auto dag = oppbridge::testing::random_dag(rng);
    const auto target = std::uniform_int_distribution<std::size_t>(0, dag.names.size() - 1)(rng);
    oppbridge::testing::force_cycle(dag, target, rng);
    const auto g = dag.to_graph();
    const auto e = caught([&] { resolve_ned_folders(g, dag.names[target]); });
    ASSERT_EQ(e.code(), Errc::Cycle);
    const auto& path = e.subjects();
    ASSERT_GE(path.size(), 2u);
    EXPECT_EQ(path.front(), path.back());
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      EXPECT_TRUE(dag.adjacent[dag.index_of(path[i])][dag.index_of(path[i + 1])]);
    }
  }
}

TEST(TopologicalOrder, ArteryStack) {
  EXPECT_EQ(topological_order(artery_stack()), (std::vector<std::string>{"omnetpp", "vanetza", "veins", "artery"}));
}

TEST(TopologicalOrder, Empty) { EXPECT_TRUE(topological_order(ProjectGraph{}).empty()); }

TEST(TopologicalOrder, Cycle) {
  const auto e = caught([] { topological_order(graph_of({{"a", {"b"}}, {"b", {"a"}}, {"c", {}}})); });
  EXPECT_EQ(e.code(), Errc::Cycle);
  EXPECT_EQ(e.subjects(), (std::vector<std::string>{"a", "b", "a"}));
}

TEST(TopologicalOrder, RandomDagsRespectEveryEdgeAndTieBreak) {
  std::mt19937 rng(17);
  for (int round = 0; round < 100; ++round) {
    const auto dag = oppbridge::testing::random_dag(rng);
    const auto order = topological_order(dag.to_graph());
    ASSERT_EQ(order.size(), dag.names.size());
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    for (std::size_t i = 0; i < dag.names.size(); ++i) {
      for (std::size_t j = 0; j < dag.names.size(); ++j) {
        if (dag.adjacent[i][j]) {
          ASSERT_LT(pos[dag.names[j]], pos[dag.names[i]]);
        }
      }
    }
    // brute-force tie-break check: each element is the smallest name whose
    // dependencies are all already placed
    std::set<std::string> placed;
    for (const auto& name : order) {
      for (const auto& candidate : dag.names) {
        if (placed.contains(candidate) || candidate >= name) continue;
        bool ready = true;
        for (std::size_t j = 0; j < dag.names.size(); ++j) {
          if (dag.adjacent[dag.index_of(candidate)][j] && !placed.contains(dag.names[j])) ready = false;
        }
        ASSERT_FALSE(ready) << candidate << " should precede " << name;
      }
      placed.insert(name);
    }
  }
}

TEST(CheckGraph, ArteryStackIsClean) { EXPECT_TRUE(check_graph(artery_stack()).empty()); }

TEST(CheckGraph, DuplicateInet) {
  const auto diagnostics = check_graph(build_graph(load_manifest(fixtures_dir() / "duplicate_inet.json")));
  ASSERT_EQ(diagnostics.size(), 1u);
  const auto& d = diagnostics[0];
  EXPECT_EQ(d.severity, Severity::warning);
  EXPECT_EQ(d.code, DiagnosticCode::DuplicateLibrary);
  EXPECT_EQ(d.subject, "inet,inet-veins");
  EXPECT_NE(d.message.find((fixtures_dir() / "inet-3.0").generic_string()), std::string::npos);
  EXPECT_NE(d.message.find((fixtures_dir() / "inet-2.6").generic_string()), std::string::npos);
}

TEST(CheckGraph, DuplicatesNeedACommonDependent) {
  ProjectGraph g;
  g.add_node("a", project("a", {}, "inet", "/one"));
  g.add_node("b", project("b", {}, "inet", "/two"));
  g.add_node("c", project("c", {}, "inet", "/one"));
  EXPECT_TRUE(check_graph(g).empty());
  g.add_node("user", project("user"));
  g.add_edge("user", "a");
  g.add_edge("user", "c");
  EXPECT_EQ(check_graph(g).size(), 1u);  // a and c: same target, different roots (/one/a vs /one/c)
}

TEST(CheckGraph, SameRootTwiceIsNotADuplicate) {
  ProjectGraph g;
  auto a = project("a", {}, "inet");
  auto b = a;
  b.name = "b";
  g.add_node("a", a);
  g.add_node("b", b);
  g.add_node("top", project("top"));
  g.add_edge("top", "a");
  g.add_edge("top", "b");
  EXPECT_TRUE(check_graph(g).empty());
}

TEST(CheckGraph, SelfLoopIsACycle) {
  const auto diagnostics = check_graph(graph_of({{"a", {"a"}}}));
  ASSERT_EQ(diagnostics.size(), 1u);
  EXPECT_EQ(diagnostics[0].severity, Severity::error);
  EXPECT_EQ(diagnostics[0].code, DiagnosticCode::Cycle);
  EXPECT_EQ(diagnostics[0].subject, "a");
  EXPECT_EQ(diagnostics[0].message, "dependency cycle: a -> a");
}

TEST(CheckGraph, OneCycleDiagnosticPerComponent) {
  const auto diagnostics =
      check_graph(graph_of({{"a", {"b"}}, {"b", {"c"}}, {"c", {"a", "b"}}, {"x", {"y"}}, {"y", {"x"}}, {"z", {"a"}}}));
  ASSERT_EQ(diagnostics.size(), 2u);
  EXPECT_EQ(diagnostics[0].subject, "a,b,c");
  EXPECT_EQ(diagnostics[0].message, "dependency cycle: a -> b -> c -> a");
  EXPECT_EQ(diagnostics[1].subject, "x,y");
}

TEST(CheckGraph, ModeMismatch) {
  TempDir tmp;
  auto debug_only = project("dbg", {}, "", tmp.path());
  debug_only.invocation.output_dir = tmp / "dbg";
  write_text(tmp / "dbg" / "libdbgd.so", "");
  auto release_only = project("rel", {}, "", tmp.path());
  release_only.invocation.output_dir = tmp / "rel";
  write_text(tmp / "rel" / "librel.so", "");
  auto both = project("both", {}, "", tmp.path());
  both.invocation.output_dir = tmp / "both";
  write_text(tmp / "both" / "libboth.so", "");
  write_text(tmp / "both" / "libbothd.so", "");

  EXPECT_EQ(probe_build_mode(debug_only), BuildMode::debug_only);
  EXPECT_EQ(probe_build_mode(release_only), BuildMode::release_only);
  EXPECT_EQ(probe_build_mode(both), BuildMode::both);

  ProjectGraph g;
  g.add_node("dbg", debug_only);
  g.add_node("both", both);
  EXPECT_TRUE(check_graph(g).empty());
  g.add_node("rel", release_only);
  const auto diagnostics = check_graph(g);
  ASSERT_EQ(diagnostics.size(), 1u);
  EXPECT_EQ(diagnostics[0].code, DiagnosticCode::ModeMismatch);
  EXPECT_EQ(diagnostics[0].severity, Severity::warning);
  EXPECT_EQ(diagnostics[0].subject, "dbg,rel");
}

TEST(CheckGraph, DeepIncludesForwarded) {
  const auto diagnostics = check_graph(build_graph(load_manifest(fixtures_dir() / "deep.json")));
  ASSERT_EQ(diagnostics.size(), 1u);
  EXPECT_EQ(diagnostics[0].code, DiagnosticCode::DeepIncludesUnsupported);
  EXPECT_EQ(diagnostics[0].subject, "inet");
}

TEST(CheckGraph, SortedAndDeterministic) {
  const auto g = graph_of({{"b", {"b"}}, {"a", {"a"}}});
  auto first = check_graph(g);
  EXPECT_EQ(first, check_graph(g));
  EXPECT_TRUE(std::is_sorted(first.begin(), first.end()));
  EXPECT_EQ(first.front().subject, "a");
}

TEST(ProjectGraph, EdgesRequireExistingNodes) {
  ProjectGraph g;
  g.add_node("a", project("a"));
  EXPECT_EQ(caught([&] { g.add_edge("a", "b"); }).code(), Errc::DanglingDependency);
  EXPECT_EQ(caught([&] { g.add_node("a", project("a")); }).code(), Errc::InvalidValue);
  EXPECT_EQ(caught([&] { g.add_node("", project("a")); }).code(), Errc::InvalidValue);
  g.add_node("b", project("b"));
  g.add_edge("a", "b");
  g.add_edge("a", "b");
  EXPECT_EQ(g.edge_count(), 1u);
}

#pragma once

// Project manifest: the JSON document declaring which legacy projects take
// part in a build and how they depend on each other.
//
//   {
//     "projects": [
//       { "name": "veins", "root": "veins", "deps": ["omnetpp"] },
//       { "name": "omnetpp", "omnetpp_root": "/opt/omnetpp-4.6" }
//     ]
//   }
//
// Relative roots are resolved against the manifest's directory, relative
// makefiles against their project root. `omnetpp` is reserved for the
// simulator installation and needs no `root`.

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "oppbridge/error.hpp"
#include "oppbridge/paths.hpp"

namespace oppbridge {

inline constexpr std::string_view kOmnetppNode = "omnetpp";

struct ManifestProject {
  std::string name;
  fs::path root;
  fs::path makefile = "Makefile";
  std::vector<std::string> deps;
  std::optional<fs::path> omnetpp_root;

  fs::path makefile_path() const { return root / makefile; }
};

struct ManifestDocument {
  std::vector<ManifestProject> projects;
};

namespace detail {

[[noreturn]] inline void manifest_error(const std::string& what) {
  throw Error(Errc::InvalidManifest, "invalid manifest: " + what);
}

inline std::string manifest_string(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_string()) manifest_error(where + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace detail

inline ManifestDocument parse_manifest(std::string_view text, const fs::path& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    detail::manifest_error(e.what());
  }
  if (!doc.is_object() || !doc.contains("projects") || !doc["projects"].is_array()) {
    detail::manifest_error("top-level object with a 'projects' array expected");
  }

  const fs::path base = normalize_path(base_dir);
  ManifestDocument manifest;
  std::set<std::string> seen;
  std::size_t index = 0;
  for (const auto& entry : doc["projects"]) {
    const std::string where = "projects[" + std::to_string(index++) + "]";
    if (!entry.is_object()) detail::manifest_error(where + " is not an object");
    if (!entry.contains("name")) detail::manifest_error(where + ": missing 'name'");

    ManifestProject project;
    project.name = detail::manifest_string(entry, "name", where);
    if (project.name.empty()) detail::manifest_error(where + ": empty 'name'");
    if (!seen.insert(project.name).second) {
      detail::manifest_error("duplicate project name '" + project.name + "'");
    }

    const bool is_omnetpp = project.name == kOmnetppNode;
    if (entry.contains("root")) {
      project.root = normalize_path(base / detail::manifest_string(entry, "root", where));
    } else if (!is_omnetpp) {
      detail::manifest_error(where + " ('" + project.name + "'): missing 'root'");
    }
    if (entry.contains("makefile")) {
      project.makefile = detail::manifest_string(entry, "makefile", where);
    }
    if (entry.contains("omnetpp_root")) {
      project.omnetpp_root = normalize_path(base / detail::manifest_string(entry, "omnetpp_root", where));
    }
    if (entry.contains("deps")) {
      const auto& deps = entry["deps"];
      if (!deps.is_array()) detail::manifest_error(where + ": 'deps' must be an array");
      for (const auto& dep : deps) {
        if (!dep.is_string() || dep.get<std::string>().empty()) {
          detail::manifest_error(where + ": 'deps' entries must be nonempty strings");
        }
        project.deps.push_back(dep.get<std::string>());
      }
    }
    manifest.projects.push_back(std::move(project));
  }
  return manifest;
}

inline ManifestDocument load_manifest(const fs::path& file) {
  const fs::path path = normalize_path(file);
  return parse_manifest(read_file(path), path.parent_path());
}

}  // namespace oppbridge

#pragma once

#include <filesystem>
#include <string>

#include "mrg/graph.hpp"
#include "mrg/multiscale.hpp"

namespace mrg::io {

// Graph files are JSON:
//   {"vertices":  [{"id": "v1", "kind": "moyal", "ports": ["a", "b", "c", "d"]}, ...],
//    "edges":     [{"id": "l1", "ports": ["a", "c"], "kind": "simple"},
//                  {"id": "g", "ports": [..], "kind": "generalised", "insertions": 2}, ...],
//    "externals": [{"id": "x1", "port": "b", "kappa": false}, ...]}
// "kind" on vertices is optional and defaults to "moyal".
// Parse failures throw Error(Parse); structural ones Error(MalformedGraph).

GraphDescription parse_graph_description(const std::string& text);
RibbonGraph parse_graph(const std::string& text);
RibbonGraph read_graph(const std::filesystem::path& path);
std::string serialize_graph(const GraphDescription& description);

// Attribution files map edge id -> scale, or edge id -> [segment scales] for
// generalised lines.
ScaleAttribution parse_attribution(const std::string& text);
ScaleAttribution read_attribution(const std::filesystem::path& path);
std::string serialize_attribution(const ScaleAttribution& attribution);

std::string read_text(const std::filesystem::path& path);

}  // namespace mrg::io

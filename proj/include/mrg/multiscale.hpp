#pragma once

// Scale attributions, quasi-local subgraphs and the Gallavotti-Nicolo tree.

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mrg/graph.hpp"

namespace mrg {

/// Slice index per edge.  Simple lines carry one scale; a generalised line
/// with n insertions carries its n+1 segment scales.
struct ScaleAttribution {
  std::map<std::string, std::vector<int>> scales;

  bool operator==(const ScaleAttribution&) const = default;
};

/// Derived scales of one generalised line.
struct SegmentScales {
  int i_m;  // min over segments: the line's effective scale
  int i_1;  // max of the two end segments
  int i_2;  // min of the two end segments
};

SegmentScales segment_scales(std::span<const int> segments);

/// Throws MissingScale (edge without a scale) or AttributionMismatch (unknown
/// edge, wrong segment count, negative scale).
void validate_attribution(const RibbonGraph& g, const ScaleAttribution& mu);

/// Effective scale per edge index: the scale of a simple line, i_m of a
/// generalised one.
std::vector<int> effective_scales(const RibbonGraph& g, const ScaleAttribution& mu);

/// Every edge at the same scale (generalised segments included).
ScaleAttribution flat_attribution(const RibbonGraph& g, int scale);

struct QuasiLocal {
  int level = 0;
  std::vector<std::size_t> vertices;
  std::vector<std::size_t> edges;
};

/// Connected components G^i_k of the lines with effective scale >= i.  At
/// level 0 these are the components of G itself.
std::vector<QuasiLocal> quasi_local(const RibbonGraph& g, const ScaleAttribution& mu, int level);

struct GNNode {
  int level = 0;
  int index = 0;  // k, 1-based within the level
  std::vector<std::size_t> vertices;
  std::vector<std::size_t> edges;
  int parent = -1;
  std::vector<int> children;
  /// Ports of the node's vertices not on its own lines: true external legs
  /// and ends of lower-scale lines hooked to the node.
  std::vector<std::size_t> boundary_ports;
  int N = 0;
  int N_kappa = 0;
  bool e_kappa_empty = true;
};

struct GNTree {
  std::vector<GNNode> nodes;  // ordered by level, then k
  std::vector<int> roots;
  int max_level = 0;

  std::vector<int> level(int i) const;
};

GNTree gn_tree(const RibbonGraph& g, const ScaleAttribution& mu);

/// A generalised line is admissible when it is a bridge of the quasi-local
/// subgraph at its own effective scale.  Throws NotGeneralised.
bool is_admissible(const RibbonGraph& g, const ScaleAttribution& mu, const std::string& edge_id);

/// Visits every attribution with all scales (segments included) in
/// [0, max_scale].  Stops early when the visitor returns false or after
/// `limit` attributions (0 = no limit).  Returns the number visited.
std::size_t enumerate_attributions(const RibbonGraph& g, int max_scale,
                                   const std::function<bool(const ScaleAttribution&)>& visit,
                                   std::size_t limit = 0);

}  // namespace mrg

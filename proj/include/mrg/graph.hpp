#pragma once

// Ribbon graphs of the degenerate-Moyal quartic model.
//
// A graph is a combinatorial map: every vertex carries its ports in
// counterclockwise order, and every port is consumed either by exactly one
// internal edge or by exactly one external leg.  A generalised line (a chain
// of propagators joined by kappa-insertions) is a single edge of the map that
// remembers its insertion count.  Vertices of kind Insertion only occur in
// Moyal-free chains, where the insertions cannot be folded into a line.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace mrg {

enum class VertexKind { Moyal, Insertion };
enum class EdgeKind { Simple, Generalised };

struct Vertex {
  std::string id;
  VertexKind kind = VertexKind::Moyal;
  std::vector<std::string> ports;  // counterclockwise

  bool operator==(const Vertex&) const = default;
};

struct Edge {
  std::string id;
  std::array<std::string, 2> ports;
  EdgeKind kind = EdgeKind::Simple;
  int insertions = 0;  // n(l) >= 1 for generalised lines, 0 otherwise

  bool generalised() const { return kind == EdgeKind::Generalised; }
  bool operator==(const Edge&) const = default;
};

struct ExternalLeg {
  std::string id;
  std::string port;
  bool kappa = false;

  bool operator==(const ExternalLeg&) const = default;
};

/// Unvalidated graph description, as read from a graph file.
struct GraphDescription {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<ExternalLeg> externals;

  bool operator==(const GraphDescription&) const = default;
};

/// What occupies a port.
struct PortUse {
  enum class Kind { Edge, External } kind;
  std::size_t index;  // edge or external index
  int end;            // 0 or 1 for edges, 0 for externals
};

using EdgeMask = std::vector<bool>;

class RibbonGraph {
 public:
  /// Validates the description; throws Error(MalformedGraph) on violation.
  static RibbonGraph build(GraphDescription description);

  const GraphDescription& description() const { return desc_; }
  const std::vector<Vertex>& vertices() const { return desc_.vertices; }
  const std::vector<Edge>& edges() const { return desc_.edges; }
  const std::vector<ExternalLeg>& externals() const { return desc_.externals; }

  std::size_t num_vertices() const { return desc_.vertices.size(); }
  std::size_t num_edges() const { return desc_.edges.size(); }
  std::size_t num_ports() const { return port_vertex_.size(); }
  std::size_t num_moyal_vertices() const;

  /// N: number of external legs.
  int num_external_legs() const { return static_cast<int>(desc_.externals.size()); }
  /// N_kappa: external legs flagged as kappa-insertions.
  int num_kappa_legs() const;

  // Ports are numbered vertex by vertex, in cyclic order.
  std::size_t first_port(std::size_t vertex) const { return vertex_first_port_[vertex]; }
  std::size_t degree(std::size_t vertex) const { return desc_.vertices[vertex].ports.size(); }
  std::size_t port_vertex(std::size_t port) const { return port_vertex_[port]; }
  std::size_t port_slot(std::size_t port) const { return port - vertex_first_port_[port_vertex_[port]]; }
  /// Counterclockwise successor of a port around its vertex.
  std::size_t next_port(std::size_t port) const;
  const PortUse& port_use(std::size_t port) const { return port_use_[port]; }
  const std::string& port_name(std::size_t port) const;

  std::size_t edge_port(std::size_t edge, int end) const { return edge_ports_[edge][end]; }
  std::size_t edge_vertex(std::size_t edge, int end) const { return port_vertex_[edge_ports_[edge][end]]; }
  std::size_t external_port(std::size_t ext) const { return external_ports_[ext]; }
  bool is_self_loop(std::size_t edge) const { return edge_vertex(edge, 0) == edge_vertex(edge, 1); }

  /// Throws Error(UnknownEdge).
  std::size_t edge_index(const std::string& id) const;
  std::optional<std::size_t> vertex_index(const std::string& id) const;

  EdgeMask all_edges() const { return EdgeMask(num_edges(), true); }

 private:
  GraphDescription desc_;
  std::vector<std::size_t> vertex_first_port_;
  std::vector<std::size_t> port_vertex_;
  std::vector<PortUse> port_use_;
  std::vector<std::array<std::size_t, 2>> edge_ports_;
  std::vector<std::size_t> external_ports_;
  std::unordered_map<std::string, std::size_t> edge_by_id_;
  std::unordered_map<std::string, std::size_t> vertex_by_id_;
};

RibbonGraph build_graph(GraphDescription description);

// ---------------------------------------------------------------------------
// Topology

struct Face {
  std::vector<std::size_t> ports;  // cyclic port walk
  bool broken = false;
};

struct FaceSet {
  std::vector<Face> faces;
  int broken = 0;  // b
};

/// Faces of the full map.  External legs are punctures: the walk turns
/// around them and marks the face broken.
FaceSet faces(const RibbonGraph& g);

/// Faces of the sub-map spanned by `vertices` and the edges in `edges`.
/// Ports of those vertices that are not on a selected edge act as punctures.
FaceSet faces(const RibbonGraph& g, std::span<const std::size_t> vertices, const EdgeMask& edges);

struct ComponentTopology {
  std::vector<std::size_t> vertices;
  std::vector<std::size_t> edges;
  int v = 0, e = 0, e0 = 0, e_kappa = 0, f = 0, chi = 0;
  int genus = 0;
  int broken_faces = 0;
  int external_legs = 0;  // punctures on this piece
  bool planar = true;
  bool regular = false;
  bool tree_like = true;
};

struct TopologyReport {
  int v = 0, e = 0, e0 = 0, e_kappa = 0, f = 0, k = 0, chi = 0;
  int genus = 0;
  int broken_faces = 0;
  bool planar = true;
  bool regular = false;
  bool tree_like = true;
  std::vector<ComponentTopology> components;
};

TopologyReport topology(const RibbonGraph& g);

/// Topology of one connected sub-map (used for quasi-local subgraphs).
/// Throws Error(InvalidMap) when the Euler characteristic is inconsistent.
ComponentTopology piece_topology(const RibbonGraph& g, std::span<const std::size_t> vertices,
                                 const EdgeMask& edges);

// ---------------------------------------------------------------------------
// Connectivity

/// Connected components of the graph restricted to `edges`.  With
/// include_isolated, vertices touching no selected edge form their own
/// component; otherwise they are dropped.
std::vector<std::vector<std::size_t>> vertex_components(const RibbonGraph& g, const EdgeMask& edges,
                                                        bool include_isolated = true);

/// Bridges among the selected edges (Tarjan low-link).
std::vector<bool> bridges(const RibbonGraph& g, const EdgeMask& edges);

bool is_bridge(const RibbonGraph& g, const std::string& edge_id);

// ---------------------------------------------------------------------------
// Spanning trees

enum class TreePreference { Default, ScaleDescending };

struct SpanningTree {
  std::vector<std::size_t> roots;       // one per component; roots[0] is the requested root
  std::vector<bool> in_tree;            // per edge
  std::vector<std::size_t> tree_edges;  // ascending edge index
  std::vector<std::size_t> loop_edges;  // L = E \ T
  std::vector<std::optional<std::size_t>> parent_edge;  // per vertex
  std::vector<int> depth;                               // per vertex

  std::size_t root() const { return roots.front(); }
  /// Vertex on the root side of a tree edge.
  std::size_t parent_vertex(const RibbonGraph& g, std::size_t edge) const;
  /// Vertex on the far side of a tree edge.
  std::size_t child_vertex(const RibbonGraph& g, std::size_t edge) const;
  /// b(l): vertices whose tree path to the root runs through `edge`.
  std::vector<std::size_t> branch(const RibbonGraph& g, std::size_t edge) const;
};

/// Kruskal spanning forest.  Default order is ascending edge index; with
/// ScaleDescending, edges are taken by decreasing scale (ties: lowest index),
/// so the tree restricted to every quasi-local subgraph spans it.
SpanningTree spanning_tree(const RibbonGraph& g, std::size_t root,
                           TreePreference preference = TreePreference::Default,
                           std::span<const int> edge_scales = {});

/// Orients a given edge set as a rooted spanning forest.  Throws
/// Error(InvalidArgument) when the set is cyclic or does not span.
SpanningTree rooted_tree(const RibbonGraph& g, std::size_t root, std::span<const std::size_t> tree_edges);

/// Every spanning forest of g, each as an ascending edge-index list.
std::vector<std::vector<std::size_t>> all_spanning_trees(const RibbonGraph& g, std::size_t limit = 0);

}  // namespace mrg

#include "mrg/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <unordered_set>

#include "mrg/error.hpp"

namespace mrg {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorKind::MalformedGraph, what); }

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

RibbonGraph RibbonGraph::build(GraphDescription description) {
  RibbonGraph g;
  g.desc_ = std::move(description);
  const auto& vs = g.desc_.vertices;
  if (vs.empty()) malformed("graph has no vertices");

  const bool has_moyal = std::any_of(vs.begin(), vs.end(), [](const Vertex& v) { return v.kind == VertexKind::Moyal; });
  std::unordered_map<std::string, std::size_t> port_by_name;
  for (std::size_t v = 0; v < vs.size(); ++v) {
    const auto& vert = vs[v];
    if (!g.vertex_by_id_.emplace(vert.id, v).second) malformed("duplicate vertex id '" + vert.id + "'");
    const std::size_t want = vert.kind == VertexKind::Moyal ? 4 : 2;
    if (vert.ports.size() != want) {
      malformed("vertex '" + vert.id + "' has " + std::to_string(vert.ports.size()) + " ports, expected " +
                std::to_string(want));
    }
    if (vert.kind == VertexKind::Insertion && has_moyal) {
      malformed("insertion vertex '" + vert.id + "' in a graph with Moyal vertices; fold it into a generalised line");
    }
    g.vertex_first_port_.push_back(g.port_vertex_.size());
    for (const auto& name : vert.ports) {
      if (!port_by_name.emplace(name, g.port_vertex_.size()).second) malformed("port '" + name + "' declared twice");
      g.port_vertex_.push_back(v);
    }
  }

  constexpr std::size_t unused = static_cast<std::size_t>(-1);
  g.port_use_.assign(g.port_vertex_.size(), PortUse{PortUse::Kind::Edge, unused, 0});
  auto claim = [&](const std::string& name, PortUse use, const std::string& owner) {
    auto it = port_by_name.find(name);
    if (it == port_by_name.end()) malformed(owner + " uses unknown port '" + name + "'");
    auto& slot = g.port_use_[it->second];
    if (slot.index != unused) malformed("port '" + name + "' used twice");
    slot = use;
    return it->second;
  };

  for (std::size_t e = 0; e < g.desc_.edges.size(); ++e) {
    const auto& edge = g.desc_.edges[e];
    if (!g.edge_by_id_.emplace(edge.id, e).second) malformed("duplicate edge id '" + edge.id + "'");
    if (edge.generalised() && edge.insertions < 1) {
      malformed("generalised line '" + edge.id + "' needs at least one insertion");
    }
    if (!edge.generalised() && edge.insertions != 0) malformed("simple line '" + edge.id + "' carries insertions");
    std::array<std::size_t, 2> ports{};
    for (int end = 0; end < 2; ++end) {
      ports[end] = claim(edge.ports[end], PortUse{PortUse::Kind::Edge, e, end}, "edge '" + edge.id + "'");
    }
    g.edge_ports_.push_back(ports);
  }
  std::unordered_set<std::string> ext_ids;
  for (std::size_t x = 0; x < g.desc_.externals.size(); ++x) {
    const auto& leg = g.desc_.externals[x];
    if (!ext_ids.insert(leg.id).second) malformed("duplicate external id '" + leg.id + "'");
    g.external_ports_.push_back(claim(leg.port, PortUse{PortUse::Kind::External, x, 0}, "external '" + leg.id + "'"));
  }
  for (std::size_t p = 0; p < g.port_use_.size(); ++p) {
    if (g.port_use_[p].index == unused) malformed("port '" + g.port_name(p) + "' is dangling");
  }
  return g;
}

RibbonGraph build_graph(GraphDescription description) { return RibbonGraph::build(std::move(description)); }

std::size_t RibbonGraph::num_moyal_vertices() const {
  return static_cast<std::size_t>(std::count_if(desc_.vertices.begin(), desc_.vertices.end(),
                                                [](const Vertex& v) { return v.kind == VertexKind::Moyal; }));
}

int RibbonGraph::num_kappa_legs() const {
  return static_cast<int>(
      std::count_if(desc_.externals.begin(), desc_.externals.end(), [](const ExternalLeg& x) { return x.kappa; }));
}

std::size_t RibbonGraph::next_port(std::size_t port) const {
  const std::size_t v = port_vertex_[port];
  const std::size_t slot = port - vertex_first_port_[v];
  return vertex_first_port_[v] + (slot + 1) % degree(v);
}

const std::string& RibbonGraph::port_name(std::size_t port) const {
  return desc_.vertices[port_vertex_[port]].ports[port_slot(port)];
}

std::size_t RibbonGraph::edge_index(const std::string& id) const {
  auto it = edge_by_id_.find(id);
  if (it == edge_by_id_.end()) throw Error(ErrorKind::UnknownEdge, "no edge '" + id + "'");
  return it->second;
}

std::optional<std::size_t> RibbonGraph::vertex_index(const std::string& id) const {
  auto it = vertex_by_id_.find(id);
  if (it == vertex_by_id_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------

FaceSet faces(const RibbonGraph& g, std::span<const std::size_t> vertices, const EdgeMask& edges) {
  // Face permutation: cross the edge (or stay on a puncture), then rotate.
  auto alpha = [&](std::size_t p) {
    const auto& use = g.port_use(p);
    if (use.kind == PortUse::Kind::Edge && edges[use.index]) return g.edge_port(use.index, 1 - use.end);
    return p;
  };
  auto punctured = [&](std::size_t p) { return alpha(p) == p; };

  FaceSet out;
  std::vector<bool> seen(g.num_ports(), false);
  for (std::size_t v : vertices) {
    for (std::size_t s = 0; s < g.degree(v); ++s) {
      const std::size_t start = g.first_port(v) + s;
      if (seen[start]) continue;
      Face face;
      std::size_t p = start;
      do {
        seen[p] = true;
        face.ports.push_back(p);
        face.broken = face.broken || punctured(p);
        p = g.next_port(alpha(p));
      } while (p != start);
      out.broken += face.broken ? 1 : 0;
      out.faces.push_back(std::move(face));
    }
  }
  return out;
}

FaceSet faces(const RibbonGraph& g) {
  std::vector<std::size_t> all(g.num_vertices());
  std::iota(all.begin(), all.end(), 0);
  return faces(g, all, g.all_edges());
}

ComponentTopology piece_topology(const RibbonGraph& g, std::span<const std::size_t> vertices,
                                 const EdgeMask& edges) {
  ComponentTopology t;
  t.vertices.assign(vertices.begin(), vertices.end());
  std::vector<bool> member(g.num_vertices(), false);
  for (auto v : vertices) member[v] = true;
  EdgeMask local(g.num_edges(), false);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (!edges[e] || !member[g.edge_vertex(e, 0)]) continue;
    if (!member[g.edge_vertex(e, 1)]) throw Error(ErrorKind::InvalidArgument, "edge leaves the piece");
    local[e] = true;
    t.edges.push_back(e);
    ++t.e;
    (g.edges()[e].generalised() ? t.e_kappa : t.e0) += 1;
  }
  const FaceSet fs = faces(g, vertices, local);
  t.v = static_cast<int>(vertices.size());
  t.f = static_cast<int>(fs.faces.size());
  t.chi = t.v - t.e + t.f;
  if (t.chi > 2 || (2 - t.chi) % 2 != 0) {
    throw Error(ErrorKind::InvalidMap, "Euler characteristic " + std::to_string(t.chi) + " of a connected piece");
  }
  t.genus = (2 - t.chi) / 2;
  t.broken_faces = fs.broken;
  for (auto v : vertices) {
    for (std::size_t s = 0; s < g.degree(v); ++s) {
      const auto& use = g.port_use(g.first_port(v) + s);
      if (use.kind == PortUse::Kind::External || !local[use.index]) ++t.external_legs;
    }
  }
  t.planar = t.genus == 0;
  t.regular = t.broken_faces == 1;
  const auto br = bridges(g, local);
  for (auto e : t.edges) {
    if (g.edges()[e].generalised() && !br[e]) t.tree_like = false;
  }
  return t;
}

TopologyReport topology(const RibbonGraph& g) {
  TopologyReport r;
  const auto mask = g.all_edges();
  for (const auto& comp : vertex_components(g, mask, true)) {
    auto t = piece_topology(g, comp, mask);
    r.v += t.v;
    r.e += t.e;
    r.e0 += t.e0;
    r.e_kappa += t.e_kappa;
    r.f += t.f;
    r.chi += t.chi;
    r.genus += t.genus;
    r.broken_faces += t.broken_faces;
    r.tree_like = r.tree_like && t.tree_like;
    r.components.push_back(std::move(t));
  }
  r.k = static_cast<int>(r.components.size());
  r.planar = r.genus == 0;
  r.regular = r.broken_faces == 1;
  return r;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<std::size_t>> vertex_components(const RibbonGraph& g, const EdgeMask& edges,
                                                        bool include_isolated) {
  UnionFind uf(g.num_vertices());
  std::vector<bool> touched(g.num_vertices(), false);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (!edges[e]) continue;
    uf.unite(g.edge_vertex(e, 0), g.edge_vertex(e, 1));
    touched[g.edge_vertex(e, 0)] = touched[g.edge_vertex(e, 1)] = true;
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> slot(g.num_vertices(), static_cast<std::size_t>(-1));
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (!include_isolated && !touched[v]) continue;
    const auto r = uf.find(v);
    if (slot[r] == static_cast<std::size_t>(-1)) {
      slot[r] = out.size();
      out.emplace_back();
    }
    out[slot[r]].push_back(v);
  }
  return out;
}

std::vector<bool> bridges(const RibbonGraph& g, const EdgeMask& edges) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);  // (neighbour, edge)
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (!edges[e] || g.is_self_loop(e)) continue;
    adj[g.edge_vertex(e, 0)].emplace_back(g.edge_vertex(e, 1), e);
    adj[g.edge_vertex(e, 1)].emplace_back(g.edge_vertex(e, 0), e);
  }
  std::vector<bool> result(g.num_edges(), false);
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;
  std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t u, std::size_t via) {
    disc[u] = low[u] = timer++;
    for (auto [w, e] : adj[u]) {
      if (e == via) continue;
      if (disc[w] >= 0) {
        low[u] = std::min(low[u], disc[w]);
        continue;
      }
      dfs(w, e);
      low[u] = std::min(low[u], low[w]);
      if (low[w] > disc[u]) result[e] = true;
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (disc[v] < 0) dfs(v, static_cast<std::size_t>(-1));
  }
  return result;
}

bool is_bridge(const RibbonGraph& g, const std::string& edge_id) {
  const auto e = g.edge_index(edge_id);
  return bridges(g, g.all_edges())[e];
}

// ---------------------------------------------------------------------------

std::size_t SpanningTree::parent_vertex(const RibbonGraph& g, std::size_t edge) const {
  const auto a = g.edge_vertex(edge, 0);
  const auto b = g.edge_vertex(edge, 1);
  return depth[a] < depth[b] ? a : b;
}

std::size_t SpanningTree::child_vertex(const RibbonGraph& g, std::size_t edge) const {
  const auto a = g.edge_vertex(edge, 0);
  const auto b = g.edge_vertex(edge, 1);
  return depth[a] < depth[b] ? b : a;
}

std::vector<std::size_t> SpanningTree::branch(const RibbonGraph& g, std::size_t edge) const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    for (std::size_t w = v; parent_edge[w];) {
      if (*parent_edge[w] == edge) {
        out.push_back(v);
        break;
      }
      const auto e = *parent_edge[w];
      w = g.edge_vertex(e, 0) == w ? g.edge_vertex(e, 1) : g.edge_vertex(e, 0);
    }
  }
  return out;
}

namespace {

SpanningTree orient(const RibbonGraph& g, std::size_t root, std::vector<bool> in_tree) {
  SpanningTree t;
  t.in_tree = std::move(in_tree);
  t.parent_edge.assign(g.num_vertices(), std::nullopt);
  t.depth.assign(g.num_vertices(), -1);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(g.num_vertices());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (t.in_tree[e]) {
      t.tree_edges.push_back(e);
      adj[g.edge_vertex(e, 0)].emplace_back(g.edge_vertex(e, 1), e);
      adj[g.edge_vertex(e, 1)].emplace_back(g.edge_vertex(e, 0), e);
    } else {
      t.loop_edges.push_back(e);
    }
  }
  auto grow = [&](std::size_t r) {
    t.roots.push_back(r);
    t.depth[r] = 0;
    std::vector<std::size_t> stack{r};
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (auto [w, e] : adj[u]) {
        if (t.depth[w] >= 0) continue;
        t.depth[w] = t.depth[u] + 1;
        t.parent_edge[w] = e;
        stack.push_back(w);
      }
    }
  };
  grow(root);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (t.depth[v] < 0) grow(v);
  }
  return t;
}

}  // namespace

SpanningTree spanning_tree(const RibbonGraph& g, std::size_t root, TreePreference preference,
                           std::span<const int> edge_scales) {
  if (root >= g.num_vertices()) throw Error(ErrorKind::InvalidArgument, "root vertex out of range");
  std::vector<std::size_t> order(g.num_edges());
  std::iota(order.begin(), order.end(), 0);
  if (preference == TreePreference::ScaleDescending) {
    if (edge_scales.size() != g.num_edges()) {
      throw Error(ErrorKind::MissingScale, "scale-descending tree needs one scale per edge");
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return edge_scales[a] > edge_scales[b]; });
  }
  UnionFind uf(g.num_vertices());
  std::vector<bool> in_tree(g.num_edges(), false);
  for (auto e : order) in_tree[e] = uf.unite(g.edge_vertex(e, 0), g.edge_vertex(e, 1));
  return orient(g, root, std::move(in_tree));
}

SpanningTree rooted_tree(const RibbonGraph& g, std::size_t root, std::span<const std::size_t> tree_edges) {
  if (root >= g.num_vertices()) throw Error(ErrorKind::InvalidArgument, "root vertex out of range");
  UnionFind uf(g.num_vertices());
  std::vector<bool> in_tree(g.num_edges(), false);
  for (auto e : tree_edges) {
    if (e >= g.num_edges() || !uf.unite(g.edge_vertex(e, 0), g.edge_vertex(e, 1))) {
      throw Error(ErrorKind::InvalidArgument, "edge set is not a forest");
    }
    in_tree[e] = true;
  }
  const auto k = vertex_components(g, g.all_edges(), true).size();
  if (tree_edges.size() + k != g.num_vertices()) throw Error(ErrorKind::InvalidArgument, "edge set does not span");
  return orient(g, root, std::move(in_tree));
}

std::vector<std::vector<std::size_t>> all_spanning_trees(const RibbonGraph& g, std::size_t limit) {
  const auto k = vertex_components(g, g.all_edges(), true).size();
  const std::size_t need = g.num_vertices() - k;
  std::vector<std::size_t> candidates;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (!g.is_self_loop(e)) candidates.push_back(e);
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t, UnionFind)> rec = [&](std::size_t from, UnionFind uf) {
    if (limit && out.size() >= limit) return;
    if (chosen.size() == need) {
      out.push_back(chosen);
      return;
    }
    for (std::size_t i = from; i + (need - chosen.size()) <= candidates.size(); ++i) {
      const auto e = candidates[i];
      UnionFind next = uf;
      if (!next.unite(g.edge_vertex(e, 0), g.edge_vertex(e, 1))) continue;
      chosen.push_back(e);
      rec(i + 1, std::move(next));
      chosen.pop_back();
    }
  };
  rec(0, UnionFind(g.num_vertices()));
  return out;
}

}  // namespace mrg

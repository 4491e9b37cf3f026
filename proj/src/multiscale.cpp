#include "mrg/multiscale.hpp"

#include <algorithm>

#include "mrg/error.hpp"

namespace mrg {

SegmentScales segment_scales(std::span<const int> segments) {
  if (segments.empty()) throw Error(ErrorKind::AttributionMismatch, "generalised line without segment scales");
  const int first = segments.front();
  const int last = segments.back();
  return {*std::min_element(segments.begin(), segments.end()), std::max(first, last), std::min(first, last)};
}

void validate_attribution(const RibbonGraph& g, const ScaleAttribution& mu) {
  for (const auto& [id, scales] : mu.scales) {
    std::size_t e = 0;
    try {
      e = g.edge_index(id);
    } catch (const Error&) {
      throw Error(ErrorKind::AttributionMismatch, "attribution names unknown edge '" + id + "'");
    }
    const auto& edge = g.edges()[e];
    const std::size_t want = edge.generalised() ? static_cast<std::size_t>(edge.insertions) + 1 : 1;
    if (scales.size() != want) {
      throw Error(ErrorKind::AttributionMismatch, "edge '" + id + "' needs " + std::to_string(want) +
                                                      " scale(s), got " + std::to_string(scales.size()));
    }
    for (int s : scales) {
      if (s < 0) throw Error(ErrorKind::AttributionMismatch, "negative scale on edge '" + id + "'");
    }
  }
  for (const auto& edge : g.edges()) {
    if (!mu.scales.contains(edge.id)) throw Error(ErrorKind::MissingScale, "edge '" + edge.id + "' has no scale");
  }
}

std::vector<int> effective_scales(const RibbonGraph& g, const ScaleAttribution& mu) {
  validate_attribution(g, mu);
  std::vector<int> out;
  out.reserve(g.num_edges());
  for (const auto& edge : g.edges()) {
    const auto& s = mu.scales.at(edge.id);
    out.push_back(edge.generalised() ? segment_scales(s).i_m : s.front());
  }
  return out;
}

ScaleAttribution flat_attribution(const RibbonGraph& g, int scale) {
  ScaleAttribution mu;
  for (const auto& edge : g.edges()) {
    mu.scales[edge.id] = std::vector<int>(edge.generalised() ? edge.insertions + 1 : 1, scale);
  }
  return mu;
}

namespace {

std::vector<QuasiLocal> components_at(const RibbonGraph& g, const std::vector<int>& eff, int level) {
  EdgeMask mask(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) mask[e] = eff[e] >= level;
  std::vector<QuasiLocal> out;
  for (auto& verts : vertex_components(g, mask, level == 0)) {
    QuasiLocal q;
    q.level = level;
    std::vector<bool> member(g.num_vertices(), false);
    for (auto v : verts) member[v] = true;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      if (mask[e] && member[g.edge_vertex(e, 0)]) q.edges.push_back(e);
    }
    q.vertices = std::move(verts);
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace

std::vector<QuasiLocal> quasi_local(const RibbonGraph& g, const ScaleAttribution& mu, int level) {
  if (level < 0) throw Error(ErrorKind::InvalidArgument, "negative level");
  return components_at(g, effective_scales(g, mu), level);
}

std::vector<int> GNTree::level(int i) const {
  std::vector<int> out;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (nodes[n].level == i) out.push_back(static_cast<int>(n));
  }
  return out;
}

GNTree gn_tree(const RibbonGraph& g, const ScaleAttribution& mu) {
  const auto eff = effective_scales(g, mu);
  GNTree tree;
  tree.max_level = eff.empty() ? 0 : *std::max_element(eff.begin(), eff.end());

  std::vector<int> owner_prev;  // vertex -> node at previous level
  for (int level = 0; level <= tree.max_level; ++level) {
    std::vector<int> owner(g.num_vertices(), -1);
    int k = 0;
    for (auto& q : components_at(g, eff, level)) {
      GNNode node;
      node.level = level;
      node.index = ++k;
      node.vertices = std::move(q.vertices);
      node.edges = std::move(q.edges);
      EdgeMask own(g.num_edges(), false);
      for (auto e : node.edges) {
        own[e] = true;
        if (g.edges()[e].generalised()) node.e_kappa_empty = false;
      }
      for (auto v : node.vertices) {
        for (std::size_t s = 0; s < g.degree(v); ++s) {
          const std::size_t p = g.first_port(v) + s;
          const auto& use = g.port_use(p);
          if (use.kind == PortUse::Kind::Edge && own[use.index]) continue;
          node.boundary_ports.push_back(p);
          const bool kappa = use.kind == PortUse::Kind::External ? g.externals()[use.index].kappa
                                                                 : g.edges()[use.index].generalised();
          node.N_kappa += kappa ? 1 : 0;
        }
      }
      node.N = static_cast<int>(node.boundary_ports.size());

      const int id = static_cast<int>(tree.nodes.size());
      for (auto v : node.vertices) owner[v] = id;
      if (level == 0) {
        tree.roots.push_back(id);
      } else {
        node.parent = owner_prev[node.vertices.front()];
        tree.nodes[node.parent].children.push_back(id);
      }
      tree.nodes.push_back(std::move(node));
    }
    owner_prev = std::move(owner);
  }
  return tree;
}

bool is_admissible(const RibbonGraph& g, const ScaleAttribution& mu, const std::string& edge_id) {
  const auto e = g.edge_index(edge_id);
  if (!g.edges()[e].generalised()) throw Error(ErrorKind::NotGeneralised, "edge '" + edge_id + "' is simple");
  const auto eff = effective_scales(g, mu);
  // The component holding e at its own scale contains every line of scale
  // >= eff[e] reachable from it; bridges there are bridges of that component.
  EdgeMask mask(g.num_edges());
  for (std::size_t f = 0; f < g.num_edges(); ++f) mask[f] = eff[f] >= eff[e];
  return bridges(g, mask)[e];
}

std::size_t enumerate_attributions(const RibbonGraph& g, int max_scale,
                                   const std::function<bool(const ScaleAttribution&)>& visit,
                                   std::size_t limit) {
  if (max_scale < 0) throw Error(ErrorKind::InvalidArgument, "negative scale cap");
  ScaleAttribution mu = flat_attribution(g, 0);
  std::vector<int*> slots;
  for (auto& [id, scales] : mu.scales) {
    for (auto& s : scales) slots.push_back(&s);
  }
  std::size_t count = 0;
  while (true) {
    ++count;
    if (!visit(mu) || (limit && count >= limit)) return count;
    std::size_t i = 0;
    for (; i < slots.size(); ++i) {
      if (*slots[i] < max_scale) {
        ++*slots[i];
        break;
      }
      *slots[i] = 0;
    }
    if (i == slots.size()) return count;
  }
}

}  // namespace mrg

#include "mrg/powercount.hpp"

#include <algorithm>
#include <set>

#include "mrg/error.hpp"

namespace mrg {

namespace {

void check_topology(int N, int genus, int broken_faces) {
  if (N < 2 || N % 2 != 0) throw Error(ErrorKind::InvalidTopology, "N must be even and at least 2");
  if (genus < 0) throw Error(ErrorKind::InvalidTopology, "negative genus");
  if (broken_faces < 1) throw Error(ErrorKind::InvalidTopology, "at least one broken face expected");
}

}  // namespace

int omega_kappa0(int N, int genus, int broken_faces) {
  check_topology(N, genus, broken_faces);
  return N - 4 + 4 * genus + 2 * (broken_faces - 1);
}

Rational omega_phi6(int N, int genus, int broken_faces, int v4) {
  check_topology(N, genus, broken_faces);
  if (v4 < 0) throw Error(ErrorKind::InvalidTopology, "negative v4");
  return Rational(N - 6 + 8 * genus + 4 * (broken_faces - 1) + 2 * v4, 2);
}

std::string_view to_string(BoundCase c) {
  switch (c) {
    case BoundCase::NotTreeLike: return "not-tree-like";
    case BoundCase::NonPlanar: return "non-planar";
    case BoundCase::PlanarBroken: return "planar-broken";
    case BoundCase::PlanarRegularKappa: return "planar-regular-kappa-lines";
    case BoundCase::PlanarRegular: return "planar-regular";
    case BoundCase::MoyalFreeChain: return "moyal-free-chain";
  }
  return "?";
}

std::string_view to_string(Counterterm c) {
  switch (c) {
    case Counterterm::None: return "none";
    case Counterterm::MassWaveOmega: return "mass/wave/Omega";
    case Counterterm::Lambda: return "lambda";
    case Counterterm::KappaSquared: return "kappa^2";
  }
  return "?";
}

BoundCase bound_case(const NodeData& d) {
  auto bad = [](const char* what) { throw Error(ErrorKind::InconsistentNode, what); };
  if (d.N < 2 || d.N % 2 != 0) bad("N must be even and at least 2");
  if (d.N_kappa < 0 || d.N_kappa > d.N) bad("N_kappa must lie in [0, N]");
  if (d.genus < 0) bad("negative genus");
  if (d.broken_faces < 1) bad("at least one broken face expected");
  if (d.n_kappa < 0) bad("negative n_kappa");
  if (!d.tree_like && d.e_kappa_empty) bad("a node without generalised lines is tree-like");

  if (!d.tree_like) return BoundCase::NotTreeLike;
  if (d.genus > 0) return BoundCase::NonPlanar;
  if (d.broken_faces >= 2) return BoundCase::PlanarBroken;
  if (!d.e_kappa_empty) return BoundCase::PlanarRegularKappa;
  return BoundCase::PlanarRegular;
}

NodeVerdict classify_node(const NodeData& d) {
  NodeVerdict v{};
  v.bound_case = bound_case(d);
  switch (v.bound_case) {
    case BoundCase::NotTreeLike: v.omega = d.N + 4 * d.n_kappa; break;
    case BoundCase::NonPlanar: v.omega = d.N; break;
    case BoundCase::PlanarBroken:
    case BoundCase::PlanarRegularKappa: v.omega = d.N - 2; break;
    case BoundCase::PlanarRegular:
      // the global delta fixes one insertion when all legs carry one
      v.omega = d.N_kappa < d.N ? d.N - 4 + 2 * d.N_kappa : d.N - 4 + 2 * (d.N_kappa - 1);
      break;
    case BoundCase::MoyalFreeChain: break;
  }
  v.divergent = v.omega <= 0;
  v.logarithmic = v.omega == 0;
  v.counterterm = Counterterm::None;
  if (v.divergent) {
    const bool insertions = d.N_kappa > 0 || !d.e_kappa_empty;
    if (d.N == 4) {
      v.counterterm = Counterterm::Lambda;
    } else if (d.broken_faces >= 2 || insertions) {
      v.counterterm = Counterterm::KappaSquared;
    } else {
      v.counterterm = Counterterm::MassWaveOmega;
    }
  }
  return v;
}

NodeVerdict classify_moyal_free_chain() {
  return {BoundCase::MoyalFreeChain, 0, true, true, Counterterm::KappaSquared};
}

DivergenceReport classify_graph(const RibbonGraph& g, const ScaleAttribution& mu) {
  DivergenceReport report;
  const auto eff = effective_scales(g, mu);
  report.tree = gn_tree(g, mu);
  const auto tree = spanning_tree(g, 0, TreePreference::ScaleDescending, eff);

  std::set<Counterterm> counterterms;
  for (std::size_t n = 0; n < report.tree.nodes.size(); ++n) {
    const auto& node = report.tree.nodes[n];
    if (node.edges.empty()) continue;  // a bare vertex is not a subgraph
    EdgeMask mask(g.num_edges(), false);
    for (auto e : node.edges) mask[e] = true;
    const auto topo = piece_topology(g, node.vertices, mask);

    NodeReport r;
    r.node = static_cast<int>(n);
    r.level = node.level;
    r.index = node.index;
    r.data.N = node.N;
    r.data.N_kappa = node.N_kappa;
    r.data.genus = topo.genus;
    r.data.broken_faces = topo.broken_faces;
    r.data.tree_like = topo.tree_like;
    r.data.e_kappa_empty = node.e_kappa_empty;
    for (auto e : node.edges) {
      if (g.edges()[e].generalised() && !tree.in_tree[e]) ++r.data.n_kappa;
    }
    r.moyal_free = std::none_of(node.vertices.begin(), node.vertices.end(),
                                [&](auto v) { return g.vertices()[v].kind == VertexKind::Moyal; });
    r.verdict = r.moyal_free ? classify_moyal_free_chain() : classify_node(r.data);
    if (r.verdict.divergent) {
      report.any_divergent = true;
      counterterms.insert(r.verdict.counterterm);
    }
    report.nodes.push_back(std::move(r));
  }
  report.counterterms.assign(counterterms.begin(), counterterms.end());
  return report;
}

}  // namespace mrg

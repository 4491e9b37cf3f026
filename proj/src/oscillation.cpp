#include "mrg/oscillation.hpp"

#include <algorithm>
#include <deque>

#include "mrg/error.hpp"

namespace mrg {

namespace {

void require_moyal_connected(const RibbonGraph& g, const SpanningTree& t) {
  for (const auto& v : g.vertices()) {
    if (v.kind != VertexKind::Moyal) throw Error(ErrorKind::NotMoyal, "vertex '" + v.id + "' is an insertion");
  }
  if (t.roots.size() != 1 || vertex_components(g, g.all_edges()).size() != 1) {
    throw Error(ErrorKind::Disconnected, "rosette factors need a connected graph");
  }
}

// End of tree edge e sitting on its parent vertex.
int parent_end(const RibbonGraph& g, const SpanningTree& t, std::size_t e) {
  return g.edge_vertex(e, 0) == t.parent_vertex(g, e) ? 0 : 1;
}

bool is_parent_side(const RibbonGraph& g, const SpanningTree& t, std::size_t port) {
  const auto& use = g.port_use(port);
  return use.kind == PortUse::Kind::Edge && t.in_tree[use.index] && parent_end(g, t, use.index) == use.end;
}

// Ports of v in contour order: all of them for the root, otherwise those
// following the port through which the walk entered.
std::vector<std::size_t> walk_ports(const RibbonGraph& g, const SpanningTree& t, std::size_t v) {
  std::vector<std::size_t> out;
  std::size_t p = g.first_port(v);
  std::size_t count = g.degree(v);
  if (t.parent_edge[v]) {
    const auto e = *t.parent_edge[v];
    p = g.next_port(g.edge_port(e, 1 - parent_end(g, t, e)));
    --count;
  }
  for (std::size_t s = 0; s < count; ++s, p = g.next_port(p)) out.push_back(p);
  return out;
}

void walk(const RibbonGraph& g, const SpanningTree& t, std::size_t v, ContourOrder& order) {
  for (auto p : walk_ports(g, t, v)) {
    const auto& use = g.port_use(p);
    if (use.kind == PortUse::Kind::External) {
      order.external_position[use.index] = order.items.size();
      order.items.push_back({ContourItemKind::External, use.index, p});
      continue;
    }
    const auto e = use.index;
    auto& pos = order.line_positions[e];
    if (order.loop[e]) {
      if (order.first_end[e] < 0) {
        order.first_end[e] = use.end;
        pos[0] = order.items.size();
      } else {
        pos[1] = order.items.size();
      }
      order.items.push_back({ContourItemKind::LoopEnd, e, p});
    } else {
      order.first_end[e] = use.end;
      pos[0] = order.items.size();
      order.items.push_back({ContourItemKind::TreeDown, e, p});
      walk(g, t, t.child_vertex(g, e), order);
      pos[1] = order.items.size();
      order.items.push_back({ContourItemKind::TreeUp, e, g.edge_port(e, 1 - use.end)});
    }
  }
}

// An arch occupies contour positions s1 <= s2.  A tree line is either a point
// at its contraction point (s1 == s2) or an arch over its branch without a
// p term.
struct Arch {
  std::size_t s1, s2;
  bool has_p;
};

LineRelation relate(const Arch& a, const Arch& b) {
  if (a.s2 < b.s1) return LineRelation::Before;
  if (b.s2 < a.s1) return LineRelation::After;
  if (a.s1 < b.s1 && b.s2 < a.s2) return LineRelation::Contains;
  if (b.s1 < a.s1 && a.s2 < b.s2) return LineRelation::Inside;
  if (a.s1 < b.s1) return LineRelation::CrossesLeft;
  return LineRelation::CrossedLeft;
}

RosettePhase assemble(const RibbonGraph& g, const ContourOrder& order, const std::vector<Arch>& arches) {
  RosettePhase r{SymbolSpace::for_graph(g), PhaseForm(), {}};
  const auto& s = r.symbols;
  r.phase = PhaseForm(s.size());
  auto& phi = r.phase;
  const Rational half(1, 2);

  // externals among themselves
  std::vector<std::size_t> ext(g.externals().size());
  for (std::size_t k = 0; k < ext.size(); ++k) ext[k] = k;
  std::sort(ext.begin(), ext.end(),
            [&](auto a, auto b) { return order.external_position[a] < order.external_position[b]; });
  for (std::size_t i = 0; i < ext.size(); ++i) {
    for (std::size_t j = i + 1; j < ext.size(); ++j) phi.add(s.external(ext[i]), s.external(ext[j]), 1);
  }

  for (std::size_t l = 0; l < g.num_edges(); ++l) {
    const auto& a = arches[l];
    if (a.has_p) phi.add(s.line_p(l), s.line_dp(l), half);

    for (std::size_t k = 0; k < ext.size(); ++k) {
      const auto x = order.external_position[k];
      if (x < a.s1) {
        phi.add(s.external(k), s.line_dp(l), 1);
      } else if (x > a.s2) {
        phi.add(s.line_dp(l), s.external(k), 1);
      } else if (a.has_p) {
        phi.add(s.line_p(l), s.external(k), 1);
      }
    }

    for (std::size_t m = 0; m < g.num_edges(); ++m) {
      if (m == l) continue;
      const auto& b = arches[m];
      switch (relate(a, b)) {
        case LineRelation::Before:
          phi.add(s.line_dp(l), s.line_dp(m), 1);
          break;
        case LineRelation::Contains:
          if (a.has_p) phi.add(s.line_p(l), s.line_dp(m), 1);
          break;
        case LineRelation::CrossesLeft:
          phi.add(s.line_dp(l), s.line_dp(m), half);
          if (a.has_p) phi.add(s.line_p(l), s.line_dp(m), half);
          if (b.has_p) phi.add(s.line_p(m), s.line_dp(l), half);
          if (a.has_p && b.has_p) phi.add(s.line_p(l), s.line_p(m), half);
          break;
        default:
          break;  // counted from the other line
      }
    }
  }

  r.constraint = LinearForm(s.size());
  for (std::size_t k = 0; k < ext.size(); ++k) r.constraint[s.external(k)] = 1;
  for (std::size_t l = 0; l < g.num_edges(); ++l) r.constraint[s.line_dp(l)] = 1;
  return r;
}

// Order in which tree lines are contracted: breadth first from the root,
// each vertex's tree children in contour order.
std::vector<std::size_t> contraction_order(const RibbonGraph& g, const SpanningTree& t) {
  std::vector<std::size_t> out;
  std::deque<std::size_t> queue{t.root()};
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (auto p : walk_ports(g, t, v)) {
      if (!is_parent_side(g, t, p)) continue;
      const auto e = g.port_use(p).index;
      out.push_back(e);
      queue.push_back(t.child_vertex(g, e));
    }
  }
  return out;
}

}  // namespace

LineRelation ContourOrder::relation(std::size_t l, std::size_t l2) const {
  const auto& a = line_positions[l];
  const auto& b = line_positions[l2];
  return relate({a[0], a[1], true}, {b[0], b[1], true});
}

bool ContourOrder::arches_over(std::size_t l, std::size_t external) const {
  const auto x = external_position[external];
  return loop[l] && line_positions[l][0] < x && x < line_positions[l][1];
}

ContourOrder contour_order(const RibbonGraph& g, const SpanningTree& t) {
  require_moyal_connected(g, t);
  ContourOrder order;
  order.line_positions.assign(g.num_edges(), {0, 0});
  order.first_end.assign(g.num_edges(), -1);
  order.external_position.assign(g.externals().size(), 0);
  order.loop.assign(g.num_edges(), false);
  for (auto e : t.loop_edges) order.loop[e] = true;
  walk(g, t, t.root(), order);
  return order;
}

RosettePhase rosette_factor(const RibbonGraph& g, const SpanningTree& t) {
  const auto order = contour_order(g, t);
  std::vector<Arch> arches;
  for (std::size_t l = 0; l < g.num_edges(); ++l) {
    const auto& pos = order.line_positions[l];
    arches.push_back(order.loop[l] ? Arch{pos[0], pos[1], true} : Arch{pos[0], pos[0], false});
  }
  auto r = assemble(g, order, arches);
  for (auto l : t.tree_edges) r.phase.add(r.symbols.line_p(l), r.symbols.line_dp(l), Rational(1, 2));
  return r;
}

RosettePhase rosette_factor_arch_reading(const RibbonGraph& g, const SpanningTree& t) {
  const auto order = contour_order(g, t);
  std::vector<Arch> arches;
  for (std::size_t l = 0; l < g.num_edges(); ++l) {
    arches.push_back({order.line_positions[l][0], order.line_positions[l][1], order.loop[l]});
  }
  return assemble(g, order, arches);
}

std::vector<LinearForm> port_momenta(const RibbonGraph& g, const ContourOrder& order, const SymbolSpace& s) {
  std::vector<LinearForm> q(g.num_ports(), LinearForm(s.size()));
  const Rational half(1, 2);
  for (std::size_t p = 0; p < g.num_ports(); ++p) {
    const auto& use = g.port_use(p);
    if (use.kind == PortUse::Kind::External) {
      q[p][s.external(use.index)] = 1;
    } else {
      const auto e = use.index;
      q[p][s.line_dp(e)] = half;
      q[p][s.line_p(e)] = use.end == order.first_end[e] ? half : -half;
    }
  }
  return q;
}

RosettePhase tree_reduce(const RibbonGraph& g, const SpanningTree& t) {
  const auto order = contour_order(g, t);
  RosettePhase r{SymbolSpace::for_graph(g), PhaseForm(), {}};
  auto& s = r.symbols;
  const std::size_t base = s.num_base();

  // one atom per tree line: the momentum entering its parent vertex
  std::vector<std::size_t> atom(g.num_edges(), 0);
  for (auto e : t.tree_edges) atom[e] = s.add_atom("u[" + g.edges()[e].id + "]");
  const std::size_t n = s.size();

  const Rational half(1, 2);
  auto momentum = [&](std::size_t p) {
    const auto& use = g.port_use(p);
    if (use.kind == PortUse::Kind::External) return unit_form(n, s.external(use.index));
    const auto e = use.index;
    if (t.in_tree[e]) return unit_form(n, atom[e]);
    LinearForm x = unit_form(n, s.line_dp(e), half);
    x[s.line_p(e)] = use.end == order.first_end[e] ? half : -half;
    return x;
  };
  auto momenta = [&](std::size_t v) {
    std::vector<LinearForm> q;
    for (auto p : walk_ports(g, t, v)) q.push_back(momentum(p));
    return q;
  };

  r.phase = PhaseForm(n);
  const auto root_ports = momenta(t.root());
  r.phase.add_ordered_sum(root_ports);
  r.constraint = LinearForm(n);
  for (const auto& x : root_ports) axpy(r.constraint, 1, x);

  // Contracting e: the child vertex's phase, rotated to start at e, loses the
  // entering momentum by conservation; the parent-side momentum becomes
  // dp_e plus the child's remaining momenta.
  for (auto e : contraction_order(g, t)) {
    const auto q = momenta(t.child_vertex(g, e));
    r.phase.add_ordered_sum(q);
    LinearForm value = unit_form(n, s.line_dp(e));
    for (const auto& x : q) axpy(value, 1, x);
    r.phase.substitute(atom[e], value);
    substitute(r.constraint, atom[e], value);
  }

  r.phase.resize(base);
  r.constraint.resize(base);
  r.symbols = SymbolSpace::for_graph(g);
  return r;
}

MomentumRouting momentum_routing(const RibbonGraph& g, const SpanningTree& t) {
  const auto order = contour_order(g, t);
  MomentumRouting m;
  m.symbols = SymbolSpace::for_graph(g);
  const auto& s = m.symbols;
  const auto n = s.size();
  const auto q = port_momenta(g, order, s);
  m.tree_momentum.assign(g.num_edges(), std::nullopt);
  m.child_port.assign(g.num_edges(), std::nullopt);

  // Leaves first: the momentum entering a child through its tree line
  // balances everything else at the child.
  auto bfs = contraction_order(g, t);
  std::vector<LinearForm> in_port(g.num_ports());  // solved tree-line port momenta
  auto resolved = [&](std::size_t p) -> LinearForm {
    const auto& use = g.port_use(p);
    if (use.kind == PortUse::Kind::Edge && t.in_tree[use.index]) return in_port[p];
    return q[p];
  };
  for (auto it = bfs.rbegin(); it != bfs.rend(); ++it) {
    const auto e = *it;
    const auto v = t.child_vertex(g, e);
    const int pe = parent_end(g, t, e);
    LinearForm d(n);
    for (auto p : walk_ports(g, t, v)) axpy(d, -1, resolved(p));
    LinearForm u = unit_form(n, s.line_dp(e));
    axpy(u, -1, d);
    in_port[g.edge_port(e, 1 - pe)] = d;
    in_port[g.edge_port(e, pe)] = u;
    LinearForm p = unit_form(n, s.line_dp(e));
    axpy(p, -2, d);
    m.child_port[e] = std::move(d);
    m.tree_momentum[e] = std::move(p);
  }
  m.constraint = LinearForm(n);
  for (auto p : walk_ports(g, t, t.root())) axpy(m.constraint, 1, resolved(p));

  m.free.assign(n, true);
  for (auto e : t.tree_edges) m.free[s.line_p(e)] = false;
  return m;
}

std::vector<Vec2Q> random_assignment(const MomentumRouting& routing, std::mt19937_64& rng, int bound) {
  const auto& s = routing.symbols;
  std::uniform_int_distribution<int> num(-bound, bound);
  std::uniform_int_distribution<int> den(1, bound);
  std::vector<Vec2Q> values(s.size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (!routing.free[a]) continue;
    // sequenced draws keep the stream independent of evaluation order
    const int nx = num(rng);
    const int dx = den(rng);
    const int ny = num(rng);
    const int dy = den(rng);
    values[a] = {Rational(nx, dx), Rational(ny, dy)};
  }
  std::size_t pivot = s.size();
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (!routing.constraint[a].is_zero()) {
      pivot = a;
      break;
    }
  }
  if (pivot < s.size()) {
    values[pivot] = {};
    const auto rest = evaluate_vec(routing.constraint, values);
    values[pivot] = (Rational(-1) / routing.constraint[pivot]) * rest;
  }
  for (std::size_t e = 0; e < routing.tree_momentum.size(); ++e) {
    if (routing.tree_momentum[e]) values[s.line_p(e)] = evaluate_vec(*routing.tree_momentum[e], values);
  }
  return values;
}

Rational phase_oracle(const RibbonGraph& g, const SpanningTree& t, const std::vector<Vec2Q>& values,
                      const Rational& theta) {
  const auto order = contour_order(g, t);
  const auto s = SymbolSpace::for_graph(g);
  const Rational half(1, 2);

  std::vector<std::optional<Vec2Q>> q(g.num_ports());
  for (std::size_t p = 0; p < g.num_ports(); ++p) {
    const auto& use = g.port_use(p);
    if (use.kind == PortUse::Kind::External) {
      q[p] = values[s.external(use.index)];
    } else if (!t.in_tree[use.index]) {
      const auto e = use.index;
      const auto& dp = values[s.line_dp(e)];
      const auto& pl = values[s.line_p(e)];
      q[p] = use.end == order.first_end[e] ? half * (dp + pl) : half * (dp - pl);
    }
  }

  // Peel leaves: deepest vertices first.
  std::vector<std::size_t> by_depth(g.num_vertices());
  for (std::size_t v = 0; v < by_depth.size(); ++v) by_depth[v] = v;
  std::stable_sort(by_depth.begin(), by_depth.end(), [&](auto a, auto b) { return t.depth[a] > t.depth[b]; });
  for (auto v : by_depth) {
    if (!t.parent_edge[v]) continue;
    const auto e = *t.parent_edge[v];
    const int child_end = g.edge_vertex(e, 0) == v ? 0 : 1;
    const std::size_t in = g.edge_port(e, child_end);
    const std::size_t out = g.edge_port(e, 1 - child_end);
    Vec2Q sum;
    for (std::size_t k = 0; k < g.degree(v); ++k) {
      const auto p = g.first_port(v) + k;
      if (p != in) sum += *q[p];
    }
    q[in] = -sum;
    q[out] = values[s.line_dp(e)] - *q[in];
  }

  Vec2Q total;
  for (std::size_t k = 0; k < g.degree(t.root()); ++k) total += *q[g.first_port(t.root()) + k];
  if (total != Vec2Q{}) {
    throw Error(ErrorKind::InconsistentAssignment, "momentum is not conserved at the root vertex");
  }

  Rational phase = 0;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const auto first = g.first_port(v);
    for (std::size_t i = 0; i < g.degree(v); ++i) {
      for (std::size_t j = i + 1; j < g.degree(v); ++j) phase += wedge(*q[first + i], *q[first + j], theta);
    }
  }
  return phase;
}

PhaseForm canonical_phase(const RibbonGraph& g, const SpanningTree& t, const RosettePhase& r) {
  const auto order = contour_order(g, t);
  const auto routing = momentum_routing(g, t);
  const auto& s = r.symbols;
  PhaseForm phi = r.phase;
  for (auto e : t.tree_edges) phi.substitute(s.line_p(e), *routing.tree_momentum[e]);
  for (auto e : t.loop_edges) {
    if (order.first_end[e] == 1) phi.scale_symbol(s.line_p(e), -1);
  }
  std::size_t pivot = s.size();
  for (std::size_t a = 0; a < r.constraint.size(); ++a) {
    if (!r.constraint[a].is_zero()) {
      pivot = a;
      break;
    }
  }
  if (pivot < s.size()) {
    LinearForm value(s.size());
    axpy(value, Rational(-1) / r.constraint[pivot], r.constraint);
    value[pivot] = 0;
    phi.substitute(pivot, value);
  }
  return phi;
}

ReadingComparison compare_readings(const RibbonGraph& g, const SpanningTree& t) {
  auto diff = canonical_phase(g, t, rosette_factor(g, t)) - canonical_phase(g, t, rosette_factor_arch_reading(g, t));
  const bool agree = diff.is_zero();
  return {agree, std::move(diff)};
}

OracleSummary oracle_check(const RibbonGraph& g, const OracleOptions& options) {
  OracleSummary summary;
  std::mt19937_64 rng(options.seed);
  const auto trees = all_spanning_trees(g, options.max_trees);
  for (const auto& edges : trees) {
    for (std::size_t root = 0; root < g.num_vertices(); ++root) {
      const auto t = rooted_tree(g, root, edges);
      auto rosette = rosette_factor(g, t);
      const auto reduced = tree_reduce(g, t);
      const auto routing = momentum_routing(g, t);
      if (options.corrupt_coefficient) {
        const auto terms = rosette.phase.terms();
        if (!terms.empty()) {
          rosette.phase.add(terms.front().a, terms.front().b, Rational(1, 2));
        } else if (rosette.phase.size() >= 2) {
          rosette.phase.add(0, 1, Rational(1, 2));
        }
      }
      ++summary.trees;
      for (std::size_t k = 0; k < options.trials; ++k) {
        const auto values = random_assignment(routing, rng);
        const Rational expected = phase_oracle(g, t, values);
        const std::pair<const char*, const PhaseForm*> candidates[] = {{"rosette_factor", &rosette.phase},
                                                                         {"tree_reduce", &reduced.phase}};
        for (const auto& [name, phase] : candidates) {
          ++summary.checks;
          const Rational got = phase->evaluate(values, 1);
          if (got == expected) {
            ++summary.matches;
          } else if (!summary.first_mismatch) {
            summary.first_mismatch = OracleMismatch{edges, root, name, values, expected, got};
          }
        }
      }
    }
  }
  return summary;
}

}  // namespace mrg

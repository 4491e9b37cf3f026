#include <doctest.h>

#include "mrg/error.hpp"
#include "mrg/io.hpp"
#include "mrg/oscillation.hpp"
#include "oracles.hpp"

using namespace mrg;

namespace {

RibbonGraph corpus_graph(const std::string& name) { return io::read_graph(oracle::corpus(name)); }

// Moyal graphs of the corpus with at most four vertices.
std::vector<RibbonGraph> small_moyal_graphs() {
  std::vector<RibbonGraph> out;
  for (const auto& path : oracle::corpus_graphs()) {
    auto g = io::read_graph(path);
    if (g.num_moyal_vertices() == g.num_vertices() && g.num_vertices() <= 4) out.push_back(std::move(g));
  }
  return out;
}

RibbonGraph single_vertex() {
  GraphDescription d;
  d.vertices.push_back({"V", VertexKind::Moyal, {"a", "b", "c", "d"}});
  for (auto p : {"a", "b", "c", "d"}) d.externals.push_back({std::string("x") + p, p});
  return build_graph(d);
}

template <typename F>
void for_each_rooted_tree(const RibbonGraph& g, F f) {
  for (const auto& edges : all_spanning_trees(g)) {
    for (std::size_t root = 0; root < g.num_vertices(); ++root) f(rooted_tree(g, root, edges));
  }
}

}  // namespace

TEST_SUITE("oscillation") {
  TEST_CASE("single vertex: ordered sum of the four momenta") {
    const auto g = single_vertex();
    const auto t = spanning_tree(g, 0);
    for (const auto& r : {rosette_factor(g, t), tree_reduce(g, t)}) {
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) CHECK(r.phase.coeff(i, j) == 1);
        CHECK(r.constraint[i] == 1);
      }
      CHECK(r.phase.terms().size() == 6);
    }
    // the oracle on momenta summing to zero is the ordered sum itself
    std::vector<Vec2Q> v{{1, 2}, {Rational(-1, 3), 5}, {4, -1}, {0, 0}};
    v[3] = Vec2Q{} - v[0] - v[1] - v[2];
    Rational direct = 0;
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) direct += wedge(v[i], v[j], 1);
    }
    CHECK(phase_oracle(g, t, v) == direct);
    CHECK(phase_oracle(g, t, std::vector<Vec2Q>(4)) == 0);
    v[3] = v[3] + Vec2Q{1, 0};
    CHECK_THROWS_AS(phase_oracle(g, t, v), Error);
  }

  TEST_CASE("two vertices, one tree line: the tree-reduction form") {
    // root V1 carries the tree port last, so every root external precedes the
    // line and every child external follows it.
    const auto g = corpus_graph("two_vertex_tree.graph");
    const auto t = spanning_tree(g, 0);
    const auto r = tree_reduce(g, t);
    const auto& s = r.symbols;
    const auto order = contour_order(g, t);
    PhaseForm expected(s.size());
    std::vector<std::size_t> ext;
    std::size_t down = 0;
    for (std::size_t k = 0; k < order.items.size(); ++k) {
      if (order.items[k].kind == ContourItemKind::External) ext.push_back(order.items[k].index);
      if (order.items[k].kind == ContourItemKind::TreeDown) down = ext.size();
    }
    REQUIRE(ext.size() == 6);
    for (std::size_t a = 0; a < 6; ++a) {
      for (std::size_t b = a + 1; b < 6; ++b) expected.add(s.external(ext[a]), s.external(ext[b]), 1);
    }
    for (std::size_t a = 0; a < down; ++a) expected.add(s.external(ext[a]), s.line_dp(0), 1);
    CHECK(r.phase == expected);
    LinearForm delta(s.size());
    for (std::size_t k = 0; k < 6; ++k) delta[k] = 1;
    delta[s.line_dp(0)] = 1;
    CHECK(r.constraint == delta);
  }

  TEST_CASE("the tree-reduction form needs the tree port last at the root") {
    // rooted at V2 the line leaves from the first port: the form with only
    // "external before line" terms no longer matches.
    const auto g = corpus_graph("two_vertex_tree.graph");
    const auto t = spanning_tree(g, 1);
    const auto r = tree_reduce(g, t);
    const auto& s = r.symbols;
    bool any_after = false;
    for (std::size_t k = 0; k < 6; ++k) any_after = any_after || r.phase.coeff(s.line_dp(0), s.external(k)) == 1;
    CHECK(any_after);
  }

  TEST_CASE("external legs pair with coefficient one in contour order") {
    for (const auto& g : small_moyal_graphs()) {
      for_each_rooted_tree(g, [&](const SpanningTree& t) {
        const auto order = contour_order(g, t);
        const auto r = rosette_factor(g, t);
        std::vector<std::size_t> ext;
        for (const auto& it : order.items) {
          if (it.kind == ContourItemKind::External) ext.push_back(it.index);
        }
        for (std::size_t a = 0; a < ext.size(); ++a) {
          for (std::size_t b = a + 1; b < ext.size(); ++b) CHECK(r.phase.coeff(ext[a], ext[b]) == 1);
        }
      });
    }
  }

  TEST_CASE("without loops only the tree-line p terms carry p") {
    const auto g = corpus_graph("two_vertex_tree.graph");
    const auto t = spanning_tree(g, 0);
    const auto r = rosette_factor(g, t);
    const auto& s = r.symbols;
    for (const auto& term : r.phase.terms()) {
      if (term.a == s.line_p(0) || term.b == s.line_p(0)) {
        CHECK(term.a == s.line_p(0));
        CHECK(term.b == s.line_dp(0));
        CHECK(term.coefficient == Rational(1, 2));
      }
    }
  }

  TEST_CASE("a loop arching over an external leg") {
    const auto g = corpus_graph("tadpole_nonplanar.graph");
    const auto t = spanning_tree(g, 0);
    const auto order = contour_order(g, t);
    CHECK(order.arches_over(0, 0));
    CHECK_FALSE(order.arches_over(0, 1));
    const auto r = rosette_factor(g, t);
    CHECK(r.phase.coeff(r.symbols.line_p(0), r.symbols.external(0)) == 1);
    CHECK(r.phase.coeff(r.symbols.line_p(0), r.symbols.external(1)) == 0);
  }

  TEST_CASE("contour order: adjacent loop ends, star trees") {
    const auto tad = corpus_graph("tadpole_planar.graph");
    const auto order = contour_order(tad, spanning_tree(tad, 0));
    CHECK(order.line_positions[0][1] == order.line_positions[0][0] + 1);
    CHECK_FALSE(order.arches_over(0, 0));
    CHECK_FALSE(order.arches_over(0, 1));

    const auto star = single_vertex();
    const auto so = contour_order(star, spanning_tree(star, 0));
    for (std::size_t k = 0; k < 4; ++k) CHECK(so.items[k].index == k);
  }

  TEST_CASE("crossing loops: one ordered pair crosses by the left") {
    const auto g = corpus_graph("sunset_nonplanar.graph");
    bool seen_crossing = false;
    for_each_rooted_tree(g, [&](const SpanningTree& t) {
      const auto order = contour_order(g, t);
      const auto r = rosette_factor(g, t);
      for (auto l : t.loop_edges) {
        for (auto l2 : t.loop_edges) {
          if (l == l2) continue;
          const auto rel = order.relation(l, l2);
          const auto back = order.relation(l2, l);
          if (rel == LineRelation::CrossesLeft) {
            seen_crossing = true;
            CHECK(back == LineRelation::CrossedLeft);
            CHECK(r.phase.coeff(r.symbols.line_p(l), r.symbols.line_p(l2)) == Rational(1, 2));
          }
          const int crossing = (rel == LineRelation::CrossesLeft) + (back == LineRelation::CrossesLeft);
          const bool crossed = rel == LineRelation::CrossesLeft || rel == LineRelation::CrossedLeft;
          CHECK(crossing == (crossed ? 1 : 0));
        }
      }
    });
    CHECK(seen_crossing);
  }

  TEST_CASE("coefficients lie in {0, +-1/2, +-1} before routing") {
    const Rational allowed[] = {0, Rational(1, 2), Rational(-1, 2), 1, -1};
    for (const auto& g : small_moyal_graphs()) {
      for_each_rooted_tree(g, [&](const SpanningTree& t) {
        for (const auto& term : rosette_factor(g, t).phase.terms()) {
          CHECK(std::find(std::begin(allowed), std::end(allowed), term.coefficient) != std::end(allowed));
        }
      });
    }
  }

  TEST_CASE("closed form, tree reduction and arch reading agree") {
    for (const auto& g : small_moyal_graphs()) {
      for_each_rooted_tree(g, [&](const SpanningTree& t) {
        const auto rf = rosette_factor(g, t);
        const auto tr = tree_reduce(g, t);
        const auto arch = rosette_factor_arch_reading(g, t);
        CHECK(tr.phase == arch.phase);
        CHECK(rf.constraint == tr.constraint);
        CHECK(momentum_routing(g, t).constraint == rf.constraint);
        CHECK(canonical_phase(g, t, rf) == canonical_phase(g, t, tr));
        CHECK(compare_readings(g, t).agree);
      });
    }
  }

  TEST_CASE("root independence after routing") {
    for (const auto& g : small_moyal_graphs()) {
      if (g.num_vertices() > 3) continue;
      for (const auto& edges : all_spanning_trees(g)) {
        const auto t0 = rooted_tree(g, 0, edges);
        const auto ref = canonical_phase(g, t0, rosette_factor(g, t0));
        for (std::size_t root = 1; root < g.num_vertices(); ++root) {
          const auto t = rooted_tree(g, root, edges);
          CHECK(canonical_phase(g, t, rosette_factor(g, t)) == ref);
        }
      }
    }
  }

  TEST_CASE("routing: star, tadpole, bridge of fig4") {
    const auto star = corpus_graph("two_vertex_tree.graph");
    const auto rs = momentum_routing(star, spanning_tree(star, 0));
    const auto& s = rs.symbols;
    REQUIRE(rs.tree_momentum[0]);
    for (std::size_t a = 0; a < s.num_base(); ++a) {
      const bool allowed = a < s.num_externals() || a == s.line_dp(0);
      if (!allowed) CHECK((*rs.tree_momentum[0])[a] == 0);
    }

    const auto tad = corpus_graph("tadpole_planar.graph");
    const auto rt = momentum_routing(tad, spanning_tree(tad, 0));
    CHECK_FALSE(rt.tree_momentum[0]);
    CHECK(rt.constraint[rt.symbols.line_dp(0)] == 1);
    CHECK(rt.constraint[rt.symbols.line_p(0)] == 0);

    // the bridge momentum is minus the sum entering the right blob
    const auto g = corpus_graph("fig4.graph");
    const auto t = spanning_tree(g, 0);
    const auto r = momentum_routing(g, t);
    const auto bridge = g.edge_index("g");
    REQUIRE(t.in_tree[bridge]);
    LinearForm expected(r.symbols.size());
    for (auto id : {"xR1", "xR2", "yR2"}) {
      for (std::size_t k = 0; k < g.externals().size(); ++k) {
        if (g.externals()[k].id == id) expected[r.symbols.external(k)] = -1;
      }
    }
    expected[r.symbols.line_dp(g.edge_index("ra"))] = -1;
    expected[r.symbols.line_dp(g.edge_index("rb"))] = -1;
    auto got = *r.child_port[bridge];
    got.resize(expected.size());
    CHECK(got == expected);
  }

  TEST_CASE("oracle on random assignments, exact") {
    for (const auto& g : small_moyal_graphs()) {
      const auto s = oracle_check(g, {20, 0, 3, false});
      CHECK(s.passed());
      CHECK(s.checks > 0);
    }
  }

  TEST_CASE("a corrupted coefficient is caught") {
    const auto s = oracle_check(corpus_graph("fig2.graph"), {20, 1, 3, true});
    CHECK_FALSE(s.passed());
    REQUIRE(s.first_mismatch);
    CHECK(s.first_mismatch->which == "rosette_factor");
  }

  TEST_CASE("insertion vertices and disconnected graphs are refused") {
    const auto chain = corpus_graph("kappa_chain.graph");
    try {
      rosette_factor(chain, spanning_tree(chain, 0));
      FAIL("expected NotMoyal");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotMoyal);
    }
    GraphDescription d;
    d.vertices.push_back({"A", VertexKind::Moyal, {"a1", "a2", "a3", "a4"}});
    d.vertices.push_back({"B", VertexKind::Moyal, {"b1", "b2", "b3", "b4"}});
    for (auto p : {"a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4"}) d.externals.push_back({std::string("x") + p, p});
    const auto g = build_graph(d);
    try {
      rosette_factor(g, spanning_tree(g, 0));
      FAIL("expected Disconnected");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Disconnected);
    }
  }
}

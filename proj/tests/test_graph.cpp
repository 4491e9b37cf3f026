#include <doctest.h>

#include "mrg/error.hpp"
#include "mrg/io.hpp"
#include "oracles.hpp"

using namespace mrg;

namespace {

RibbonGraph corpus_graph(const std::string& name) { return io::read_graph(oracle::corpus(name)); }

GraphDescription tadpole_description() {
  GraphDescription d;
  d.vertices.push_back({"V", VertexKind::Moyal, {"a", "b", "x1p", "x2p"}});
  d.edges.push_back({"loop", {"a", "b"}});
  d.externals.push_back({"x1", "x1p"});
  d.externals.push_back({"x2", "x2p"});
  return d;
}

std::vector<std::string> port_names(const RibbonGraph& g, const Face& f) {
  std::vector<std::string> out;
  for (auto p : f.ports) out.push_back(g.port_name(p));
  return out;
}

}  // namespace

TEST_SUITE("graph-core") {
  TEST_CASE("fig2 builds with three vertices and three lines") {
    const auto g = corpus_graph("fig2.graph");
    CHECK(g.num_vertices() == 3);
    CHECK(g.num_edges() == 3);
    CHECK(g.num_external_legs() == 6);
  }

  TEST_CASE("malformed descriptions are rejected") {
    auto kind_of = [](GraphDescription d) {
      try {
        build_graph(std::move(d));
      } catch (const Error& e) {
        return e.kind();
      }
      return ErrorKind::InvalidArgument;
    };
    CHECK(kind_of({}) == ErrorKind::MalformedGraph);

    auto reused = tadpole_description();
    reused.externals[1].port = "x1p";
    CHECK(kind_of(reused) == ErrorKind::MalformedGraph);

    auto three = tadpole_description();
    three.vertices[0].ports.pop_back();
    three.externals.pop_back();
    CHECK(kind_of(three) == ErrorKind::MalformedGraph);

    auto empty_line = tadpole_description();
    empty_line.edges[0].kind = EdgeKind::Generalised;
    empty_line.edges[0].insertions = 0;
    CHECK(kind_of(empty_line) == ErrorKind::MalformedGraph);

    auto dangling = tadpole_description();
    dangling.externals.pop_back();
    CHECK(kind_of(dangling) == ErrorKind::MalformedGraph);
  }

  TEST_CASE("smallest tadpole") {
    const auto g = build_graph(tadpole_description());
    CHECK(g.num_vertices() == 1);
    CHECK(g.num_edges() == 1);
    CHECK(g.num_external_legs() == 2);
  }

  TEST_CASE("faces of fig2: two, both broken") {
    const auto fs = faces(corpus_graph("fig2.graph"));
    CHECK(fs.faces.size() == 2);
    CHECK(fs.broken == 2);
  }

  TEST_CASE("planar tadpole faces, traced by hand") {
    // a -> b, turn to x1p; x1p puncture, turn to x2p; x2p puncture, turn to a.
    // b -> a, turn to b: the inner face.
    const auto g = corpus_graph("tadpole_planar.graph");
    const auto fs = faces(g);
    REQUIRE(fs.faces.size() == 2);
    CHECK(port_names(g, fs.faces[0]) == std::vector<std::string>{"a", "x1p", "x2p"});
    CHECK(fs.faces[0].broken);
    CHECK(port_names(g, fs.faces[1]) == std::vector<std::string>{"b"});
    CHECK_FALSE(fs.faces[1].broken);
    CHECK(fs.broken == 1);
  }

  TEST_CASE("non-planar-contraction tadpole faces, traced by hand") {
    // ports a, x1p, b, x2p: a -> b, turn to x2p, puncture, turn to a.
    // x1p puncture, turn to b; b -> a, turn to x1p.
    const auto g = corpus_graph("tadpole_nonplanar.graph");
    const auto fs = faces(g);
    REQUIRE(fs.faces.size() == 2);
    CHECK(port_names(g, fs.faces[0]) == std::vector<std::string>{"a", "x2p"});
    CHECK(port_names(g, fs.faces[1]) == std::vector<std::string>{"x1p", "b"});
    CHECK(fs.broken == 2);
    CHECK(topology(g).genus == 0);
  }

  TEST_CASE("topology of fig2") {
    const auto t = topology(corpus_graph("fig2.graph"));
    CHECK(t.v == 3);
    CHECK(t.e == 3);
    CHECK(t.f == 2);
    CHECK(t.chi == 2);
    CHECK(t.genus == 0);
    CHECK(t.broken_faces == 2);
    CHECK(t.planar);
    CHECK_FALSE(t.regular);
  }

  TEST_CASE("tree-likeness") {
    CHECK(topology(corpus_graph("fig4.graph")).tree_like);
    CHECK_FALSE(topology(corpus_graph("fig3.graph")).tree_like);
    // a generalised line closing a cycle
    GraphDescription d;
    d.vertices.push_back({"A", VertexKind::Moyal, {"a1", "a2", "ax", "ay"}});
    d.vertices.push_back({"B", VertexKind::Moyal, {"b1", "b2", "bx", "by"}});
    d.edges.push_back({"s", {"a1", "b1"}});
    d.edges.push_back({"g", {"a2", "b2"}, EdgeKind::Generalised, 1});
    for (auto p : {"ax", "ay", "bx", "by"}) d.externals.push_back({std::string("x") + p, p});
    CHECK_FALSE(topology(build_graph(d)).tree_like);
  }

  TEST_CASE("sunset graph has genus one") {
    const auto t = topology(corpus_graph("sunset_nonplanar.graph"));
    CHECK(t.genus == 1);
    CHECK_FALSE(t.planar);
  }

  TEST_CASE("bridges") {
    CHECK(is_bridge(corpus_graph("fig4.graph"), "g"));
    CHECK_FALSE(is_bridge(corpus_graph("fig4.graph"), "loopL"));
    CHECK_FALSE(is_bridge(corpus_graph("tadpole_planar.graph"), "loop"));
    const auto fig2 = corpus_graph("fig2.graph");
    for (auto id : {"l12", "l23", "l31"}) CHECK_FALSE(is_bridge(fig2, id));
    CHECK_THROWS_AS(is_bridge(fig2, "nope"), Error);
  }

  TEST_CASE("bridges agree with deletion on random graphs up to six lines") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
      const auto g = oracle::random_graph(rng, 1 + static_cast<int>(rng() % 4), 6);
      const auto all = g.all_edges();
      const auto br = bridges(g, all);
      for (std::size_t e = 0; e < g.num_edges(); ++e) {
        CHECK(br[e] == oracle::bridge_by_deletion(g, e, all));
      }
    }
  }

  TEST_CASE("corpus invariants: handshake, Euler characteristic, face partition") {
    for (const auto& path : oracle::corpus_graphs()) {
      CAPTURE(path.filename().string());
      const auto g = io::read_graph(path);
      std::size_t valence = 0;
      for (const auto& v : g.vertices()) valence += v.ports.size();
      CHECK(valence == 2 * g.num_edges() + g.externals().size());

      const auto t = topology(g);
      CHECK(t.chi == t.v - t.e + t.f);
      CHECK(t.chi == 2 * t.k - 2 * t.genus);
      CHECK(t.genus >= 0);

      std::vector<int> seen(g.num_ports(), 0);
      for (const auto& f : faces(g).faces) {
        for (auto p : f.ports) ++seen[p];
      }
      CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
    }
  }

  TEST_CASE("random graphs satisfy the Euler relation per component") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      const auto g = oracle::random_graph(rng, 1 + static_cast<int>(rng() % 4), 6);
      const auto t = topology(g);
      int f = 0;
      for (const auto& c : t.components) {
        CHECK(c.chi == 2 - 2 * c.genus);
        f += c.f;
      }
      CHECK(f == t.f);
      CHECK(t.k == oracle::component_count(g, g.all_edges()));
    }
  }

  TEST_CASE("spanning trees") {
    const auto tad = spanning_tree(corpus_graph("tadpole_planar.graph"), 0);
    CHECK(tad.tree_edges.empty());
    CHECK(tad.loop_edges.size() == 1);

    const auto fig2 = corpus_graph("fig2.graph");
    const auto t = spanning_tree(fig2, 0);
    CHECK(t.tree_edges.size() == 2);
    CHECK(t.loop_edges.size() == 1);
    CHECK(all_spanning_trees(fig2).size() == 3);

    // |L| = e - v + k on every corpus graph and every spanning tree
    for (const auto& path : oracle::corpus_graphs()) {
      const auto g = io::read_graph(path);
      const auto k = topology(g).k;
      for (const auto& edges : all_spanning_trees(g, 50)) {
        const auto r = rooted_tree(g, 0, edges);
        CHECK(static_cast<int>(r.loop_edges.size()) == static_cast<int>(g.num_edges() - g.num_vertices()) + k);
      }
    }
  }

  TEST_CASE("scale-descending tree keeps the higher scale first") {
    const auto g = corpus_graph("fig2.graph");
    // l31 alone at the top scale must enter the tree
    std::vector<int> scales{1, 1, 5};
    const auto t = spanning_tree(g, 0, TreePreference::ScaleDescending, scales);
    CHECK(t.in_tree[2]);
    // ties broken by lowest index
    const auto flat = spanning_tree(g, 0, TreePreference::ScaleDescending, std::vector<int>{2, 2, 2});
    CHECK(flat.tree_edges == std::vector<std::size_t>{0, 1});
  }

  TEST_CASE("branch of a tree line") {
    const auto g = corpus_graph("fig4.graph");
    const auto t = spanning_tree(g, 0);
    const auto e = g.edge_index("g");
    REQUIRE(t.in_tree[e]);
    auto b = t.branch(g, e);
    std::sort(b.begin(), b.end());
    CHECK(b == std::vector<std::size_t>{1, 2});
  }
}

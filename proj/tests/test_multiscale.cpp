#include <doctest.h>

#include <set>

#include "mrg/error.hpp"
#include "mrg/io.hpp"
#include "mrg/multiscale.hpp"
#include "oracles.hpp"

using namespace mrg;

namespace {

RibbonGraph corpus_graph(const std::string& name) { return io::read_graph(oracle::corpus(name)); }

std::set<std::string> vertex_ids(const RibbonGraph& g, const std::vector<std::size_t>& vs) {
  std::set<std::string> out;
  for (auto v : vs) out.insert(g.vertices()[v].id);
  return out;
}

ErrorKind error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

// Admissibility by brute force: the lines of effective scale >= i_l, l
// removed, and a component count.
bool admissible_by_deletion(const RibbonGraph& g, const ScaleAttribution& mu, std::size_t l) {
  const auto eff = effective_scales(g, mu);
  std::vector<bool> keep(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) keep[e] = eff[e] >= eff[l];
  return oracle::bridge_by_deletion(g, l, keep);
}

}  // namespace

TEST_SUITE("multiscale") {
  TEST_CASE("segment scales") {
    const std::vector<int> s{4, 1, 3};
    const auto d = segment_scales(s);
    CHECK(d.i_m == 1);
    CHECK(d.i_1 == 4);
    CHECK(d.i_2 == 3);
  }

  TEST_CASE("attribution validation") {
    const auto g = corpus_graph("fig4.graph");
    auto mu = flat_attribution(g, 2);
    CHECK_NOTHROW(validate_attribution(g, mu));
    CHECK(mu.scales.at("g").size() == 2);

    auto missing = mu;
    missing.scales.erase("ra");
    CHECK(error_of([&] { validate_attribution(g, missing); }) == ErrorKind::MissingScale);
    auto extra = mu;
    extra.scales["zz"] = {1};
    CHECK(error_of([&] { validate_attribution(g, extra); }) == ErrorKind::AttributionMismatch);
    auto short_line = mu;
    short_line.scales["g"] = {1};
    CHECK(error_of([&] { validate_attribution(g, short_line); }) == ErrorKind::AttributionMismatch);
    auto negative = mu;
    negative.scales["ra"] = {-1};
    CHECK(error_of([&] { validate_attribution(g, negative); }) == ErrorKind::AttributionMismatch);
    CHECK(error_of([&] { quasi_local(g, missing, 0); }) == ErrorKind::MissingScale);
  }

  TEST_CASE("quasi-local subgraphs") {
    const auto g = corpus_graph("fig3.graph");
    const auto mu = io::read_attribution(oracle::corpus("fig3a.scales.json"));
    CHECK(quasi_local(g, mu, 0).size() == 1);
    CHECK(quasi_local(g, mu, 4).empty());
    const auto top = quasi_local(g, mu, 3);
    REQUIRE(top.size() == 2);
    CHECK(vertex_ids(g, top[0].vertices) == std::set<std::string>{"A1", "A2"});
    CHECK(vertex_ids(g, top[1].vertices) == std::set<std::string>{"B1", "B2"});
  }

  TEST_CASE("GN tree of a single line is a chain") {
    const auto g = corpus_graph("tadpole_planar.graph");
    const auto tree = gn_tree(g, flat_attribution(g, 3));
    REQUIRE(tree.nodes.size() == 4);
    for (int i = 0; i <= 3; ++i) {
      CHECK(tree.nodes[i].level == i);
      CHECK(tree.nodes[i].N == 2);
      CHECK(tree.nodes[i].parent == i - 1);
    }
  }

  TEST_CASE("flat attribution: one node per level with the same lines") {
    const auto g = corpus_graph("fig2.graph");
    const auto tree = gn_tree(g, flat_attribution(g, 2));
    REQUIRE(tree.nodes.size() == 3);
    for (const auto& n : tree.nodes) CHECK(n.edges == tree.nodes[0].edges);
  }

  TEST_CASE("fig3a scales: the generalised line sits above the two blobs") {
    const auto g = corpus_graph("fig3.graph");
    const auto mu = io::read_attribution(oracle::corpus("fig3a.scales.json"));
    const auto tree = gn_tree(g, mu);
    const auto gl = g.edge_index("g");
    int owner = -1;
    for (std::size_t n = 0; n < tree.nodes.size(); ++n) {
      const auto& e = tree.nodes[n].edges;
      if (tree.nodes[n].level == 2 && std::find(e.begin(), e.end(), gl) != e.end()) owner = static_cast<int>(n);
    }
    REQUIRE(owner >= 0);
    const auto& node = tree.nodes[owner];
    REQUIRE(node.children.size() == 2);
    for (auto c : node.children) CHECK(tree.nodes[c].level == 3);
    CHECK(is_admissible(g, mu, "g"));
  }

  TEST_CASE("fig3b scales: the line is not admissible") {
    const auto g = corpus_graph("fig3.graph");
    const auto mu = io::read_attribution(oracle::corpus("fig3b.scales.json"));
    CHECK_FALSE(is_admissible(g, mu, "g"));
    CHECK(error_of([&] { is_admissible(g, mu, "s"); }) == ErrorKind::NotGeneralised);
  }

  TEST_CASE("a bridge of G is admissible for every attribution") {
    const auto g = corpus_graph("fig4.graph");
    const auto visited = enumerate_attributions(g, 3, [&](const ScaleAttribution& mu) {
      CHECK(is_admissible(g, mu, "g"));
      return true;
    });
    CHECK(visited == 4u * 4 * 4 * 16);  // three simple lines, one line of two segments
  }

  TEST_CASE("enumeration limit and early stop") {
    const auto g = corpus_graph("fig2.graph");
    CHECK(enumerate_attributions(g, 3, [](const ScaleAttribution&) { return true; }, 10) == 10);
    CHECK(enumerate_attributions(g, 3, [](const ScaleAttribution&) { return false; }) == 1);
  }

  TEST_CASE("GN tree properties over all attributions with scales <= 3") {
    for (const auto& path : oracle::corpus_graphs()) {
      const auto g = io::read_graph(path);
      if (g.num_edges() > 5) continue;
      CAPTURE(path.filename().string());
      const bool tree_like = topology(g).tree_like;
      enumerate_attributions(g, 3, [&](const ScaleAttribution& mu) {
        const auto tree = gn_tree(g, mu);
        // level sets are exactly the quasi-local components
        for (int i = 0; i <= tree.max_level; ++i) {
          std::set<std::vector<std::size_t>> a, b;
          for (auto n : tree.level(i)) a.insert(tree.nodes[n].edges);
          for (const auto& q : quasi_local(g, mu, i)) {
            if (!q.edges.empty()) b.insert(q.edges);
          }
          std::set<std::vector<std::size_t>> a_nonempty;
          for (const auto& e : a) {
            if (!e.empty()) a_nonempty.insert(e);
          }
          CHECK(a_nonempty == b);
        }
        // nodes are disjoint or nested, children inside parents
        for (std::size_t x = 0; x < tree.nodes.size(); ++x) {
          const auto& nx = tree.nodes[x];
          std::set<std::size_t> vx(nx.vertices.begin(), nx.vertices.end());
          if (nx.parent >= 0) {
            const auto& np = tree.nodes[nx.parent];
            CHECK(std::includes(np.vertices.begin(), np.vertices.end(), nx.vertices.begin(), nx.vertices.end()));
            CHECK(std::includes(np.edges.begin(), np.edges.end(), nx.edges.begin(), nx.edges.end()));
          }
          for (std::size_t y = x + 1; y < tree.nodes.size(); ++y) {
            const auto& ny = tree.nodes[y];
            std::size_t common = 0;
            for (auto v : ny.vertices) common += vx.count(v);
            const bool disjoint = common == 0;
            const bool nested = common == std::min(nx.vertices.size(), ny.vertices.size());
            CHECK((disjoint || nested));
          }
        }
        // the scale-descending tree spans every node
        const auto eff = effective_scales(g, mu);
        const auto t = spanning_tree(g, 0, TreePreference::ScaleDescending, eff);
        for (const auto& n : tree.nodes) {
          int inside = 0;
          for (auto e : n.edges) inside += t.in_tree[e] ? 1 : 0;
          CHECK(inside == static_cast<int>(n.vertices.size()) - 1);
        }
        // admissibility against deletion; tree-like graphs admit everything
        for (std::size_t e = 0; e < g.num_edges(); ++e) {
          if (!g.edges()[e].generalised()) continue;
          const bool adm = is_admissible(g, mu, g.edges()[e].id);
          CHECK(adm == admissible_by_deletion(g, mu, e));
          if (tree_like) CHECK(adm);
        }
        return true;
      });
    }
  }

  TEST_CASE("node legs count lower-scale lines") {
    const auto g = corpus_graph("fig3.graph");
    const auto mu = io::read_attribution(oracle::corpus("fig3a.scales.json"));
    const auto tree = gn_tree(g, mu);
    for (auto n : tree.level(3)) {
      // two true legs, the end of g and the end of s
      CHECK(tree.nodes[n].N == 4);
      CHECK(tree.nodes[n].N_kappa == 1);
    }
  }
}

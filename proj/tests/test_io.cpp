#include <doctest.h>

#include "mrg/error.hpp"
#include "mrg/io.hpp"
#include "oracles.hpp"

using namespace mrg;

namespace {

ErrorKind parse_error(const std::string& text) {
  try {
    io::parse_graph(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("graph files round-trip") {
    for (const auto& path : oracle::corpus_graphs()) {
      CAPTURE(path.filename().string());
      const auto d = io::parse_graph_description(io::read_text(path));
      const auto text = io::serialize_graph(d);
      const auto again = io::parse_graph_description(text);
      CHECK(again == d);
      CHECK(io::serialize_graph(again) == text);
    }
  }

  TEST_CASE("attribution files round-trip") {
    for (auto name : {"fig3a.scales.json", "fig3b.scales.json"}) {
      const auto mu = io::read_attribution(oracle::corpus(name));
      const auto text = io::serialize_attribution(mu);
      CHECK(io::parse_attribution(text) == mu);
      CHECK(io::serialize_attribution(io::parse_attribution(text)) == text);
    }
    const auto mu = io::parse_attribution(R"({"a": 2, "g": [1, 3]})");
    CHECK(mu.scales.at("a") == std::vector<int>{2});
    CHECK(mu.scales.at("g") == std::vector<int>{1, 3});
  }

  TEST_CASE("vertex kind defaults to moyal") {
    const auto g = io::read_graph(oracle::corpus("tadpole_planar.graph"));
    CHECK(g.vertices()[0].kind == VertexKind::Moyal);
    const auto chain = io::read_graph(oracle::corpus("kappa_chain.graph"));
    CHECK(chain.num_moyal_vertices() == 0);
  }

  TEST_CASE("parse failures") {
    CHECK(parse_error("{") == ErrorKind::Parse);
    CHECK(parse_error("[]") == ErrorKind::Parse);
    CHECK(parse_error(R"({"vertices": [], "edges": []})") == ErrorKind::Parse);
    CHECK(parse_error(R"({"vertices": [{"id": "V", "ports": [1, 2, 3, 4]}], "edges": [], "externals": []})") ==
          ErrorKind::Parse);
    CHECK(parse_error(R"({"vertices": [{"id": "V", "kind": "cubic", "ports": ["a","b","c","d"]}],
                          "edges": [], "externals": []})") == ErrorKind::Parse);
    CHECK_THROWS_AS(io::read_graph("/nonexistent/file.graph"), Error);
    try {
      io::read_graph("/nonexistent/file.graph");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
    }
    CHECK_THROWS_AS(io::parse_attribution(R"({"a": "x"})"), Error);
  }

  TEST_CASE("structural errors are not parse errors") {
    CHECK(parse_error(R"({"vertices": [], "edges": [], "externals": []})") == ErrorKind::MalformedGraph);
  }
}

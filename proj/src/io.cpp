#include "mrg/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mrg/error.hpp"

namespace mrg::io {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::Parse, what); }

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    parse_error(e.what());
  }
}

template <typename T>
T field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) parse_error(std::string("missing key '") + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    parse_error(std::string("bad value for '") + key + "': " + e.what());
  }
}

const json& array_field(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_array()) parse_error(std::string("'") + key + "' must be a list");
  return obj.at(key);
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GraphDescription parse_graph_description(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) parse_error("graph file must hold an object");
  GraphDescription d;
  for (const auto& jv : array_field(doc, "vertices")) {
    Vertex v;
    v.id = field<std::string>(jv, "id");
    v.ports = field<std::vector<std::string>>(jv, "ports");
    const auto kind = jv.contains("kind") ? field<std::string>(jv, "kind") : std::string("moyal");
    if (kind == "moyal") {
      v.kind = VertexKind::Moyal;
    } else if (kind == "insertion") {
      v.kind = VertexKind::Insertion;
    } else {
      parse_error("unknown vertex kind '" + kind + "'");
    }
    d.vertices.push_back(std::move(v));
  }
  for (const auto& je : array_field(doc, "edges")) {
    Edge e;
    e.id = field<std::string>(je, "id");
    const auto ports = field<std::vector<std::string>>(je, "ports");
    if (ports.size() != 2) parse_error("edge '" + e.id + "' must list exactly two ports");
    e.ports = {ports[0], ports[1]};
    const auto kind = je.contains("kind") ? field<std::string>(je, "kind") : std::string("simple");
    if (kind == "simple") {
      e.kind = EdgeKind::Simple;
      e.insertions = je.contains("insertions") ? field<int>(je, "insertions") : 0;
    } else if (kind == "generalised") {
      e.kind = EdgeKind::Generalised;
      e.insertions = field<int>(je, "insertions");
    } else {
      parse_error("unknown edge kind '" + kind + "'");
    }
    d.edges.push_back(std::move(e));
  }
  for (const auto& jx : array_field(doc, "externals")) {
    ExternalLeg x;
    x.id = field<std::string>(jx, "id");
    x.port = field<std::string>(jx, "port");
    x.kappa = jx.contains("kappa") ? field<bool>(jx, "kappa") : false;
    d.externals.push_back(std::move(x));
  }
  return d;
}

RibbonGraph parse_graph(const std::string& text) { return build_graph(parse_graph_description(text)); }

RibbonGraph read_graph(const std::filesystem::path& path) { return parse_graph(read_text(path)); }

std::string serialize_graph(const GraphDescription& d) {
  json doc;
  doc["vertices"] = json::array();
  for (const auto& v : d.vertices) {
    doc["vertices"].push_back(
        {{"id", v.id}, {"kind", v.kind == VertexKind::Moyal ? "moyal" : "insertion"}, {"ports", v.ports}});
  }
  doc["edges"] = json::array();
  for (const auto& e : d.edges) {
    json je = {{"id", e.id}, {"ports", {e.ports[0], e.ports[1]}}};
    je["kind"] = e.generalised() ? "generalised" : "simple";
    if (e.generalised()) je["insertions"] = e.insertions;
    doc["edges"].push_back(std::move(je));
  }
  doc["externals"] = json::array();
  for (const auto& x : d.externals) doc["externals"].push_back({{"id", x.id}, {"port", x.port}, {"kappa", x.kappa}});
  return doc.dump(2) + "\n";
}

ScaleAttribution parse_attribution(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) parse_error("attribution file must hold an object");
  ScaleAttribution mu;
  for (const auto& [id, value] : doc.items()) {
    if (value.is_number_integer()) {
      mu.scales[id] = {value.get<int>()};
    } else if (value.is_array() && std::all_of(value.begin(), value.end(), [](const json& s) {
                 return s.is_number_integer();
               })) {
      mu.scales[id] = value.get<std::vector<int>>();
    } else {
      parse_error("scale of edge '" + id + "' must be an integer or a list of integers");
    }
  }
  return mu;
}

ScaleAttribution read_attribution(const std::filesystem::path& path) { return parse_attribution(read_text(path)); }

std::string serialize_attribution(const ScaleAttribution& mu) {
  json doc = json::object();
  for (const auto& [id, scales] : mu.scales) {
    if (scales.size() == 1) {
      doc[id] = scales.front();
    } else {
      doc[id] = scales;
    }
  }
  return doc.dump(2) + "\n";
}

}  // namespace mrg::io

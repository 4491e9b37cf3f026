#include "mrg/cli.hpp"

#include <filesystem>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrg/io.hpp"
#include "mrg/multiscale.hpp"
#include "mrg/numerics.hpp"
#include "mrg/oscillation.hpp"
#include "mrg/powercount.hpp"

namespace mrg::cli {

using nlohmann::json;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return kParse;
    case ErrorKind::MalformedGraph:
    case ErrorKind::InvalidMap: return kInvalidMap;
    case ErrorKind::UnknownEdge:
    case ErrorKind::MissingScale:
    case ErrorKind::AttributionMismatch: return kAttribution;
    default: return kFailure;
  }
}

namespace {

enum class Format { Text, Json, Csv };

struct Common {
  std::string graph;
  std::string scales;
  Format format = Format::Text;
  std::uint64_t seed = 1;
  ModelParams params;
};

const char* yes_no(bool b) { return b ? "yes" : "no"; }

std::string num(double x) {
  std::ostringstream s;
  s << std::setprecision(10) << x;
  return s.str();
}

std::string join_ids(const std::vector<std::size_t>& idx, const auto& items) {
  std::string s;
  for (auto i : idx) {
    if (!s.empty()) s += ",";
    s += items[i].id;
  }
  return s;
}

std::vector<std::string> ids(const std::vector<std::size_t>& idx, const auto& items) {
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(items[i].id);
  return out;
}

RibbonGraph load_graph(const std::string& path) {
  if (path.empty()) throw Error(ErrorKind::InvalidArgument, "--graph is required");
  return io::read_graph(path);
}

ScaleAttribution load_scales(const RibbonGraph& g, const std::string& path, int flat) {
  if (path.empty()) return flat_attribution(g, flat);
  auto mu = io::read_attribution(path);
  validate_attribution(g, mu);
  return mu;
}

std::string scales_string(const ScaleAttribution& mu) {
  std::string s;
  for (const auto& [id, v] : mu.scales) {
    if (!s.empty()) s += " ";
    s += id + "=";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "/" : "") + std::to_string(v[k]);
  }
  return s;
}

// --- analyze ---------------------------------------------------------------

json topology_json(const ComponentTopology& c, const RibbonGraph& g) {
  return {{"vertices", ids(c.vertices, g.vertices())},
          {"v", c.v}, {"e", c.e}, {"e0", c.e0}, {"e_kappa", c.e_kappa}, {"f", c.f}, {"chi", c.chi},
          {"g", c.genus}, {"b", c.broken_faces}, {"planar", c.planar}, {"regular", c.regular},
          {"tree_like", c.tree_like}};
}

int cmd_analyze(const Common& c, std::ostream& out) {
  const auto g = load_graph(c.graph);
  const auto t = topology(g);
  switch (c.format) {
    case Format::Json: {
      json j = {{"graph", c.graph}, {"v", t.v}, {"e", t.e}, {"e0", t.e0}, {"e_kappa", t.e_kappa}, {"f", t.f},
                {"k", t.k}, {"chi", t.chi}, {"g", t.genus}, {"b", t.broken_faces}, {"planar", t.planar},
                {"regular", t.regular}, {"tree_like", t.tree_like}, {"components", json::array()}};
      for (const auto& comp : t.components) j["components"].push_back(topology_json(comp, g));
      out << j.dump(2) << "\n";
      break;
    }
    case Format::Csv:
      out << "component,v,e,e0,e_kappa,f,chi,g,b,tree_like\n";
      out << "total," << t.v << "," << t.e << "," << t.e0 << "," << t.e_kappa << "," << t.f << "," << t.chi << ","
          << t.genus << "," << t.broken_faces << "," << t.tree_like << "\n";
      for (std::size_t k = 0; k < t.components.size(); ++k) {
        const auto& p = t.components[k];
        out << k + 1 << "," << p.v << "," << p.e << "," << p.e0 << "," << p.e_kappa << "," << p.f << "," << p.chi
            << "," << p.genus << "," << p.broken_faces << "," << p.tree_like << "\n";
      }
      break;
    case Format::Text:
      out << "graph " << c.graph << "\n";
      out << "v=" << t.v << " e=" << t.e << " e0=" << t.e0 << " e_kappa=" << t.e_kappa << " f=" << t.f
          << " k=" << t.k << " chi=" << t.chi << " g=" << t.genus << " b=" << t.broken_faces
          << " planar=" << yes_no(t.planar) << " regular=" << yes_no(t.regular)
          << " tree_like=" << yes_no(t.tree_like) << "\n";
      if (t.components.size() > 1) {
        for (std::size_t k = 0; k < t.components.size(); ++k) {
          const auto& p = t.components[k];
          out << "  component " << k + 1 << " [" << join_ids(p.vertices, g.vertices()) << "]: v=" << p.v
              << " e=" << p.e << " f=" << p.f << " chi=" << p.chi << " g=" << p.genus << " b=" << p.broken_faces
              << " tree_like=" << yes_no(p.tree_like) << "\n";
        }
      }
      break;
  }
  return kOk;
}

// --- rosette ---------------------------------------------------------------

std::string phase_text(const SymbolSpace& s, const PhaseForm& phi) {
  std::string text;
  for (const auto& term : phi.terms()) {
    text += "  " + fraction_string(term.coefficient) + "  " + s[term.a].name + " ^ " + s[term.b].name + "\n";
  }
  return text.empty() ? "  0\n" : text;
}

std::string linear_text(const SymbolSpace& s, const LinearForm& x) {
  std::string text;
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (x[a].is_zero()) continue;
    const bool neg = x[a] < 0;
    const Rational mag = neg ? Rational(-x[a]) : x[a];
    text += text.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
    if (mag != 1) text += fraction_string(mag) + " ";
    text += s[a].name;
  }
  return text.empty() ? "0" : text;
}

json phase_json(const SymbolSpace& s, const PhaseForm& phi) {
  json terms = json::array();
  for (const auto& term : phi.terms()) {
    terms.push_back({{"a", s[term.a].name}, {"b", s[term.b].name}, {"coefficient", fraction_string(term.coefficient)}});
  }
  return terms;
}

int cmd_rosette(const Common& c, const std::string& reading, std::size_t root, std::ostream& out) {
  const auto g = load_graph(c.graph);
  if (root >= g.num_vertices()) throw Error(ErrorKind::InvalidArgument, "root out of range");
  const auto t = spanning_tree(g, root);
  RosettePhase r = reading == "arch"   ? rosette_factor_arch_reading(g, t)
                   : reading == "tree" ? tree_reduce(g, t)
                                       : rosette_factor(g, t);
  const auto cmp = compare_readings(g, t);
  if (c.format == Format::Json) {
    json j = {{"graph", c.graph},
              {"root", g.vertices()[root].id},
              {"reading", reading},
              {"tree", ids(t.tree_edges, g.edges())},
              {"phase", phase_json(r.symbols, r.phase)},
              {"constraint", linear_text(r.symbols, r.constraint)},
              {"readings_agree", cmp.agree}};
    if (!cmp.agree) j["reading_difference"] = phase_json(r.symbols, cmp.difference);
    out << j.dump(2) << "\n";
    return kOk;
  }
  if (c.format == Format::Csv) {
    out << "a,b,coefficient\n";
    for (const auto& term : r.phase.terms()) {
      out << r.symbols[term.a].name << "," << r.symbols[term.b].name << "," << fraction_string(term.coefficient)
          << "\n";
    }
    return kOk;
  }
  out << "graph " << c.graph << "  root " << g.vertices()[root].id << "  tree {"
      << join_ids(t.tree_edges, g.edges()) << "}  reading " << reading << "\n";
  out << "phase (theta-units, s ^ t = (s_x t_y - s_y t_x) / 2):\n" << phase_text(r.symbols, r.phase);
  out << "delta: " << linear_text(r.symbols, r.constraint) << " = 0\n";
  if (cmp.agree) {
    out << "point and arch readings agree after routing\n";
  } else {
    out << "WARNING: point and arch readings disagree after routing by\n" << phase_text(r.symbols, cmp.difference);
  }
  return kOk;
}

// --- gn-tree ---------------------------------------------------------------

int cmd_gn_tree(const Common& c, int flat, std::ostream& out) {
  const auto g = load_graph(c.graph);
  const auto mu = load_scales(g, c.scales, flat);
  const auto tree = gn_tree(g, mu);
  if (c.format == Format::Json) {
    json nodes = json::array();
    for (const auto& n : tree.nodes) {
      nodes.push_back({{"level", n.level}, {"k", n.index}, {"vertices", ids(n.vertices, g.vertices())},
                       {"edges", ids(n.edges, g.edges())}, {"parent", n.parent}, {"children", n.children},
                       {"N", n.N}, {"N_kappa", n.N_kappa}, {"e_kappa_empty", n.e_kappa_empty}});
    }
    out << json{{"graph", c.graph}, {"max_level", tree.max_level}, {"roots", tree.roots}, {"nodes", nodes}}.dump(2)
        << "\n";
    return kOk;
  }
  if (c.format == Format::Csv) {
    out << "node,level,k,parent,N,N_kappa,vertices,edges\n";
    for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
      const auto& n = tree.nodes[k];
      out << k << "," << n.level << "," << n.index << "," << n.parent << "," << n.N << "," << n.N_kappa << ",\""
          << join_ids(n.vertices, g.vertices()) << "\",\"" << join_ids(n.edges, g.edges()) << "\"\n";
    }
    return kOk;
  }
  out << "graph " << c.graph << "  scales " << scales_string(mu) << "\n";
  for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
    const auto& n = tree.nodes[k];
    out << std::string(2 * n.level, ' ') << "G^" << n.level << "_" << n.index << "  vertices {"
        << join_ids(n.vertices, g.vertices()) << "}  lines {" << join_ids(n.edges, g.edges()) << "}  N=" << n.N
        << " N_kappa=" << n.N_kappa << "\n";
  }
  return kOk;
}

// --- classify --------------------------------------------------------------

json node_json(const NodeReport& r) {
  return {{"level", r.level}, {"k", r.index}, {"N", r.data.N}, {"N_kappa", r.data.N_kappa},
          {"g", r.data.genus}, {"b", r.data.broken_faces}, {"tree_like", r.data.tree_like},
          {"n_kappa", r.data.n_kappa}, {"moyal_free", r.moyal_free},
          {"case", std::string(to_string(r.verdict.bound_case))}, {"omega", r.verdict.omega},
          {"divergent", r.verdict.divergent}, {"logarithmic", r.verdict.logarithmic},
          {"counterterm", std::string(to_string(r.verdict.counterterm))}};
}

std::string verdict_word(const NodeVerdict& v) {
  return v.divergent ? (v.logarithmic ? "log-divergent" : "divergent") : "convergent";
}

void classify_table(const DivergenceReport& rep, std::ostream& out) {
  out << "  level k   N  N_k g b tree n_k  omega  verdict        counterterm      case\n";
  for (const auto& r : rep.nodes) {
    out << "  " << std::setw(5) << r.level << " " << std::setw(2) << r.index << "  " << std::setw(2) << r.data.N
        << "  " << std::setw(3) << r.data.N_kappa << " " << r.data.genus << " " << r.data.broken_faces << " "
        << std::setw(4) << yes_no(r.data.tree_like) << " " << std::setw(3) << r.data.n_kappa << "  " << std::setw(5)
        << r.verdict.omega << "  " << std::left << std::setw(14) << verdict_word(r.verdict) << " " << std::setw(16)
        << to_string(r.verdict.counterterm) << " " << to_string(r.verdict.bound_case) << std::right << "\n";
  }
}

int cmd_classify(const Common& c, int flat, int enumerate, bool fail_on_divergent, std::ostream& out) {
  const auto g = load_graph(c.graph);
  if (enumerate >= 0) {
    std::size_t attributions = 0, nodes = 0, divergent = 0, violations = 0;
    std::set<Counterterm> counterterms;
    std::optional<ScaleAttribution> first_violation;
    enumerate_attributions(g, enumerate, [&](const ScaleAttribution& mu) {
      ++attributions;
      const auto rep = classify_graph(g, mu);
      for (const auto& r : rep.nodes) {
        ++nodes;
        if (!r.verdict.divergent) continue;
        ++divergent;
        counterterms.insert(r.verdict.counterterm);
        if (!r.data.tree_like) {
          ++violations;
          if (!first_violation) first_violation = mu;
        }
      }
      return true;
    });
    std::vector<std::string> cts;
    for (auto ct : counterterms) cts.emplace_back(to_string(ct));
    if (c.format == Format::Json) {
      json j = {{"graph", c.graph}, {"max_scale", enumerate}, {"attributions", attributions}, {"nodes", nodes},
                {"divergent_nodes", divergent}, {"divergent_not_tree_like", violations}, {"counterterms", cts}};
      if (first_violation) j["first_violation"] = scales_string(*first_violation);
      out << j.dump(2) << "\n";
    } else if (c.format == Format::Csv) {
      out << "graph,max_scale,attributions,nodes,divergent_nodes,divergent_not_tree_like\n"
          << c.graph << "," << enumerate << "," << attributions << "," << nodes << "," << divergent << ","
          << violations << "\n";
    } else {
      out << "graph " << c.graph << "  scales <= " << enumerate << "\n"
          << "attributions " << attributions << "  nodes " << nodes << "  divergent " << divergent
          << "  divergent but not tree-like " << violations << "\n";
      out << "counterterms:";
      for (const auto& ct : cts) out << " " << ct;
      out << (cts.empty() ? " none\n" : "\n");
      if (first_violation) out << "first violation: " << scales_string(*first_violation) << "\n";
    }
    return fail_on_divergent && divergent > 0 ? kDivergent : kOk;
  }

  const auto mu = load_scales(g, c.scales, flat);
  const auto rep = classify_graph(g, mu);
  std::vector<std::string> cts;
  for (auto ct : rep.counterterms) cts.emplace_back(to_string(ct));
  if (c.format == Format::Json) {
    json nodes = json::array();
    for (const auto& r : rep.nodes) nodes.push_back(node_json(r));
    out << json{{"graph", c.graph}, {"scales", scales_string(mu)}, {"nodes", nodes},
                {"any_divergent", rep.any_divergent}, {"counterterms", cts}}
               .dump(2)
        << "\n";
  } else if (c.format == Format::Csv) {
    out << "level,k,N,N_kappa,g,b,tree_like,n_kappa,omega,divergent,counterterm,case\n";
    for (const auto& r : rep.nodes) {
      out << r.level << "," << r.index << "," << r.data.N << "," << r.data.N_kappa << "," << r.data.genus << ","
          << r.data.broken_faces << "," << r.data.tree_like << "," << r.data.n_kappa << "," << r.verdict.omega << ","
          << r.verdict.divergent << "," << to_string(r.verdict.counterterm) << ","
          << to_string(r.verdict.bound_case) << "\n";
    }
  } else {
    out << "graph " << c.graph << "  scales " << scales_string(mu) << "\n";
    classify_table(rep, out);
    out << "counterterms:";
    for (const auto& ct : cts) out << " " << ct;
    out << (cts.empty() ? " none\n" : "\n");
  }
  return fail_on_divergent && rep.any_divergent ? kDivergent : kOk;
}

// --- verify-bounds ---------------------------------------------------------

int cmd_verify_bounds(const Common& c, int imin, int imax, const std::string& constants,
                      const std::vector<int>& segments, std::ostream& out) {
  const auto exps = constants == "unit" ? BoundExponents::unit() : BoundExponents::derived(c.params);
  const auto grid = default_grid();
  const auto r = verify_slice_bound(c.params, exps, imin, imax, grid);
  std::optional<GeneralisedBoundCheck> gen;
  if (!segments.empty()) gen = verify_generalised_line_bound(c.params, exps, r.K, segments, grid);

  if (c.format == Format::Json) {
    json j = {{"exponents", {{"p_sq", exps.p_sq}, {"short_var", exps.short_var}, {"long_var", exps.long_var}}},
              {"slices", r.slices}, {"K_per_slice", r.K_per_slice}, {"K", r.K}, {"variation", r.variation},
              {"stability_range", r.stability_range}};
    if (gen) {
      j["generalised"] = {{"segments", segments}, {"points", gen->points}, {"violations", gen->violations},
                          {"growing_p_factor_violations", gen->growing_factor_violations},
                          {"max_log_ratio", gen->max_log_ratio}};
    }
    out << j.dump(2) << "\n";
    return kOk;
  }
  if (c.format == Format::Csv) {
    out << "i,K\n";
    for (std::size_t k = 0; k < r.slices.size(); ++k) out << r.slices[k] << "," << num(r.K_per_slice[k]) << "\n";
    return kOk;
  }
  out << "slice bound  a=" << num(exps.p_sq) << " b=" << num(exps.short_var) << " c=" << num(exps.long_var)
      << "  grid " << grid.size() << " points\n";
  for (std::size_t k = 0; k < r.slices.size(); ++k) {
    out << "  i=" << r.slices[k] << "  K_i=" << num(r.K_per_slice[k]) << "\n";
  }
  out << "K=" << num(r.K) << "  variation over i=" << r.stability_range[0] << ".." << r.stability_range[1] << ": "
      << num(100 * r.variation) << "%\n";
  if (gen) {
    out << "generalised line {";
    for (std::size_t k = 0; k < segments.size(); ++k) out << (k ? "," : "") << segments[k];
    out << "}: " << gen->violations << "/" << gen->points << " violations, max log(value/bound) "
        << num(gen->max_log_ratio) << "; with a p decay growing with n: " << gen->growing_factor_violations
        << " violations\n";
  }
  return kOk;
}

// --- scale-scan ------------------------------------------------------------

int cmd_scale_scan(const Common& c, const ScanOptions& options, std::ostream& out) {
  const auto g = load_graph(c.graph);
  const bool chain = g.num_moyal_vertices() == 0;
  const auto r = chain ? kappa_chain_scan(c.params, options) : scaling_scan(c.params, g, options);
  auto fit_json = [](const SlopeFit& f) {
    return json{{"slope", f.slope}, {"stderr", f.stderr_}, {"ci_low", f.ci_low}, {"ci_high", f.ci_high}};
  };
  if (c.format == Format::Json) {
    json rows = json::array();
    for (const auto& row : r.rows) {
      rows.push_back({{"i", row.i}, {"amplitude", row.amplitude}, {"stderr", row.stderr_},
                      {"abs_amplitude", row.abs_amplitude}, {"abs_stderr", row.abs_stderr}});
    }
    json j = {{"graph", c.graph}, {"kind", chain ? "kappa-chain" : "tadpole"}, {"rows", rows},
              {"fit_range", options.fit_range}, {"slope", fit_json(r.phase_fit)}, {"abs_slope", fit_json(r.abs_fit)}};
    if (!chain) j["phase"] = {{"q0", r.q0}, {"u_d", r.u_d}, {"u_s", r.u_s}};
    out << j.dump(2) << "\n";
    return kOk;
  }
  if (c.format == Format::Csv) {
    out << "i,amplitude,stderr,abs_amplitude,abs_stderr\n";
    for (const auto& row : r.rows) {
      out << row.i << "," << num(row.amplitude) << "," << num(row.stderr_) << "," << num(row.abs_amplitude) << ","
          << num(row.abs_stderr) << "\n";
    }
    return kOk;
  }
  out << "graph " << c.graph << (chain ? "  (insertion chain, quadrature)" : "") << "\n";
  if (!chain) out << "phase: " << num(r.q0) << " p^dp + x^(" << num(r.u_d) << " p + " << num(r.u_s) << " dp)\n";
  out << "   i  amplitude        stderr\n";
  for (const auto& row : r.rows) {
    out << "  " << std::setw(2) << row.i << "  " << std::setw(15) << num(row.amplitude) << "  "
        << num(row.stderr_) << "\n";
  }
  out << "slope over i=" << options.fit_range[0] << ".." << options.fit_range[1] << ": " << num(r.phase_fit.slope)
      << " +- " << num(r.phase_fit.stderr_) << "  (95% CI " << num(r.phase_fit.ci_low) << " .. "
      << num(r.phase_fit.ci_high) << ")\n";
  out << "slope of |integrand|: " << num(r.abs_fit.slope) << "\n";
  return kOk;
}

// --- oracle-check ----------------------------------------------------------

std::string vec_string(const Vec2Q& v) { return "(" + fraction_string(v.x) + "," + fraction_string(v.y) + ")"; }

int cmd_oracle_check(const Common& c, const std::vector<std::string>& graphs, const OracleOptions& options,
                     std::ostream& out) {
  if (graphs.empty()) throw Error(ErrorKind::InvalidArgument, "--graph is required");
  json report = json::array();
  bool all_pass = true;
  for (const auto& path : graphs) {
    const auto g = load_graph(path);
    if (g.num_moyal_vertices() != g.num_vertices()) {
      if (c.format == Format::Text) out << path << ": skipped, insertion vertices carry no oscillation\n";
      report.push_back({{"graph", path}, {"skipped", true}});
      continue;
    }
    const auto s = oracle_check(g, options);
    all_pass = all_pass && s.passed();
    json entry = {{"graph", path}, {"rooted_trees", s.trees}, {"checks", s.checks}, {"matches", s.matches},
                  {"passed", s.passed()}};
    if (s.first_mismatch) {
      const auto& m = *s.first_mismatch;
      const auto symbols = SymbolSpace::for_graph(g);
      json values = json::object();
      for (std::size_t a = 0; a < m.assignment.size() && a < symbols.size(); ++a) {
        values[symbols[a].name] = vec_string(m.assignment[a]);
      }
      entry["mismatch"] = {{"tree", ids(m.tree_edges, g.edges())}, {"root", g.vertices()[m.root].id},
                           {"form", m.which}, {"expected", fraction_string(m.expected)},
                           {"got", fraction_string(m.got)}, {"assignment", values}};
    }
    if (c.format == Format::Text) {
      out << path << ": " << s.matches << "/" << s.checks << " exact matches over " << s.trees << " rooted trees"
          << (s.passed() ? "" : "  MISMATCH") << "\n";
      if (s.first_mismatch) out << "  " << entry["mismatch"].dump() << "\n";
    } else if (c.format == Format::Csv) {
      out << (report.empty() ? "graph,rooted_trees,checks,matches,passed\n" : "") << path << "," << s.trees << ","
          << s.checks << "," << s.matches << "," << s.passed() << "\n";
    }
    report.push_back(entry);
  }
  if (c.format == Format::Json) out << report.dump(2) << "\n";
  return all_pass ? kOk : kOracleMismatch;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiscale analysis of ribbon graphs in the degenerate Moyal model", "mrg"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common c;
  const std::map<std::string, Format> formats{{"text", Format::Text}, {"json", Format::Json}, {"csv", Format::Csv}};
  auto add_common = [&](CLI::App* sub, bool scales) {
    sub->add_option("--format", c.format, "Output format")->transform(CLI::CheckedTransformer(formats));
    if (scales) sub->add_option("--scales", c.scales, "Scale attribution file (JSON)");
  };
  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--theta", c.params.theta, "Noncommutativity")->capture_default_str();
    sub->add_option("--omega", c.params.omega, "Harmonic frequency Omega")->capture_default_str();
    sub->add_option("--mass", c.params.mass, "Mass")->capture_default_str();
    sub->add_option("--bigM", c.params.M, "Slice ratio M")->capture_default_str();
    sub->add_option("--kappa", c.params.kappa, "Insertion coupling")->capture_default_str();
    sub->add_option("--lambda", c.params.lambda, "Quartic coupling")->capture_default_str();
  };

  auto* analyze = app.add_subcommand("analyze", "Topology of a graph: v, e, f, genus, broken faces");
  analyze->add_option("--graph,graph", c.graph, "Graph file")->required();
  add_common(analyze, false);

  std::string reading = "point";
  std::size_t root = 0;
  auto* rosette = app.add_subcommand("rosette", "Vertex phase after contracting a spanning tree");
  rosette->add_option("--graph,graph", c.graph, "Graph file")->required();
  rosette->add_option("--reading", reading, "Tree-line reading")->check(CLI::IsMember({"point", "arch", "tree"}));
  rosette->add_option("--root", root, "Root vertex index");
  add_common(rosette, false);

  int flat = 1;
  auto* gn = app.add_subcommand("gn-tree", "Gallavotti-Nicolo tree of a scale attribution");
  gn->add_option("--graph,graph", c.graph, "Graph file")->required();
  gn->add_option("--flat-scale", flat, "Scale of every line when no --scales is given")->capture_default_str();
  add_common(gn, true);

  int enumerate = -1;
  bool fail_on_divergent = false;
  auto* classify = app.add_subcommand("classify", "Degree of convergence and counterterm per GN node");
  classify->add_option("--graph,graph", c.graph, "Graph file")->required();
  classify->add_option("--flat-scale", flat, "Scale of every line when no --scales is given")->capture_default_str();
  auto* enum_opt = classify->add_option("--enumerate-scales", enumerate, "Run every attribution with scales <= S")
                       ->check(CLI::Range(0, 8));
  classify->add_flag("--fail-on-divergent", fail_on_divergent, "Exit 6 when a node is divergent");
  add_common(classify, true);
  classify->get_option("--scales")->excludes(enum_opt);

  int imin = 1, imax = 6;
  std::string constants = "derived";
  std::vector<int> segments;
  auto* bounds = app.add_subcommand("verify-bounds", "Check the sliced propagator bound on a momentum grid");
  bounds->add_option("--imin", imin, "First slice")->capture_default_str();
  bounds->add_option("--imax", imax, "Last slice")->capture_default_str();
  bounds->add_option("--constants", constants, "Bound exponents")->check(CLI::IsMember({"derived", "unit"}));
  bounds->add_option("--segments", segments, "Segment scales of a generalised line to check")->delimiter(',');
  add_common(bounds, false);
  add_params(bounds);

  ScanOptions scan;
  auto* scale_scan = app.add_subcommand("scale-scan", "Slice amplitudes and fitted scaling slope");
  scale_scan->add_option("--graph,graph", c.graph, "Graph file")->required();
  scale_scan->add_option("--imax", scan.imax, "Last slice")->capture_default_str();
  scale_scan->add_option("--samples", scan.samples, "Monte Carlo samples per slice")->capture_default_str();
  scale_scan->add_option("--seed", scan.seed, "Random seed")->capture_default_str();
  add_common(scale_scan, false);
  add_params(scale_scan);

  OracleOptions oracle;
  std::vector<std::string> graphs;
  auto* check = app.add_subcommand("oracle-check", "Rosette factor and tree reduction against the vertex oracle");
  check->add_option("--graph,graph", graphs, "Graph files")->required();
  check->add_option("--trials", oracle.trials, "Random assignments per rooted tree")->capture_default_str();
  check->add_option("--max-trees", oracle.max_trees, "Spanning trees per graph, 0 = all")->capture_default_str();
  check->add_option("--seed", oracle.seed, "Random seed")->capture_default_str();
  check->add_flag("--corrupt-coefficient", oracle.corrupt_coefficient)->group("");
  add_common(check, false);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kParse;
  }

  try {
    if (*analyze) return cmd_analyze(c, out);
    if (*rosette) return cmd_rosette(c, reading, root, out);
    if (*gn) return cmd_gn_tree(c, flat, out);
    if (*classify) return cmd_classify(c, flat, enumerate, fail_on_divergent, out);
    c.params.validate();
    if (*bounds) return cmd_verify_bounds(c, imin, imax, constants, segments, out);
    if (*scale_scan) {
      if (scan.imax < scan.fit_range[1]) scan.fit_range[1] = scan.imax;
      return cmd_scale_scan(c, scan, out);
    }
    if (*check) return cmd_oracle_check(c, graphs, oracle, out);
  } catch (const Error& e) {
    err << "mrg: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "mrg: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace mrg::cli

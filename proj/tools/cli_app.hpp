// Command-line front end; main() lives in magcheeger.cpp so tests can drive
// run_cli directly.
#ifndef MAGCHEEGER_TOOLS_CLI_APP_HPP
#define MAGCHEEGER_TOOLS_CLI_APP_HPP

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "magcheeger/magcheeger.hpp"

namespace magcheeger::cli {

using nlohmann::json;

inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path, 1);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path, 1);
  out << text;
}

struct Options {
  std::string input;
  std::string measure;  // empty: the graph's own measure
  std::uint64_t seed = 0;
  unsigned threads = default_thread_count();
  std::string json_path;
  std::string dot_path;
  std::string output;
  std::string truth;
  int k = 0;
  std::size_t n = 1;
  std::size_t eigen_index = 1;
  bool vectors = false;
  int restarts = 8;
  std::vector<std::string> set;
  // generate
  std::string family;
  std::size_t size = 8;
  double p = 0.5;
  double noise = 0.0;
  double max_weight = 1.0;
  std::size_t flips = 1;
  std::optional<int> gen_k;
};

inline json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json names_json(const SignedGraph& g, const VertexSet& set) {
  json a = json::array();
  for (VertexId u : set) a.push_back(g.names()[u]);
  return a;
}

inline json certificate_json(const SignedGraph& g, const ClusterCertificate& c) {
  json cand;
  if (c.is_partition) {
    cand = json::array();
    for (const auto& part : c.candidate.parts) cand.push_back(names_json(g, part));
  } else {
    cand = names_json(g, c.candidate.parts.front());
  }
  return {{"candidate", cand},
          {"ratio", c.ratio},
          {"bound", c.bound},
          {"frustration", {{"value", c.frustration}, {"exact", c.exactness == Exactness::exact}}},
          {"boundary", c.boundary},
          {"volume", c.volume},
          {"t", c.t},
          {"theta", c.theta}};
}

/// Graphviz rendering; `label` gives a part per vertex or -1.
inline std::string to_dot(const SignedGraph& g, const std::vector<int>& label) {
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::ostringstream out;
  out << "graph magcheeger {\n  node [style=filled];\n";
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    out << "  \"" << g.names()[u] << "\" [fillcolor=\"";
    out << (label[u] >= 0 ? palette[label[u] % 10] : "#ffffff") << "\"";
    if (label[u] >= 0) out << ", xlabel=\"" << label[u] << "\"";
    out << "];\n";
  }
  for (const Edge& e : g.edges()) {
    out << "  \"" << g.names()[e.u] << "\" -- \"" << g.names()[e.v] << "\"";
    if (!e.signature.is_identity(0.0)) out << " [label=\"" << e.signature.to_string() << "\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

inline std::vector<int> labels_of(const SignedGraph& g, const std::vector<VertexSet>& parts) {
  std::vector<int> label(g.num_vertices(), -1);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    for (VertexId u : parts[p]) label[u] = static_cast<int>(p);
  }
  return label;
}

struct Loaded {
  SignedGraph graph;
  std::vector<double> mu;
};

inline Loaded load_signed(const Options& o, const std::string& text) {
  auto parsed = parse_graph(text);
  auto* g = std::get_if<SignedGraph>(&parsed);
  if (!g) throw Error("input has oriented arcs; run `convert --k <k>` first", 1);
  Loaded l{std::move(*g), {}};
  if (o.measure == "unit") {
    l.mu = l.graph.unit_measure();
  } else if (o.measure == "degree") {
    l.mu = l.graph.degree_measure();
  } else {
    l.mu.assign(l.graph.measure().begin(), l.graph.measure().end());
  }
  return l;
}

inline VertexSet resolve_set(const SignedGraph& g, const std::vector<std::string>& names) {
  if (names.empty()) return all_vertices(g.num_vertices());
  std::vector<VertexId> ids;
  for (const auto& name : names) {
    auto it = std::find(g.names().begin(), g.names().end(), name);
    if (it == g.names().end()) throw Error("unknown vertex " + name, 1);
    ids.push_back(static_cast<VertexId>(it - g.names().begin()));
  }
  return make_vertex_set(std::move(ids));
}

struct Outcome {
  json payload;
  std::string dot;  // empty: nothing to draw
};

inline Outcome cmd_spectrum(const Options& o, const std::string& text) {
  const Loaded l = load_signed(o, text);
  const Spectrum eig = spectrum(l.graph, l.mu);
  const double dmu = max_mu_degree(l.graph, l.mu);
  bool within = true;
  for (double x : eig.values) within = within && x >= -1e-9 && x <= 2 * dmu + 1e-9;
  json p = {{"vertices", l.graph.num_vertices()},
            {"edges", l.graph.num_edges()},
            {"group", l.graph.group().to_string()},
            {"eigenvalues", eig.values},
            {"max_mu_degree", dmu},
            {"within_bounds", within}};
  if (o.vectors) {
    json vecs = json::array();
    for (const auto& f : eig.vectors) {
      json v = json::array();
      for (const Complex& z : f) v.push_back(complex_json(z));
      vecs.push_back(v);
    }
    p["eigenvectors"] = vecs;
  }
  return {p, o.dot_path.empty() ? "" : to_dot(l.graph, std::vector<int>(l.graph.num_vertices(), -1))};
}

inline Outcome cmd_balance(const Options& o, const std::string& text) {
  const Loaded l = load_signed(o, text);
  const BalanceReport r = balance_check(l.graph);
  json comps = json::array();
  std::vector<int> label(l.graph.num_vertices(), -1);
  for (const auto& c : r.components) {
    json j = {{"vertices", names_json(l.graph, c.vertices)}, {"balanced", c.balanced}};
    json tau = json::object();
    for (std::size_t i = 0; i < c.vertices.size(); ++i) {
      tau[l.graph.names()[c.vertices[i]]] = c.witness.values[i].to_string();
      if (c.witness.values[i].is_cyclic()) label[c.vertices[i]] = c.witness.values[i].exponent();
    }
    j["switching"] = tau;
    if (!c.balanced) {
      json cyc = json::array();
      for (VertexId u : c.violating_cycle) cyc.push_back(l.graph.names()[u]);
      j["cycle"] = cyc;
      j["cycle_signature"] = c.cycle_signature.to_string();
    }
    comps.push_back(j);
  }
  return {{{"balanced", r.all_balanced()}, {"components", comps}},
          o.dot_path.empty() ? "" : to_dot(l.graph, label)};
}

inline Outcome cmd_frustration(const Options& o, const std::string& text) {
  const Loaded l = load_signed(o, text);
  const VertexSet set = resolve_set(l.graph, o.set);
  FrustrationResult fr;
  if (l.graph.group().is_cyclic()) {
    fr = frustration_exact_cyclic(l.graph, set);
  } else {
    HeuristicOptions h;
    h.restarts = o.restarts;
    h.seed = o.seed;
    fr = frustration_heuristic_u1(l.graph, set, h);
  }
  json tau = json::object();
  std::vector<int> label(l.graph.num_vertices(), -1);
  for (std::size_t i = 0; i < set.size(); ++i) {
    tau[l.graph.names()[set[i]]] = fr.optimizer.values[i].to_string();
    if (fr.optimizer.values[i].is_cyclic()) label[set[i]] = fr.optimizer.values[i].exponent();
  }
  return {{{"set", names_json(l.graph, set)},
           {"value", fr.value},
           {"exact", fr.exactness == Exactness::exact},
           {"switching", tau}},
          o.dot_path.empty() ? "" : to_dot(l.graph, label)};
}

inline Outcome cmd_cheeger_exact(const Options& o, const std::string& text) {
  const Loaded l = load_signed(o, text);
  const HExact h = h_exact(l.graph, l.mu, o.n, o.threads);
  json parts = json::array();
  for (const auto& p : h.parts) parts.push_back(names_json(l.graph, p));
  return {{{"n", o.n}, {"value", h.value}, {"parts", parts}},
          o.dot_path.empty() ? "" : to_dot(l.graph, labels_of(l.graph, h.parts))};
}

inline Outcome cmd_sweep(const Options& o, const std::string& text) {
  const Loaded l = load_signed(o, text);
  if (o.eigen_index < 1 || o.eigen_index > l.graph.num_vertices()) {
    throw Error("--eigen must be in [1, N]", 1);
  }
  const Spectrum eig = spectrum(l.graph, l.mu);
  const double lambda = eig.values[o.eigen_index - 1];
  const ClusterCertificate c = sweep_cut(l.graph, l.mu, eig.vectors[o.eigen_index - 1], o.threads);
  const CheegerBounds b = cheeger_bounds(l.graph, l.mu, eig.values[0]);
  return {{{"eigen_index", o.eigen_index},
           {"lambda", lambda},
           {"certificate", certificate_json(l.graph, c)},
           {"valid", certificate_valid(l.graph, l.mu, c)},
           {"cheeger_bounds", {{"lower", b.lower}, {"sharper_lower", b.sharper_lower}, {"upper", b.upper}}}},
          o.dot_path.empty() ? "" : to_dot(l.graph, labels_of(l.graph, c.candidate.parts))};
}

inline json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline Outcome cmd_multiway(const Options& o, const std::string& text) {
  const Loaded l = load_signed(o, text);
  if (o.n < 1 || o.n > l.graph.num_vertices()) throw Error("-n must be in [1, N]", 1);
  const MultiwayResult r = multiway_cluster(l.graph, l.mu, o.n, o.seed, o.threads);
  json certs = json::array();
  std::vector<VertexSet> supports;
  for (const auto& c : r.certificates) {
    certs.push_back(certificate_json(l.graph, c));
    supports.push_back(c.support());
  }
  return {{{"n", o.n},
           {"certificates", certs},
           {"embedding_rayleigh", r.embedding_rayleigh},
           {"lambda_n", r.lambda_n},
           {"separation", finite_or_null(r.separation)},
           {"mass_fractions", r.mass_fractions},
           {"retries", r.retries},
           {"epsilon", r.epsilon}},
          o.dot_path.empty() ? "" : to_dot(l.graph, labels_of(l.graph, supports))};
}

inline Outcome cmd_convert(const Options& o, const std::string& text) {
  if (o.k < 2) throw Error("convert needs --k >= 2", 1);
  auto parsed = parse_graph(text);
  SignedGraph g;
  if (auto* m = std::get_if<MixedGraph>(&parsed)) {
    g = mixed_to_signed(*m, o.k);
  } else {
    // A file without arcs is a mixed graph with no oriented part.
    const SignedGraph& s = std::get<SignedGraph>(parsed);
    if (!(s.group().is_cyclic() && s.group().order == 1)) throw Error("convert expects `e`/`a` records only", 1);
    std::vector<MixedGraph::Link> links;
    for (const Edge& e : s.edges()) links.push_back({e.u, e.v, e.weight});
    g = mixed_to_signed(MixedGraph(s.names(), std::move(links), {}, {}), o.k);
  }
  if (o.measure == "unit") g = g.with_measure(g.unit_measure());
  const std::string out = serialize(g);
  if (!o.output.empty()) write_file(o.output, out);
  return {{{"k", o.k}, {"vertices", g.num_vertices()}, {"edges", g.num_edges()}, {"graph", out}},
          o.dot_path.empty() ? "" : to_dot(g, std::vector<int>(g.num_vertices(), -1))};
}

inline Outcome cmd_generate(const Options& o) {
  json params;
  std::string text;
  json truth;
  if (o.family == "er-signed") {
    ErSignedParams prm{o.size, o.p, o.gen_k.value_or(2), o.max_weight, o.seed};
    text = serialize(er_signed(prm));
    params = {{"n", o.size}, {"p", o.p}, {"k", prm.k}, {"max_weight", o.max_weight}};
  } else if (o.family == "cycle") {
    const int k = o.gen_k.value_or(2);
    text = serialize(signed_cycle(o.size, o.flips, k));
    params = {{"n", o.size}, {"flips", o.flips}, {"k", k}};
  } else if (o.family == "mixed-planted") {
    PlantedParams prm{o.size, o.gen_k.value_or(3), o.p, o.noise, o.seed};
    const PlantedInstance inst = mixed_planted(prm);
    text = serialize(inst.graph);
    json parts = json::array();
    for (const auto& part : inst.parts()) {
      json names = json::array();
      for (VertexId u : part) names.push_back(inst.graph.names()[u]);
      parts.push_back(names);
    }
    truth = {{"family", o.family}, {"k", prm.k}, {"seed", o.seed}, {"parts", parts}};
    params = {{"n", o.size}, {"k", prm.k}, {"p", o.p}, {"noise", o.noise}};
  } else {
    throw Error("unknown family " + o.family + " (er-signed, cycle, mixed-planted)", 1);
  }
  if (!o.output.empty()) {
    write_file(o.output, text);
    if (!truth.is_null()) write_file(o.truth.empty() ? o.output + ".truth.json" : o.truth, truth.dump(2) + "\n");
  } else if (!truth.is_null() && !o.truth.empty()) {
    write_file(o.truth, truth.dump(2) + "\n");
  }
  json p = {{"family", o.family}, {"params", params}, {"graph", text}};
  if (!truth.is_null()) p["truth"] = truth;
  return {p, ""};
}

/// Runs one command. The report goes to `out`, diagnostics to `err`.
/// Exit codes: 0 ok, 1 usage or I/O, 2 parse, 3 cap, 4 solver, 5 decompose.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Magnetic Laplacians, frustration and certified Cheeger clustering on signed graphs"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool graph_input) {
    if (graph_input) sub->add_option("graph", o.input, "graph file")->required();
    sub->add_option("--measure", o.measure, "vertex measure")->check(CLI::IsMember({"degree", "unit"}));
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--json", o.json_path, "also write the report to this file");
    sub->add_option("--dot", o.dot_path, "write a Graphviz rendering");
  };
  auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues of the magnetic Laplacian");
  common(spectrum_cmd, true);
  spectrum_cmd->add_flag("--vectors", o.vectors, "include eigenvectors");
  auto* balance_cmd = app.add_subcommand("balance", "balance per connected component");
  common(balance_cmd, true);
  auto* frustration_cmd = app.add_subcommand("frustration", "frustration index of a vertex set");
  common(frustration_cmd, true);
  frustration_cmd->add_option("--set", o.set, "vertex names (default: all)");
  frustration_cmd->add_option("--restarts", o.restarts, "random restarts for U(1)")->check(CLI::PositiveNumber);
  auto* exact_cmd = app.add_subcommand("cheeger-exact", "n-way Cheeger constant by enumeration");
  exact_cmd->alias("cheeger");
  common(exact_cmd, true);
  exact_cmd->add_option("-n", o.n, "number of parts")->check(CLI::PositiveNumber);
  auto* sweep_cmd = app.add_subcommand("sweep", "certified sweep cut of an eigenfunction");
  common(sweep_cmd, true);
  sweep_cmd->add_option("--eigen", o.eigen_index, "1-based eigenfunction index")->check(CLI::PositiveNumber);
  auto* multiway_cmd = app.add_subcommand("multiway", "n-way spectral clustering with certificates");
  common(multiway_cmd, true);
  multiway_cmd->add_option("-n", o.n, "number of clusters")->check(CLI::PositiveNumber);
  auto* convert_cmd = app.add_subcommand("convert", "mixed graph to cyclic signed graph");
  common(convert_cmd, true);
  convert_cmd->add_option("--k", o.k, "signature order")->required();
  convert_cmd->add_option("-o,--output", o.output, "write the converted graph here");
  auto* generate_cmd = app.add_subcommand("generate", "random test instances");
  common(generate_cmd, false);
  generate_cmd->add_option("family", o.family, "er-signed | cycle | mixed-planted")->required();
  generate_cmd->add_option("--n", o.size, "number of vertices");
  generate_cmd->add_option("--p", o.p, "link probability");
  generate_cmd->add_option("--k", o.gen_k, "signature order (er-signed: 0 means U(1))");
  generate_cmd->add_option("--noise", o.noise, "mixed-planted noise probability");
  generate_cmd->add_option("--max-weight", o.max_weight, "er-signed weights in [1, max]");
  generate_cmd->add_option("--flips", o.flips, "cycle: edges carrying xi");
  generate_cmd->add_option("-o,--output", o.output, "graph file");
  generate_cmd->add_option("--truth", o.truth, "planted partition sidecar JSON");

  std::vector<const char*> argv{"magcheeger"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    const std::string text = o.input.empty() ? std::string() : read_file(o.input);
    Outcome result;
    std::string command;
    if (spectrum_cmd->parsed()) {
      command = "spectrum";
      result = cmd_spectrum(o, text);
    } else if (balance_cmd->parsed()) {
      command = "balance";
      result = cmd_balance(o, text);
    } else if (frustration_cmd->parsed()) {
      command = "frustration";
      result = cmd_frustration(o, text);
    } else if (exact_cmd->parsed()) {
      command = "cheeger-exact";
      result = cmd_cheeger_exact(o, text);
    } else if (sweep_cmd->parsed()) {
      command = "sweep";
      result = cmd_sweep(o, text);
    } else if (multiway_cmd->parsed()) {
      command = "multiway";
      result = cmd_multiway(o, text);
    } else if (convert_cmd->parsed()) {
      command = "convert";
      result = cmd_convert(o, text);
    } else {
      command = "generate";
      result = cmd_generate(o);
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json report = {{"command", command},
                   {"input_digest", o.input.empty() ? json(nullptr) : json(fnv1a_hex(text))},
                   {"seed", o.seed},
                   {"wall_time", wall},
                   {"payload", result.payload}};
    const std::string dumped = report.dump(2) + "\n";
    out << dumped;
    if (!o.json_path.empty()) write_file(o.json_path, dumped);
    if (!o.dot_path.empty() && !result.dot.empty()) write_file(o.dot_path, result.dot);
    return 0;
  } catch (const DecomposeError& e) {
    err << "error: " << e.what() << "; best attempt mass fractions:";
    for (double f : e.best_attempt().mass_fractions) err << ' ' << f;
    err << '\n';
    return e.exit_code();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace magcheeger::cli

#endif  // MAGCHEEGER_TOOLS_CLI_APP_HPP

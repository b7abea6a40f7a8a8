#ifndef MAGCHEEGER_GRAPH_IO_HPP
#define MAGCHEEGER_GRAPH_IO_HPP

#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "magcheeger/error.hpp"
#include "magcheeger/graph.hpp"

namespace magcheeger {

using ParsedGraph = std::variant<SignedGraph, MixedGraph>;

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

inline std::optional<double> to_double(std::string_view s) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return x;
}

inline std::optional<long> to_long(std::string_view s) {
  long x = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return x;
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

/// Reads the line-oriented graph format:
///
///   v <name> [measure]
///   e <u> <v> <w>            unoriented edge, trivial signature
///   a <u> <v> <w>            oriented arc (mixed graphs only)
///   s <u> <v> <w> <j>/<k>    s_uv = xi_k^j
///   p <u> <v> <w> <theta>    s_uv = e^{i theta}
///
/// `#` starts a comment. A file with `a` records yields a MixedGraph.
inline ParsedGraph parse_graph(std::istream& in) {
  enum class Type { plain, cyclic, circle, arc };
  struct Record {
    std::size_t line;
    VertexId u, v;
    double w;
    Type type;
    long exponent;
    double angle;
  };

  std::vector<std::string> names;
  std::unordered_map<std::string, VertexId> ids;
  std::map<VertexId, double> explicit_measure;
  std::vector<Record> records;
  std::map<std::pair<VertexId, VertexId>, std::size_t> pairs;
  std::optional<int> cyclic_order;
  bool has_circle = false;
  bool has_arc = false;
  std::vector<char> declared;

  auto vertex = [&](std::string_view name) {
    auto [it, inserted] = ids.emplace(std::string(name), names.size());
    if (inserted) names.emplace_back(name);
    return it->second;
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto f = detail::split_fields(line);
    if (f.empty()) continue;
    if (f[0].size() != 1) throw ParseError(line_no, "unknown record type '" + std::string(f[0]) + "'");
    const char tag = f[0][0];

    if (tag == 'v') {
      if (f.size() != 2 && f.size() != 3) throw ParseError(line_no, "expected: v <name> [measure]");
      VertexId u = vertex(f[1]);
      declared.resize(names.size(), 0);
      if (declared[u]) throw ParseError(line_no, "vertex '" + std::string(f[1]) + "' declared twice");
      declared[u] = 1;
      if (f.size() == 3) {
        auto m = detail::to_double(f[2]);
        if (!m) throw ParseError(line_no, "malformed measure '" + std::string(f[2]) + "'");
        if (!(*m > 0.0)) throw ParseError(line_no, "vertex measure must be positive");
        explicit_measure[u] = *m;
      }
      continue;
    }

    Type type;
    std::size_t expected = 4;
    switch (tag) {
      case 'e': type = Type::plain; break;
      case 'a': type = Type::arc; break;
      case 's': type = Type::cyclic; expected = 5; break;
      case 'p': type = Type::circle; expected = 5; break;
      default: throw ParseError(line_no, "unknown record type '" + std::string(f[0]) + "'");
    }
    if (f.size() != expected) {
      throw ParseError(line_no, "wrong number of fields for '" + std::string(f[0]) + "' record");
    }
    auto w = detail::to_double(f[3]);
    if (!w) throw ParseError(line_no, "malformed weight '" + std::string(f[3]) + "'");
    if (!(*w > 0.0)) throw ParseError(line_no, "nonpositive weight");
    if (f[1] == f[2]) throw ParseError(line_no, "loop at vertex '" + std::string(f[1]) + "'");
    Record r{line_no, vertex(f[1]), vertex(f[2]), *w, type, 0, 0.0};

    if (type == Type::cyclic) {
      auto token = f[4];
      auto slash = token.find('/');
      if (slash == std::string_view::npos) {
        throw ParseError(line_no, "malformed signature token '" + std::string(token) + "'");
      }
      auto j = detail::to_long(token.substr(0, slash));
      auto k = detail::to_long(token.substr(slash + 1));
      if (!j || !k || *j < 0 || *k < 1) {
        throw ParseError(line_no, "malformed signature token '" + std::string(token) + "'");
      }
      if (*j >= *k) throw ParseError(line_no, "exponent must be smaller than k");
      if (cyclic_order && *cyclic_order != *k) {
        throw ParseError(line_no, "signatures of different orders k in one file");
      }
      if (has_circle) throw ParseError(line_no, "cyclic and U(1) signatures mixed");
      if (has_arc) throw ParseError(line_no, "signatures are not allowed in a mixed graph");
      cyclic_order = static_cast<int>(*k);
      r.exponent = *j;
    } else if (type == Type::circle) {
      auto theta = detail::to_double(f[4]);
      if (!theta) throw ParseError(line_no, "malformed signature token '" + std::string(f[4]) + "'");
      if (cyclic_order) throw ParseError(line_no, "cyclic and U(1) signatures mixed");
      if (has_arc) throw ParseError(line_no, "signatures are not allowed in a mixed graph");
      has_circle = true;
      r.angle = *theta;
    } else if (type == Type::arc) {
      if (cyclic_order || has_circle) {
        throw ParseError(line_no, "arcs are not allowed together with signatures");
      }
      has_arc = true;
    }

    auto key = std::minmax(r.u, r.v);
    if (auto [it, ok] = pairs.emplace(std::make_pair(key.first, key.second), line_no); !ok) {
      throw ParseError(line_no, "duplicate edge (first given on line " + std::to_string(it->second) + ")");
    }
    records.push_back(r);
  }

  std::vector<double> measure;
  if (!explicit_measure.empty()) {
    if (explicit_measure.size() != names.size()) {
      throw ParseError(line_no, "measures must be given for all vertices or none");
    }
    measure.resize(names.size());
    for (auto [u, m] : explicit_measure) measure[u] = m;
  }

  if (has_arc) {
    std::vector<MixedGraph::Link> unoriented, arcs;
    for (const Record& r : records) {
      (r.type == Type::arc ? arcs : unoriented).push_back({r.u, r.v, r.w});
    }
    return MixedGraph(std::move(names), std::move(unoriented), std::move(arcs), std::move(measure));
  }

  SignatureGroup group = has_circle     ? SignatureGroup::circle()
                         : cyclic_order ? SignatureGroup::cyclic(*cyclic_order)
                                        : SignatureGroup::cyclic(1);
  std::vector<Edge> edges;
  edges.reserve(records.size());
  for (const Record& r : records) {
    GroupElement s = group.identity();
    if (r.type == Type::cyclic) s = GroupElement::cyclic(group.order, r.exponent);
    if (r.type == Type::circle) s = GroupElement::circle(r.angle);
    edges.push_back({r.u, r.v, r.w, s});
  }
  return SignedGraph(std::move(names), std::move(edges), group, std::move(measure));
}

inline ParsedGraph parse_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_graph(in);
}

/// Parses and requires a signed (not mixed) graph.
inline SignedGraph parse_signed_graph(std::string_view text) {
  auto parsed = parse_graph(text);
  if (auto* g = std::get_if<SignedGraph>(&parsed)) return std::move(*g);
  throw ParseError(0, "expected a signed graph but found oriented arcs; convert it first");
}

/// Writes a graph that parses back to an equal graph. Every vertex gets a `v`
/// line with its measure, so ids and measures survive the round trip.
inline std::string serialize(const SignedGraph& g) {
  std::ostringstream out;
  const auto& names = g.names();
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    out << "v " << names[u] << ' ' << detail::format_double(g.measure()[u]) << '\n';
  }
  for (const Edge& e : g.edges()) {
    const std::string w = detail::format_double(e.weight);
    if (g.group().is_cyclic() && g.group().order == 1) {
      out << "e " << names[e.u] << ' ' << names[e.v] << ' ' << w << '\n';
    } else if (g.group().is_cyclic()) {
      out << "s " << names[e.u] << ' ' << names[e.v] << ' ' << w << ' ' << e.signature.exponent()
          << '/' << g.group().order << '\n';
    } else {
      out << "p " << names[e.u] << ' ' << names[e.v] << ' ' << w << ' '
          << detail::format_double(e.signature.angle()) << '\n';
    }
  }
  return out.str();
}

inline std::string serialize(const MixedGraph& m) {
  std::ostringstream out;
  const auto& names = m.names();
  for (VertexId u = 0; u < m.num_vertices(); ++u) {
    out << "v " << names[u];
    if (!m.measure().empty()) out << ' ' << detail::format_double(m.measure()[u]);
    out << '\n';
  }
  for (const auto& l : m.unoriented()) {
    out << "e " << names[l.from] << ' ' << names[l.to] << ' ' << detail::format_double(l.weight) << '\n';
  }
  for (const auto& l : m.arcs()) {
    out << "a " << names[l.from] << ' ' << names[l.to] << ' ' << detail::format_double(l.weight) << '\n';
  }
  return out.str();
}

}  // namespace magcheeger

#endif  // MAGCHEEGER_GRAPH_IO_HPP

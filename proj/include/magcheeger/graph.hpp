#ifndef MAGCHEEGER_GRAPH_HPP
#define MAGCHEEGER_GRAPH_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "magcheeger/group.hpp"

namespace magcheeger {

using VertexId = std::size_t;

/// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<VertexId>;

inline VertexSet make_vertex_set(std::vector<VertexId> vertices) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  return vertices;
}

inline VertexSet all_vertices(std::size_t n) {
  VertexSet v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

/// Undirected edge {u, v} with u < v. `signature` is s_uv; s_vu is its inverse.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double weight = 1.0;
  GroupElement signature;
};

/// One oriented half of an edge as seen from its tail.
struct Incidence {
  VertexId to = 0;
  std::size_t edge = 0;
  double weight = 1.0;
  GroupElement signature;  // s_{tail, to}
};

/// Weighted simple graph with a signature and a positive vertex measure.
/// Immutable after construction.
class SignedGraph {
 public:
  SignedGraph() = default;

  /// Builds the graph and validates it. Edges may be given in either
  /// orientation; they are stored with u < v. If `measure` is empty the
  /// degree measure is used (isolated vertices get measure 1).
  SignedGraph(std::vector<std::string> names, std::vector<Edge> edges, SignatureGroup group,
              std::vector<double> measure = {})
      : names_(std::move(names)), group_(group) {
    const std::size_t n = names_.size();
    adjacency_.resize(n);
    degree_.assign(n, 0.0);
    edges_.reserve(edges.size());
    std::map<std::pair<VertexId, VertexId>, std::size_t> seen;
    for (Edge e : edges) {
      if (e.u >= n || e.v >= n) throw std::invalid_argument("edge endpoint out of range");
      if (e.u == e.v) throw std::invalid_argument("loop at vertex " + names_[e.u]);
      if (!(e.weight > 0.0)) throw std::invalid_argument("edge weight must be positive");
      if (!group_.contains(e.signature)) {
        throw std::invalid_argument("edge signature outside " + group_.to_string());
      }
      if (e.u > e.v) {
        std::swap(e.u, e.v);
        e.signature = e.signature.inverse();
      }
      if (!seen.emplace(std::make_pair(e.u, e.v), edges_.size()).second) {
        throw std::invalid_argument("duplicate edge {" + names_[e.u] + ", " + names_[e.v] + "}");
      }
      edges_.push_back(e);
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
      return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      adjacency_[e.u].push_back({e.v, i, e.weight, e.signature});
      adjacency_[e.v].push_back({e.u, i, e.weight, e.signature.inverse()});
      degree_[e.u] += e.weight;
      degree_[e.v] += e.weight;
    }
    for (auto& list : adjacency_) {
      std::sort(list.begin(), list.end(),
                [](const Incidence& a, const Incidence& b) { return a.to < b.to; });
    }
    if (measure.empty()) {
      measure_ = degree_measure();
    } else {
      if (measure.size() != n) throw std::invalid_argument("measure size mismatch");
      for (double m : measure) {
        if (!(m > 0.0)) throw std::invalid_argument("vertex measure must be positive");
      }
      measure_ = std::move(measure);
    }
  }

  /// Convenience constructor with vertex names "0".."n-1".
  SignedGraph(std::size_t n, std::vector<Edge> edges, SignatureGroup group,
              std::vector<double> measure = {})
      : SignedGraph(default_names(n), std::move(edges), group, std::move(measure)) {}

  static std::vector<std::string> default_names(std::size_t n) {
    std::vector<std::string> names(n);
    for (std::size_t i = 0; i < n; ++i) names[i] = std::to_string(i);
    return names;
  }

  std::size_t num_vertices() const { return names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::string>& names() const { return names_; }
  const SignatureGroup& group() const { return group_; }
  std::span<const Incidence> neighbors(VertexId u) const { return adjacency_[u]; }

  /// Weighted degree d_u.
  double degree(VertexId u) const { return degree_[u]; }

  /// The measure attached to this graph.
  std::span<const double> measure() const { return measure_; }

  /// mu_d(u) = d_u, with 1 substituted on isolated vertices.
  std::vector<double> degree_measure() const {
    std::vector<double> m(degree_);
    for (double& x : m) {
      if (x <= 0.0) x = 1.0;
    }
    return m;
  }

  std::vector<double> unit_measure() const { return std::vector<double>(num_vertices(), 1.0); }

  SignedGraph with_measure(std::vector<double> measure) const {
    return SignedGraph(names_, edges_, group_, std::move(measure));
  }

  /// Same weights and measure, signature replaced edge by edge.
  SignedGraph with_signatures(std::span<const GroupElement> signatures,
                              SignatureGroup group) const {
    if (signatures.size() != edges_.size()) throw std::invalid_argument("signature count mismatch");
    std::vector<Edge> edges(edges_);
    for (std::size_t i = 0; i < edges.size(); ++i) edges[i].signature = signatures[i];
    return SignedGraph(names_, std::move(edges), group, measure_);
  }

  /// The signature -s, whose complex values are negated.
  SignedGraph negated() const {
    std::vector<GroupElement> s;
    s.reserve(edges_.size());
    for (const Edge& e : edges_) s.push_back(e.signature.negated());
    return with_signatures(s, group_);
  }

  /// Edge-order independent structural equality (names, edges, measure).
  friend bool operator==(const SignedGraph& a, const SignedGraph& b) {
    if (a.names_ != b.names_ || !(a.group_ == b.group_) || a.measure_ != b.measure_) return false;
    if (a.edges_.size() != b.edges_.size()) return false;
    for (std::size_t i = 0; i < a.edges_.size(); ++i) {
      const Edge& x = a.edges_[i];
      const Edge& y = b.edges_[i];
      if (x.u != y.u || x.v != y.v || x.weight != y.weight || !(x.signature == y.signature)) {
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  SignatureGroup group_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::vector<double> degree_;
  std::vector<double> measure_;
};

/// Graph with unoriented edges E_U and oriented arcs E_O.
class MixedGraph {
 public:
  struct Link {
    VertexId from = 0;
    VertexId to = 0;
    double weight = 1.0;
  };

  MixedGraph() = default;

  MixedGraph(std::vector<std::string> names, std::vector<Link> unoriented, std::vector<Link> arcs,
             std::vector<double> measure = {})
      : names_(std::move(names)),
        unoriented_(std::move(unoriented)),
        arcs_(std::move(arcs)),
        measure_(std::move(measure)) {
    std::map<std::pair<VertexId, VertexId>, int> seen;
    auto check = [&](const Link& l) {
      if (l.from >= names_.size() || l.to >= names_.size()) {
        throw std::invalid_argument("link endpoint out of range");
      }
      if (l.from == l.to) throw std::invalid_argument("loop at vertex " + names_[l.from]);
      if (!(l.weight > 0.0)) throw std::invalid_argument("edge weight must be positive");
      auto key = std::minmax(l.from, l.to);
      if (!seen.emplace(std::make_pair(key.first, key.second), 0).second) {
        throw std::invalid_argument("vertices " + names_[key.first] + " and " + names_[key.second] +
                                    " are joined more than once");
      }
    };
    for (const Link& l : unoriented_) check(l);
    for (const Link& l : arcs_) check(l);
    if (!measure_.empty() && measure_.size() != names_.size()) {
      throw std::invalid_argument("measure size mismatch");
    }
  }

  std::size_t num_vertices() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Link>& unoriented() const { return unoriented_; }
  const std::vector<Link>& arcs() const { return arcs_; }
  /// Explicit measure, or empty for the degree measure.
  const std::vector<double>& measure() const { return measure_; }

 private:
  std::vector<std::string> names_;
  std::vector<Link> unoriented_;
  std::vector<Link> arcs_;
  std::vector<double> measure_;
};

/// s_uv = 1 on unoriented edges, xi on arcs (u, v), xi^{-1} on the reverse.
inline SignedGraph mixed_to_signed(const MixedGraph& m, int k) {
  if (k < 2) throw std::invalid_argument("mixed graph conversion needs k >= 2");
  std::vector<Edge> edges;
  edges.reserve(m.unoriented().size() + m.arcs().size());
  for (const auto& l : m.unoriented()) {
    edges.push_back({l.from, l.to, l.weight, GroupElement::cyclic(k, 0)});
  }
  for (const auto& l : m.arcs()) {
    edges.push_back({l.from, l.to, l.weight, GroupElement::cyclic(k, 1)});
  }
  return SignedGraph(m.names(), std::move(edges), SignatureGroup::cyclic(k), m.measure());
}

/// Map vertex -> group element on a declared vertex subset.
struct SwitchingFunction {
  VertexSet domain;
  std::vector<GroupElement> values;  // parallel to domain

  static SwitchingFunction constant(VertexSet domain, const GroupElement& g) {
    std::vector<GroupElement> values(domain.size(), g);
    return {std::move(domain), std::move(values)};
  }

  const GroupElement& at(VertexId u) const {
    auto it = std::lower_bound(domain.begin(), domain.end(), u);
    if (it == domain.end() || *it != u) throw std::out_of_range("vertex outside switching domain");
    return values[static_cast<std::size_t>(it - domain.begin())];
  }

  SwitchingFunction inverse() const {
    SwitchingFunction r{domain, {}};
    r.values.reserve(values.size());
    for (const auto& g : values) r.values.push_back(g.inverse());
    return r;
  }
};

/// s^tau(u, v) = tau(u) s(u, v) tau(v)^{-1}; weights and measure unchanged.
inline SignedGraph switch_signature(const SignedGraph& g, const SwitchingFunction& tau) {
  if (tau.domain.size() != g.num_vertices()) {
    throw std::invalid_argument("switching function must be defined on all vertices");
  }
  for (const auto& t : tau.values) {
    if (!g.group().contains(t)) throw std::invalid_argument("switching function group mismatch");
  }
  std::vector<GroupElement> s;
  s.reserve(g.num_edges());
  for (const Edge& e : g.edges()) {
    s.push_back(tau.values[e.u] * e.signature * tau.values[e.v].inverse());
  }
  return g.with_signatures(s, g.group());
}

struct SetFunctionals {
  double boundary = 0.0;  // |E(V1, V1^c)|
  double volume = 0.0;    // vol_mu(V1)
};

/// Membership mask of a vertex set.
inline std::vector<char> membership(std::size_t n, const VertexSet& set) {
  std::vector<char> in(n, 0);
  for (VertexId u : set) {
    if (u >= n) throw std::invalid_argument("vertex out of range");
    in[u] = 1;
  }
  return in;
}

inline SetFunctionals set_functionals(const SignedGraph& g, std::span<const double> mu,
                                      const VertexSet& set) {
  if (set.empty()) throw std::invalid_argument("set functionals of an empty set");
  const auto in = membership(g.num_vertices(), set);
  SetFunctionals r;
  for (VertexId u : set) r.volume += mu[u];
  for (const Edge& e : g.edges()) {
    if (in[e.u] != in[e.v]) r.boundary += e.weight;
  }
  return r;
}

inline SetFunctionals set_functionals(const SignedGraph& g, const VertexSet& set) {
  return set_functionals(g, g.measure(), set);
}

/// d_mu = max_u d_u / mu(u).
inline double max_mu_degree(const SignedGraph& g, std::span<const double> mu) {
  double best = 0.0;
  for (VertexId u = 0; u < g.num_vertices(); ++u) best = std::max(best, g.degree(u) / mu[u]);
  return best;
}

inline double max_mu_degree(const SignedGraph& g) { return max_mu_degree(g, g.measure()); }

/// Connected components of the subgraph induced by `set`, each sorted, in
/// order of their smallest vertex.
inline std::vector<VertexSet> induced_components(const SignedGraph& g, const VertexSet& set) {
  const auto in = membership(g.num_vertices(), set);
  std::vector<char> seen(g.num_vertices(), 0);
  std::vector<VertexSet> components;
  for (VertexId root : set) {
    if (seen[root]) continue;
    VertexSet comp{root};
    seen[root] = 1;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (const Incidence& inc : g.neighbors(comp[head])) {
        if (in[inc.to] && !seen[inc.to]) {
          seen[inc.to] = 1;
          comp.push_back(inc.to);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  return components;
}

inline std::vector<VertexSet> connected_components(const SignedGraph& g) {
  return induced_components(g, all_vertices(g.num_vertices()));
}

/// Subgraph induced by `set`, vertices renumbered in set order; the measure is
/// restricted.
inline SignedGraph induced_subgraph(const SignedGraph& g, const VertexSet& set) {
  std::vector<VertexId> local(g.num_vertices(), static_cast<VertexId>(-1));
  std::vector<std::string> names;
  std::vector<double> mu;
  for (std::size_t i = 0; i < set.size(); ++i) {
    local[set[i]] = i;
    names.push_back(g.names()[set[i]]);
    mu.push_back(g.measure()[set[i]]);
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (local[e.u] != static_cast<VertexId>(-1) && local[e.v] != static_cast<VertexId>(-1)) {
      edges.push_back({local[e.u], local[e.v], e.weight, e.signature});
    }
  }
  return SignedGraph(std::move(names), std::move(edges), g.group(), std::move(mu));
}

/// Base set plus k ordered, pairwise disjoint, possibly empty parts.
struct OrderedKPartition {
  std::vector<VertexSet> parts;

  std::size_t k() const { return parts.size(); }

  VertexSet base() const {
    VertexSet all;
    for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    return make_vertex_set(std::move(all));
  }

  bool disjoint() const {
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    return base().size() == total;
  }
};

/// n pairwise disjoint nonempty vertex sets.
using Subpartition = std::vector<VertexSet>;

inline bool is_subpartition(std::size_t num_vertices, const Subpartition& parts) {
  std::vector<char> used(num_vertices, 0);
  for (const auto& p : parts) {
    if (p.empty()) return false;
    for (VertexId u : p) {
      if (u >= num_vertices || used[u]) return false;
      used[u] = 1;
    }
  }
  return true;
}

}  // namespace magcheeger

#endif  // MAGCHEEGER_GRAPH_HPP

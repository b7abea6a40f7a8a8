#ifndef MAGCHEEGER_FRUSTRATION_HPP
#define MAGCHEEGER_FRUSTRATION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "magcheeger/error.hpp"
#include "magcheeger/graph.hpp"
#include "magcheeger/random.hpp"
#include "magcheeger/spectral.hpp"

namespace magcheeger {

/// Upper limit on assignments an exhaustive routine may enumerate.
inline constexpr std::uint64_t kEnumerationCap = 30'000'000;

enum class Exactness { exact, upper_bound };

inline const char* to_string(Exactness e) { return e == Exactness::exact ? "exact" : "upper-bound"; }

/// Balance status of one connected component.
struct ComponentBalance {
  VertexSet vertices;
  bool balanced = false;
  /// Spanning-tree switching: every tree edge becomes trivial under it, and
  /// every edge when the component is balanced.
  SwitchingFunction witness;
  /// Closed walk v0, v1, ..., v_{m-1} (back to v0) whose signature is
  /// nontrivial; empty when balanced.
  std::vector<VertexId> violating_cycle;
  GroupElement cycle_signature;
};

struct BalanceReport {
  std::vector<ComponentBalance> components;

  bool any_balanced() const {
    return std::any_of(components.begin(), components.end(),
                       [](const ComponentBalance& c) { return c.balanced; });
  }
  bool all_balanced() const {
    return std::all_of(components.begin(), components.end(),
                       [](const ComponentBalance& c) { return c.balanced; });
  }
};

/// s_{from, to} for an existing edge.
inline GroupElement signature_between(const SignedGraph& g, VertexId from, VertexId to) {
  for (const Incidence& inc : g.neighbors(from)) {
    if (inc.to == to) return inc.signature;
  }
  throw std::invalid_argument("no edge between the given vertices");
}

/// Product of signatures along a closed walk.
inline GroupElement cycle_signature(const SignedGraph& g, const std::vector<VertexId>& cycle) {
  GroupElement product = g.group().identity();
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    product = product * signature_between(g, cycle[i], cycle[(i + 1) % cycle.size()]);
  }
  return product;
}

/// Per component: BFS spanning tree from the smallest vertex, switching that
/// trivializes the tree, then a scan of non-tree edges in edge order.
inline BalanceReport balance_check(const SignedGraph& g, double angle_tolerance = 1e-9) {
  const std::size_t n = g.num_vertices();
  BalanceReport report;
  std::vector<GroupElement> tau(n, g.group().identity());
  std::vector<VertexId> parent(n);
  std::vector<std::size_t> depth(n, 0);
  std::vector<char> tree_edge(g.num_edges(), 0);
  std::vector<std::size_t> component_of(n);

  auto components = connected_components(g);
  for (std::size_t c = 0; c < components.size(); ++c) {
    const VertexSet& comp = components[c];
    const VertexId root = comp.front();
    parent[root] = root;
    std::vector<char> seen_local;
    std::vector<VertexId> queue{root};
    for (VertexId u : comp) component_of[u] = c;
    std::vector<char> visited(n, 0);
    visited[root] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const VertexId u = queue[head];
      for (const Incidence& inc : g.neighbors(u)) {
        if (visited[inc.to]) continue;
        visited[inc.to] = 1;
        parent[inc.to] = u;
        depth[inc.to] = depth[u] + 1;
        tau[inc.to] = tau[u] * inc.signature;
        tree_edge[inc.edge] = 1;
        queue.push_back(inc.to);
      }
    }
    ComponentBalance cb;
    cb.vertices = comp;
    cb.balanced = true;
    cb.cycle_signature = g.group().identity();
    cb.witness.domain = comp;
    for (VertexId u : comp) cb.witness.values.push_back(tau[u]);
    report.components.push_back(std::move(cb));
  }

  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    if (tree_edge[i]) continue;
    const Edge& e = g.edges()[i];
    ComponentBalance& cb = report.components[component_of[e.u]];
    if (!cb.balanced) continue;
    const GroupElement switched = tau[e.u] * e.signature * tau[e.v].inverse();
    if (switched.is_identity(angle_tolerance)) continue;
    cb.balanced = false;
    // Fundamental cycle: u up to the common ancestor, then down to v.
    std::vector<VertexId> up{e.u}, down{e.v};
    VertexId a = e.u, b = e.v;
    while (depth[a] > depth[b]) up.push_back(a = parent[a]);
    while (depth[b] > depth[a]) down.push_back(b = parent[b]);
    while (a != b) {
      up.push_back(a = parent[a]);
      down.push_back(b = parent[b]);
    }
    down.pop_back();
    std::vector<VertexId> cycle(up);
    cycle.insert(cycle.end(), down.rbegin(), down.rend());
    cb.violating_cycle = std::move(cycle);
    cb.cycle_signature = cycle_signature(g, cb.violating_cycle);
  }
  return report;
}

struct FrustrationResult {
  double value = 0.0;
  SwitchingFunction optimizer;  // on V1
  Exactness exactness = Exactness::exact;
};

/// sum_{{u,v} in E1} w_uv |tau(u) - s_uv tau(v)| over the subgraph induced by
/// the domain of tau.
inline double switching_cost(const SignedGraph& g, const SwitchingFunction& tau) {
  const auto in = membership(g.num_vertices(), tau.domain);
  double sum = 0.0;
  for (const Edge& e : g.edges()) {
    if (!in[e.u] || !in[e.v]) continue;
    sum += e.weight * std::abs(tau.at(e.u).value() - e.signature.value() * tau.at(e.v).value());
  }
  return sum;
}

/// Number of assignments the exact routine enumerates on `set`: the sum over
/// induced components of k^(size - 1). Saturates at UINT64_MAX.
inline std::uint64_t exact_frustration_work(const SignedGraph& g, const VertexSet& set) {
  const int k = g.group().order;
  std::uint64_t total = 0;
  for (const auto& comp : induced_components(g, set)) {
    std::uint64_t count = 1;
    for (std::size_t i = 1; i < comp.size(); ++i) {
      if (count > UINT64_MAX / static_cast<std::uint64_t>(k)) return UINT64_MAX;
      count *= static_cast<std::uint64_t>(k);
    }
    if (total > UINT64_MAX - count) return UINT64_MAX;
    total += count;
  }
  return total;
}

/// Exact frustration index for cyclic signatures. Each induced component is
/// minimized on its own with its smallest vertex pinned at xi^0, by depth-first
/// branch and bound in vertex order; ties keep the lexicographically smallest
/// switching.
inline FrustrationResult frustration_exact_cyclic(const SignedGraph& g, const VertexSet& set,
                                                  std::uint64_t cap = kEnumerationCap) {
  if (!g.group().is_cyclic()) {
    throw std::invalid_argument("exact frustration requires a cyclic signature");
  }
  if (set.empty()) throw std::invalid_argument("frustration index of an empty set");
  const int k = g.group().order;
  if (const auto work = exact_frustration_work(g, set); work > cap) {
    throw CapExceeded("exact frustration needs " +
                      (work == UINT64_MAX ? std::string("more than 2^64") : std::to_string(work)) +
                      " assignments, cap is " + std::to_string(cap));
  }
  std::vector<double> chords(static_cast<std::size_t>(k));
  for (int l = 0; l < k; ++l) chords[static_cast<std::size_t>(l)] = chord(l, k);

  FrustrationResult result;
  result.exactness = Exactness::exact;
  result.optimizer.domain = set;
  result.optimizer.values.assign(set.size(), g.group().identity());
  std::vector<int> exponent(g.num_vertices(), 0);

  for (const VertexSet& comp : induced_components(g, set)) {
    const std::size_t m = comp.size();
    std::vector<std::size_t> position(g.num_vertices(), SIZE_MAX);
    for (std::size_t i = 0; i < m; ++i) position[comp[i]] = i;
    // Edges to earlier vertices in the order: (earlier position, weight, s exponent from later).
    struct Back {
      std::size_t other;
      double weight;
      int s;
    };
    std::vector<std::vector<Back>> back(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (const Incidence& inc : g.neighbors(comp[i])) {
        const std::size_t j = position[inc.to];
        if (j != SIZE_MAX && j < i) back[i].push_back({j, inc.weight, inc.signature.exponent()});
      }
    }
    std::vector<int> current(m, 0), best(m, 0);
    double best_cost = std::numeric_limits<double>::infinity();
    constexpr double kTieTolerance = 1e-12;

    // Iterative DFS over positions 1..m-1 (position 0 pinned to 0).
    std::vector<double> partial(m + 1, 0.0);
    if (m == 1) {
      best_cost = 0.0;
    } else {
      std::size_t depth = 1;
      current[1] = -1;
      while (depth >= 1) {
        if (++current[depth] >= k) {
          --depth;
          continue;
        }
        double cost = partial[depth];
        const int a = current[depth];
        for (const Back& b : back[depth]) {
          cost += b.weight * chords[static_cast<std::size_t>(((b.s + current[b.other] - a) % k + k) % k)];
        }
        if (cost >= best_cost - kTieTolerance) continue;
        if (depth + 1 == m) {
          best_cost = cost;
          best = current;
          continue;
        }
        partial[depth + 1] = cost;
        ++depth;
        current[depth] = -1;
      }
    }
    result.value += best_cost;
    for (std::size_t i = 0; i < m; ++i) exponent[comp[i]] = best[i];
  }
  for (std::size_t i = 0; i < set.size(); ++i) {
    result.optimizer.values[i] = GroupElement::cyclic(k, exponent[set[i]]);
  }
  return result;
}

struct HeuristicOptions {
  int restarts = 8;
  std::uint64_t seed = 0;
  double relative_tolerance = 1e-10;
  int max_sweeps = 10'000;
  /// When every signature angle is a multiple of 2 pi / m for some m <= 64
  /// and the exact cyclic search over S^1_m fits this many assignments, its
  /// optimum is used as an extra start.
  std::uint64_t lattice_budget = 1'000'000;
};

namespace detail {

struct LocalNeighbor {
  std::size_t other;
  double weight;
  Complex s;  // s_{this, other}
};

inline double local_cost(const std::vector<std::vector<LocalNeighbor>>& adj,
                         const std::vector<Complex>& tau) {
  double sum = 0.0;
  for (std::size_t i = 0; i < adj.size(); ++i) {
    for (const auto& nb : adj[i]) {
      if (nb.other > i) sum += nb.weight * std::abs(tau[i] - nb.s * tau[nb.other]);
    }
  }
  return sum;
}

// Coordinate descent on vertex phases. Each one-vertex cost is a sum of
// chords |e^{i a} - z_v| which is concave between consecutive targets
// arg z_v, so the exact coordinate minimum sits at one of the targets.
inline double coordinate_descent(const std::vector<std::vector<LocalNeighbor>>& adj,
                                 std::vector<Complex>& tau, const HeuristicOptions& options) {
  double cost = local_cost(adj, tau);
  for (int sweep = 0; sweep < options.max_sweeps && cost > 0.0; ++sweep) {
    for (std::size_t i = 0; i < adj.size(); ++i) {
      if (adj[i].empty()) continue;
      auto vertex_cost = [&](Complex z) {
        double c = 0.0;
        for (const auto& nb : adj[i]) c += nb.weight * std::abs(z - nb.s * tau[nb.other]);
        return c;
      };
      Complex best = tau[i];
      double best_cost = vertex_cost(best);
      for (const auto& nb : adj[i]) {
        Complex target = nb.s * tau[nb.other];
        target /= std::abs(target);
        const double c = vertex_cost(target);
        if (c < best_cost - 1e-15) {
          best_cost = c;
          best = target;
        }
      }
      tau[i] = best;
    }
    const double next = local_cost(adj, tau);
    const double improvement = cost - next;
    cost = next;
    if (improvement <= options.relative_tolerance * std::max(cost, 1e-300)) break;
  }
  return cost;
}

// Smallest m <= max_order such that every signature is an m-th root of
// unity (within 1e-9 rad), or 0.
inline int common_root_order(const SignedGraph& g, int max_order = 64) {
  for (int m = 1; m <= max_order; ++m) {
    bool fits = true;
    for (const Edge& e : g.edges()) {
      const double x = e.signature.angle() * m / kTwoPi;
      if (std::abs(x - std::round(x)) * kTwoPi / m > 1e-9) {
        fits = false;
        break;
      }
    }
    if (fits) return m;
  }
  return 0;
}

inline SignedGraph as_cyclic(const SignedGraph& g, int m) {
  std::vector<Edge> edges(g.edges());
  for (Edge& e : edges) {
    e.signature = GroupElement::cyclic(m, std::lround(e.signature.angle() * m / kTwoPi));
  }
  return SignedGraph(g.names(), std::move(edges), SignatureGroup::cyclic(m));
}

}  // namespace detail

/// Upper bound on the U(1) frustration index by local search over vertex
/// phases. Starts: phases of the lowest eigenfunction of the induced magnetic
/// Laplacian, the spanning-tree switching, the exact optimum over a finite
/// root lattice when one fits the budget, and `restarts` random phase vectors.
inline FrustrationResult frustration_heuristic_u1(const SignedGraph& g, const VertexSet& set,
                                                  const HeuristicOptions& options = {}) {
  if (set.empty()) throw std::invalid_argument("frustration index of an empty set");
  if (options.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  const std::size_t m = set.size();
  std::vector<std::size_t> position(g.num_vertices(), SIZE_MAX);
  for (std::size_t i = 0; i < m; ++i) position[set[i]] = i;
  std::vector<std::vector<detail::LocalNeighbor>> adj(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (const Incidence& inc : g.neighbors(set[i])) {
      if (position[inc.to] != SIZE_MAX) adj[i].push_back({position[inc.to], inc.weight, inc.signature.value()});
    }
  }

  std::vector<std::vector<Complex>> starts;
  const SignedGraph sub = induced_subgraph(g, set);
  {
    const Spectrum eig = spectrum(sub);
    std::vector<Complex> tau(m);
    for (std::size_t i = 0; i < m; ++i) {
      const Complex f = eig.vectors[0][i];
      tau[i] = std::abs(f) > 1e-300 ? f / std::abs(f) : Complex(1.0);
    }
    starts.push_back(std::move(tau));
  }
  {
    const BalanceReport tree = balance_check(sub);
    std::vector<Complex> tau(m);
    for (const auto& comp : tree.components) {
      for (std::size_t i = 0; i < comp.vertices.size(); ++i) {
        // tau(u) s_uv tau(v)^{-1} = 1 on tree edges; cost uses tau^{-1}.
        tau[comp.vertices[i]] = std::conj(comp.witness.values[i].value());
      }
    }
    starts.push_back(std::move(tau));
  }
  if (const int order = detail::common_root_order(sub); order > 0) {
    const SignedGraph lattice = detail::as_cyclic(sub, order);
    const VertexSet all = all_vertices(m);
    if (exact_frustration_work(lattice, all) <= options.lattice_budget) {
      const FrustrationResult fr = frustration_exact_cyclic(lattice, all);
      std::vector<Complex> tau(m);
      for (std::size_t i = 0; i < m; ++i) tau[i] = fr.optimizer.values[i].value();
      starts.push_back(std::move(tau));
    }
  }
  for (int r = 0; r < options.restarts; ++r) {
    Rng rng(substream_seed(options.seed, static_cast<std::uint64_t>(r)));
    std::vector<Complex> tau(m);
    for (auto& z : tau) z = std::polar(1.0, rng.uniform(0.0, kTwoPi));
    starts.push_back(std::move(tau));
  }

  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<Complex> best;
  for (auto& tau : starts) {
    const double cost = detail::coordinate_descent(adj, tau, options);
    if (cost < best_cost - 1e-15) {
      best_cost = cost;
      best = tau;
    }
  }
  FrustrationResult result;
  result.exactness = Exactness::upper_bound;
  result.optimizer.domain = set;
  for (const Complex& z : best) result.optimizer.values.push_back(GroupElement::circle(std::arg(z)));
  result.value = detail::local_cost(adj, best);
  return result;
}

/// Harary's line index of balance e_min = iota / 2 for unweighted graphs
/// with +-1 signatures.
inline long line_index_of_balance(const SignedGraph& g, const VertexSet& set) {
  if (!g.group().is_cyclic() || g.group().order != 2) {
    throw std::invalid_argument("line index of balance needs signatures in {+1, -1}");
  }
  for (const Edge& e : g.edges()) {
    if (e.weight != 1.0) throw std::invalid_argument("line index of balance needs unit weights");
  }
  const double half = frustration_exact_cyclic(g, set).value / 2.0;
  const double rounded = std::round(half);
  if (std::abs(half - rounded) > 1e-9) throw std::logic_error("frustration of a +-1 graph is not even");
  return static_cast<long>(rounded);
}

}  // namespace magcheeger

#endif  // MAGCHEEGER_FRUSTRATION_HPP

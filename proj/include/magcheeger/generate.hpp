#ifndef MAGCHEEGER_GENERATE_HPP
#define MAGCHEEGER_GENERATE_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "magcheeger/graph.hpp"
#include "magcheeger/random.hpp"

namespace magcheeger {

inline std::vector<std::string> default_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return names;
}

struct ErSignedParams {
  std::size_t n = 8;
  double p = 0.5;
  int k = 2;                // 0 selects U(1) angles
  double max_weight = 1.0;  // weights uniform in [1, max_weight]
  std::uint64_t seed = 0;
};

/// Erdos-Renyi graph with independent uniform signatures.
inline SignedGraph er_signed(const ErSignedParams& prm) {
  if (prm.n == 0) throw std::invalid_argument("er-signed needs n >= 1");
  if (!(prm.p >= 0.0 && prm.p <= 1.0)) throw std::invalid_argument("er-signed needs p in [0, 1]");
  if (prm.k < 0) throw std::invalid_argument("er-signed needs k >= 0");
  if (!(prm.max_weight >= 1.0)) throw std::invalid_argument("er-signed needs max_weight >= 1");
  Rng rng(prm.seed);
  std::vector<Edge> edges;
  for (VertexId u = 0; u < prm.n; ++u) {
    for (VertexId v = u + 1; v < prm.n; ++v) {
      if (!rng.bernoulli(prm.p)) continue;
      const double w = prm.max_weight > 1.0 ? rng.uniform(1.0, prm.max_weight) : 1.0;
      const GroupElement s = prm.k == 0 ? GroupElement::circle(rng.uniform(0.0, kTwoPi))
                                        : GroupElement::cyclic(prm.k, static_cast<long>(rng.below(prm.k)));
      edges.push_back({u, v, w, s});
    }
  }
  const SignatureGroup group = prm.k == 0 ? SignatureGroup::circle() : SignatureGroup::cyclic(prm.k);
  return SignedGraph(default_names(prm.n), std::move(edges), group);
}

/// Cycle 0-1-...-(n-1)-0 with unit weights; the first `flips` edges carry xi,
/// the rest are trivial.
inline SignedGraph signed_cycle(std::size_t n, std::size_t flips, int k) {
  if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
  if (flips > n) throw std::invalid_argument("cycle: more flips than edges");
  if (k < 1) throw std::invalid_argument("cycle needs k >= 1");
  std::vector<Edge> edges;
  for (VertexId u = 0; u < n; ++u) {
    const VertexId v = (u + 1) % n;
    edges.push_back({u, v, 1.0, GroupElement::cyclic(k, u < flips ? 1 : 0)});
  }
  return SignedGraph(default_names(n), std::move(edges), SignatureGroup::cyclic(k));
}

struct PlantedParams {
  std::size_t n = 12;
  int k = 3;
  double p = 0.3;      // extra link density among compatible pairs
  double noise = 0.0;  // per-link probability of a random type change
  std::uint64_t seed = 0;
};

struct PlantedInstance {
  MixedGraph graph;
  std::vector<int> part;  // ground-truth part per vertex
  int k = 0;

  std::vector<VertexSet> parts() const {
    std::vector<VertexSet> out(static_cast<std::size_t>(k));
    for (VertexId u = 0; u < part.size(); ++u) out[static_cast<std::size_t>(part[u])].push_back(u);
    return out;
  }
};

/// Mixed graph with a planted ordered k-partition: links inside a part are
/// unoriented, links between consecutive parts are arcs from part j+1 to
/// part j, other pairs stay unlinked. A random spanning tree over compatible
/// pairs keeps it connected. With probability `noise` each link switches to
/// a different random type (unoriented or either orientation).
inline PlantedInstance mixed_planted(const PlantedParams& prm) {
  if (prm.k < 2) throw std::invalid_argument("mixed-planted needs k >= 2");
  if (prm.n < static_cast<std::size_t>(prm.k)) throw std::invalid_argument("mixed-planted needs n >= k");
  if (!(prm.p >= 0.0 && prm.p <= 1.0)) throw std::invalid_argument("mixed-planted needs p in [0, 1]");
  if (!(prm.noise >= 0.0 && prm.noise <= 1.0)) throw std::invalid_argument("mixed-planted needs noise in [0, 1]");
  Rng rng(prm.seed);
  const int k = prm.k;
  std::vector<int> part(prm.n);
  for (std::size_t u = 0; u < prm.n; ++u) {
    part[u] = u < static_cast<std::size_t>(k) ? static_cast<int>(u) : static_cast<int>(rng.below(k));
  }
  auto compatible = [&](VertexId u, VertexId v) {
    const int d = ((part[u] - part[v]) % k + k) % k;
    return d == 0 || d == 1 || d == k - 1;
  };
  std::vector<std::vector<char>> linked(prm.n, std::vector<char>(prm.n, 0));
  std::vector<std::pair<VertexId, VertexId>> pairs;
  auto add = [&](VertexId u, VertexId v) {
    if (linked[u][v]) return;
    linked[u][v] = linked[v][u] = 1;
    pairs.emplace_back(std::min(u, v), std::max(u, v));
  };
  for (int j = 0; j + 1 < k; ++j) add(static_cast<VertexId>(j), static_cast<VertexId>(j + 1));
  for (VertexId u = static_cast<VertexId>(k); u < prm.n; ++u) {
    std::vector<VertexId> options;
    for (VertexId v = 0; v < u; ++v) {
      if (compatible(u, v)) options.push_back(v);
    }
    add(u, options[rng.below(options.size())]);
  }
  for (VertexId u = 0; u < prm.n; ++u) {
    for (VertexId v = u + 1; v < prm.n; ++v) {
      if (!linked[u][v] && compatible(u, v) && rng.bernoulli(prm.p)) add(u, v);
    }
  }
  std::sort(pairs.begin(), pairs.end());

  // Link type: 0 unoriented, 1 arc u->v, 2 arc v->u (u < v).
  std::vector<MixedGraph::Link> unoriented, arcs;
  for (const auto& [u, v] : pairs) {
    int type = 0;
    if (part[u] == (part[v] + 1) % k) {
      type = 1;
    } else if (part[v] == (part[u] + 1) % k) {
      type = 2;
    }
    if (prm.noise > 0.0 && rng.bernoulli(prm.noise)) type = (type + 1 + static_cast<int>(rng.below(2))) % 3;
    if (type == 0) unoriented.push_back({u, v, 1.0});
    if (type == 1) arcs.push_back({u, v, 1.0});
    if (type == 2) arcs.push_back({v, u, 1.0});
  }
  return {MixedGraph(default_names(prm.n), std::move(unoriented), std::move(arcs)), std::move(part), k};
}

}  // namespace magcheeger

#endif  // MAGCHEEGER_GENERATE_HPP

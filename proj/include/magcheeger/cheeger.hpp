#ifndef MAGCHEEGER_CHEEGER_HPP
#define MAGCHEEGER_CHEEGER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "magcheeger/error.hpp"
#include "magcheeger/frustration.hpp"
#include "magcheeger/graph.hpp"
#include "magcheeger/parallel.hpp"
#include "magcheeger/spectral.hpp"

namespace magcheeger {

enum class PhiMode { exact, heuristic };

struct PhiValue {
  double value = 0.0;
  double frustration = 0.0;
  double boundary = 0.0;
  double volume = 0.0;
  Exactness exactness = Exactness::exact;
  SwitchingFunction switching;
};

/// (iota(V1) + |E(V1, V1^c)|) / vol_mu(V1). Exact mode needs cyclic
/// signatures; heuristic mode needs U(1) and yields an upper bound.
inline PhiValue phi(const SignedGraph& g, std::span<const double> mu, const VertexSet& set, PhiMode mode,
                    const HeuristicOptions& options = {}) {
  if (set.empty()) throw std::invalid_argument("phi of an empty set");
  FrustrationResult fr;
  if (mode == PhiMode::exact) {
    fr = frustration_exact_cyclic(g, set);
  } else {
    if (g.group().is_cyclic()) throw std::invalid_argument("heuristic phi is for U(1) signatures");
    fr = frustration_heuristic_u1(g, set, options);
  }
  const SetFunctionals sf = set_functionals(g, mu, set);
  PhiValue r;
  r.frustration = fr.value;
  r.boundary = sf.boundary;
  r.volume = sf.volume;
  r.value = (fr.value + sf.boundary) / sf.volume;
  r.exactness = fr.exactness;
  r.switching = std::move(fr.optimizer);
  return r;
}

/// Exact for cyclic signatures, heuristic for U(1).
inline PhiValue phi(const SignedGraph& g, std::span<const double> mu, const VertexSet& set) {
  return phi(g, mu, set, g.group().is_cyclic() ? PhiMode::exact : PhiMode::heuristic);
}

/// Cost of the edge {u, v} with u in part i, v in part j and s_uv = xi^m.
inline double partition_edge_cost(int m, int i, int j, int k) { return chord(static_cast<long>(m) + j - i, k); }

/// k-partiteness ratio of an ordered partition of its base set.
inline double k_partiteness_ratio(const SignedGraph& g, std::span<const double> mu, const OrderedKPartition& p) {
  if (!g.group().is_cyclic() || static_cast<int>(p.k()) != g.group().order) {
    throw std::invalid_argument("partition size must match the cyclic signature order");
  }
  if (!p.disjoint()) throw std::invalid_argument("partition parts overlap");
  const std::size_t n = g.num_vertices();
  std::vector<int> part(n, -1);
  double volume = 0.0;
  for (std::size_t j = 0; j < p.k(); ++j) {
    for (VertexId u : p.parts[j]) {
      if (u >= n) throw std::out_of_range("partition vertex out of range");
      part[u] = static_cast<int>(j);
      volume += mu[u];
    }
  }
  if (volume <= 0.0) throw std::invalid_argument("k-partiteness ratio of an empty partition");
  const int k = g.group().order;
  double numerator = 0.0;
  for (const Edge& e : g.edges()) {
    const int a = part[e.u], b = part[e.v];
    if (a < 0 && b < 0) continue;
    if (a < 0 || b < 0) {
      numerator += e.weight;
    } else {
      numerator += e.weight * partition_edge_cost(e.signature.exponent(), a, b, k);
    }
  }
  return numerator / volume;
}

/// tau(u) = xi^j for u in part j.
inline SwitchingFunction partition_switching(const OrderedKPartition& p, int k) {
  std::vector<std::pair<VertexId, int>> items;
  for (std::size_t j = 0; j < p.parts.size(); ++j) {
    for (VertexId u : p.parts[j]) items.emplace_back(u, static_cast<int>(j));
  }
  std::sort(items.begin(), items.end());
  SwitchingFunction tau;
  for (const auto& [u, j] : items) {
    tau.domain.push_back(u);
    tau.values.push_back(GroupElement::cyclic(k, j));
  }
  return tau;
}

struct HExact {
  double value = 0.0;
  Subpartition parts;
};

/// n-way Cheeger constant by enumeration of all nontrivial n-subpartitions.
/// phi of every nonempty subset is tabulated first with exact frustration.
inline HExact h_exact(const SignedGraph& g, std::span<const double> mu, std::size_t n,
                      unsigned threads = 1, std::uint64_t cap = kEnumerationCap) {
  if (!g.group().is_cyclic()) throw std::invalid_argument("h_exact needs cyclic signatures (exact frustration)");
  const std::size_t vertices = g.num_vertices();
  if (n == 0 || n > vertices) throw std::invalid_argument("h_exact needs 1 <= n <= number of vertices");
  {
    double work = 1.0;
    for (std::size_t i = 0; i < vertices; ++i) work *= static_cast<double>(n + 1);
    if (work > static_cast<double>(cap) || vertices >= 63) {
      throw CapExceeded("h_exact enumeration (n+1)^N exceeds cap " + std::to_string(cap));
    }
  }
  const std::uint64_t subsets = std::uint64_t{1} << vertices;
  std::vector<double> table(subsets, std::numeric_limits<double>::infinity());
  parallel_for(subsets - 1, threads, [&](std::size_t i) {
    const std::uint64_t mask = i + 1;
    VertexSet set;
    for (std::size_t u = 0; u < vertices; ++u) {
      if (mask >> u & 1) set.push_back(u);
    }
    table[mask] = phi(g, mu, set, PhiMode::exact).value;
  });

  auto to_set = [&](std::uint64_t mask) {
    VertexSet set;
    for (std::size_t u = 0; u < vertices; ++u) {
      if (mask >> u & 1) set.push_back(u);
    }
    return set;
  };
  constexpr double kTie = 1e-12;
  HExact best{std::numeric_limits<double>::infinity(), {}};
  if (n == 1) {
    std::uint64_t arg = 1;
    for (std::uint64_t mask = 1; mask < subsets; ++mask) {
      if (table[mask] < best.value - kTie) {
        best.value = table[mask];
        arg = mask;
      }
    }
    best.parts = {to_set(arg)};
    return best;
  }

  // Labels 0 = unassigned, parts numbered by first appearance.
  std::vector<std::uint64_t> masks(n + 1, 0);
  std::vector<std::uint64_t> best_masks;
  auto dfs = [&](auto&& self, std::size_t u, std::size_t used) -> void {
    if (n - used > vertices - u) return;
    if (u == vertices) {
      double worst = 0.0;
      for (std::size_t p = 1; p <= n; ++p) worst = std::max(worst, table[masks[p]]);
      if (worst < best.value - kTie) {
        best.value = worst;
        best_masks.assign(masks.begin() + 1, masks.end());
      }
      return;
    }
    self(self, u + 1, used);
    const std::size_t top = std::min(used + 1, n);
    for (std::size_t p = 1; p <= top; ++p) {
      masks[p] |= std::uint64_t{1} << u;
      self(self, u + 1, std::max(used, p));
      masks[p] &= ~(std::uint64_t{1} << u);
    }
  };
  dfs(dfs, 0, 0);
  for (std::uint64_t m : best_masks) best.parts.push_back(to_set(m));
  return best;
}

/// Sector index of z for the k regions starting at angle theta.
inline int sector_of(Complex z, double theta, int k) {
  double x = std::fmod(std::arg(z) - theta, kTwoPi);
  if (x < 0) x += kTwoPi;
  const int j = static_cast<int>(std::floor(x * k / kTwoPi));
  return std::clamp(j, 0, k - 1);
}

/// Y_{t,theta}: xi^j on sector j outside the open disk of radius t, else 0.
inline Complex sector_step(Complex z, double t, double theta, int k) {
  if (std::abs(z) < t) return 0.0;
  return std::polar(1.0, kTwoPi * sector_of(z, theta, k) / k);
}

/// X_t: z / |z| outside the open disk of radius t, else 0.
inline Complex radial_step(Complex z, double t) {
  const double r = std::abs(z);
  if (r < t || r == 0.0) return 0.0;
  return z / r;
}

/// Candidate set or ordered partition with the numbers certifying its ratio.
struct ClusterCertificate {
  /// k ordered parts for cyclic signatures; a single part for U(1).
  OrderedKPartition candidate;
  bool is_partition = true;
  /// Switching on the candidate's base set that realizes `frustration`.
  SwitchingFunction switching;
  double frustration = 0.0;
  Exactness exactness = Exactness::upper_bound;
  double boundary = 0.0;
  double volume = 0.0;
  double ratio = 0.0;
  double bound = 0.0;
  double t = 0.0;
  double theta = 0.0;

  VertexSet support() const { return candidate.base(); }
};

/// Largest deviation between the stored numbers and a recomputation from
/// the candidate and its switching.
inline double certificate_defect(const SignedGraph& g, std::span<const double> mu, const ClusterCertificate& c) {
  const VertexSet base = c.support();
  if (base.empty() || base != c.switching.domain) return std::numeric_limits<double>::infinity();
  const SetFunctionals sf = set_functionals(g, mu, base);
  const double frustration = switching_cost(g, c.switching);
  const double ratio = (frustration + sf.boundary) / sf.volume;
  double defect = std::max({std::abs(frustration - c.frustration), std::abs(sf.boundary - c.boundary),
                            std::abs(sf.volume - c.volume), std::abs(ratio - c.ratio)});
  if (c.is_partition) defect = std::max(defect, std::abs(k_partiteness_ratio(g, mu, c.candidate) - c.ratio));
  return defect;
}

inline bool certificate_valid(const SignedGraph& g, std::span<const double> mu, const ClusterCertificate& c,
                              double tolerance = 1e-9) {
  return c.ratio <= c.bound + tolerance && certificate_defect(g, mu, c) <= tolerance;
}

/// Upper bound constant on the sweep ratio: 2 for cyclic, 3/2 for U(1).
inline double sweep_constant(const SignatureGroup& group) { return group.is_cyclic() ? 2.0 : 1.5; }

/// c sqrt(2 d_mu R) for a function with Rayleigh quotient R.
inline double sweep_bound(const SignedGraph& g, std::span<const double> mu, double rayleigh_quotient) {
  return sweep_constant(g.group()) * std::sqrt(2.0 * max_mu_degree(g, mu) * std::max(0.0, rayleigh_quotient));
}

struct CheegerBounds {
  double lower = 0.0;         // lambda_1 / 2
  double sharper_lower = 0.0; // lambda_1 / max(1, max chord); informational
  double upper = 0.0;         // c sqrt(2 d_mu lambda_1)
};

inline CheegerBounds cheeger_bounds(const SignedGraph& g, std::span<const double> mu, double lambda1) {
  return {lambda1 / 2.0, lambda1 / std::max(1.0, max_chord(g.group())), sweep_bound(g, mu, lambda1)};
}

namespace detail {

inline bool zero_function(std::span<const Complex> f) {
  return std::all_of(f.begin(), f.end(), [](Complex z) { return z == Complex(0.0); });
}

// Vertices grouped by equal |f|^2, largest first; values normalized to max 1.
struct Levels {
  std::vector<double> modulus2;
  std::vector<std::vector<VertexId>> groups;
  std::vector<double> t;  // threshold per group
};

inline Levels level_groups(std::span<const Complex> f) {
  double top = 0.0;
  for (const Complex& z : f) top = std::max(top, std::abs(z));
  Levels lv;
  lv.modulus2.resize(f.size());
  std::vector<VertexId> order;
  for (VertexId u = 0; u < f.size(); ++u) {
    lv.modulus2[u] = std::norm(f[u] / top);
    if (lv.modulus2[u] > 0.0) order.push_back(u);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](VertexId a, VertexId b) { return lv.modulus2[a] > lv.modulus2[b]; });
  for (VertexId u : order) {
    if (lv.t.empty() || lv.modulus2[u] != lv.t.back()) {
      lv.t.push_back(lv.modulus2[u]);
      lv.groups.emplace_back();
    }
    lv.groups.back().push_back(u);
  }
  return lv;
}

struct SweepChoice {
  double ratio = std::numeric_limits<double>::infinity();
  double t = 0.0;
  double theta = 0.0;
  std::size_t level = 0;
  std::vector<int> labels;  // part per vertex, -1 outside
};

// Ratio first, then smaller t, smaller theta, then lexicographic labels.
inline bool better(const SweepChoice& a, const SweepChoice& b) {
  constexpr double kTie = 1e-12;
  if (a.ratio < b.ratio - kTie) return true;
  if (a.ratio > b.ratio + kTie) return false;
  if (a.t != b.t) return a.t < b.t;
  if (a.theta != b.theta) return a.theta < b.theta;
  return a.labels < b.labels;
}

}  // namespace detail

/// Sweep over thresholds t (distinct |f|^2 after normalization) and sector
/// offsets theta. Offsets range over [0, 2 pi / k): larger shifts relabel the
/// parts cyclically and leave the ratio unchanged. Evaluated offsets are the
/// points where some vertex changes sector plus the midpoints between them.
inline ClusterCertificate sweep_cut_cyclic(const SignedGraph& g, std::span<const double> mu,
                                           std::span<const Complex> f, unsigned threads = 1) {
  if (!g.group().is_cyclic()) throw std::invalid_argument("sectorial sweep needs a cyclic signature");
  if (f.size() != g.num_vertices()) throw std::invalid_argument("function size mismatch");
  if (detail::zero_function(f)) throw std::invalid_argument("sweep of the zero function");
  const int k = g.group().order;
  const std::size_t n = g.num_vertices();
  const detail::Levels lv = detail::level_groups(f);
  const double width = kTwoPi / k;

  std::vector<double> breaks;
  for (const auto& group : lv.groups) {
    for (VertexId u : group) {
      double b = std::fmod(std::arg(f[u]), width);
      if (b < 0) b += width;
      if (b >= width) b = 0.0;
      breaks.push_back(b);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<double> thetas;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    thetas.push_back(breaks[i]);
    const double next = i + 1 < breaks.size() ? breaks[i + 1] : breaks[0] + width;
    double mid = 0.5 * (breaks[i] + next);
    if (mid >= width) mid -= width;
    thetas.push_back(mid);
  }
  std::sort(thetas.begin(), thetas.end());
  thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());

  std::vector<double> chords(static_cast<std::size_t>(k));
  for (int l = 0; l < k; ++l) chords[static_cast<std::size_t>(l)] = chord(l, k);

  std::vector<detail::SweepChoice> per_theta(thetas.size());
  parallel_for(thetas.size(), threads, [&](std::size_t ti) {
    const double theta = thetas[ti];
    std::vector<int> part(n, -1);
    for (const auto& group : lv.groups) {
      for (VertexId u : group) part[u] = sector_of(f[u], theta, k);
    }
    std::vector<char> in(n, 0);
    double numerator = 0.0, volume = 0.0;
    detail::SweepChoice best;
    for (std::size_t level = 0; level < lv.groups.size(); ++level) {
      for (VertexId u : lv.groups[level]) {
        in[u] = 1;
        volume += mu[u];
        for (const Incidence& inc : g.neighbors(u)) {
          if (inc.to == u) continue;
          if (in[inc.to]) {
            numerator -= inc.weight;
            const long l = ((static_cast<long>(inc.signature.exponent()) + part[inc.to] - part[u]) % k + k) % k;
            numerator += inc.weight * chords[static_cast<std::size_t>(l)];
          } else {
            numerator += inc.weight;
          }
        }
      }
      detail::SweepChoice c;
      c.ratio = std::max(0.0, numerator) / volume;
      c.t = lv.t[level];
      c.theta = theta;
      c.level = level;
      if (detail::better(c, best)) {
        c.labels.assign(n, -1);
        for (std::size_t q = 0; q <= level; ++q) {
          for (VertexId u : lv.groups[q]) c.labels[u] = part[u];
        }
        best = std::move(c);
      }
    }
    per_theta[ti] = std::move(best);
  });
  detail::SweepChoice best;
  for (auto& c : per_theta) {
    if (detail::better(c, best)) best = std::move(c);
  }

  ClusterCertificate cert;
  cert.is_partition = true;
  cert.candidate.parts.assign(static_cast<std::size_t>(k), {});
  for (VertexId u = 0; u < n; ++u) {
    if (best.labels[u] >= 0) cert.candidate.parts[static_cast<std::size_t>(best.labels[u])].push_back(u);
  }
  cert.switching = partition_switching(cert.candidate, k);
  const VertexSet base = cert.candidate.base();
  const SetFunctionals sf = set_functionals(g, mu, base);
  cert.frustration = switching_cost(g, cert.switching);
  cert.exactness = Exactness::upper_bound;
  cert.boundary = sf.boundary;
  cert.volume = sf.volume;
  cert.ratio = (cert.frustration + sf.boundary) / sf.volume;
  cert.bound = sweep_bound(g, mu, rayleigh(g, mu, f));
  cert.t = best.t;
  cert.theta = best.theta;
  return cert;
}

/// Sweep over thresholds t with the switching tau = f / |f| on each
/// superlevel set; the reported frustration is an upper bound.
inline ClusterCertificate sweep_cut_u1(const SignedGraph& g, std::span<const double> mu,
                                       std::span<const Complex> f) {
  if (g.group().is_cyclic()) throw std::invalid_argument("radial sweep needs a U(1) signature");
  if (f.size() != g.num_vertices()) throw std::invalid_argument("function size mismatch");
  if (detail::zero_function(f)) throw std::invalid_argument("sweep of the zero function");
  const std::size_t n = g.num_vertices();
  const detail::Levels lv = detail::level_groups(f);
  std::vector<Complex> phase(n, 0.0);
  for (VertexId u = 0; u < n; ++u) {
    if (lv.modulus2[u] > 0.0) phase[u] = f[u] / std::abs(f[u]);
  }
  std::vector<char> in(n, 0);
  double numerator = 0.0, volume = 0.0;
  detail::SweepChoice best;
  for (std::size_t level = 0; level < lv.groups.size(); ++level) {
    for (VertexId u : lv.groups[level]) {
      in[u] = 1;
      volume += mu[u];
      for (const Incidence& inc : g.neighbors(u)) {
        if (in[inc.to]) {
          numerator += inc.weight * (std::abs(phase[u] - inc.signature.value() * phase[inc.to]) - 1.0);
        } else {
          numerator += inc.weight;
        }
      }
    }
    detail::SweepChoice c;
    c.ratio = std::max(0.0, numerator) / volume;
    c.t = lv.t[level];
    c.level = level;
    if (detail::better(c, best)) best = std::move(c);
  }

  ClusterCertificate cert;
  cert.is_partition = false;
  VertexSet set;
  for (std::size_t q = 0; q <= best.level; ++q) {
    set.insert(set.end(), lv.groups[q].begin(), lv.groups[q].end());
  }
  set = make_vertex_set(std::move(set));
  cert.candidate.parts = {set};
  cert.switching.domain = set;
  for (VertexId u : set) cert.switching.values.push_back(GroupElement::circle(std::arg(phase[u])));
  const SetFunctionals sf = set_functionals(g, mu, set);
  cert.frustration = switching_cost(g, cert.switching);
  cert.exactness = Exactness::upper_bound;
  cert.boundary = sf.boundary;
  cert.volume = sf.volume;
  cert.ratio = (cert.frustration + sf.boundary) / sf.volume;
  cert.bound = sweep_bound(g, mu, rayleigh(g, mu, f));
  cert.t = best.t;
  cert.theta = 0.0;
  return cert;
}

/// Dispatches on the signature group.
inline ClusterCertificate sweep_cut(const SignedGraph& g, std::span<const double> mu, std::span<const Complex> f,
                                    unsigned threads = 1) {
  return g.group().is_cyclic() ? sweep_cut_cyclic(g, mu, f, threads) : sweep_cut_u1(g, mu, f);
}

}  // namespace magcheeger

#endif  // MAGCHEEGER_CHEEGER_HPP

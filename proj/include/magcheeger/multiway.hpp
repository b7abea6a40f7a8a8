#ifndef MAGCHEEGER_MULTIWAY_HPP
#define MAGCHEEGER_MULTIWAY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "magcheeger/cheeger.hpp"
#include "magcheeger/error.hpp"
#include "magcheeger/graph.hpp"
#include "magcheeger/parallel.hpp"
#include "magcheeger/random.hpp"
#include "magcheeger/spectral.hpp"

namespace magcheeger {

inline double vector_norm(std::span<const Complex> z) {
  double s = 0.0;
  for (const Complex& x : z) s += std::norm(x);
  return std::sqrt(s);
}

/// Distance between the lines (U(1)) or k-orbits (cyclic) of two nonzero
/// vectors after normalization.
inline double df_distance(std::span<const Complex> z1, std::span<const Complex> z2, const SignatureGroup& group) {
  if (z1.size() != z2.size()) throw std::invalid_argument("df_distance: dimension mismatch");
  const double n1 = vector_norm(z1), n2 = vector_norm(z2);
  if (n1 == 0.0 || n2 == 0.0) throw std::invalid_argument("df_distance: zero vector");
  if (!group.is_cyclic()) {
    Complex dot = 0.0;
    for (std::size_t i = 0; i < z1.size(); ++i) dot += z1[i] * std::conj(z2[i]);
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::abs(dot) / (n1 * n2)));
  }
  // Fixed argument order so the result is exactly symmetric.
  auto less = [](std::span<const Complex> a, std::span<const Complex> b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
      if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
    }
    return false;
  };
  if (less(z2, z1)) return df_distance(z2, z1, group);
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < group.order; ++j) {
    const Complex gamma = std::polar(1.0, kTwoPi * j / group.order);
    double s = 0.0;
    for (std::size_t i = 0; i < z1.size(); ++i) s += std::norm(z1[i] / n1 - gamma * z2[i] / n2);
    best = std::min(best, std::sqrt(s));
  }
  return best;
}

/// F(u) = (f_1(u), ..., f_n(u)) from the first n eigenfunctions.
struct SpectralEmbedding {
  std::size_t n = 0;
  SignatureGroup group;
  VertexMap map;                 // every vertex, zero rows allowed
  VertexSet support;             // F(u) != 0
  std::vector<double> measure;   // mu_F(u) = |F(u)|^2 mu(u)
  double lambda_n = 0.0;
  double rayleigh = 0.0;

  double total_mass() const { return std::accumulate(measure.begin(), measure.end(), 0.0); }
  double distance(VertexId u, VertexId v) const { return df_distance(map[u], map[v], group); }
};

/// Rows with norm at or below this are treated as zero.
inline constexpr double kZeroRow = 1e-12;

inline SpectralEmbedding spectral_embedding(const SignedGraph& g, std::span<const double> mu, std::size_t n,
                                            const Spectrum& eig) {
  if (n == 0 || n > g.num_vertices()) throw std::invalid_argument("embedding dimension must be in [1, N]");
  SpectralEmbedding e;
  e.n = n;
  e.group = g.group();
  e.map.assign(g.num_vertices(), std::vector<Complex>(n));
  e.measure.assign(g.num_vertices(), 0.0);
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    for (std::size_t i = 0; i < n; ++i) e.map[u][i] = eig.vectors[i][u];
    const double norm = vector_norm(e.map[u]);
    e.measure[u] = norm * norm * mu[u];
    if (norm > kZeroRow) e.support.push_back(u);
  }
  e.lambda_n = eig.values[n - 1];
  e.rayleigh = rayleigh(g, mu, e.map);
  return e;
}

inline SpectralEmbedding spectral_embedding(const SignedGraph& g, std::span<const double> mu, std::size_t n) {
  return spectral_embedding(g, mu, n, spectrum(g, mu));
}

struct PaddedPartition {
  std::vector<VertexSet> cells;
  std::vector<double> diameters;
  std::vector<VertexId> net;    // net points in the random order used for assignment
  double r = 0.0;
  double radius = 0.0;          // R
};

/// Number of equispaced radii in [r/4, r/2].
inline constexpr int kRadiusSteps = 32;

/// Greedy farthest-point r/4-net over the points, a random order of the net
/// and a random radius R; each point joins the first net point (in that
/// order) within distance R.
inline PaddedPartition padded_random_partition(const SpectralEmbedding& emb, double r, double delta,
                                               std::uint64_t seed) {
  if (!(r > 0.0)) throw std::invalid_argument("padded partition needs r > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("padded partition needs delta in (0, 1)");
  PaddedPartition out;
  out.r = r;
  const VertexSet& pts = emb.support;
  if (pts.empty()) return out;

  std::vector<double> gap(pts.size(), std::numeric_limits<double>::infinity());
  std::vector<VertexId> net;
  std::size_t next = 0;
  while (true) {
    const VertexId center = pts[next];
    net.push_back(center);
    double far = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      gap[i] = std::min(gap[i], emb.distance(pts[i], center));
      if (gap[i] > far) {
        far = gap[i];
        next = i;
      }
    }
    if (far <= r / 4.0) break;
  }

  Rng rng(seed);
  rng.shuffle(net);
  out.net = net;
  out.radius = r / 4.0 + (r / 4.0) * static_cast<double>(rng.below(kRadiusSteps)) / (kRadiusSteps - 1);

  std::vector<std::size_t> cell_of(pts.size());
  std::vector<VertexSet> cells(net.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::size_t c = 0;
    while (emb.distance(pts[i], net[c]) > out.radius) ++c;
    cells[c].push_back(pts[i]);
  }
  for (auto& cell : cells) {
    if (cell.empty()) continue;
    double diam = 0.0;
    for (std::size_t a = 0; a < cell.size(); ++a) {
      for (std::size_t b = a + 1; b < cell.size(); ++b) diam = std::max(diam, emb.distance(cell[a], cell[b]));
    }
    out.cells.push_back(std::move(cell));
    out.diameters.push_back(diam);
  }
  return out;
}

struct DecomposeOptions {
  int max_retries = 64;
};

struct Decomposition {
  Subpartition parts;                  // T_1..T_n, largest mass first
  std::vector<double> mass_fractions;  // mu_F(T_p) / mu_F(V_F)
  double core_fraction = 0.0;          // sum of core masses / mu_F(V_F)
  int retries = 0;                     // attempts beyond the first
  double separation = std::numeric_limits<double>::infinity();
  std::vector<PaddedPartition> partitions;  // every attempt, in order
};

class DecomposeError : public Error {
 public:
  DecomposeError(const std::string& what, Decomposition best) : Error(what, 5), best_(std::move(best)) {}
  const Decomposition& best_attempt() const { return best_; }

 private:
  Decomposition best_;
};

inline double set_mass(const SpectralEmbedding& emb, const VertexSet& set) {
  double m = 0.0;
  for (VertexId u : set) m += emb.measure[u];
  return m;
}

/// Smallest d_F distance between vertices of different parts.
inline double separation(const SpectralEmbedding& emb, const Subpartition& parts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < parts.size(); ++p) {
    for (std::size_t q = p + 1; q < parts.size(); ++q) {
      for (VertexId u : parts[p]) {
        for (VertexId v : parts[q]) best = std::min(best, emb.distance(u, v));
      }
    }
  }
  return best;
}

/// Radius parameters used by decompose.
inline double decompose_radius(std::size_t n) { return 1.0 / (3.0 * std::sqrt(static_cast<double>(n))); }
inline double decompose_delta(std::size_t n) { return 1.0 / (4.0 * static_cast<double>(n)); }
/// Padding factor alpha = 32 log2(rho) / delta with log2(rho) taken as 2n,
/// the real dimension of the ambient sphere.
inline double padding_factor(std::size_t n) { return 32.0 * 2.0 * static_cast<double>(n) / decompose_delta(n); }

/// n disjoint sets of the support, each carrying at least 1/(2n) of the
/// embedding mass. Padded partitions are redrawn until their padded cores
/// hold (1 - delta) of the mass and the merge step leaves n heavy parts.
inline Decomposition decompose(const SpectralEmbedding& emb, std::uint64_t seed, const DecomposeOptions& options = {}) {
  const std::size_t n = emb.n;
  if (n == 0) throw std::invalid_argument("decompose needs n >= 1");
  if (emb.support.empty()) throw std::invalid_argument("decompose needs a nonempty support");
  const double total = set_mass(emb, emb.support);
  if (n == 1) {
    Decomposition d;
    d.parts = {emb.support};
    d.mass_fractions = {1.0};
    d.core_fraction = 1.0;
    return d;
  }
  const double r = decompose_radius(n);
  const double delta = decompose_delta(n);
  const double pad = r / padding_factor(n);
  const double light = total / (2.0 * static_cast<double>(n));

  Decomposition best;
  double best_min_fraction = -1.0;
  for (int attempt = 0; attempt < options.max_retries; ++attempt) {
    PaddedPartition part = padded_random_partition(emb, r, delta, substream_seed(seed, static_cast<std::uint64_t>(attempt)));
    // Cores: points whose pad-ball stays inside their own cell.
    std::vector<std::size_t> cell_of(emb.map.size(), SIZE_MAX);
    for (std::size_t c = 0; c < part.cells.size(); ++c) {
      for (VertexId u : part.cells[c]) cell_of[u] = c;
    }
    std::vector<VertexSet> cores;
    for (std::size_t c = 0; c < part.cells.size(); ++c) {
      VertexSet core;
      for (VertexId u : part.cells[c]) {
        bool inside = true;
        for (VertexId v : emb.support) {
          if (cell_of[v] != c && emb.distance(u, v) <= pad) {
            inside = false;
            break;
          }
        }
        if (inside) core.push_back(u);
      }
      if (!core.empty()) cores.push_back(std::move(core));
    }
    double core_mass = 0.0;
    for (const auto& c : cores) core_mass += set_mass(emb, c);

    // Merge the two lightest cores while both are light.
    std::vector<double> mass;
    for (const auto& c : cores) mass.push_back(set_mass(emb, c));
    while (cores.size() >= 2) {
      std::vector<std::size_t> idx(cores.size());
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return mass[a] < mass[b]; });
      if (mass[idx[1]] > light) break;
      const std::size_t a = std::min(idx[0], idx[1]), b = std::max(idx[0], idx[1]);
      cores[a].insert(cores[a].end(), cores[b].begin(), cores[b].end());
      cores[a] = make_vertex_set(std::move(cores[a]));
      mass[a] += mass[b];
      cores.erase(cores.begin() + static_cast<std::ptrdiff_t>(b));
      mass.erase(mass.begin() + static_cast<std::ptrdiff_t>(b));
    }
    std::vector<std::size_t> idx(cores.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return mass[a] > mass[b]; });

    Decomposition d;
    d.core_fraction = core_mass / total;
    d.retries = attempt;
    if (cores.size() >= n) {
      for (std::size_t p = 0; p + 1 < n; ++p) d.parts.push_back(cores[idx[p]]);
      VertexSet tail;
      for (std::size_t p = n - 1; p < idx.size(); ++p) tail.insert(tail.end(), cores[idx[p]].begin(), cores[idx[p]].end());
      d.parts.push_back(make_vertex_set(std::move(tail)));
    } else {
      for (std::size_t p : idx) d.parts.push_back(cores[p]);
    }
    double min_fraction = d.parts.size() == n ? std::numeric_limits<double>::infinity() : 0.0;
    for (const auto& p : d.parts) {
      d.mass_fractions.push_back(set_mass(emb, p) / total);
      min_fraction = std::min(min_fraction, d.mass_fractions.back());
    }
    best.partitions.push_back(part);
    const bool ok = core_mass >= (1.0 - delta) * total && d.parts.size() == n &&
                    min_fraction >= 1.0 / (2.0 * static_cast<double>(n));
    if (ok || min_fraction > best_min_fraction) {
      auto history = std::move(best.partitions);
      best = std::move(d);
      best.partitions = std::move(history);
      best_min_fraction = min_fraction;
    }
    if (ok) {
      best.separation = separation(emb, best.parts);
      return best;
    }
  }
  best.retries = options.max_retries;
  if (!best.parts.empty()) best.separation = separation(emb, best.parts);
  throw DecomposeError("decompose: retry cap of " + std::to_string(options.max_retries) + " exhausted", std::move(best));
}

/// Psi(u) = eta(u) F(u), eta(u) = max(0, 1 - d_F(u, T) / eps) on the support.
inline VertexMap localize(const SpectralEmbedding& emb, const VertexSet& part, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("localize needs epsilon > 0");
  VertexMap psi(emb.map.size(), std::vector<Complex>(emb.n, 0.0));
  for (VertexId u : emb.support) {
    double d = std::numeric_limits<double>::infinity();
    for (VertexId v : part) d = std::min(d, emb.distance(u, v));
    const double eta = std::max(0.0, 1.0 - d / epsilon);
    if (eta > 0.0) {
      for (std::size_t i = 0; i < emb.n; ++i) psi[u][i] = eta * emb.map[u][i];
    }
  }
  return psi;
}

/// Largest value of d_F(F(u), F(v)) min(|F(u)|, |F(v)|) - |F(u) - s_uv F(v)|
/// over edges inside the support; nonpositive up to rounding.
inline double key_bound_defect(const SignedGraph& g, const SpectralEmbedding& emb) {
  const auto in = membership(g.num_vertices(), emb.support);
  double worst = -std::numeric_limits<double>::infinity();
  for (const Edge& e : g.edges()) {
    if (!in[e.u] || !in[e.v]) continue;
    const auto& a = emb.map[e.u];
    const auto& b = emb.map[e.v];
    double diff = 0.0;
    for (std::size_t i = 0; i < emb.n; ++i) diff += std::norm(a[i] - e.signature.value() * b[i]);
    const double lhs = emb.distance(e.u, e.v) * std::min(vector_norm(a), vector_norm(b));
    worst = std::max(worst, lhs - std::sqrt(diff));
  }
  return worst;
}

/// Largest value of |Psi(u) - s Psi(v)| - (1 + 1/eps) |F(u) - s F(v)| over
/// all edges; nonpositive up to rounding.
inline double lipschitz_defect(const SignedGraph& g, const SpectralEmbedding& emb, const VertexMap& psi,
                               double epsilon) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const Edge& e : g.edges()) {
    const Complex s = e.signature.value();
    double dpsi = 0.0, df = 0.0;
    for (std::size_t i = 0; i < emb.n; ++i) {
      dpsi += std::norm(psi[e.u][i] - s * psi[e.v][i]);
      df += std::norm(emb.map[e.u][i] - s * emb.map[e.v][i]);
    }
    worst = std::max(worst, std::sqrt(dpsi) - (1.0 + 1.0 / epsilon) * std::sqrt(df));
  }
  return worst;
}

struct MultiwayResult {
  std::vector<ClusterCertificate> certificates;
  double embedding_rayleigh = 0.0;
  double lambda_n = 0.0;
  double separation = std::numeric_limits<double>::infinity();
  std::vector<double> mass_fractions;
  int retries = 0;
  double epsilon = 0.0;
  std::vector<std::size_t> coordinates;  // chosen coordinate of Psi_p
  std::vector<double> localized_rayleigh;  // R(Psi_p)
  std::vector<double> lipschitz_defects;   // per p
  double key_defect = 0.0;
  SpectralEmbedding embedding;
  Decomposition decomposition;
};

/// Embedding, decomposition, cut-off localization, best coordinate per part
/// and a sweep on it. Certificates have pairwise disjoint supports.
inline MultiwayResult multiway_cluster(const SignedGraph& g, std::span<const double> mu, std::size_t n,
                                       std::uint64_t seed, unsigned threads = 1,
                                       const DecomposeOptions& options = {}) {
  MultiwayResult res;
  res.embedding = spectral_embedding(g, mu, n);
  const SpectralEmbedding& emb = res.embedding;
  res.embedding_rayleigh = emb.rayleigh;
  res.lambda_n = emb.lambda_n;
  res.decomposition = decompose(emb, seed, options);
  const Decomposition& d = res.decomposition;
  res.separation = d.separation;
  res.mass_fractions = d.mass_fractions;
  res.retries = d.retries;
  res.epsilon = std::isfinite(d.separation) && d.separation > 0.0
                    ? d.separation / 2.0
                    : 1.0 / (8.0 * std::pow(static_cast<double>(n), 2.5));
  res.key_defect = key_bound_defect(g, emb);

  res.certificates.resize(n);
  res.coordinates.resize(n);
  res.localized_rayleigh.resize(n);
  res.lipschitz_defects.resize(n);
  parallel_for(n, threads, [&](std::size_t p) {
    const VertexMap psi = localize(emb, d.parts[p], res.epsilon);
    res.localized_rayleigh[p] = rayleigh(g, mu, psi);
    res.lipschitz_defects[p] = lipschitz_defect(g, emb, psi, res.epsilon);
    double best = std::numeric_limits<double>::infinity();
    std::vector<Complex> chosen;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Complex> coord(g.num_vertices());
      for (VertexId u = 0; u < g.num_vertices(); ++u) coord[u] = psi[u][i];
      if (detail::zero_function(coord)) continue;
      const double r = rayleigh(g, mu, coord);
      if (r < best) {
        best = r;
        chosen = std::move(coord);
        res.coordinates[p] = i;
      }
    }
    res.certificates[p] = sweep_cut(g, mu, chosen);
  });
  return res;
}

}  // namespace magcheeger

#endif  // MAGCHEEGER_MULTIWAY_HPP

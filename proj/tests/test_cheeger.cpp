#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "magcheeger/cheeger.hpp"
#include "magcheeger/generate.hpp"
#include "oracles.hpp"

using namespace magcheeger;

namespace {

SignedGraph negative_triangle() {
  const auto m = GroupElement::cyclic(2, 1);
  return SignedGraph(3, {{0, 1, 1.0, m}, {0, 2, 1.0, m}, {1, 2, 1.0, m}}, SignatureGroup::cyclic(2));
}

SignedGraph trivial_cycle(std::size_t n) { return signed_cycle(n, 0, 1); }

// Connected graph whose signature is a random switching of the trivial one.
SignedGraph switched_trivial(Rng& rng, std::size_t n, int k) {
  const SignedGraph base = oracle::random_connected(rng, n, 0.4, 1, 2.0);
  std::vector<Edge> edges(base.edges());
  const auto grp = k == 0 ? SignatureGroup::circle() : SignatureGroup::cyclic(k);
  for (auto& e : edges) e.signature = grp.identity();
  const SignedGraph trivial(n, edges, grp);
  return switch_signature(trivial, oracle::random_switching(rng, trivial));
}

SignedGraph with_signature_group(const SignedGraph& g, int k) {
  std::vector<Edge> edges(g.edges());
  for (auto& e : edges) e.signature = GroupElement::cyclic(k, 0);
  return SignedGraph(g.names(), std::move(edges), SignatureGroup::cyclic(k),
                     std::vector<double>(g.measure().begin(), g.measure().end()));
}

// Integral over t in [0, 1] of iota + boundary of {u : |f(u)|^2 >= t}; the
// integrand is a step function with jumps at the values |f(u)|^2.
double coarea_left(const SignedGraph& g, const std::vector<Complex>& f) {
  std::vector<double> levels;
  for (const auto& z : f) {
    if (std::norm(z) > 0.0) levels.push_back(std::norm(z));
  }
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  double total = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double lower = i + 1 < levels.size() ? levels[i + 1] : 0.0;
    VertexSet set;
    for (VertexId u = 0; u < f.size(); ++u) {
      if (std::norm(f[u]) >= levels[i]) set.push_back(u);
    }
    total += (levels[i] - lower) * (oracle::frustration(g, set) + oracle::boundary(g, set));
  }
  return total;
}

double coarea_right(const SignedGraph& g, const std::vector<Complex>& f) {
  double total = 0.0;
  for (const auto& e : g.edges()) {
    total += 2.0 * e.weight * std::abs(f[e.u] - e.signature.value() * f[e.v]) * (std::abs(f[e.u]) + std::abs(f[e.v]));
  }
  return total;
}

}  // namespace

TEST(Phi, Examples) {
  const SignedGraph tri = negative_triangle();
  const auto unit = tri.unit_measure();
  EXPECT_NEAR(phi(tri, unit, all_vertices(3)).value, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(phi(tri, unit, {0}).value, 2.0, 1e-12);
  Rng rng(1);
  const SignedGraph bal = switched_trivial(rng, 8, 3);
  EXPECT_NEAR(phi(bal, bal.measure(), all_vertices(8)).value, 0.0, 1e-12);
  EXPECT_THROW(phi(tri, unit, {}), std::invalid_argument);
  EXPECT_THROW(phi(tri, unit, all_vertices(3), PhiMode::heuristic), std::invalid_argument);
}

TEST(Phi, MatchesOracle) {
  Rng rng(2);
  for (int rep = 0; rep < 40; ++rep) {
    const SignedGraph g = er_signed({2 + rng.below(6), 0.6, 1 + static_cast<int>(rng.below(4)), 2.0, rng.next()});
    VertexSet set;
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
      if (rng.bernoulli(0.6)) set.push_back(u);
    }
    if (set.empty()) set.push_back(0);
    for (const auto& mu : {g.degree_measure(), g.unit_measure()}) {
      EXPECT_NEAR(phi(g, mu, set).value, oracle::phi(g, mu, set), 1e-10);
    }
  }
}

TEST(Phi, HeuristicFlagOnCircle) {
  const SignedGraph g = er_signed({6, 0.7, 0, 1.0, 3});
  const auto v = phi(g, g.measure(), all_vertices(6));
  EXPECT_EQ(v.exactness, Exactness::upper_bound);
  EXPECT_EQ(v.boundary, 0.0);
}

TEST(HExact, Examples) {
  Rng rng(3);
  const SignedGraph bal = switched_trivial(rng, 7, 4);
  EXPECT_NEAR(h_exact(bal, bal.measure(), 1).value, 0.0, 1e-12);

  const SignedGraph c4 = trivial_cycle(4);
  const HExact h2 = h_exact(c4, c4.measure(), 2);
  EXPECT_NEAR(h2.value, 0.5, 1e-12);
  ASSERT_EQ(h2.parts.size(), 2u);
  EXPECT_TRUE(is_subpartition(4, h2.parts));

  const SignedGraph tri = negative_triangle();
  const HExact h1 = h_exact(tri, tri.unit_measure(), 1);
  EXPECT_NEAR(h1.value, 2.0 / 3.0, 1e-12);
  EXPECT_EQ(h1.parts[0], all_vertices(3));
}

TEST(HExact, Errors) {
  const SignedGraph u1 = er_signed({5, 0.7, 0, 1.0, 1});
  EXPECT_THROW(h_exact(u1, u1.measure(), 1), std::invalid_argument);
  const SignedGraph c = trivial_cycle(6);
  EXPECT_THROW(h_exact(c, c.measure(), 0), std::invalid_argument);
  EXPECT_THROW(h_exact(c, c.measure(), 7), std::invalid_argument);
  EXPECT_THROW(h_exact(c, c.measure(), 2, 1, 100), CapExceeded);
}

TEST(HExact, MatchesOracleAndIsMonotone) {
  Rng rng(4);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t n = 2 + rng.below(5);
    const SignedGraph g = er_signed({n, 0.6, 1 + static_cast<int>(rng.below(4)), 2.0, rng.next()});
    for (const auto& mu : {g.degree_measure(), g.unit_measure()}) {
      double prev = 0.0;
      for (std::size_t parts = 1; parts <= std::min<std::size_t>(n, 3); ++parts) {
        const HExact h = h_exact(g, mu, parts);
        EXPECT_NEAR(h.value, oracle::cheeger_constant(g, mu, static_cast<int>(parts)), 1e-10);
        EXPECT_GE(h.value, prev - 1e-12);
        prev = h.value;
        // The optimizer attains the value.
        ASSERT_EQ(h.parts.size(), parts);
        EXPECT_TRUE(is_subpartition(n, h.parts));
        double worst = 0.0;
        for (const auto& p : h.parts) worst = std::max(worst, oracle::phi(g, mu, p));
        EXPECT_NEAR(worst, h.value, 1e-10);
      }
    }
  }
}

TEST(HExact, ThreadCountDoesNotChangeResult) {
  const SignedGraph g = er_signed({8, 0.5, 3, 2.0, 17});
  const HExact a = h_exact(g, g.measure(), 2, 1);
  const HExact b = h_exact(g, g.measure(), 2, 4);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.parts, b.parts);
}

TEST(HExact, BalancedSignatureDominates) {
  Rng rng(5);
  for (int rep = 0; rep < 15; ++rep) {
    const int k = 2 + static_cast<int>(rng.below(3));
    const SignedGraph g = er_signed({3 + rng.below(4), 0.6, k, 2.0, rng.next()});
    const SignedGraph trivial = with_signature_group(g, k);
    const auto mu = g.unit_measure();
    for (std::size_t n = 1; n <= 2; ++n) {
      EXPECT_LE(h_exact(trivial, mu, n).value, h_exact(g, mu, n).value + 1e-12);
    }
  }
}

TEST(HExact, HigherOrderLowerBound) {
  Rng rng(6);
  for (int rep = 0; rep < 20; ++rep) {
    const SignedGraph g = oracle::random_connected(rng, 3 + rng.below(5), 0.4, 2 + static_cast<int>(rng.below(3)), 2.0);
    const Spectrum s = spectrum(g);
    for (std::size_t n = 1; n <= 3; ++n) {
      EXPECT_LE(s.values[n - 1] / 2.0, h_exact(g, g.measure(), n).value + 1e-9);
    }
  }
}

TEST(PartitenessRatio, TriangleExample) {
  const SignedGraph tri = negative_triangle();
  const auto unit = tri.unit_measure();
  const OrderedKPartition p{{{0}, {1, 2}}};
  EXPECT_NEAR(k_partiteness_ratio(tri, unit, p), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(oracle::beta(tri, unit, {0, 1, 1}, 2), 2.0 / 3.0, 1e-12);
  EXPECT_THROW(k_partiteness_ratio(tri, unit, OrderedKPartition{{{0}, {1}, {2}}}), std::invalid_argument);
  EXPECT_THROW(k_partiteness_ratio(tri, unit, OrderedKPartition{{{0}, {0, 2}}}), std::invalid_argument);
}

TEST(PartitenessRatio, IdealStructureIsZero) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PlantedInstance inst = mixed_planted({15, 3, 0.4, 0.0, seed});
    const SignedGraph g = mixed_to_signed(inst.graph, 3);
    EXPECT_NEAR(k_partiteness_ratio(g, g.measure(), OrderedKPartition{inst.parts()}), 0.0, 1e-12);
  }
}

TEST(PartitenessRatio, MatchesLiteralDoubleSum) {
  Rng rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const int k = 2 + static_cast<int>(rng.below(4));
    const SignedGraph g = er_signed({3 + rng.below(8), 0.5, k, 3.0, rng.next()});
    std::vector<int> label(g.num_vertices());
    OrderedKPartition p;
    p.parts.assign(static_cast<std::size_t>(k), {});
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
      label[u] = static_cast<int>(rng.below(k + 1)) - 1;
      if (label[u] >= 0) p.parts[static_cast<std::size_t>(label[u])].push_back(u);
    }
    if (p.base().empty()) continue;
    const auto mu = g.degree_measure();
    EXPECT_NEAR(k_partiteness_ratio(g, mu, p), oracle::beta(g, mu, label, k), 1e-12);
    // Realized by the partition switching.
    const double frustration = switching_cost(g, partition_switching(p, k));
    const SetFunctionals sf = set_functionals(g, mu, p.base());
    EXPECT_NEAR(k_partiteness_ratio(g, mu, p), (frustration + sf.boundary) / sf.volume, 1e-12);
  }
}

TEST(PartitenessRatio, MinimumEqualsPhi) {
  Rng rng(8);
  for (int rep = 0; rep < 40; ++rep) {
    const int k = 2 + static_cast<int>(rng.below(3));
    const SignedGraph g = er_signed({2 + rng.below(6), 0.6, k, 2.0, rng.next()});
    VertexSet set;
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
      if (rng.bernoulli(0.7)) set.push_back(u);
    }
    if (set.empty()) set.push_back(0);
    const auto mu = g.degree_measure();
    EXPECT_NEAR(oracle::min_beta(g, mu, set), phi(g, mu, set).value, 1e-10);
  }
}

TEST(Sectors, Basics) {
  EXPECT_EQ(sector_of(Complex(1, 0), 0.0, 3), 0);
  EXPECT_EQ(sector_of(std::polar(1.0, 2.2), 0.0, 3), 1);
  EXPECT_EQ(sector_of(std::polar(1.0, -0.1), 0.0, 3), 2);
  EXPECT_EQ(sector_of(Complex(1, 0), 0.5, 4), 3);
  EXPECT_EQ(sector_step(Complex(0.5, 0), 0.6, 0.0, 2), Complex(0.0));
  EXPECT_NEAR(std::abs(sector_step(Complex(-0.7, -0.01), 0.6, 0.0, 2) - Complex(-1.0)), 0.0, 1e-12);
  EXPECT_EQ(radial_step(Complex(0.0), 0.0), Complex(0.0));
  EXPECT_NEAR(std::abs(radial_step(Complex(0, 2), 1.0) - Complex(0, 1)), 0.0, 1e-15);
}

TEST(Sweep, BalancedWitnessGivesZero) {
  Rng rng(9);
  for (int k : {0, 2, 3, 5}) {
    const SignedGraph g = switched_trivial(rng, 10, k);
    const BalanceReport r = balance_check(g);
    std::vector<Complex> f(10);
    for (std::size_t i = 0; i < 10; ++i) f[r.components[0].vertices[i]] = std::conj(r.components[0].witness.values[i].value());
    const ClusterCertificate c = sweep_cut(g, g.measure(), f);
    EXPECT_NEAR(c.ratio, 0.0, 1e-9);
    EXPECT_EQ(c.support(), all_vertices(10));
    EXPECT_TRUE(certificate_valid(g, g.measure(), c));
  }
}

TEST(Sweep, SingleVertexSupport) {
  const SignedGraph g = er_signed({6, 0.8, 3, 3.0, 11});
  const auto mu = g.unit_measure();
  for (VertexId u = 0; u < 6; ++u) {
    std::vector<Complex> f(6, 0.0);
    f[u] = 1.0;
    const ClusterCertificate c = sweep_cut_cyclic(g, mu, f);
    ASSERT_EQ(c.candidate.parts.size(), 3u);
    EXPECT_EQ(c.candidate.parts[0], VertexSet({u}));
    EXPECT_NEAR(c.ratio, g.degree(u) / mu[u], 1e-12);
    EXPECT_EQ(c.theta, 0.0);
    EXPECT_EQ(c.t, 1.0);
  }
}

TEST(Sweep, EigenvectorCertificatesHoldBound) {
  Rng rng(10);
  for (int rep = 0; rep < 40; ++rep) {
    const int k = static_cast<int>(rng.below(5));
    const SignedGraph g = er_signed({2 + rng.below(20), 0.3, k, 2.0, rng.next()});
    for (const auto& mu : {g.degree_measure(), g.unit_measure()}) {
      const Spectrum s = spectrum(g, mu);
      const ClusterCertificate c = sweep_cut(g, mu, s.vectors[0]);
      EXPECT_TRUE(certificate_valid(g, mu, c)) << "defect " << certificate_defect(g, mu, c);
      EXPECT_LE(c.ratio, sweep_bound(g, mu, s.values[0]) + 1e-9);
      EXPECT_EQ(c.exactness, Exactness::upper_bound);
      EXPECT_EQ(c.is_partition, k != 0);
    }
  }
}

TEST(Sweep, RandomFunctionsStayValid) {
  Rng rng(11);
  for (int rep = 0; rep < 40; ++rep) {
    const int k = 1 + static_cast<int>(rng.below(4));
    const SignedGraph g = er_signed({2 + rng.below(10), 0.5, k, 2.0, rng.next()});
    std::vector<Complex> f(g.num_vertices());
    for (auto& z : f) z = rng.bernoulli(0.2) ? Complex(0.0) : Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    if (detail::zero_function(f)) f[0] = 1.0;
    const ClusterCertificate c = sweep_cut_cyclic(g, g.measure(), f);
    EXPECT_TRUE(certificate_valid(g, g.measure(), c));
    for (VertexId u : c.support()) EXPECT_NE(f[u], Complex(0.0));
  }
}

TEST(Sweep, CircleFourCycleRatioAboveHalfLambda) {
  const SignedGraph c4(4,
                       {{0, 1, 1, GroupElement::circle(std::numbers::pi)},
                        {1, 2, 1, GroupElement::circle(0)},
                        {2, 3, 1, GroupElement::circle(0)},
                        {0, 3, 1, GroupElement::circle(0)}},
                       SignatureGroup::circle());
  const Spectrum s = spectrum(c4);
  const ClusterCertificate c = sweep_cut_u1(c4, c4.measure(), s.vectors[0]);
  EXPECT_GE(c.ratio, s.values[0] / 2.0 - 1e-9);
  EXPECT_LE(c.ratio, 1.5 * std::sqrt(2.0 * s.values[0]) + 1e-9);
  EXPECT_EQ(c.theta, 0.0);
}

TEST(Sweep, Errors) {
  const SignedGraph g = negative_triangle();
  EXPECT_THROW(sweep_cut_cyclic(g, g.measure(), std::vector<Complex>(3, 0.0)), std::invalid_argument);
  EXPECT_THROW(sweep_cut_cyclic(g, g.measure(), std::vector<Complex>(2, 1.0)), std::invalid_argument);
  EXPECT_THROW(sweep_cut_u1(g, g.measure(), std::vector<Complex>(3, 1.0)), std::invalid_argument);
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  const SignedGraph g = er_signed({30, 0.2, 4, 2.0, 5});
  const Spectrum s = spectrum(g);
  const ClusterCertificate a = sweep_cut_cyclic(g, g.measure(), s.vectors[0], 1);
  const ClusterCertificate b = sweep_cut_cyclic(g, g.measure(), s.vectors[0], 3);
  EXPECT_EQ(a.candidate.parts, b.candidate.parts);
  EXPECT_EQ(a.ratio, b.ratio);
  EXPECT_EQ(a.theta, b.theta);
}

TEST(Bounds, Fields) {
  const SignedGraph g = signed_cycle(5, 1, 3);
  const auto b = cheeger_bounds(g, g.measure(), 0.3);
  EXPECT_DOUBLE_EQ(b.lower, 0.15);
  EXPECT_NEAR(b.sharper_lower, 0.3 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(b.upper, 2.0 * std::sqrt(2.0 * 0.3), 1e-15);
}

TEST(Coarea, InequalityHolds) {
  Rng rng(12);
  for (int rep = 0; rep < 40; ++rep) {
    const SignedGraph g = er_signed({2 + rng.below(6), 0.6, 1 + static_cast<int>(rng.below(4)), 2.0, rng.next()});
    std::vector<Complex> f(g.num_vertices());
    double top = 0.0;
    for (auto& z : f) {
      z = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
      top = std::max(top, std::abs(z));
    }
    for (auto& z : f) z /= top;
    EXPECT_LE(coarea_left(g, f), coarea_right(g, f) + 1e-8);
  }
}

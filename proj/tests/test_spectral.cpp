#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "magcheeger/generate.hpp"
#include "magcheeger/spectral.hpp"
#include "oracles.hpp"

using namespace magcheeger;

namespace {

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(Assemble, SingleEdgeExamples) {
  const SignedGraph g(2, {{0, 1, 1.0, GroupElement::cyclic(1, 0)}}, SignatureGroup::cyclic(1));
  const auto h = assemble(g, g.unit_measure());
  EXPECT_EQ(h.matrix(0, 0), Complex(1.0));
  EXPECT_EQ(h.matrix(0, 1), Complex(-1.0));
  EXPECT_EQ(h.matrix(1, 0), Complex(-1.0));

  const SignedGraph m(2, {{0, 1, 1.0, GroupElement::circle(std::numbers::pi / 2)}}, SignatureGroup::circle());
  const auto hm = assemble(m, m.unit_measure());
  EXPECT_NEAR(std::abs(hm.matrix(0, 1) - Complex(0, -1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(hm.matrix(1, 0) - Complex(0, 1)), 0.0, 1e-15);
}

TEST(Assemble, HermitianOnRandomGraphs) {
  Rng rng(2);
  for (int k : {0, 3, 4}) {
    const SignedGraph g = oracle::random_connected(rng, 9, 0.5, k, 3.0);
    EXPECT_LT(assemble(g).matrix.hermitian_defect(), 1e-12);
  }
}

TEST(Spectrum, SingleEdge) {
  const SignedGraph g(2, {{0, 1, 1.0, GroupElement::cyclic(1, 0)}}, SignatureGroup::cyclic(1));
  const Spectrum s = spectrum(g, g.unit_measure());
  EXPECT_NEAR(s.values[0], 0.0, 1e-14);
  EXPECT_NEAR(s.values[1], 2.0, 1e-14);
}

TEST(Spectrum, SignedFourCycleClosedForm) {
  const SignedGraph g = signed_cycle(4, 1, 2);
  const Spectrum s = spectrum(g);
  const auto expected = oracle::cycle_spectrum(4, std::numbers::pi);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(s.values[i], expected[i], 1e-12);
  EXPECT_NEAR(s.values[0], 1.0 - 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Spectrum, CyclesWithHolonomyMatchCirculantFormula) {
  for (int k : {3, 5, 6}) {
    for (std::size_t n : {5u, 7u}) {
      for (std::size_t flips = 0; flips <= 3; ++flips) {
        const SignedGraph g = signed_cycle(n, flips, k);
        const Spectrum s = spectrum(g);
        const auto expected = oracle::cycle_spectrum(n, 2 * std::numbers::pi * flips / k);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(s.values[i], expected[i], 1e-12);
      }
    }
  }
}

TEST(Spectrum, InvariantsOnRandomGraphs) {
  Rng rng(21);
  for (int rep = 0; rep < 30; ++rep) {
    const int k = static_cast<int>(rng.below(5));
    const std::size_t n = 2 + rng.below(15);
    const SignedGraph g = er_signed({n, 0.4, k, 2.0, rng.next()});
    for (const auto& mu : {g.degree_measure(), g.unit_measure()}) {
      const Spectrum s = spectrum(g, mu);
      const double dmu = max_mu_degree(g, mu);
      EXPECT_GE(s.values.front(), -1e-9);
      EXPECT_LE(s.values.back(), 2 * dmu + 1e-9);
      const double scale = std::max(1.0, s.values.back());
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_LT(eigen_residual(g, mu, s.vectors[i], s.values[i]), 1e-8 * scale);
        EXPECT_NEAR(rayleigh(g, mu, s.vectors[i]), s.values[i], 1e-9);
        for (std::size_t j = 0; j < n; ++j) {
          const Complex ip = inner(s.vectors[i], s.vectors[j], mu);
          EXPECT_NEAR(std::abs(ip - Complex(i == j ? 1.0 : 0.0)), 0.0, 1e-9);
        }
      }
      // Min-max spot check.
      for (int t = 0; t < 100; ++t) {
        VertexFunction f(n);
        for (auto& z : f) z = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
        EXPECT_GE(rayleigh(g, mu, f), s.values[0] - 1e-12);
      }
    }
  }
}

TEST(Spectrum, MatchesJacobiCrossCheck) {
  Rng rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const SignedGraph g = oracle::random_connected(rng, 3 + rng.below(20), 0.3, static_cast<int>(rng.below(4)), 2.0);
    const auto h = assemble(g);
    const auto a = eigen(h).values;
    const auto b = jacobi_eigen(h.matrix).values;
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-10);
  }
}

TEST(Spectrum, IsolatedVerticesContributeZero) {
  const SignedGraph g(3, {{0, 1, 1.0, GroupElement::cyclic(2, 1)}}, SignatureGroup::cyclic(2));
  const Spectrum s = spectrum(g, g.unit_measure());
  EXPECT_NEAR(s.values[0], 0.0, 1e-14);
  EXPECT_NEAR(s.values[1], 0.0, 1e-14);
  EXPECT_NEAR(s.values[2], 2.0, 1e-14);
}

TEST(Spectrum, BalancedConnectedHasZero) {
  Rng rng(8);
  for (int k : {0, 2, 3, 6}) {
    const SignedGraph trivial = oracle::random_connected(rng, 8, 0.5, 1);
    std::vector<Edge> edges(trivial.edges());
    const auto grp = k == 0 ? SignatureGroup::circle() : SignatureGroup::cyclic(k);
    for (auto& e : edges) e.signature = grp.identity();
    const SignedGraph g(8, edges, grp);
    const SignedGraph h = switch_signature(g, oracle::random_switching(rng, g));
    EXPECT_LT(spectrum(h).values[0], 1e-10);
  }
}

TEST(Rayleigh, Examples) {
  const SignedGraph g(2, {{0, 1, 1.0, GroupElement::cyclic(1, 0)}}, SignatureGroup::cyclic(1));
  const auto mu = g.unit_measure();
  EXPECT_NEAR(rayleigh(g, mu, VertexFunction{1.0, -1.0}), 2.0, 1e-15);
  EXPECT_NEAR(rayleigh(g, mu, VertexFunction{1.0, 1.0}), 0.0, 1e-15);
  EXPECT_THROW(rayleigh(g, mu, VertexFunction{0.0, 0.0}), std::invalid_argument);
}

TEST(Realification, SingleEdgeDoubles) {
  const SignedGraph g(2, {{0, 1, 1.0, GroupElement::cyclic(1, 0)}}, SignatureGroup::cyclic(1));
  const auto m = so2_realification(g, g.unit_measure());
  EXPECT_EQ(m.n, 4u);
  const auto v = symmetric_eigenvalues(m);
  EXPECT_NEAR(v[0], 0, 1e-14);
  EXPECT_NEAR(v[1], 0, 1e-14);
  EXPECT_NEAR(v[2], 2, 1e-14);
  EXPECT_NEAR(v[3], 2, 1e-14);
}

TEST(Realification, DoubledSpectrum) {
  Rng rng(6);
  for (int rep = 0; rep < 10; ++rep) {
    const SignedGraph g = oracle::random_connected(rng, 3 + rng.below(10), 0.4, rep % 2 == 0 ? 0 : 4, 2.0);
    const auto mu = to_vec(g.measure());
    const auto m = so2_realification(g, mu);
    for (std::size_t i = 0; i < m.n; ++i) {
      for (std::size_t j = 0; j < m.n; ++j) EXPECT_EQ(m(i, j), m(j, i));
    }
    const auto real = symmetric_eigenvalues(m);
    const auto cplx = spectrum(g, mu).values;
    for (std::size_t i = 0; i < cplx.size(); ++i) {
      EXPECT_NEAR(real[2 * i], cplx[i], 1e-9);
      EXPECT_NEAR(real[2 * i + 1], cplx[i], 1e-9);
    }
  }
}

TEST(Spectrum, SwitchingInvariance) {
  Rng rng(12);
  for (int rep = 0; rep < 10; ++rep) {
    const SignedGraph g = oracle::random_connected(rng, 3 + rng.below(10), 0.4, static_cast<int>(rng.below(5)), 2.0);
    const SignedGraph h = switch_signature(g, oracle::random_switching(rng, g));
    const auto a = spectrum(g).values;
    const auto b = spectrum(h).values;
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
  }
}

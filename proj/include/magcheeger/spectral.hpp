#ifndef MAGCHEEGER_SPECTRAL_HPP
#define MAGCHEEGER_SPECTRAL_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "magcheeger/graph.hpp"
#include "magcheeger/linalg.hpp"

namespace magcheeger {

/// Complex-valued function on the vertices.
using VertexFunction = std::vector<Complex>;

/// Vertex map into C^n, stored per vertex.
using VertexMap = std::vector<std::vector<Complex>>;

/// H = D_mu^{-1/2} (D - A^s) D_mu^{-1/2}, similar to the magnetic Laplacian
/// D_mu^{-1} (D - A^s) through D_mu^{1/2}.
struct HermitianOperator {
  ComplexMatrix matrix;
  std::vector<double> measure;
};

inline HermitianOperator assemble(const SignedGraph& g, std::span<const double> mu) {
  const std::size_t n = g.num_vertices();
  if (mu.size() != n) throw std::invalid_argument("measure size mismatch");
  HermitianOperator h{ComplexMatrix(n, n), std::vector<double>(mu.begin(), mu.end())};
  for (VertexId u = 0; u < n; ++u) h.matrix(u, u) = g.degree(u) / mu[u];
  for (const Edge& e : g.edges()) {
    const double scale = e.weight / std::sqrt(mu[e.u] * mu[e.v]);
    const Complex s = e.signature.value();
    h.matrix(e.u, e.v) = -scale * s;
    h.matrix(e.v, e.u) = -scale * std::conj(s);
  }
  return h;
}

inline HermitianOperator assemble(const SignedGraph& g) { return assemble(g, g.measure()); }

/// <f, g>_mu = sum_u f(u) conj(g(u)) mu(u).
inline Complex inner(std::span<const Complex> f, std::span<const Complex> g,
                     std::span<const double> mu) {
  Complex sum = 0.0;
  for (std::size_t u = 0; u < f.size(); ++u) sum += f[u] * std::conj(g[u]) * mu[u];
  return sum;
}

/// Eigenvalues ascending with eigenfunctions of the magnetic Laplacian,
/// orthonormal under <.,.>_mu.
struct Spectrum {
  std::vector<double> values;
  std::vector<VertexFunction> vectors;
  std::vector<double> measure;
};

inline Spectrum eigen(const HermitianOperator& h) {
  const std::size_t n = h.matrix.rows();
  HermitianEigen raw = hermitian_eigen(h.matrix);
  Spectrum out{std::move(raw.values), {}, h.measure};
  out.vectors.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    VertexFunction f(n);
    for (std::size_t u = 0; u < n; ++u) f[u] = raw.vectors(u, j) / std::sqrt(h.measure[u]);
    out.vectors[j] = std::move(f);
  }
  // Modified Gram-Schmidt under <.,.>_mu removes rounding drift.
  for (std::size_t j = 0; j < n; ++j) {
    auto& f = out.vectors[j];
    for (std::size_t i = 0; i < j; ++i) {
      const Complex c = inner(f, out.vectors[i], h.measure);
      for (std::size_t u = 0; u < n; ++u) f[u] -= c * out.vectors[i][u];
    }
    const double norm = std::sqrt(inner(f, f, h.measure).real());
    for (auto& x : f) x /= norm;
  }
  return out;
}

inline Spectrum spectrum(const SignedGraph& g, std::span<const double> mu) {
  return eigen(assemble(g, mu));
}

inline Spectrum spectrum(const SignedGraph& g) { return spectrum(g, g.measure()); }

/// sum_{{u,v} in E} w_uv |f(u) - s_uv f(v)|^2.
inline double dirichlet_energy(const SignedGraph& g, std::span<const Complex> f) {
  double sum = 0.0;
  for (const Edge& e : g.edges()) sum += e.weight * std::norm(f[e.u] - e.signature.value() * f[e.v]);
  return sum;
}

/// Rayleigh quotient of a complex vertex function.
inline double rayleigh(const SignedGraph& g, std::span<const double> mu, std::span<const Complex> f) {
  double denominator = 0.0;
  for (std::size_t u = 0; u < f.size(); ++u) denominator += std::norm(f[u]) * mu[u];
  if (denominator <= 0.0) throw std::invalid_argument("Rayleigh quotient of the zero function");
  return dirichlet_energy(g, f) / denominator;
}

/// Rayleigh quotient of a map V -> C^n (vector-valued functions).
inline double rayleigh(const SignedGraph& g, std::span<const double> mu, const VertexMap& map) {
  double numerator = 0.0, denominator = 0.0;
  for (const Edge& e : g.edges()) {
    const Complex s = e.signature.value();
    const auto& a = map[e.u];
    const auto& b = map[e.v];
    for (std::size_t i = 0; i < a.size(); ++i) numerator += e.weight * std::norm(a[i] - s * b[i]);
  }
  for (std::size_t u = 0; u < map.size(); ++u) {
    for (const Complex& x : map[u]) denominator += std::norm(x) * mu[u];
  }
  if (denominator <= 0.0) throw std::invalid_argument("Rayleigh quotient of the zero map");
  return numerator / denominator;
}

/// ||Delta f - lambda f||_mu for an eigenpair candidate.
inline double eigen_residual(const SignedGraph& g, std::span<const double> mu,
                             std::span<const Complex> f, double lambda) {
  double sum = 0.0;
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    Complex lf = 0.0;
    for (const Incidence& inc : g.neighbors(u)) {
      lf += inc.weight * (f[u] - inc.signature.value() * f[inc.to]);
    }
    lf /= mu[u];
    sum += std::norm(lf - lambda * f[u]) * mu[u];
  }
  return std::sqrt(sum);
}

/// Dense real symmetric matrix.
struct SymmetricMatrix {
  std::size_t n = 0;
  std::vector<double> data;  // row-major

  double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

/// Real 2N x 2N form obtained by writing s_uv = a + ib as the rotation block
/// [[a, -b], [b, a]] and f = f1 + i f2 as (f1, f2). Each eigenvalue of the
/// complex operator appears twice.
inline SymmetricMatrix so2_realification(const SignedGraph& g, std::span<const double> mu) {
  const std::size_t n = g.num_vertices();
  SymmetricMatrix m{2 * n, std::vector<double>(4 * n * n, 0.0)};
  for (VertexId u = 0; u < n; ++u) {
    m(2 * u, 2 * u) = m(2 * u + 1, 2 * u + 1) = g.degree(u) / mu[u];
  }
  auto place = [&](VertexId u, VertexId v, Complex s, double scale) {
    m(2 * u, 2 * v) = -scale * s.real();
    m(2 * u, 2 * v + 1) = scale * s.imag();
    m(2 * u + 1, 2 * v) = -scale * s.imag();
    m(2 * u + 1, 2 * v + 1) = -scale * s.real();
  };
  for (const Edge& e : g.edges()) {
    const double scale = e.weight / std::sqrt(mu[e.u] * mu[e.v]);
    place(e.u, e.v, e.signature.value(), scale);
    place(e.v, e.u, std::conj(e.signature.value()), scale);
  }
  return m;
}

inline std::vector<double> symmetric_eigenvalues(const SymmetricMatrix& m) {
  ComplexMatrix c(m.n, m.n);
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t j = 0; j < m.n; ++j) c(i, j) = m(i, j);
  }
  return hermitian_eigen(std::move(c)).values;
}

}  // namespace magcheeger

#endif  // MAGCHEEGER_SPECTRAL_HPP

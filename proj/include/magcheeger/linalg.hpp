#ifndef MAGCHEEGER_LINALG_HPP
#define MAGCHEEGER_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "magcheeger/error.hpp"
#include "magcheeger/group.hpp"

namespace magcheeger {

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<Complex> column(std::size_t j) const {
    std::vector<Complex> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  /// max |A - A^*| entrywise.
  double hermitian_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
      }
    }
    return worst;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Eigenvalues ascending; column j of `vectors` belongs to `values[j]`.
struct HermitianEigen {
  std::vector<double> values;
  ComplexMatrix vectors;
};

namespace detail {

// Sorts eigenpairs ascending and fixes each eigenvector's phase so that its
// largest-modulus entry (first on ties) is real positive.
inline HermitianEigen finish_eigen(std::vector<double> values, const ComplexMatrix& vectors) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.values[j] = values[src];
    std::size_t pivot = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      double a = std::abs(vectors(i, src));
      if (a > best * (1.0 + 1e-12) + 1e-300) {
        best = a;
        pivot = i;
      }
    }
    Complex phase = best > 0.0 ? std::conj(vectors(pivot, src)) / best : Complex(1.0);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = vectors(i, src) * phase;
    out.vectors(pivot, j) = std::abs(out.vectors(pivot, j));
  }
  return out;
}

// Implicit-shift QL on a real symmetric tridiagonal matrix (diagonal d,
// subdiagonal e with e[i] coupling i and i+1). z accumulates rotations.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e,
                           std::vector<std::vector<double>>& z, int max_iterations) {
  const std::size_t n = d.size();
  if (n == 0) return;
  e.resize(n, 0.0);
  e[n - 1] = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    int iterations = 0;
    while (true) {
      std::size_t m = l;
      for (; m + 1 < n; ++m) {
        double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m == l) break;
      if (++iterations > max_iterations) {
        throw SolverError("QL iteration did not converge for eigenvalue " + std::to_string(l));
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        double f = s * e[i];
        double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        for (auto& row : z) {
          f = row[i + 1];
          row[i + 1] = s * row[i] + c * f;
          row[i] = c * row[i] - s * f;
        }
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
}

}  // namespace detail

/// Iteration cap per eigenvalue in the QL phase.
inline constexpr int kQlIterationCap = 64;

/// Full eigendecomposition of a Hermitian matrix: Householder reduction to a
/// Hermitian tridiagonal form, a diagonal phase change that makes it real,
/// then implicit-shift QL with accumulated transformations.
inline HermitianEigen hermitian_eigen(ComplexMatrix a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("eigen of a non-square matrix");
  if (n == 0) return {};
  ComplexMatrix q = ComplexMatrix::identity(n);

  std::vector<Complex> v(n), w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double norm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) norm2 += std::norm(a(i, k));
    double tail2 = norm2 - std::norm(a(k + 1, k));
    if (tail2 <= 1e-300) continue;
    const double norm = std::sqrt(norm2);
    const Complex x0 = a(k + 1, k);
    const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0);
    const Complex alpha = -phase * norm;

    std::fill(v.begin(), v.end(), Complex(0.0));
    for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
    v[k + 1] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
    const double beta = 2.0 / vnorm2;

    // w = beta A v, K = beta/2 (v^H w), q = w - K v; A <- A - v q^H - q v^H.
    Complex vhw = 0.0;
    for (std::size_t i = k; i < n; ++i) {
      Complex sum = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) sum += a(i, j) * v[j];
      w[i] = beta * sum;
    }
    for (std::size_t i = 0; i < k; ++i) w[i] = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vhw += std::conj(v[i]) * w[i];
    const Complex kk = 0.5 * beta * vhw;
    for (std::size_t i = k; i < n; ++i) w[i] -= kk * v[i];
    for (std::size_t i = k; i < n; ++i) {
      for (std::size_t j = k; j < n; ++j) {
        a(i, j) -= v[i] * std::conj(w[j]) + w[i] * std::conj(v[j]);
      }
    }
    // Q <- Q H
    for (std::size_t i = 0; i < n; ++i) {
      Complex qv = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) qv += q(i, j) * v[j];
      qv *= beta;
      for (std::size_t j = k + 1; j < n; ++j) q(i, j) -= qv * std::conj(v[j]);
    }
    a(k + 1, k) = alpha;
    a(k, k + 1) = std::conj(alpha);
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = a(k, i) = 0.0;
  }

  // T = D T_r D^H with real nonnegative off-diagonals.
  std::vector<double> d(n), e(n, 0.0);
  std::vector<Complex> phase(n, Complex(1.0));
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i).real();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Complex sub = a(i + 1, i);
    const double mag = std::abs(sub);
    e[i] = mag;
    phase[i + 1] = mag > 0.0 ? phase[i] * (sub / mag) : phase[i];
  }

  std::vector<std::vector<double>> z(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) z[i][i] = 1.0;
  detail::tridiagonal_ql(d, e, z, kQlIterationCap);

  // Eigenvectors of A are Q D Z.
  ComplexMatrix vectors(n, n);
  std::vector<Complex> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t m = 0; m < n; ++m) row[m] = q(i, m) * phase[m];
    for (std::size_t j = 0; j < n; ++j) {
      Complex sum = 0.0;
      for (std::size_t m = 0; m < n; ++m) sum += row[m] * z[m][j];
      vectors(i, j) = sum;
    }
  }
  return detail::finish_eigen(std::move(d), vectors);
}

/// Cyclic complex Jacobi. O(N^3) per sweep; intended as an independent
/// cross-check for small matrices.
inline HermitianEigen jacobi_eigen(ComplexMatrix a, int max_sweeps = 100) {
  const std::size_t n = a.rows();
  ComplexMatrix v = ComplexMatrix::identity(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) scale += std::norm(a(i, j));
  }
  scale = std::sqrt(scale);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    }
    if (std::sqrt(off) <= 1e-15 * std::max(scale, 1e-300)) {
      std::vector<double> values(n);
      for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i).real();
      return detail::finish_eigen(std::move(values), v);
    }
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        const Complex e_phi = a(p, q) / mag;
        const double theta = 0.5 * std::atan2(2.0 * mag, a(q, q).real() - a(p, p).real());
        const double c = std::cos(theta), s = std::sin(theta);
        // J = diag(1, conj(e_phi)) R with R = [[c, s], [-s, c]].
        const Complex jpp = c, jpq = s;
        const Complex jqp = -s * std::conj(e_phi), jqq = c * std::conj(e_phi);
        for (std::size_t r = 0; r < n; ++r) {
          const Complex arp = a(r, p), arq = a(r, q);
          a(r, p) = arp * jpp + arq * jqp;
          a(r, q) = arp * jpq + arq * jqq;
          const Complex vrp = v(r, p), vrq = v(r, q);
          v(r, p) = vrp * jpp + vrq * jqp;
          v(r, q) = vrp * jpq + vrq * jqq;
        }
        for (std::size_t c2 = 0; c2 < n; ++c2) {
          const Complex apc = a(p, c2), aqc = a(q, c2);
          a(p, c2) = std::conj(jpp) * apc + std::conj(jqp) * aqc;
          a(q, c2) = std::conj(jpq) * apc + std::conj(jqq) * aqc;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  throw SolverError("Jacobi iteration did not converge");
}

}  // namespace magcheeger

#endif  // MAGCHEEGER_LINALG_HPP

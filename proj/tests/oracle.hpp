#pragma once

// Brute-force reference computations for the test suite. Everything here is
// deliberately independent of the library's numerical paths: matrices are
// built entry by entry with std::exp, eigenvalues come from a hand-rolled
// complex Jacobi sweep, and linear systems go through plain Gaussian
// elimination. Costs are cubic and fine for the tiny sizes tests use.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ptrig/grid.hpp"

namespace oracle {

using complex = std::complex<double>;
using cmatrix = std::vector<std::vector<complex>>;

// Dense operator matrix with rows j = -N..N, columns k = -n..n, entry
// exp(-i x_j k), each entry evaluated independently.
inline cmatrix dense_nudft(const ptrig::PerturbedGrid& grid, int degree) {
  const int m = grid.size();
  cmatrix a(static_cast<std::size_t>(m),
            std::vector<complex>(static_cast<std::size_t>(2 * degree + 1)));
  for (int j = -grid.half_count; j <= grid.half_count; ++j)
    for (int k = -degree; k <= degree; ++k)
      a[static_cast<std::size_t>(j + grid.half_count)]
       [static_cast<std::size_t>(k + degree)] =
           std::exp(complex{0.0, -grid.node(j) * k});
  return a;
}

inline std::vector<complex> matvec(const cmatrix& a,
                                   const std::vector<complex>& x) {
  std::vector<complex> y(a.size(), complex{0.0, 0.0});
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = 0; c < x.size(); ++c) y[r] += a[r][c] * x[c];
  return y;
}

inline cmatrix conjugate_transpose(const cmatrix& a) {
  cmatrix t(a[0].size(), std::vector<complex>(a.size()));
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = 0; c < a[0].size(); ++c)
      t[c][r] = std::conj(a[r][c]);
  return t;
}

inline cmatrix matmul(const cmatrix& a, const cmatrix& b) {
  cmatrix out(a.size(), std::vector<complex>(b[0].size(), complex{0.0, 0.0}));
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t inner = 0; inner < b.size(); ++inner)
      for (std::size_t c = 0; c < b[0].size(); ++c)
        out[r][c] += a[r][inner] * b[inner][c];
  return out;
}

// Eigenvalues of a Hermitian matrix by cyclic Jacobi sweeps with complex
// rotations; returns values in ascending order.
inline std::vector<double> hermitian_eigenvalues(cmatrix a) {
  const std::size_t n = a.size();
  double off = 0.0, scale = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) scale += std::norm(a[r][c]);
  scale = std::sqrt(scale);
  for (int sweep = 0; sweep < 100; ++sweep) {
    off = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = r + 1; c < n; ++c) off += std::norm(a[r][c]);
    if (std::sqrt(off) <= 1e-14 * std::max(scale, 1e-300)) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const complex apq = a[p][q];
        const double mag = std::abs(apq);
        if (mag <= 1e-300) continue;
        const complex phase = apq / mag;
        const double tau = (a[q][q].real() - a[p][p].real()) / (2.0 * mag);
        const double sign = tau >= 0.0 ? 1.0 : -1.0;
        const double t = sign / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const complex cs = s * phase;  // rotation acts as [c, cs; -conj(cs), c]
        for (std::size_t i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const complex aip = a[i][p];
          const complex aiq = a[i][q];
          a[i][p] = c * aip - std::conj(cs) * aiq;
          a[i][q] = cs * aip + c * aiq;
          a[p][i] = std::conj(a[i][p]);
          a[q][i] = std::conj(a[i][q]);
        }
        const double app = a[p][p].real();
        const double aqq = a[q][q].real();
        a[p][p] = complex{c * c * app - 2.0 * c * s * mag + s * s * aqq, 0.0};
        a[q][q] = complex{s * s * app + 2.0 * c * s * mag + c * c * aqq, 0.0};
        a[p][q] = complex{0.0, 0.0};
        a[q][p] = complex{0.0, 0.0};
      }
    }
  }
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a[i][i].real();
  std::sort(values.begin(), values.end());
  return values;
}

// Singular values (ascending) via the eigenvalues of A* A.
inline std::vector<double> singular_values(const cmatrix& a) {
  auto gram = matmul(conjugate_transpose(a), a);
  auto eigen = hermitian_eigenvalues(std::move(gram));
  for (double& v : eigen) v = std::sqrt(std::max(v, 0.0));
  return eigen;
}

// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<complex> solve(cmatrix a, std::vector<complex> b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("oracle::solve: size mismatch");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) <= 1e-300)
      throw std::runtime_error("oracle::solve: singular matrix");
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const complex factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<complex> x(n);
  for (std::size_t r = n; r-- > 0;) {
    complex acc = b[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

// Trigonometric-moment row scan: residual of sum_j w_j e^{i k x_j} against
// 2 pi [k = 0], maximized over |k| <= degree.
inline double quadrature_residual(const ptrig::PerturbedGrid& grid,
                                  const std::vector<double>& weights,
                                  int degree) {
  double worst = 0.0;
  for (int k = -degree; k <= degree; ++k) {
    complex acc{0.0, 0.0};
    for (int j = -grid.half_count; j <= grid.half_count; ++j)
      acc += weights[static_cast<std::size_t>(j + grid.half_count)] *
             std::exp(complex{0.0, grid.node(j) * k});
    if (k == 0) acc -= 2.0 * std::numbers::pi;
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

}  // namespace oracle

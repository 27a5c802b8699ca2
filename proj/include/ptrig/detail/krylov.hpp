#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ptrig/detail/lapack.hpp"
#include "ptrig/random.hpp"

// Matrix-free iterative kernels shared by the solver and singular-value
// paths. Operators enter as callables mapping std::vector<std::complex> to
// std::vector<std::complex>; nothing here knows about grids.

namespace ptrig::detail {

using cvector = std::vector<std::complex<double>>;

inline double norm2(const cvector& v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return std::sqrt(acc);
}

inline std::complex<double> dot(const cvector& a, const cvector& b) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

// Seeded start vector with independent components uniform in [-1, 1)^2,
// normalized. The 0x77 offset keeps start vectors off the streams that
// generate grid perturbations for the same seed.
inline cvector random_start_vector(int dim, std::uint64_t seed) {
  cvector v(static_cast<std::size_t>(dim));
  for (int t = 0; t < dim; ++t)
    v[static_cast<std::size_t>(t)] =
        stream_complex_sym(seed ^ 0x77ull, static_cast<std::uint64_t>(t));
  const double scale = norm2(v);
  if (scale == 0.0) throw std::runtime_error("random_start_vector: zero draw");
  for (auto& z : v) z /= scale;
  return v;
}

enum class CglsStop {
  residual,  // ||A x - b|| / ||b||          (consistent square systems)
  gradient,  // ||A*(A x - b)|| / ||A* b||   (least-squares problems)
};

struct CglsResult {
  int iterations = 0;
  double relative_residual = 0.0;
  double relative_gradient = 0.0;
  bool converged = false;
};

// Conjugate gradient on the normal equations (CGLS variant): minimizes
// ||A x - b|| without ever forming A*A, so the conditioning seen by the
// recurrence is that of A. x must arrive sized to the domain dimension; it
// is zero-initialized here.
template <class ApplyA, class ApplyAdj>
CglsResult cgls(ApplyA&& apply_a, ApplyAdj&& apply_adj, const cvector& b,
                cvector& x, double tol, int max_iter, CglsStop stop) {
  std::fill(x.begin(), x.end(), std::complex<double>{0.0, 0.0});
  const double norm_b = norm2(b);
  CglsResult out;
  if (norm_b == 0.0) {
    out.converged = true;
    return out;
  }
  cvector r = b;
  cvector s = apply_adj(r);
  cvector p = s;
  double gamma = 0.0;
  for (const auto& z : s) gamma += std::norm(z);
  const double norm_s0 = std::sqrt(gamma);
  if (norm_s0 == 0.0) {
    out.converged = true;  // b orthogonal to the range: x = 0 is optimal
    return out;
  }
  for (int it = 1; it <= max_iter; ++it) {
    const cvector q = apply_a(p);
    double qq = 0.0;
    for (const auto& z : q) qq += std::norm(z);
    if (qq == 0.0) break;
    const double step = gamma / qq;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += step * p[i];
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= step * q[i];
    s = apply_adj(r);
    double gamma_next = 0.0;
    for (const auto& z : s) gamma_next += std::norm(z);
    out.iterations = it;
    out.relative_residual = norm2(r) / norm_b;
    out.relative_gradient = std::sqrt(gamma_next) / norm_s0;
    const bool done = stop == CglsStop::residual
                          ? out.relative_residual <= tol
                          : out.relative_gradient <= tol;
    if (done) {
      out.converged = true;
      return out;
    }
    const double beta = gamma_next / gamma;
    gamma = gamma_next;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = s[i] + beta * p[i];
  }
  return out;
}

struct EigenIterResult {
  double eigenvalue = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Lanczos iteration with full reorthogonalization for the largest eigenvalue
// of a Hermitian PSD operator. Convergence is declared when successive
// square-root (singular-value scale) estimates agree to `tol` relative; an
// invariant-subspace breakdown also terminates. With reorthogonalization the
// basis cannot exceed `dim` vectors, so iteration counts stay small even for
// the tightly clustered spectra where plain power iteration stalls.
template <class ApplyGram>
EigenIterResult lanczos_max_eigenvalue(ApplyGram&& apply, int dim,
                                       std::uint64_t seed, double tol,
                                       int max_iter) {
  EigenIterResult out;
  if (dim == 0) {
    out.converged = true;
    return out;
  }
  std::vector<cvector> basis;
  basis.push_back(random_start_vector(dim, seed));
  std::vector<double> diag, sub;
  double previous_sigma = -1.0;
  const int limit = std::min(max_iter, dim);
  for (int it = 1; it <= limit; ++it) {
    cvector w = apply(basis.back());
    const double a = dot(basis.back(), w).real();
    diag.push_back(a);
    // Subtract the projection onto every stored basis vector (full
    // reorthogonalization); the three-term recurrence alone loses
    // orthogonality long before the extreme eigenvalue settles.
    for (const auto& u : basis) {
      const auto coeff = dot(u, w);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= coeff * u[i];
    }
    const auto eigenvalues = tridiagonal_eigenvalues(diag, sub);
    out.eigenvalue = std::max(eigenvalues.back(), 0.0);
    out.iterations = it;
    const double sigma = std::sqrt(out.eigenvalue);
    if (it >= 2 &&
        std::abs(sigma - previous_sigma) <= tol * std::max(sigma, 1e-300)) {
      out.converged = true;
      return out;
    }
    previous_sigma = sigma;
    const double b = norm2(w);
    if (b <= 1e-13 * std::max(1.0, out.eigenvalue)) {
      out.converged = true;  // exhausted the reachable invariant subspace
      return out;
    }
    sub.push_back(b);
    for (auto& z : w) z /= b;
    basis.push_back(std::move(w));
  }
  out.converged = out.iterations >= dim;  // exact termination at full basis
  return out;
}

// Plain power iteration on a Hermitian PSD operator; convergence is declared
// when successive Rayleigh quotients agree to `tol` relative.
template <class ApplyGram>
EigenIterResult power_max_eigenvalue(ApplyGram&& apply, int dim,
                                     std::uint64_t seed, double tol,
                                     int max_iter) {
  EigenIterResult out;
  if (dim == 0) {
    out.converged = true;
    return out;
  }
  cvector v = random_start_vector(dim, seed);
  double previous = -1.0;
  for (int it = 1; it <= max_iter; ++it) {
    const cvector w = apply(v);
    const double rayleigh = dot(v, w).real();
    out.eigenvalue = std::max(rayleigh, 0.0);
    out.iterations = it;
    if (it >= 2 && std::abs(rayleigh - previous) <=
                       tol * std::max(std::abs(rayleigh), 1e-300)) {
      out.converged = true;
      return out;
    }
    previous = rayleigh;
    const double scale = norm2(w);
    if (scale == 0.0) {
      out.eigenvalue = 0.0;
      out.converged = true;  // operator annihilated the iterate
      return out;
    }
    v = w;
    for (auto& z : v) z /= scale;
  }
  return out;
}

}  // namespace ptrig::detail

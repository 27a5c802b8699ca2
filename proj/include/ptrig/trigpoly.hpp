#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ptrig/detail/kahan.hpp"
#include "ptrig/grid.hpp"
#include "ptrig/nudft.hpp"

namespace ptrig {

// q(x) = sum_{k=-degree}^{degree} coeff(k) e^{ikx}; coefficients stored in
// ascending k. The positive-exponent convention is fixed here; anything that
// needs the opposite sign converts at its own boundary.
struct TrigPoly {
  int degree = 0;
  complex_vector coeffs;  // index k + degree holds c_k

  std::complex<double> coeff(int k) const {
    return coeffs[static_cast<std::size_t>(k + degree)];
  }
};

inline TrigPoly make_trigpoly(int degree, complex_vector coeffs) {
  if (degree < 0) throw std::invalid_argument("make_trigpoly: negative degree");
  if (coeffs.size() != static_cast<std::size_t>(2 * degree + 1))
    throw std::invalid_argument("make_trigpoly: coefficient count mismatch");
  return TrigPoly{degree, std::move(coeffs)};
}

inline complex_vector evaluate(const TrigPoly& q,
                               const std::vector<double>& points) {
  complex_vector out(points.size());
  const int n = q.degree;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::complex<double> acc{0.0, 0.0};
    detail::for_each_phase(points[i], -n, n, [&](int k, std::complex<double> w) {
      acc += q.coeffs[static_cast<std::size_t>(k + n)] * w;
    });
    out[i] = acc;
  }
  return out;
}

inline std::complex<double> evaluate_at(const TrigPoly& q, double x) {
  return evaluate(q, {x}).front();
}

// Interpolant of the samples in the degree-N space over this grid. The
// transform solve produces coefficients for the negative-exponent kernel;
// the index reversal c_k = c_hat_{-k} happens here and only here, so every
// TrigPoly in circulation evaluates with the positive exponent.
inline TrigPoly interpolate(const PerturbedGrid& grid,
                            const SampleVector& samples, double tol = 1e-11,
                            int max_iter = 10000) {
  if (samples.grid_tag != node_checksum(grid))
    throw std::invalid_argument("interpolate: samples were not taken on grid");
  const auto op = square_operator(grid);
  const auto report = solve_inverse(op, samples, tol, max_iter);
  if (!report.converged)
    throw std::runtime_error("interpolate: coefficient solve did not converge");
  const int n = op.degree;
  complex_vector coeffs(static_cast<std::size_t>(2 * n + 1));
  for (int k = -n; k <= n; ++k)
    coeffs[static_cast<std::size_t>(k + n)] =
        report.coefficients[static_cast<std::size_t>(-k + n)];
  return TrigPoly{n, std::move(coeffs)};
}

inline double l2_norm(const TrigPoly& q) {
  detail::KahanSum sum;
  for (const auto& c : q.coeffs) sum.add(std::norm(c));
  return std::sqrt(2.0 * std::numbers::pi * sum.value());
}

// Dense-sampling estimate of max |q|; a lower bound on the true sup norm,
// tight to O(factor^{-2}) by smoothness of |q| near its maximum.
inline double sup_norm(const TrigPoly& q, int oversample_factor = 16) {
  if (oversample_factor < 4)
    throw std::invalid_argument("sup_norm: oversample factor below 4");
  const int count = oversample_factor * (2 * q.degree + 1);
  const double step = 2.0 * std::numbers::pi / count;
  double best = 0.0;
  const int n = q.degree;
  for (int i = 0; i < count; ++i) {
    std::complex<double> acc{0.0, 0.0};
    detail::for_each_phase(i * step, -n, n, [&](int k, std::complex<double> w) {
      acc += q.coeffs[static_cast<std::size_t>(k + n)] * w;
    });
    best = std::max(best, std::abs(acc));
  }
  return best;
}

// Values of the Lagrange basis function pinned to node j,
//   l_j(x) = prod_{m != j} sin((x - x_m)/2) / sin((x_j - x_m)/2),
// accumulated as log-magnitude plus sign: the 2N factors all have magnitude
// below one and the plain product underflows near N ~ 700.
inline complex_vector lagrange_eval(const PerturbedGrid& grid, int j,
                                    const std::vector<double>& points) {
  const int half = grid.half_count;
  if (j < -half || j > half)
    throw std::invalid_argument("lagrange_eval: index outside the grid");
  const double pivot = grid.node(j);

  double denom_log = 0.0;
  double denom_sign = 1.0;
  for (int m = -half; m <= half; ++m) {
    if (m == j) continue;
    const double s = std::sin(0.5 * (pivot - grid.node(m)));
    denom_log += std::log(std::abs(s));
    if (s < 0.0) denom_sign = -denom_sign;
  }

  complex_vector out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    double num_log = 0.0;
    double num_sign = 1.0;
    bool hit_node = false;
    for (int m = -half; m <= half; ++m) {
      if (m == j) continue;
      const double s = std::sin(0.5 * (points[i] - grid.node(m)));
      if (s == 0.0) {
        hit_node = true;
        break;
      }
      num_log += std::log(std::abs(s));
      if (s < 0.0) num_sign = -num_sign;
    }
    const double value =
        hit_node ? 0.0
                 : num_sign * denom_sign * std::exp(num_log - denom_log);
    out[i] = {value, 0.0};
  }
  return out;
}

// Degree-n Fourier section of f computed from a dense uniform grid:
// c_k = (1/M) sum_m f(t_m) e^{-ik t_m}. The rectangle rule is exact on
// trigonometric polynomials of degree below M - n, so the only error is
// aliasing of the coefficient tail beyond M - n.
template <class F>
TrigPoly truncated_fourier(F&& f, int n, int dense_points) {
  if (n < 0) throw std::invalid_argument("truncated_fourier: negative degree");
  if (dense_points < 8 * (2 * n + 1))
    throw std::invalid_argument(
        "truncated_fourier: need at least 8(2n+1) sample points");
  const int m_count = dense_points;
  const double step = 2.0 * std::numbers::pi / m_count;
  complex_vector coeffs(static_cast<std::size_t>(2 * n + 1), {0.0, 0.0});
  for (int m = 0; m < m_count; ++m) {
    const std::complex<double> fm = f(m * step);
    detail::for_each_phase(-(m * step), -n, n,
                           [&](int k, std::complex<double> w) {
                             coeffs[static_cast<std::size_t>(k + n)] += fm * w;
                           });
  }
  for (auto& c : coeffs) c /= static_cast<double>(m_count);
  return TrigPoly{n, std::move(coeffs)};
}

}  // namespace ptrig

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ptrig/detail/krylov.hpp"
#include "ptrig/grid.hpp"
#include "ptrig/nudft.hpp"
#include "ptrig/quadrature.hpp"
#include "ptrig/trigpoly.hpp"

namespace ptrig {

namespace detail {

// floor(x) with a relative nudge: products like (1 - 0.3) * 10 land a few
// ulps below the exact integer 7 and a bare floor would drop them to 6.
inline int nudged_floor(double x) {
  return static_cast<int>(std::floor(x + 1e-9 * std::max(1.0, std::abs(x))));
}

inline void require_fit_alpha(const PerturbedGrid& grid) {
  if (!(grid.alpha < 0.5))
    throw std::domain_error("oversample: perturbation budget must be below 1/2");
}

}  // namespace detail

struct OversampleConfig {
  double epsilon = 0.0;
  int half_count = 0;
  int degree = 0;  // floor((1 - epsilon) * half_count), stored
};

inline OversampleConfig make_oversample_config(double epsilon, int half_count) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw std::domain_error("make_oversample_config: epsilon outside (0, 1)");
  if (half_count < 0)
    throw std::invalid_argument("make_oversample_config: negative grid size");
  const int degree = detail::nudged_floor((1.0 - epsilon) * half_count);
  return OversampleConfig{epsilon, half_count, degree};
}

// Least-squares approximant of degree n from samples on a (finer) grid:
// minimizes the discrete misfit over the rectangular transform, iterating
// on the normal equations until the relative gradient is below tol. The
// solve produces negative-exponent coefficients; the stored polynomial
// flips the index so that it evaluates with the positive exponent like
// every other TrigPoly.
inline TrigPoly lsq_fit(const PerturbedGrid& grid, const SampleVector& samples,
                        int degree, double tol = 1e-10, int max_iter = 20000) {
  detail::require_fit_alpha(grid);
  if (samples.grid_tag != node_checksum(grid))
    throw std::invalid_argument("lsq_fit: samples were not taken on grid");
  const auto op = rect_operator(grid, degree);
  complex_vector solution(static_cast<std::size_t>(op.cols()));
  const auto report = detail::cgls(
      [&](const complex_vector& c) { return detail::forward_raw(op, c); },
      [&](const complex_vector& r) { return detail::adjoint_raw(op, r); },
      samples.values, solution, tol, max_iter, detail::CglsStop::gradient);
  if (!report.converged)
    throw std::runtime_error("lsq_fit: normal-equations iteration stalled");
  complex_vector coeffs(static_cast<std::size_t>(2 * degree + 1));
  for (int k = -degree; k <= degree; ++k)
    coeffs[static_cast<std::size_t>(k + degree)] =
        solution[static_cast<std::size_t>(-k + degree)];
  return TrigPoly{degree, std::move(coeffs)};
}

inline double rect_condition(const PerturbedGrid& grid, int degree,
                             const SingularValueOptions& options = {}) {
  const auto op = rect_operator(grid, degree);
  const auto [sigma_min, sigma_max] = extreme_singular_values(op, options);
  if (sigma_min == 0.0)
    throw std::runtime_error("rect_condition: rank-deficient operator");
  return sigma_max / sigma_min;
}

// Minimum-2-norm solution of the underdetermined transpose system
// restricted to exactness degree n < N. Conjugation turns the transpose
// into the adjoint; iterating on that consistent system from zero keeps
// every iterate in the operator's range, whose limit is the minimum-norm
// solution.
inline QuadratureRule minnorm_weights(const PerturbedGrid& grid, int degree,
                                      double tol = 1e-11, int max_iter = 20000) {
  detail::require_fit_alpha(grid);
  const auto op = rect_operator(grid, degree);
  complex_vector rhs(static_cast<std::size_t>(op.cols()), {0.0, 0.0});
  rhs[static_cast<std::size_t>(degree)] = {2.0 * std::numbers::pi, 0.0};
  complex_vector y(static_cast<std::size_t>(op.rows()));
  const auto report = detail::cgls(
      [&](const complex_vector& r) { return detail::adjoint_raw(op, r); },
      [&](const complex_vector& c) { return detail::forward_raw(op, c); },
      rhs, y, tol, max_iter, detail::CglsStop::residual);
  if (!report.converged)
    throw std::runtime_error("minnorm_weights: solver did not converge");
  for (auto& v : y) v = std::conj(v);
  auto weights = detail::realized_weights(y);
  return QuadratureRule{grid, std::move(weights), degree};
}

struct NonnegOversampleRow {
  double alpha = 0.0;
  int half_count = 0;
  int degree = 0;
  double min_weight = 0.0;
  double abs_sum = 0.0;
  bool nonnegative = false;
};

// Min-norm weight behavior at two representative degrees: well inside the
// guaranteed-existence zone (n ~ N/pi) and just short of square
// (n ~ 0.95 N). Records only; the existence statement concerns some
// nonnegative rule, not necessarily the minimum-norm one, so no sign
// assertion is made here.
inline std::vector<NonnegOversampleRow> nonneg_oversampling_experiment(
    double alpha, const std::vector<int>& half_list, double tol = 1e-11) {
  if (!(alpha >= 0.0) || !(alpha < 0.5))
    throw std::domain_error(
        "nonneg_oversampling_experiment: alpha outside [0, 1/2)");
  std::vector<NonnegOversampleRow> rows;
  rows.reserve(2 * half_list.size());
  const double noise_floor = 10.0 * tol * 2.0 * std::numbers::pi;
  for (const int half : half_list) {
    const auto grid =
        alpha == 0.0 ? make_uniform(half) : make_alternating(half, alpha);
    const int inside = detail::nudged_floor(half / std::numbers::pi);
    const int near_square = detail::nudged_floor(0.95 * half);
    for (const int degree : {inside, near_square}) {
      const auto rule = minnorm_weights(grid, degree, tol);
      const auto measures = stability_measures(rule);
      rows.push_back(NonnegOversampleRow{alpha, half, degree,
                                         measures.min_weight, measures.abs_sum,
                                         measures.min_weight >= -noise_floor});
    }
  }
  return rows;
}

}  // namespace ptrig

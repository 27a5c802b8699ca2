#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ptrig/bounds.hpp"
#include "ptrig/detail/kahan.hpp"
#include "ptrig/grid.hpp"
#include "ptrig/nudft.hpp"
#include "ptrig/random.hpp"
#include "ptrig/trigpoly.hpp"

namespace ptrig {

// Exact r = 2 sampling constants for a grid: lower is the largest A and
// upper the smallest B with A int |q|^2 <= mean_j |q(x_j)|^2 <= B int |q|^2
// over the degree-N space. Via Parseval both reduce to the extreme singular
// values of the square transform.
struct FrameConstants {
  double lower = 0.0;
  double upper = 0.0;
  std::uint64_t grid_tag = 0;
};

inline double discrete_r_mean(const TrigPoly& q, const PerturbedGrid& grid,
                              double r) {
  if (!(r >= 1.0)) throw std::domain_error("discrete_r_mean: r must be >= 1");
  if (q.degree > grid.half_count)
    throw std::invalid_argument("discrete_r_mean: degree exceeds the grid");
  const auto values = evaluate(q, grid.nodes);
  detail::KahanSum sum;
  for (const auto& v : values) sum.add(std::pow(std::abs(v), r));
  return sum.value() / static_cast<double>(grid.size());
}

namespace detail {

// Rectangle-rule mean of |q|^r over count uniform points, optionally
// restricted to the odd-indexed points of a twice-finer mesh (so a doubled
// rule can reuse the coarse sum).
inline double abs_power_sum(const TrigPoly& q, double r, int count,
                            bool odd_only) {
  KahanSum sum;
  const int total = odd_only ? 2 * count : count;
  const double step = 2.0 * std::numbers::pi / total;
  for (int i = 0; i < count; ++i) {
    const double x = odd_only ? (2 * i + 1) * step : i * step;
    sum.add(std::pow(std::abs(evaluate_at(q, x)), r));
  }
  return sum.value();
}

}  // namespace detail

// Integral of |q|^r over the period (the integral itself, not its r-th
// root). For even integer r the integrand is itself a trigonometric
// polynomial and one rectangle rule past its degree is exact; otherwise the
// rule is doubled until two consecutive levels agree, which bounds the error
// by the observed difference.
inline double lr_norm(const TrigPoly& q, double r, int dense_points) {
  if (!(r >= 1.0)) throw std::domain_error("lr_norm: r must be >= 1");
  if (dense_points < 32 * (q.degree + 1))
    throw std::invalid_argument("lr_norm: need at least 32(deg+1) points");
  const bool even_integer =
      std::abs(r - 2.0 * std::round(r / 2.0)) < 1e-12 && r >= 2.0;
  if (even_integer) {
    const int exact_count =
        std::max(dense_points, q.degree * static_cast<int>(std::lround(r)) + 1);
    return detail::abs_power_sum(q, r, exact_count, false) * 2.0 *
           std::numbers::pi / exact_count;
  }
  int count = dense_points;
  double partial = detail::abs_power_sum(q, r, count, false);
  double value = partial * 2.0 * std::numbers::pi / count;
  for (int round = 0; round < 8; ++round) {
    partial += detail::abs_power_sum(q, r, count, true);
    count *= 2;
    const double refined = partial * 2.0 * std::numbers::pi / count;
    const bool settled = std::abs(refined - value) <= 1e-12 * std::max(1.0, std::abs(refined));
    value = refined;
    if (settled) break;
  }
  return value;
}

inline FrameConstants frame_constants_exact(
    const PerturbedGrid& grid, const SingularValueOptions& options = {}) {
  const auto op = square_operator(grid);
  const auto [sigma_min, sigma_max] = extreme_singular_values(op, options);
  const double scale =
      static_cast<double>(grid.size()) * 2.0 * std::numbers::pi;
  return FrameConstants{sigma_min * sigma_min / scale,
                        sigma_max * sigma_max / scale, node_checksum(grid)};
}

// Random-search estimate of the general-r constants: min and max over
// trials of (discrete mean) / (continuous integral) for unit-coefficient
// polynomials. Empirical by nature; no closed form exists off r = 2.
struct EmpiricalFrameRatios {
  double lower = std::numeric_limits<double>::infinity();
  double upper = 0.0;
  int trials = 0;
};

inline TrigPoly random_unit_sphere_poly(int degree, std::uint64_t seed,
                                        std::uint64_t trial) {
  const std::uint64_t stream = derive_seed(seed ^ 0x11ull);
  const std::size_t count = static_cast<std::size_t>(2 * degree + 1);
  complex_vector coeffs(count);
  double norm_sq = 0.0;
  for (std::size_t t = 0; t < count; ++t) {
    coeffs[t] = stream_complex_sym(stream, trial * count + t);
    norm_sq += std::norm(coeffs[t]);
  }
  if (norm_sq == 0.0) {
    coeffs[0] = {1.0, 0.0};
    norm_sq = 1.0;
  }
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (auto& c : coeffs) c *= inv;
  return TrigPoly{degree, std::move(coeffs)};
}

inline EmpiricalFrameRatios empirical_frame_ratios(const PerturbedGrid& grid,
                                                   double r, int trials,
                                                   std::uint64_t seed) {
  EmpiricalFrameRatios out;
  const int degree = grid.half_count;
  const int dense = 32 * (degree + 1);
  for (int t = 0; t < trials; ++t) {
    const auto q =
        random_unit_sphere_poly(degree, seed, static_cast<std::uint64_t>(t));
    const double mean = discrete_r_mean(q, grid, r);
    const double integral = lr_norm(q, r, dense);
    const double ratio = mean / integral;
    out.lower = std::min(out.lower, ratio);
    out.upper = std::max(out.upper, ratio);
  }
  out.trials = trials;
  return out;
}

struct FrameDecayRow {
  double alpha = 0.0;
  int half_count = 0;
  GridKind kind = GridKind::alternating;
  std::uint64_t seed = 0;  // meaningful for random grids only
  double lower = 0.0;
  double upper = 0.0;
  double lower_bound_phi = std::numeric_limits<double>::quiet_NaN();
  double upper_bound_phi = std::numeric_limits<double>::quiet_NaN();
};

struct FrameDecayOptions {
  bool include_alternating = true;
  int random_count = 20;
  std::uint64_t seed_tag = 7;   // experiment stream tag for the grid draws
  std::uint64_t seed_base = 0;  // folded into every draw for reseeded reruns
  SingularValueOptions singular;
};

// Worst-case (smallest-lower-constant) frame constants per grid size over
// the alternating grid and a batch of seeded random grids. Below the
// quarter threshold the Kadec bounds are attached for comparison; above it
// they do not apply and the bound columns stay NaN.
inline std::vector<FrameDecayRow> frame_decay_experiment(
    double alpha, const std::vector<int>& half_list,
    const FrameDecayOptions& options = {}) {
  if (!(alpha >= 0.0) || !(alpha < 0.5))
    throw std::domain_error("frame_decay_experiment: alpha outside [0, 1/2)");
  std::vector<FrameDecayRow> rows;
  rows.reserve(half_list.size());
  for (std::size_t index = 0; index < half_list.size(); ++index) {
    const int half = half_list[index];
    FrameDecayRow best;
    best.lower = std::numeric_limits<double>::infinity();
    const auto consider = [&](const PerturbedGrid& grid, GridKind kind,
                              std::uint64_t seed) {
      const auto constants = frame_constants_exact(grid, options.singular);
      if (constants.lower < best.lower) {
        best.half_count = half;
        best.kind = kind;
        best.seed = seed;
        best.lower = constants.lower;
        best.upper = constants.upper;
      }
    };
    if (alpha == 0.0) {
      consider(make_uniform(half), GridKind::uniform, 0);
    } else {
      if (options.include_alternating && half >= 1)
        consider(make_alternating(half, alpha), GridKind::alternating, 0);
      for (int trial = 0; trial < options.random_count; ++trial) {
        const std::uint64_t seed =
            sweep_seed(options.seed_tag, index,
                       static_cast<std::uint64_t>(trial)) ^
            options.seed_base;
        consider(make_random(half, alpha, seed), GridKind::random, seed);
      }
    }
    if (!std::isfinite(best.lower))
      throw std::invalid_argument("frame_decay_experiment: no candidate grids");
    best.alpha = alpha;
    if (alpha < 0.25) {
      const auto [lo, hi] = mz_frame_bounds(alpha);
      best.lower_bound_phi = lo;
      best.upper_bound_phi = hi;
    }
    rows.push_back(best);
  }
  return rows;
}

}  // namespace ptrig

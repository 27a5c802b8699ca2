#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "ptrig/detail/kahan.hpp"

// Closed-form bound functions for perturbed-grid interpolation and
// quadrature: the Kadec-type constant phi, conditioning and stability bounds
// derived from it, Marcinkiewicz-Zygmund frame bounds, and the
// negative-weight window machinery (g-function search, its closed-form
// corollary, and the sufficiency threshold). Pure scalar math throughout.

namespace ptrig {

// Euler-Mascheroni constant, 20 digits.
inline constexpr double kEulerGamma = 0.57721566490153286061;

// phi(alpha) = 1 - cos(pi alpha) + sin(pi alpha); strictly increasing on
// [0, 1/2), crosses 1 exactly at alpha = 1/4.
inline double phi(double alpha) {
  if (!(alpha >= 0.0) || alpha >= 0.5)
    throw std::domain_error("phi: alpha must lie in [0, 1/2)");
  const double t = std::numbers::pi * alpha;
  return 1.0 - std::cos(t) + std::sin(t);
}

namespace detail {
inline void require_quarter(double alpha, const char* who) {
  if (!(alpha >= 0.0) || alpha >= 0.25)
    throw std::domain_error(std::string(who) + ": alpha must lie in [0, 1/4)");
}
}  // namespace detail

// Upper bound (1+phi)/(1-phi) on the 2-norm condition number of the
// perturbed sampling operator.
inline double kadec_condition_bound(double alpha) {
  detail::require_quarter(alpha, "kadec_condition_bound");
  const double p = phi(alpha);
  return (1.0 + p) / (1.0 - p);
}

// Upper bound 2pi/(cos(pi alpha) - sin(pi alpha)) on the absolute sum of the
// exact quadrature weights. Note cos(pi a) - sin(pi a) == 1 - phi(a).
inline double weight_abs_sum_bound(double alpha) {
  detail::require_quarter(alpha, "weight_abs_sum_bound");
  const double t = std::numbers::pi * alpha;
  return 2.0 * std::numbers::pi / (std::cos(t) - std::sin(t));
}

// Two-sided frame bounds ((1-phi)^2/2pi, (1+phi)^2/2pi) for the r = 2
// Marcinkiewicz-Zygmund sandwich.
inline std::pair<double, double> mz_frame_bounds(double alpha) {
  detail::require_quarter(alpha, "mz_frame_bounds");
  const double p = phi(alpha);
  const double two_pi = 2.0 * std::numbers::pi;
  return {(1.0 - p) * (1.0 - p) / two_pi, (1.0 + p) * (1.0 + p) / two_pi};
}

// Factor 1 + sqrt(2N+1)/(cos(pi alpha) - sin(pi alpha)) relating the
// interpolation error to the best-approximation error.
inline double interp_bound_factor(double alpha, int half_count) {
  detail::require_quarter(alpha, "interp_bound_factor");
  if (half_count < 0)
    throw std::domain_error("interp_bound_factor: negative half count");
  const double t = std::numbers::pi * alpha;
  return 1.0 + std::sqrt(static_cast<double>(2 * half_count + 1)) /
                   (std::cos(t) - std::sin(t));
}

// Perturbation threshold min(1/(2r), (r-1)/(2r)) above which the r-mean
// sandwich can fail; maximal (1/4) exactly at r = 2.
inline double mz_threshold(double r) {
  if (!(r >= 1.0)) throw std::domain_error("mz_threshold: r must be >= 1");
  return std::min(1.0 / (2.0 * r), (r - 1.0) / (2.0 * r));
}

// Sufficiency threshold exp(pi/(4 alpha) + 1/2): any even half-count at or
// above it makes the central weight of the alternating rule negative.
inline double neg_weight_upper_threshold(double alpha) {
  if (!(alpha > 0.0) || alpha >= 0.5)
    throw std::domain_error("neg_weight_upper_threshold: alpha must lie in (0, 1/2)");
  return std::exp(std::numbers::pi / (4.0 * alpha) + 0.5);
}

// Harmonic number H_n. Direct compensated summation up to 10^6; beyond that
// the asymptotic log n + gamma + 1/(2n) - 1/(12 n^2), whose switchover
// mismatch at 10^6 is far below double rounding.
inline double harmonic_number(std::int64_t n) {
  if (n < 1) throw std::domain_error("harmonic_number: n must be positive");
  constexpr std::int64_t kDirectLimit = 1000000;
  if (n <= kDirectLimit) {
    detail::KahanSum sum;
    for (std::int64_t d = 1; d <= n; ++d) sum.add(1.0 / static_cast<double>(d));
    return sum.value();
  }
  const double x = static_cast<double>(n);
  return std::log(x) + kEulerGamma + 1.0 / (2.0 * x) - 1.0 / (12.0 * x * x);
}

// g(N, alpha) = prod_{m=1..N} (m+alpha)^2 / ((m-2 alpha) m) * H_N.
// The product is accumulated as a compensated sum of logs; each factor
// exceeds 1 and H_N increases, so g is strictly increasing in N.
inline double g_function(std::int64_t half_count, double alpha) {
  if (half_count < 1) throw std::domain_error("g_function: N must be >= 1");
  if (!(alpha > 0.0) || alpha >= 0.5)
    throw std::domain_error("g_function: alpha must lie in (0, 1/2)");
  detail::KahanSum log_product;
  for (std::int64_t m = 1; m <= half_count; ++m) {
    const double md = static_cast<double>(m);
    log_product.add(2.0 * std::log(md + alpha) - std::log(md - 2.0 * alpha) -
                    std::log(md));
  }
  return std::exp(log_product.value()) * harmonic_number(half_count);
}

// Largest N with g(N, alpha) <= 1/(pi alpha); every exact rule on an
// alpha-perturbed grid of half-count up to this N has nonnegative weights.
// g's running log-product and harmonic sum extend in O(1) per step, so the
// monotone search walks N upward; a bisection would recompute the product
// from scratch at every probe and cost O(N log N) instead of O(N).
inline std::int64_t neg_weight_lower_bound(double alpha) {
  if (!(alpha > 0.0) || alpha >= 0.5)
    throw std::domain_error("neg_weight_lower_bound: alpha must lie in (0, 1/2)");
  const double threshold = 1.0 / (std::numbers::pi * alpha);
  constexpr std::int64_t kDirectLimit = 1000000;  // harmonic_number switchover
  constexpr std::int64_t kSearchLimit = 2000000000;
  detail::KahanSum log_product;
  detail::KahanSum harmonic;
  for (std::int64_t m = 1; m <= kSearchLimit; ++m) {
    const double md = static_cast<double>(m);
    log_product.add(2.0 * std::log(md + alpha) - std::log(md - 2.0 * alpha) -
                    std::log(md));
    double h;
    if (m <= kDirectLimit) {
      harmonic.add(1.0 / md);
      h = harmonic.value();
    } else {
      h = std::log(md) + kEulerGamma + 1.0 / (2.0 * md) -
          1.0 / (12.0 * md * md);
    }
    if (std::exp(log_product.value()) * h > threshold) return m - 1;
  }
  throw std::runtime_error("neg_weight_lower_bound: search limit exceeded");
}

namespace detail {

// Gamma(x) via the Lanczos approximation (g = 7, 9 terms), accurate to well
// under 1e-12 absolute on the (0.7, 1.2) range this project needs.
inline double gamma_near_one(double x) {
  if (!(x > 0.5) || x >= 3.0)
    throw std::domain_error("gamma_near_one: argument outside supported range");
  static constexpr double kCoeff[9] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  const double z = x - 1.0;
  double acc = kCoeff[0];
  for (int i = 1; i < 9; ++i) acc += kCoeff[i] / (z + static_cast<double>(i));
  const double t = z + 7.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) *
         std::exp(-t) * acc;
}

}  // namespace detail

// Closed-form relaxation of the g-function search, valid for alpha < 0.15:
// pick the largest L with (alpha + L) e^{4L} <= R(alpha), then the largest N
// with log(N+1+alpha) + 1/(2N-1) <= (1 - gamma) + L/alpha.
//
// R(alpha) here is Gamma(1+alpha)^2 / (pi Gamma(1-2 alpha)) scaled by
// exp(-4 alpha (1 - gamma)). The scaling keeps the chain of estimates behind
// the closed form airtight (the unscaled variant overshoots the exact
// g-search for small alpha, which would invert the intended ordering); with
// it, the result is a true relaxation: always at or below the search value.
inline std::int64_t neg_weight_lower_bound_corollary(double alpha) {
  if (!(alpha > 0.0) || alpha >= 0.15)
    throw std::domain_error(
        "neg_weight_lower_bound_corollary: alpha must lie in (0, 0.15)");
  const double rhs = detail::gamma_near_one(1.0 + alpha) *
                     detail::gamma_near_one(1.0 + alpha) /
                     (std::numbers::pi * detail::gamma_near_one(1.0 - 2.0 * alpha)) *
                     std::exp(-4.0 * alpha * (1.0 - kEulerGamma));
  const auto excess = [&](double L) {
    return (alpha + L) * std::exp(4.0 * L) - rhs;
  };
  if (excess(0.0) > 0.0) return 0;
  // The left side is strictly increasing in L, so the root in [0, 2] is
  // unique; bisect to 1e-14.
  double lo = 0.0, hi = 2.0;
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) <= 0.0 ? lo : hi) = mid;
  }
  const double level = (1.0 - kEulerGamma) + lo / alpha;
  const auto lhs = [&](std::int64_t n) {
    return std::log(static_cast<double>(n) + 1.0 + alpha) +
           1.0 / (2.0 * static_cast<double>(n) - 1.0);
  };
  if (lhs(1) > level) return 0;
  if (lhs(2) > level) return 1;
  // lhs is strictly increasing for N >= 2; bracket by doubling, then bisect.
  std::int64_t lo_n = 2, hi_n = 4;
  while (lhs(hi_n) <= level) {
    lo_n = hi_n;
    hi_n *= 2;
    if (hi_n > (std::int64_t{1} << 60))
      throw std::runtime_error("neg_weight_lower_bound_corollary: overflow");
  }
  while (hi_n - lo_n > 1) {
    const std::int64_t mid = lo_n + (hi_n - lo_n) / 2;
    (lhs(mid) <= level ? lo_n : hi_n) = mid;
  }
  return lo_n;
}

struct NegWeightBounds {
  double alpha = 0.0;
  std::int64_t lower_bound_N = 0;  // exact g-function search
  std::optional<std::int64_t> lower_bound_N_corollary;  // alpha < 0.15 only
  double upper_threshold_N = 0.0;  // sufficiency threshold
};

inline NegWeightBounds neg_weight_bounds(double alpha) {
  NegWeightBounds out;
  out.alpha = alpha;
  out.lower_bound_N = neg_weight_lower_bound(alpha);
  if (alpha < 0.15)
    out.lower_bound_N_corollary = neg_weight_lower_bound_corollary(alpha);
  out.upper_threshold_N = neg_weight_upper_threshold(alpha);
  return out;
}

}  // namespace ptrig

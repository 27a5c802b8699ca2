#pragma once

// Reference integrands with certified smoothness metadata.  Each function
// carries the data the error bounds consume: either a strip of analyticity
// (half-width rho0, sup bound on any closed substrip controlled by
// coefficient decay) or a derivative order sigma with a bound on the total
// variation of the sigma-th derivative.  Exact integrals, where closed forms
// exist, are recorded alongside so convergence experiments have a trusted
// target that does not depend on any quadrature code under test.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "ptrig/detail/kahan.hpp"

namespace ptrig {

enum class SmoothnessClass { analytic, differentiable };

struct TestFunction {
  std::string name;
  std::function<double(double)> evaluate;
  SmoothnessClass smoothness = SmoothnessClass::analytic;

  // Analytic class: |f| extends holomorphically to |Im z| < rho0.  sup_bound
  // is the supremum of |f| on the real line; the strip sup for any closed
  // substrip follows from the recorded coefficient decay rate.
  double rho0 = std::numeric_limits<double>::quiet_NaN();
  double sup_bound = std::numeric_limits<double>::quiet_NaN();

  // Differentiable class: f has sigma continuous derivatives and the
  // sigma-th derivative has total variation at most variation_bound.
  int sigma = 0;
  double variation_bound = std::numeric_limits<double>::quiet_NaN();

  // Closed-form value of the integral over one period, when available.
  std::optional<double> exact_integral;
};

// f(x) = 1 / (5/4 - cos x).  Fourier coefficients are (4/3) 2^{-|k|}, so f
// is analytic exactly in the strip |Im z| < ln 2.  The period integral has
// the closed form 2*pi / sqrt(a^2 - 1) with a = 5/4, which equals 8*pi/3.
inline TestFunction runge_trig() {
  TestFunction f;
  f.name = "runge_trig";
  f.evaluate = [](double x) { return 1.0 / (1.25 - std::cos(x)); };
  f.smoothness = SmoothnessClass::analytic;
  f.rho0 = std::log(2.0);
  f.sup_bound = 4.0;  // attained at x = 0
  f.exact_integral = 8.0 * std::acos(-1.0) / 3.0;
  return f;
}

// f(x) = exp(cos x), entire in x.  The period integral is 2*pi*I0(1) where
// I0 is the modified Bessel function; I0(1) = sum_k 1/(4^k (k!)^2).
inline TestFunction exp_cos() {
  constexpr double kBesselI0One = 1.2660658777520083356;
  TestFunction f;
  f.name = "exp_cos";
  f.evaluate = [](double x) { return std::exp(std::cos(x)); };
  f.smoothness = SmoothnessClass::analytic;
  f.rho0 = std::numeric_limits<double>::infinity();
  f.sup_bound = std::exp(1.0);
  f.exact_integral = 2.0 * std::acos(-1.0) * kBesselI0One;
  return f;
}

// f_sigma(x) = sum_{k=1}^{K} k^{-(sigma+1)} cos(k x) with K = 2000.  The
// sigma-th derivative is sum_k k^{-1} cos(k x + sigma*pi/2); one more
// derivative has unit amplitudes, so by Cauchy-Schwarz its L1 norm over the
// period is at most sqrt(2*pi) * sqrt(pi * K) = pi * sqrt(2K).  That bounds
// the total variation of the sigma-th derivative.  Every term integrates to
// zero, so the exact period integral is 0.
inline TestFunction sigma_smooth(int sigma, int terms = 2000) {
  if (sigma < 1) throw std::domain_error("sigma_smooth: sigma must be >= 1");
  if (terms < 1) throw std::domain_error("sigma_smooth: terms must be >= 1");
  TestFunction f;
  f.name = "sigma_smooth_" + std::to_string(sigma);
  f.evaluate = [sigma, terms](double x) {
    detail::KahanSum sum;
    for (int k = 1; k <= terms; ++k) {
      sum.add(std::pow(static_cast<double>(k), -(sigma + 1.0)) *
              std::cos(k * x));
    }
    return sum.value();
  };
  f.smoothness = SmoothnessClass::differentiable;
  f.sigma = sigma;
  f.variation_bound =
      std::acos(-1.0) * std::sqrt(2.0 * static_cast<double>(terms));
  f.exact_integral = 0.0;
  return f;
}

}  // namespace ptrig

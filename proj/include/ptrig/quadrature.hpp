#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "ptrig/bounds.hpp"
#include "ptrig/detail/kahan.hpp"
#include "ptrig/detail/krylov.hpp"
#include "ptrig/detail/lapack.hpp"
#include "ptrig/grid.hpp"
#include "ptrig/nudft.hpp"
#include "ptrig/trigpoly.hpp"

namespace ptrig {

struct QuadratureRule {
  PerturbedGrid grid;
  std::vector<double> weights;  // index j + N holds the weight at node j
  int exactness_degree = 0;
};

namespace detail {

// Shared real-part extraction: the weight system is solved in complex
// arithmetic; imaginary parts must sit at solver-noise level before they
// are discarded.
inline std::vector<double> realized_weights(const complex_vector& w) {
  double norm_sq = 0.0, worst_imag = 0.0;
  for (const auto& v : w) {
    norm_sq += std::norm(v);
    worst_imag = std::max(worst_imag, std::abs(v.imag()));
  }
  if (worst_imag > 1e-9 * std::sqrt(norm_sq))
    throw std::runtime_error("quadrature: weights came out non-real");
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i].real();
  return out;
}

inline void require_weight_alpha(const PerturbedGrid& grid) {
  if (!(grid.alpha < 0.5))
    throw std::domain_error("quadrature: perturbation budget must be below 1/2");
}

// Dense route: materialize the transposed transform column-by-column and
// hand it to the factorized solver. Used by the search below the cap, both
// for speed and as an independent cross-check of the iterative route.
inline std::vector<double> dense_weights(const PerturbedGrid& grid) {
  require_weight_alpha(grid);
  const int n = grid.half_count;
  const int m = grid.size();
  complex_vector a(static_cast<std::size_t>(m) * m);
  for (int j = -n; j <= n; ++j) {
    const std::size_t col = static_cast<std::size_t>(j + n);
    for_each_phase(-grid.node(j), -n, n, [&](int k, std::complex<double> w) {
      a[static_cast<std::size_t>(k + n) + col * static_cast<std::size_t>(m)] = w;
    });
  }
  complex_vector rhs(static_cast<std::size_t>(m), {0.0, 0.0});
  rhs[static_cast<std::size_t>(n)] = {2.0 * std::numbers::pi, 0.0};
  dense_solve_inplace(a, rhs, m);
  return realized_weights(rhs);
}

}  // namespace detail

// Weights making the rule exact on the degree-N space: the transposed
// system rows are Sum_j w_j e^{-i k x_j} = 2 pi [k = 0]. Transposition is
// reached through the adjoint: conjugating both sides turns the transpose
// into the conjugate transpose, so we solve A* y = 2 pi e_0 and take
// w = conj(y).
inline QuadratureRule compute_weights(PerturbedGrid grid, double tol = 1e-11,
                                      int max_iter = 10000) {
  detail::require_weight_alpha(grid);
  auto op = square_operator(std::move(grid));
  const int m = op.rows();
  complex_vector rhs(static_cast<std::size_t>(m), {0.0, 0.0});
  rhs[static_cast<std::size_t>(op.degree)] = {2.0 * std::numbers::pi, 0.0};
  complex_vector y(static_cast<std::size_t>(m));
  const auto report = detail::cgls(
      [&](const complex_vector& r) { return detail::adjoint_raw(op, r); },
      [&](const complex_vector& c) { return detail::forward_raw(op, c); },
      rhs, y, tol, max_iter, detail::CglsStop::residual);
  if (!report.converged)
    throw std::runtime_error("compute_weights: solver did not converge");
  for (auto& v : y) v = std::conj(v);
  auto weights = detail::realized_weights(y);
  return QuadratureRule{std::move(op.grid), std::move(weights), op.degree};
}

inline std::complex<double> integrate(const QuadratureRule& rule,
                                      const SampleVector& samples) {
  if (samples.grid_tag != node_checksum(rule.grid))
    throw std::invalid_argument("integrate: samples were not taken on the rule's grid");
  detail::KahanSum re, im;
  for (std::size_t i = 0; i < rule.weights.size(); ++i) {
    re.add(rule.weights[i] * samples.values[i].real());
    im.add(rule.weights[i] * samples.values[i].imag());
  }
  return {re.value(), im.value()};
}

// Worst row residual of the exactness system over |k| <= exactness_degree.
inline double exactness_check(const QuadratureRule& rule) {
  const int n = rule.exactness_degree;
  const int half = rule.grid.half_count;
  complex_vector acc(static_cast<std::size_t>(2 * n + 1), {0.0, 0.0});
  for (int j = -half; j <= half; ++j) {
    const double w = rule.weights[static_cast<std::size_t>(j + half)];
    detail::for_each_phase(rule.grid.node(j), -n, n,
                           [&](int k, std::complex<double> phase) {
                             acc[static_cast<std::size_t>(k + n)] += w * phase;
                           });
  }
  double worst = 0.0;
  for (int k = -n; k <= n; ++k) {
    const std::complex<double> target =
        k == 0 ? std::complex<double>{2.0 * std::numbers::pi, 0.0}
               : std::complex<double>{0.0, 0.0};
    worst = std::max(worst,
                     std::abs(acc[static_cast<std::size_t>(k + n)] - target));
  }
  return worst;
}

struct StabilityMeasures {
  double abs_sum = 0.0;
  double min_weight = 0.0;
  int n_negative = 0;
};

inline StabilityMeasures stability_measures(const QuadratureRule& rule) {
  StabilityMeasures out;
  detail::KahanSum abs_sum;
  out.min_weight = rule.weights.front();
  for (const double w : rule.weights) {
    abs_sum.add(std::abs(w));
    out.min_weight = std::min(out.min_weight, w);
    if (w < 0.0) ++out.n_negative;
  }
  out.abs_sum = abs_sum.value();
  return out;
}

struct NegativeSearchOptions {
  double tol = 1e-12;       // dense path noise scale; also the Krylov tolerance
  int threads = 1;
  int max_dense_dim = 2049;
  int max_iter = 20000;
};

namespace detail {

inline double center_weight_alternating(int half, double alpha,
                                        const NegativeSearchOptions& options) {
  const auto grid = make_alternating(half, alpha);
  if (grid.size() <= options.max_dense_dim)
    return dense_weights(grid)[static_cast<std::size_t>(half)];
  const auto rule = compute_weights(grid, options.tol, options.max_iter);
  return rule.weights[static_cast<std::size_t>(half)];
}

}  // namespace detail

// Smallest even N up to n_max whose alternating grid produces a strictly
// negative center weight, judged against a threshold of ten solver
// tolerances so solver noise can never masquerade as a sign change.
// Candidates at or below the proven-positive window are not solved: every
// weight there is nonnegative by the bound, and the window itself is
// exercised separately as a falsifiable prediction.
inline std::optional<int> negative_weight_search(
    double alpha, int n_max, const NegativeSearchOptions& options = {}) {
  if (!(alpha > 0.0) || !(alpha < 0.5))
    throw std::domain_error("negative_weight_search: alpha outside (0, 1/2)");
  const double threshold = -10.0 * options.tol * 2.0 * std::numbers::pi;
  const long long window = neg_weight_lower_bound(alpha);

  std::vector<int> candidates;
  for (int half = 2; half <= n_max; half += 2)
    if (half > window) candidates.push_back(half);
  if (candidates.empty()) return std::nullopt;

  const int thread_count =
      std::max(1, std::min<int>(options.threads,
                                static_cast<int>(candidates.size())));
  std::optional<int> hit;
  if (thread_count == 1) {
    for (const int half : candidates) {
      if (detail::center_weight_alternating(half, alpha, options) < threshold) {
        hit = half;
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<int> best{n_max + 1};
    auto worker = [&] {
      for (;;) {
        const std::size_t index = next.fetch_add(1);
        if (index >= candidates.size()) return;
        const int half = candidates[index];
        if (half >= best.load()) return;  // ascending order: nothing smaller left
        if (detail::center_weight_alternating(half, alpha, options) < threshold) {
          int current = best.load();
          while (half < current && !best.compare_exchange_weak(current, half)) {
          }
        }
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (best.load() <= n_max) hit = best.load();
  }

  if (hit && *hit <= window)
    throw std::runtime_error(
        "negative_weight_search: hit inside the proven-positive window");
  return hit;
}

struct CenterWeightIdentity {
  double w0_direct = 0.0;
  double w0_via_l0 = 0.0;
};

// The center weight equals the integral of its Lagrange basis function,
// and that integral is computed exactly by the equispaced trapezoidal rule
// because l_0 lives in the degree-N space.
inline CenterWeightIdentity w0_trapezoid_identity_check(
    const PerturbedGrid& grid, double tol = 1e-11) {
  detail::require_weight_alpha(grid);
  const int half = grid.half_count;
  const auto rule = compute_weights(grid, tol);
  CenterWeightIdentity out;
  out.w0_direct = rule.weights[static_cast<std::size_t>(half)];
  const auto uniform = make_uniform(half);
  const auto values = lagrange_eval(grid, 0, uniform.nodes);
  detail::KahanSum sum;
  for (const auto& v : values) sum.add(v.real());
  out.w0_via_l0 = grid.spacing() * sum.value();
  return out;
}

struct CrucialAReport {
  bool sign_ok = true;
  bool magnitude_ok = true;
  double worst_sign = 0.0;   // most positive center-basis value seen off zero
  double worst_slack = 0.0;  // smallest |l_0(kh)| - floor margin seen
  bool pass() const { return sign_ok && magnitude_ok; }
};

// On the alternating grid with even N the center basis function is
// nonpositive at every nonzero uniform node and its magnitude dominates
// sin(alpha h / 2) / sin((|k| + alpha) h / 2).
inline CrucialAReport lemma_crucialA_check(int half, double alpha) {
  if (half <= 0 || half % 2 != 0)
    throw std::invalid_argument("lemma_crucialA_check: N must be even and positive");
  if (!(alpha > 0.0) || !(alpha < 0.5))
    throw std::domain_error("lemma_crucialA_check: alpha outside (0, 1/2)");
  constexpr double kSlack = 1e-10;
  const auto grid = make_alternating(half, alpha);
  const double h = grid.spacing();

  std::vector<double> points;
  points.reserve(static_cast<std::size_t>(2 * half));
  for (int k = -half; k <= half; ++k)
    if (k != 0) points.push_back(k * h);
  const auto values = lagrange_eval(grid, 0, points);

  CrucialAReport report;
  report.worst_slack = std::numeric_limits<double>::infinity();
  std::size_t index = 0;
  for (int k = -half; k <= half; ++k) {
    if (k == 0) continue;
    const double value = values[index++].real();
    report.worst_sign = std::max(report.worst_sign, value);
    if (value > kSlack) report.sign_ok = false;
    const double floor_magnitude =
        std::sin(alpha * h / 2.0) / std::sin((std::abs(k) + alpha) * h / 2.0);
    const double margin = std::abs(value) - floor_magnitude;
    report.worst_slack = std::min(report.worst_slack, margin);
    if (margin < -kSlack) report.magnitude_ok = false;
  }
  return report;
}

}  // namespace ptrig

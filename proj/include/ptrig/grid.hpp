#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ptrig/random.hpp"

// Perturbed equispaced grids on [-pi, pi): 2N+1 nodes x_j = (j + delta_j) h
// with h = 2pi/(2N+1), indices j = -N..N, and a perturbation budget
// |delta_j| <= alpha < 1/2 so nodes cannot coalesce. Only odd node counts are
// supported; all index arithmetic below assumes it.

namespace ptrig {

enum class GridKind { uniform, random, alternating, explicit_deltas };

inline std::string to_string(GridKind kind) {
  switch (kind) {
    case GridKind::uniform: return "uniform";
    case GridKind::random: return "random";
    case GridKind::alternating: return "alternating";
    case GridKind::explicit_deltas: return "explicit";
  }
  return "unknown";
}

inline std::optional<GridKind> grid_kind_from_string(const std::string& s) {
  if (s == "uniform") return GridKind::uniform;
  if (s == "random") return GridKind::random;
  if (s == "alternating") return GridKind::alternating;
  if (s == "explicit") return GridKind::explicit_deltas;
  return std::nullopt;
}

struct PerturbedGrid {
  int half_count = 0;  // N; the grid has 2N+1 nodes
  double alpha = 0.0;  // declared perturbation budget
  GridKind kind = GridKind::uniform;
  std::optional<std::uint64_t> seed;  // present only for random grids
  std::vector<double> deltas;         // index j + half_count holds delta_j
  std::vector<double> nodes;          // index j + half_count holds x_j

  int size() const { return 2 * half_count + 1; }
  double spacing() const { return 2.0 * std::numbers::pi / size(); }
  double node(int j) const { return nodes[static_cast<std::size_t>(j + half_count)]; }
  double delta(int j) const { return deltas[static_cast<std::size_t>(j + half_count)]; }
};

namespace detail {

// Nodes are computed here once and stored: every consumer then sees the same
// single rounding of (j + delta_j) * h.
inline std::vector<double> nodes_from_deltas(int half_count,
                                             const std::vector<double>& deltas) {
  const double h = 2.0 * std::numbers::pi / (2 * half_count + 1);
  std::vector<double> nodes(deltas.size());
  for (int j = -half_count; j <= half_count; ++j) {
    const std::size_t idx = static_cast<std::size_t>(j + half_count);
    nodes[idx] = (static_cast<double>(j) + deltas[idx]) * h;
  }
  return nodes;
}

}  // namespace detail

inline PerturbedGrid make_uniform(int half_count) {
  if (half_count < 0) throw std::domain_error("make_uniform: negative half count");
  PerturbedGrid g;
  g.half_count = half_count;
  g.alpha = 0.0;
  g.kind = GridKind::uniform;
  g.deltas.assign(static_cast<std::size_t>(2 * half_count + 1), 0.0);
  g.nodes = detail::nodes_from_deltas(half_count, g.deltas);
  return g;
}

// Independent perturbations drawn uniformly from [-alpha, alpha]. The
// distribution is a harness choice (any |delta_j| <= alpha is admissible);
// deltas are stored so results stay reproducible even if the draw changes.
inline PerturbedGrid make_random(int half_count, double alpha,
                                 std::uint64_t seed) {
  if (half_count < 0) throw std::domain_error("make_random: negative half count");
  if (!(alpha >= 0.0) || alpha >= 0.5)
    throw std::domain_error("make_random: alpha must lie in [0, 1/2)");
  PerturbedGrid g;
  g.half_count = half_count;
  g.alpha = alpha;
  g.kind = GridKind::random;
  g.seed = seed;
  const int count = 2 * half_count + 1;
  g.deltas.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    g.deltas[static_cast<std::size_t>(i)] =
        alpha * stream_sym(seed, static_cast<std::uint64_t>(i));
  g.nodes = detail::nodes_from_deltas(half_count, g.deltas);
  return g;
}

// Maximally perturbed alternating grid: delta_0 = 0; for j < 0, delta_j is
// -alpha at even j and +alpha at odd j; for j > 0, -alpha at odd j and +alpha
// at even j. The case split is odd-symmetric, so x_{-j} = -x_j exactly.
inline PerturbedGrid make_alternating(int half_count, double alpha) {
  if (half_count < 1)
    throw std::domain_error("make_alternating: half count must be positive");
  if (!(alpha > 0.0) || alpha >= 0.5)
    throw std::domain_error("make_alternating: alpha must lie in (0, 1/2)");
  PerturbedGrid g;
  g.half_count = half_count;
  g.alpha = alpha;
  g.kind = GridKind::alternating;
  g.deltas.resize(static_cast<std::size_t>(2 * half_count + 1));
  for (int j = -half_count; j <= half_count; ++j) {
    double d = 0.0;
    if (j < 0) d = (j % 2 == 0) ? -alpha : alpha;
    if (j > 0) d = (j % 2 != 0) ? -alpha : alpha;
    g.deltas[static_cast<std::size_t>(j + half_count)] = d;
  }
  g.nodes = detail::nodes_from_deltas(half_count, g.deltas);
  return g;
}

// Hand-supplied perturbations; deltas.size() must be odd. Out-of-budget
// deltas are accepted here so that validate() can report them.
inline PerturbedGrid make_explicit(double alpha, std::vector<double> deltas) {
  if (deltas.empty() || deltas.size() % 2 == 0)
    throw std::domain_error("make_explicit: delta count must be odd");
  PerturbedGrid g;
  g.half_count = static_cast<int>((deltas.size() - 1) / 2);
  g.alpha = alpha;
  g.kind = GridKind::explicit_deltas;
  g.deltas = std::move(deltas);
  g.nodes = detail::nodes_from_deltas(g.half_count, g.deltas);
  return g;
}

struct GridValidation {
  double max_abs_delta = 0.0;
  bool within_budget = false;      // max |delta_j| <= declared alpha
  bool budget_ok = false;          // declared alpha < 1/2
  bool cyclically_ordered = false; // nodes strictly increase, wrap gap positive
  bool valid = false;
};

inline GridValidation validate(const PerturbedGrid& grid) {
  GridValidation report;
  for (double d : grid.deltas)
    report.max_abs_delta = std::max(report.max_abs_delta, std::abs(d));
  report.within_budget = report.max_abs_delta <= grid.alpha;
  report.budget_ok = grid.alpha < 0.5;
  bool ordered = true;
  for (std::size_t i = 1; i < grid.nodes.size(); ++i)
    if (!(grid.nodes[i] > grid.nodes[i - 1])) ordered = false;
  if (grid.size() > 1 &&
      !(grid.nodes.front() + 2.0 * std::numbers::pi > grid.nodes.back()))
    ordered = false;
  report.cyclically_ordered = ordered;
  report.valid = report.within_budget && report.budget_ok && report.cyclically_ordered;
  return report;
}

}  // namespace ptrig

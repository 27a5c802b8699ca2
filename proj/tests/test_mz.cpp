#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "oracle.hpp"
#include "ptrig/bounds.hpp"
#include "ptrig/mz.hpp"
#include "ptrig/random.hpp"

using namespace ptrig;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

TrigPoly random_poly(int degree, std::uint64_t seed) {
  complex_vector c(static_cast<std::size_t>(2 * degree + 1));
  for (std::size_t t = 0; t < c.size(); ++t)
    c[t] = stream_complex_sym(seed, static_cast<std::uint64_t>(t));
  return TrigPoly{degree, std::move(c)};
}

TrigPoly scaled(const TrigPoly& q, double factor) {
  TrigPoly out = q;
  for (auto& c : out.coeffs) c *= factor;
  return out;
}

}  // namespace

TEST_CASE("discrete r mean of elementary polynomials") {
  const auto grid = make_random(8, 0.2, 3);
  const auto constant = TrigPoly{0, {std::complex<double>{1.0, 0.0}}};
  for (double r : {1.0, 2.0, 3.5})
    CHECK_THAT(discrete_r_mean(constant, grid, r), WithinRel(1.0, 1e-13));

  TrigPoly wave{1, complex_vector(3, {0.0, 0.0})};
  wave.coeffs[2] = {1.0, 0.0};
  for (double r : {1.0, 2.0, 3.5})
    CHECK_THAT(discrete_r_mean(wave, grid, r), WithinRel(1.0, 1e-13));

  const auto q = random_poly(16, 21);
  const auto uniform = make_uniform(16);
  const double parseval = l2_norm(q) * l2_norm(q) / kTwoPi;
  CHECK_THAT(discrete_r_mean(q, uniform, 2.0), WithinRel(parseval, 1e-12));
}

TEST_CASE("discrete r mean validates input") {
  const auto grid = make_uniform(4);
  const auto q = random_poly(4, 1);
  CHECK_THROWS_AS(discrete_r_mean(q, grid, 0.5), std::domain_error);
  const auto too_big = random_poly(5, 2);
  CHECK_THROWS_AS(discrete_r_mean(too_big, grid, 2.0), std::invalid_argument);
}

TEST_CASE("continuous norms reproduce closed forms") {
  const auto constant = TrigPoly{0, {std::complex<double>{1.0, 0.0}}};
  CHECK_THAT(lr_norm(constant, 1.0, 32), WithinRel(kTwoPi, 1e-13));

  const auto q = random_poly(12, 9);
  double coeff_sq = 0.0;
  for (const auto& c : q.coeffs) coeff_sq += std::norm(c);
  CHECK_THAT(lr_norm(q, 2.0, 32 * 13), WithinRel(kTwoPi * coeff_sq, 1e-11));

  TrigPoly cosine{1, complex_vector(3, {0.0, 0.0})};
  cosine.coeffs[0] = {0.5, 0.0};
  cosine.coeffs[2] = {0.5, 0.0};
  CHECK_THAT(lr_norm(cosine, 2.0, 64), WithinRel(std::numbers::pi, 1e-12));
}

TEST_CASE("continuous norms validate input") {
  const auto q = random_poly(4, 4);
  CHECK_THROWS_AS(lr_norm(q, 2.0, 32 * 5 - 1), std::invalid_argument);
  CHECK_THROWS_AS(lr_norm(q, 0.99, 32 * 5), std::domain_error);
}

TEST_CASE("both functionals are homogeneous of degree r") {
  const auto grid = make_random(6, 0.1, 8);
  const auto q = random_poly(6, 17);
  const double factor = 2.37;
  for (double r : {2.0, 3.0}) {
    const double scale = std::pow(factor, r);
    CHECK_THAT(discrete_r_mean(scaled(q, factor), grid, r),
               WithinRel(scale * discrete_r_mean(q, grid, r), 1e-12));
    CHECK_THAT(lr_norm(scaled(q, factor), r, 32 * 7),
               WithinRel(scale * lr_norm(q, r, 32 * 7), 1e-11));
  }
}

TEST_CASE("frame constants collapse on the uniform grid") {
  const auto constants = frame_constants_exact(make_uniform(16));
  CHECK_THAT(constants.lower, WithinRel(1.0 / kTwoPi, 1e-12));
  CHECK_THAT(constants.upper, WithinRel(1.0 / kTwoPi, 1e-12));
}

TEST_CASE("frame constants sit inside the perturbation bounds") {
  const auto [lo_bound, hi_bound] = mz_frame_bounds(0.2);
  CHECK_THAT(lo_bound, WithinRel(0.0077895973637639399223, 1e-13));
  CHECK_THAT(hi_bound, WithinRel(0.50356886844631703128, 1e-13));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto constants = frame_constants_exact(make_random(32, 0.2, seed));
    CHECK(constants.lower >= lo_bound - 1e-10);
    CHECK(constants.upper <= hi_bound + 1e-10);
    CHECK(constants.lower <= constants.upper);
  }
}

TEST_CASE("frame constants agree with an independent decomposition") {
  const auto grid = make_random(4, 0.2, 12);
  const auto constants = frame_constants_exact(grid);
  const auto singular = oracle::singular_values(oracle::dense_nudft(grid, 4));
  const double scale = 9.0 * kTwoPi;
  CHECK_THAT(constants.lower,
             WithinAbs(singular.front() * singular.front() / scale, 1e-10));
  CHECK_THAT(constants.upper,
             WithinAbs(singular.back() * singular.back() / scale, 1e-10));
}

TEST_CASE("random polynomials obey the exact sandwich") {
  const auto grid = make_random(16, 0.2, 6);
  const auto constants = frame_constants_exact(grid);
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    const auto q = random_unit_sphere_poly(16, 99, trial);
    const double integral = kTwoPi;  // unit coefficient sphere by Parseval
    const double mean = discrete_r_mean(q, grid, 2.0);
    CHECK(mean >= constants.lower * integral - 1e-10);
    CHECK(mean <= constants.upper * integral + 1e-10);
  }
}

TEST_CASE("empirical ratios stay inside the exact constants at r = 2") {
  const auto grid = make_random(8, 0.2, 14);
  const auto constants = frame_constants_exact(grid);
  const auto empirical = empirical_frame_ratios(grid, 2.0, 300, 5);
  CHECK(empirical.lower >= constants.lower - 1e-10);
  CHECK(empirical.upper <= constants.upper + 1e-10);
  CHECK(empirical.lower <= empirical.upper);
  CHECK(empirical.trials == 300);
}

TEST_CASE("empirical ratios exist off the Hilbert exponent") {
  const auto grid = make_random(6, 0.1, 2);
  const auto empirical = empirical_frame_ratios(grid, 4.0, 100, 8);
  CHECK(empirical.lower > 0.0);
  CHECK(empirical.lower <= empirical.upper);
}

TEST_CASE("frame decay rows stay flat below the quarter threshold") {
  FrameDecayOptions options;
  options.random_count = 5;
  const auto rows = frame_decay_experiment(0.1, {16, 64}, options);
  REQUIRE(rows.size() == 2);
  const double floor_bound = mz_frame_bounds(0.1).first;
  for (const auto& row : rows) {
    CHECK(row.lower >= floor_bound - 1e-10);
    CHECK(std::isfinite(row.lower_bound_phi));
    CHECK_THAT(row.lower_bound_phi, WithinRel(floor_bound, 1e-13));
  }
}

TEST_CASE("frame decay rows shrink above the quarter threshold") {
  FrameDecayOptions options;
  options.random_count = 0;
  const auto rows = frame_decay_experiment(0.4, {16, 64, 256}, options);
  REQUIRE(rows.size() == 3);
  const std::vector<double> frozen = {0.007295149489, 0.007290718415,
                                      0.007290427349};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].kind == GridKind::alternating);
    CHECK_THAT(rows[i].lower, WithinAbs(frozen[i], 1e-9));
    CHECK_FALSE(std::isfinite(rows[i].lower_bound_phi));
    if (i > 0) CHECK(rows[i].lower < rows[i - 1].lower);
  }
}

TEST_CASE("frame decay at zero perturbation is exactly flat") {
  const auto rows = frame_decay_experiment(0.0, {8, 16});
  for (const auto& row : rows) {
    CHECK(row.kind == GridKind::uniform);
    CHECK_THAT(row.lower, WithinRel(1.0 / kTwoPi, 1e-12));
    CHECK_THAT(row.upper, WithinRel(1.0 / kTwoPi, 1e-12));
  }
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "oracle.hpp"
#include "ptrig/bounds.hpp"
#include "ptrig/nudft.hpp"
#include "ptrig/random.hpp"

using namespace ptrig;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

complex_vector random_coeffs(int count, std::uint64_t seed) {
  complex_vector c(static_cast<std::size_t>(count));
  for (int t = 0; t < count; ++t)
    c[static_cast<std::size_t>(t)] =
        stream_complex_sym(seed, static_cast<std::uint64_t>(t));
  return c;
}

double rel_error(const complex_vector& got, const complex_vector& want) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += std::norm(got[i] - want[i]);
    den += std::norm(want[i]);
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace

TEST_CASE("forward action on elementary coefficient vectors") {
  const auto op = square_operator(make_random(6, 0.2, 5));
  complex_vector unit_dc(13, {0.0, 0.0});
  unit_dc[6] = {1.0, 0.0};
  const auto ones = apply_forward(op, unit_dc);
  for (const auto& v : ones.values) CHECK_THAT(std::abs(v - 1.0), WithinAbs(0.0, 1e-14));

  complex_vector unit_one(13, {0.0, 0.0});
  unit_one[7] = {1.0, 0.0};  // k = 1
  const auto column = apply_forward(op, unit_one);
  for (int j = -6; j <= 6; ++j) {
    const auto want = std::exp(std::complex<double>{0.0, -op.grid.node(j)});
    CHECK_THAT(std::abs(column.values[static_cast<std::size_t>(j + 6)] - want),
               WithinAbs(0.0, 1e-14));
  }
}

TEST_CASE("forward action matches the dense oracle") {
  for (double alpha : {0.0, 0.2}) {
    const auto grid = alpha == 0.0 ? make_uniform(16) : make_random(16, alpha, 3);
    const auto op = square_operator(grid);
    const auto coeffs = random_coeffs(op.cols(), 1234);
    const auto got = apply_forward(op, coeffs);
    const auto want = oracle::matvec(oracle::dense_nudft(grid, 16), coeffs);
    CHECK(rel_error(got.values, want) <= 1e-13);
  }
}

TEST_CASE("forward rejects length mismatch") {
  const auto op = square_operator(make_uniform(4));
  CHECK_THROWS_AS(apply_forward(op, complex_vector(5)), std::invalid_argument);
}

TEST_CASE("adjoint is the conjugate transpose of forward") {
  const auto op = square_operator(make_random(12, 0.24, 9));
  const auto c = random_coeffs(op.cols(), 77);
  auto f_raw = random_coeffs(op.rows(), 78);
  const auto fc = apply_forward(op, c);
  const auto f = samples_on(op.grid, f_raw);
  const auto adj_f = apply_adjoint(op, f);
  std::complex<double> lhs{0.0, 0.0}, rhs{0.0, 0.0};
  for (int i = 0; i < op.rows(); ++i)
    lhs += std::conj(fc.values[static_cast<std::size_t>(i)]) *
           f_raw[static_cast<std::size_t>(i)];
  for (int i = 0; i < op.cols(); ++i)
    rhs += std::conj(c[static_cast<std::size_t>(i)]) *
           adj_f[static_cast<std::size_t>(i)];
  CHECK_THAT(std::abs(lhs - rhs) / std::abs(lhs), WithinAbs(0.0, 1e-12));
}

TEST_CASE("adjoint of forward at the uniform grid scales by the node count") {
  const auto op = square_operator(make_uniform(8));
  const auto c = random_coeffs(op.cols(), 5);
  const auto back = apply_adjoint(op, apply_forward(op, c));
  for (int i = 0; i < op.cols(); ++i)
    CHECK_THAT(std::abs(back[static_cast<std::size_t>(i)] -
                        17.0 * c[static_cast<std::size_t>(i)]),
               WithinAbs(0.0, 1e-12));
  const auto zeros = apply_adjoint(op, samples_on(op.grid, complex_vector(17)));
  for (const auto& z : zeros) CHECK(std::abs(z) == 0.0);
}

TEST_CASE("dense materialization matches entrywise oracle") {
  const auto grid = make_random(9, 0.3, 21);
  const auto op = square_operator(grid);
  const auto dense = dense_matrix(op);
  const auto want = oracle::dense_nudft(grid, 9);
  for (int r = 0; r < op.rows(); ++r)
    for (int c = 0; c < op.cols(); ++c)
      CHECK_THAT(std::abs(dense[static_cast<std::size_t>(r) +
                                static_cast<std::size_t>(c) *
                                    static_cast<std::size_t>(op.rows())] -
                          want[static_cast<std::size_t>(r)]
                              [static_cast<std::size_t>(c)]),
                 WithinAbs(0.0, 1e-13));
}

TEST_CASE("gram matrix equals adjoint times forward") {
  const auto grid = make_random(7, 0.2, 4);
  const auto op = square_operator(grid);
  const auto gram = gram_matrix(op);
  const auto dense = oracle::dense_nudft(grid, 7);
  const auto want = oracle::matmul(oracle::conjugate_transpose(dense), dense);
  for (int r = 0; r < op.cols(); ++r)
    for (int c = 0; c < op.cols(); ++c)
      CHECK_THAT(std::abs(gram[static_cast<std::size_t>(r) +
                               static_cast<std::size_t>(c) *
                                   static_cast<std::size_t>(op.cols())] -
                          want[static_cast<std::size_t>(r)]
                              [static_cast<std::size_t>(c)]),
                 WithinAbs(0.0, 1e-11));
}

TEST_CASE("solver roundtrip recovers random coefficients") {
  const auto op = square_operator(make_random(128, 0.1, 11));
  const auto truth = random_coeffs(op.cols(), 42);
  const auto samples = apply_forward(op, truth);
  const auto report = solve_inverse(op, samples, 1e-10);
  CHECK(report.converged);
  CHECK(report.residual <= 1e-10);
  CHECK(rel_error(report.coefficients, truth) <= 1e-9);
}

TEST_CASE("solver inverts every perturbation regime below one half") {
  for (double alpha : {0.0, 0.1, 0.2, 0.24, 0.4}) {
    const auto grid = alpha == 0.0 ? make_uniform(32) : make_random(32, alpha, 6);
    const auto op = square_operator(grid);
    const auto truth = random_coeffs(op.cols(), 1000 + static_cast<int>(100 * alpha));
    const auto report = solve_inverse(op, apply_forward(op, truth), 1e-11);
    CHECK(report.converged);
    CHECK(rel_error(report.coefficients, truth) <= 1e-9);
  }
}

TEST_CASE("solver finishes in one iteration on the uniform grid") {
  const auto op = square_operator(make_uniform(64));
  const auto truth = random_coeffs(op.cols(), 8);
  const auto report = solve_inverse(op, apply_forward(op, truth), 1e-10);
  CHECK(report.converged);
  CHECK(report.iterations == 1);
}

TEST_CASE("solver failure is reported, not thrown") {
  const auto op = square_operator(make_random(64, 0.24, 2));
  const auto truth = random_coeffs(op.cols(), 3);
  const auto report = solve_inverse(op, apply_forward(op, truth), 1e-14, 2);
  CHECK_FALSE(report.converged);
  CHECK(report.iterations == 2);
  CHECK(report.residual > 0.0);
}

TEST_CASE("solver rejects rectangular operators and bad tolerances") {
  const auto grid = make_random(8, 0.1, 1);
  const auto rect = rect_operator(grid, 4);
  const auto samples = sample(grid, [](double) { return 1.0; });
  CHECK_THROWS_AS(solve_inverse(rect, samples, 1e-10), std::invalid_argument);
  const auto op = square_operator(grid);
  CHECK_THROWS_AS(solve_inverse(op, samples, 0.0), std::invalid_argument);
}

TEST_CASE("iteration counts stay flat as the grid grows") {
  std::vector<int> iterations;
  for (int half : {64, 256, 1024}) {
    const auto op = square_operator(make_random(half, 0.1, sweep_seed(6, 0, 0)));
    const auto truth = random_coeffs(op.cols(), 99);
    const auto report = solve_inverse(op, apply_forward(op, truth), 1e-10);
    REQUIRE(report.converged);
    iterations.push_back(report.iterations);
  }
  const auto [lo, hi] = std::minmax_element(iterations.begin(), iterations.end());
  CHECK(*hi <= 2 * *lo);
  CHECK(*hi <= 30);
}

TEST_CASE("singular values on the uniform grid all equal sqrt node count") {
  const auto op = square_operator(make_uniform(20));
  const auto [lo, hi] = extreme_singular_values(op);
  const double want = std::sqrt(41.0);
  CHECK_THAT(lo, WithinRel(want, 1e-12));
  CHECK_THAT(hi, WithinRel(want, 1e-12));
}

TEST_CASE("singular values match frozen references at N=4") {
  const auto op = square_operator(make_random(4, 0.1, 42));
  const auto [lo, hi] = extreme_singular_values(op);
  CHECK_THAT(hi, WithinAbs(3.302364027708415, 1e-10));
  CHECK_THAT(lo, WithinAbs(2.573518772045233, 1e-10));
}

TEST_CASE("singular values match the dense Jacobi oracle") {
  const auto grid = make_random(4, 0.2, 17);
  const auto op = square_operator(grid);
  const auto [lo, hi] = extreme_singular_values(op);
  const auto want = oracle::singular_values(oracle::dense_nudft(grid, 4));
  CHECK_THAT(lo, WithinAbs(want.front(), 1e-10));
  CHECK_THAT(hi, WithinAbs(want.back(), 1e-10));
}

TEST_CASE("iterative path agrees with the dense path") {
  const auto grid = make_random(16, 0.2, 23);
  const auto op = square_operator(grid);
  const auto [dense_lo, dense_hi] = extreme_singular_values(op);
  SingularValueOptions options;
  options.force_iterative = true;
  options.seed = 7;
  const auto [iter_lo, iter_hi] = extreme_singular_values(op, options);
  CHECK_THAT(iter_hi, WithinRel(dense_hi, 1e-6));
  CHECK_THAT(iter_lo, WithinRel(dense_lo, 1e-6));
}

TEST_CASE("dense path forced beyond the cap raises") {
  const auto op = square_operator(make_random(8, 0.1, 1));
  SingularValueOptions options;
  options.max_dense_dim = 5;
  options.force_dense = true;
  CHECK_THROWS_AS(extreme_singular_values(op, options), std::runtime_error);
}

TEST_CASE("singular values obey the perturbation sandwich") {
  const double p = phi(0.1);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto op = square_operator(make_random(48, 0.1, seed));
    const auto [lo, hi] = extreme_singular_values(op);
    const double root_m = std::sqrt(97.0);
    CHECK(lo >= (1.0 - p) * root_m - 1e-8);
    CHECK(hi <= (1.0 + p) * root_m + 1e-8);
  }
}

TEST_CASE("condition number is one at the uniform grid and bounded off it") {
  CHECK_THAT(condition_number(square_operator(make_uniform(32))),
             WithinAbs(1.0, 1e-12));
  const double bound = kadec_condition_bound(0.1);
  for (std::uint64_t seed = 20; seed < 25; ++seed) {
    const auto op = square_operator(make_random(64, 0.1, seed));
    CHECK(condition_number(op) <= bound + 1e-8);
  }
}

TEST_CASE("difference norm vanishes on the uniform grid") {
  const auto grid = make_uniform(24);
  CHECK(spectral_norm_diff(grid) <= 1e-12 * std::sqrt(49.0));
  CHECK(spectral_norm_diff(make_uniform(0)) == 0.0);
}

TEST_CASE("difference norm obeys the perturbation bound") {
  const double p = phi(0.1);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto grid = make_random(64, 0.1, seed);
    DiffNormOptions options;
    options.seed = seed;
    CHECK(spectral_norm_diff(grid, options) <= p * std::sqrt(129.0) + 1e-8);
  }
}

TEST_CASE("difference norm matches the dense Jacobi oracle") {
  const auto grid = make_random(6, 0.3, 8);
  const auto perturbed = oracle::dense_nudft(grid, 6);
  const auto uniform = oracle::dense_nudft(make_uniform(6), 6);
  oracle::cmatrix diff = perturbed;
  for (std::size_t r = 0; r < diff.size(); ++r)
    for (std::size_t c = 0; c < diff[0].size(); ++c)
      diff[r][c] = uniform[r][c] - perturbed[r][c];
  const double want = oracle::singular_values(diff).back();
  CHECK_THAT(spectral_norm_diff(grid), WithinAbs(want, 1e-9));
}

TEST_CASE("difference norm uses the matrix-free path beyond the cap") {
  const auto grid = make_random(20, 0.2, 31);
  DiffNormOptions dense_options;
  const double dense = spectral_norm_diff(grid, dense_options);
  DiffNormOptions free_options;
  free_options.max_dense_dim = 3;
  const double matrix_free = spectral_norm_diff(grid, free_options);
  CHECK_THAT(matrix_free, WithinRel(dense, 1e-8));
}

TEST_CASE("kadec report at the uniform grid sits exactly on the trivial side") {
  const auto report = kadec_check(make_uniform(16));
  CHECK(report.bounds_applicable);
  CHECK_THAT(report.diff_ratio.measured, WithinAbs(0.0, 1e-12));
  CHECK_THAT(report.sigma_min_ratio.measured, WithinAbs(1.0, 1e-12));
  CHECK_THAT(report.sigma_max_ratio.measured, WithinAbs(1.0, 1e-12));
  CHECK_THAT(report.condition.measured, WithinAbs(1.0, 1e-12));
  CHECK_THAT(report.lebesgue.measured, WithinAbs(1.0, 1e-12));
  CHECK(report.all_pass());
}

TEST_CASE("kadec report passes across a random sweep") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    KadecCheckOptions options;
    options.seed = seed;
    const auto report = kadec_check(make_random(128, 0.2, seed), options);
    CHECK(report.bounds_applicable);
    CHECK(report.all_pass());
  }
}

TEST_CASE("kadec report marks bounds inapplicable at large perturbations") {
  const auto report = kadec_check(make_random(32, 0.4, 3));
  CHECK_FALSE(report.bounds_applicable);
  CHECK_FALSE(report.condition.applicable);
  CHECK(std::isnan(report.condition.bound));
  CHECK(report.condition.measured > 1.0);
  CHECK(report.all_pass());  // vacuous by design
}

TEST_CASE("operators up to N of 8 match the dense oracle throughout") {
  for (int half : {1, 4, 8}) {
    const auto grid = make_random(half, 0.2, 55);
    const auto op = square_operator(grid);
    const auto dense = oracle::dense_nudft(grid, half);
    const auto coeffs = random_coeffs(op.cols(), 321);

    const auto forward = apply_forward(op, coeffs);
    const auto forward_want = oracle::matvec(dense, coeffs);
    CHECK(rel_error(forward.values, forward_want) <= 1e-10);

    const auto f = samples_on(grid, random_coeffs(op.rows(), 322));
    const auto adjoint = apply_adjoint(op, f);
    const auto adjoint_want =
        oracle::matvec(oracle::conjugate_transpose(dense), f.values);
    CHECK(rel_error(adjoint, adjoint_want) <= 1e-10);

    const auto report = solve_inverse(op, forward, 1e-12);
    const auto solve_want = oracle::solve(dense, forward_want);
    CHECK(rel_error(report.coefficients, solve_want) <= 1e-10);

    const auto [lo, hi] = extreme_singular_values(op);
    const auto sv = oracle::singular_values(dense);
    CHECK_THAT(lo, WithinAbs(sv.front(), 1e-10));
    CHECK_THAT(hi, WithinAbs(sv.back(), 1e-10));
  }
}

#include <cmath>

#include "cubeslice/ball_integral.hpp"
#include "doctest.h"
#include "oracle_values.hpp"

using namespace cubeslice;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("B(s) against frozen references") {
  for (const auto& [s, ref] : oracle::kBall) {
    CAPTURE(s);
    const IntegralResult b = ball_integral(s);
    CHECK(std::abs(b.value - ref) <= 1e-10);
    CHECK(std::abs(b.value - ref) <= b.err_bound + 1e-15);
    CHECK(b.err_bound <= 1e-10);
  }
}

TEST_CASE("B(2) identity and B(4) spline value") {
  CHECK(std::abs(ball_integral(2.0).value - 1.0) <= 1e-10);
  // 2 * integral_0^1 (1 - x)^2 dx
  CHECK(std::abs(ball_integral(4.0).value - 2.0 / 3.0) <= 1e-10);
  CHECK(ball_integral(100.0).value < std::sqrt(0.02));
}

TEST_CASE("B(s) domain and tolerance") {
  CHECK(code_of([] { ball_integral(1.0); }) == ErrorCode::DomainError);
  CHECK(code_of([] { ball_integral(0.5); }) == ErrorCode::DomainError);
  CHECK(code_of([] { ball_integral(NAN); }) == ErrorCode::DomainError);
  ToleranceConfig tight;
  tight.tail_cutoff = 10;
  CHECK(code_of([&] { ball_integral(2.0, tight); }) == ErrorCode::NonConvergent);
}

TEST_CASE("Gaussian comparison") {
  CHECK(gaussian_comparison(2.0) == 1.0);
  CHECK(gaussian_comparison(8.0) == 0.5);
  CHECK(gaussian_comparison(2.5) == doctest::Approx(0.894427191).epsilon(1e-9));
  for (double s : {2.0, 2.5, 7.0, 40.0}) {
    CHECK(std::abs(gaussian_comparison_quadrature(s) - gaussian_comparison(s)) < 1e-12);
  }
  CHECK(code_of([] { gaussian_comparison(0.0); }) == ErrorCode::DomainError);
}

TEST_CASE("coordinate factor") {
  CHECK(std::abs(coordinate_factor(kInvSqrt2) - kSqrt2) < 1e-10);
  CHECK(std::abs(coordinate_factor(0.5) - 4.0 / 3.0) < 1e-10);
  // Below 1/sqrt2 the factor stays under sqrt2 (s > 2).
  for (double c : {0.1, 0.3, 0.5, 0.7}) CHECK(coordinate_factor(c) < kSqrt2);
  // Above 1/sqrt2 (s < 2) it exceeds sqrt2; c = 0.9 is far from the bound.
  CHECK(std::abs(coordinate_factor(0.9) - oracle::kCoordinateFactor09) < 1e-9);
  CHECK(coordinate_factor(0.9) > kSqrt2);
  CHECK(code_of([] { coordinate_factor(1.0); }) == ErrorCode::DomainError);
  CHECK(code_of([] { coordinate_factor(0.0); }) == ErrorCode::DomainError);
}

TEST_CASE("alpha coefficients") {
  CHECK(alpha_coeff(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(alpha_coeff(1) - (kSqrt2 - 1.0) / kSqrt2) < 1e-14);
  CHECK(std::abs(alpha_coeff(2) - (1.0 - kSqrt2 + 1.0 / std::sqrt(3.0))) < 1e-14);
  for (int n = 0; n <= 20; ++n) {
    CAPTURE(n);
    // Alternating binomial sum: rounding grows like 2^n ulp.
    CHECK(std::abs(alpha_coeff_closed(n) - oracle::kAlpha[n]) < 1e-15 * std::pow(2.0, n));
    CHECK(std::abs(alpha_coeff_quadrature(n) - oracle::kAlpha[n]) < 1e-10);
  }
  CHECK(std::abs(alpha_coeff(30) - alpha_coeff_quadrature(30)) < 1e-14);
  CHECK(code_of([] { alpha_coeff_closed(61); }) == ErrorCode::Overflow);
  CHECK(code_of([] { alpha_coeff(-1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("beta coefficients") {
  for (int n = 0; n <= 20; ++n) {
    CAPTURE(n);
    const IntegralResult b = beta_coeff(n);
    CHECK(std::abs(b.value - oracle::kBeta[n]) < 1e-10);
  }
  const double b5 = beta_coeff(5).value;
  CHECK(b5 > alpha_coeff(5));
  CHECK(b5 < 1.0);
}

TEST_CASE("series coefficient table") {
  const SeriesCoefficients c = series_coefficients(21);
  REQUIRE(c.count == 21);
  for (int n = 1; n <= 20; ++n) CHECK(c.alphas[n] < c.betas[n]);
  CHECK(code_of([] { series_coefficients(0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("series partial sums") {
  const SeriesCoefficients c = series_coefficients(41);
  SUBCASE("s = 2 is the constant 1") {
    for (int N : {1, 5, 40}) {
      const SeriesPartial p = series_partial(2.0, c, N);
      CHECK(p.beta_sum == 1.0);
      CHECK(p.alpha_sum == 1.0);
    }
  }
  SUBCASE("s = 4 terminates after one term") {
    const SeriesPartial p = series_partial(4.0, c, 10);
    CHECK(std::abs(p.beta_sum - 2.0 / 3.0) < 1e-10);
    CHECK(std::abs(p.alpha_sum - kInvSqrt2) < 1e-12);
  }
  SUBCASE("s = 3, first term") {
    const SeriesPartial p = series_partial(3.0, c, 1);
    CHECK(std::abs((1.0 - p.alpha_sum) - 0.5 * alpha_coeff(1)) < 1e-14);
    CHECK(std::abs((1.0 - p.beta_sum) - 0.5 / 3.0) < 1e-10);
  }
  SUBCASE("partial sums decrease towards the limits") {
    // Every e_n (n >= 1) is negative for 2 < s < 4, so the sums approach
    // from above; the decay is only algebraic in N.
    const double b = ball_integral(2.5).value;
    double prev = INFINITY;
    for (int N : {5, 10, 20, 40}) {
      const SeriesPartial p = series_partial(2.5, c, N);
      CHECK(p.beta_sum > b);
      CHECK(p.alpha_sum > gaussian_comparison(2.5));
      CHECK(p.beta_sum < prev);
      prev = p.beta_sum;
    }
  }
  CHECK(code_of([&] { series_partial(5.0, c, 3); }) == ErrorCode::DomainError);
  CHECK(code_of([&] { series_partial(3.0, c, 41); }) == ErrorCode::InvalidArgument);
  CHECK(std::abs(series_partial(3.0, 7).beta_sum - series_partial(3.0, c, 7).beta_sum) < 1e-14);
}

TEST_CASE("first-term bound") {
  CHECK(first_term_bound(0.0) == 2.0);
  CHECK(first_term_bound(1.0) == doctest::Approx(51.456).epsilon(1e-4));
  CHECK(first_term_bound(0.01) == doctest::Approx(2.4946).epsilon(1e-4));
}

TEST_CASE("reverse bound threshold") {
  for (const auto& [d, ref] : oracle::kSStar) {
    CAPTURE(d);
    const ThresholdResult t = reverse_bound_threshold(d);
    CHECK(std::abs(t.value - ref) < 2e-8);
    CHECK(t.within_lemma_bound);
    CHECK(t.within_first_term_bound);
    CHECK(t.warning.empty());
  }
  const double small = reverse_bound_threshold(1e-6).value;
  CHECK(small > 2.0);
  CHECK(small < 2.0001);
  CHECK(reverse_bound_threshold(0.001).value <= 2.05);
  const double s01 = reverse_bound_threshold(0.01).value;
  CHECK(s01 <= 2.5);
  CHECK(s01 <= 2.0 + 0.01 * 49.46);
  CHECK(code_of([] { reverse_bound_threshold(0.0); }) == ErrorCode::DomainError);
  CHECK(code_of([] { reverse_bound_threshold(0.5); }) == ErrorCode::DomainError);
}

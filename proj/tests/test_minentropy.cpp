#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "cubeslice/cube_section.hpp"
#include "cubeslice/minentropy.hpp"
#include "doctest.h"

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

std::vector<Distribution> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_distributions(in);
}

Distribution triangle() { return convolve(Distribution::uniform(0, 1), Distribution::uniform(0, 1)); }

}  // namespace

TEST_CASE("M and N_inf") {
  CHECK(m_functional(Distribution::uniform(0, 1)) == doctest::Approx(1.0));
  CHECK(std::isinf(m_functional(Distribution::point(0))));
  CHECK(n_infinity(Distribution::point(0)) == 0.0);
  CHECK(m_functional(triangle()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(n_infinity(Distribution::uniform(0, 1)) == doctest::Approx(1.0));
  CHECK(n_infinity(Distribution::uniform(0, 3.5)) == doctest::Approx(12.25));
}

TEST_CASE("scaling") {
  const Distribution u2 = scale(Distribution::uniform(0, 1), 2.0);
  CHECK(u2.pdf().lo() == doctest::Approx(0.0));
  CHECK(u2.pdf().hi() == doctest::Approx(2.0));
  CHECK(n_infinity(u2) == doctest::Approx(4.0));
  const Distribution p = scale(Distribution::point(3), -1.0);
  CHECK(p.is_point());
  CHECK(p.location() == -3.0);
  CHECK(n_infinity(scale(triangle(), 0.5)) == doctest::Approx(n_infinity(triangle()) / 4));
  CHECK(code_of([] { scale(Distribution::uniform(0, 1), 0.0); }) == ErrorCode::ZeroScale);
}

TEST_CASE("convolution of laws") {
  const Distribution t = triangle();
  CHECK(t.pdf().lo() == doctest::Approx(0.0));
  CHECK(t.pdf().hi() == doctest::Approx(2.0));
  CHECK(t.pdf()(1.0) == doctest::Approx(1.0));

  const Distribution shifted = convolve(Distribution::uniform(0, 1), Distribution::point(5));
  CHECK(shifted.pdf().lo() == doctest::Approx(5.0));
  CHECK(shifted.pdf().hi() == doctest::Approx(6.0));
  CHECK(convolve(Distribution::point(1), Distribution::point(2)).location() == 3.0);

  const Distribution three = sum_of({Distribution::uniform(0, 1), Distribution::uniform(0, 1), Distribution::uniform(0, 1)});
  CHECK(three.pdf()(1.5) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(m_functional(three) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(n_infinity(three) == doctest::Approx(16.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("density validation") {
  CHECK(code_of([] { Distribution::density(PiecewisePoly::constant(0, 1, 0.5)); }) == ErrorCode::InvalidDensity);
  // Integrates to 1 but dips below zero.
  CHECK(code_of([] { Distribution::density(PiecewisePoly({0.0, 1.0}, {{2.5, -3.0}})); }) ==
        ErrorCode::InvalidDensity);
  CHECK(code_of([] { Distribution::uniform(1, 1); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { Distribution::uniform_on({}); }) == ErrorCode::EmptySet);
  CHECK(code_of([] { Distribution::uniform_on({{0, 0}}); }) == ErrorCode::EmptySet);
  CHECK(code_of([] { Distribution::uniform_on({{0, 2}, {1, 3}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { Distribution::point(INFINITY); }) == ErrorCode::NonFinite);
  CHECK(code_of([] { Distribution::point(0).pdf(); }) == ErrorCode::InvalidArgument);

  const Distribution u = Distribution::uniform_on({{2, 3}, {0, 1}});
  CHECK(u.pdf()(0.5) == doctest::Approx(0.5));
  CHECK(u.pdf()(1.5) == 0.0);
  CHECK(u.pdf()(2.5) == doctest::Approx(0.5));
}

TEST_CASE("sum min-entropy") {
  const Distribution u = Distribution::uniform(0, 1);
  const EpiReport two = sum_min_entropy({u, u});
  CHECK(two.lhs == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(two.rhs == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(two.slack) <= 1e-12);

  const EpiReport three = sum_min_entropy({u, u, u});
  CHECK(three.lhs == doctest::Approx(16.0 / 9.0));
  CHECK(three.rhs == doctest::Approx(1.5));
  CHECK(three.slack > 0.0);

  const EpiReport mixed = sum_min_entropy({u, Distribution::point(7), Distribution::uniform(-1, 0)});
  CHECK(mixed.lhs == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mixed.rhs == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(mixed.slack) <= 1e-12);

  CHECK(code_of([&] { sum_min_entropy({u}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("Rogozin comparison") {
  const Distribution u = Distribution::uniform(0, 1);
  const RogozinResult same = rogozin_compare({u, Distribution::uniform(-1, 1)});
  CHECK(same.sum_x == doctest::Approx(same.sum_z).epsilon(1e-12));
  CHECK(same.holds);
  CHECK(same.routes_agree);

  const Distribution step = Distribution::density(PiecewisePoly({0.0, 0.25, 1.0}, {{2.0}, {2.0 / 3.0}}));
  const RogozinResult r = rogozin_compare({u, step});
  CHECK(r.sum_x >= r.sum_z);
  CHECK(r.holds);
  CHECK(r.routes_agree);
  CHECK(r.sum_z == doctest::Approx(r.sum_z_section).epsilon(1e-10));
}

TEST_CASE("section identity for weighted uniform sums") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(0.05, 1.0);
  for (int n = 2; n <= 6; ++n) {
    std::vector<double> th(n);
    for (double& x : th) x = U(rng);
    const Direction theta = Direction::normalize(th);
    std::vector<Distribution> us;
    for (double x : theta.coords()) us.push_back(Distribution::uniform(-x / 2, x / 2));
    const double sig = section_volume({theta, 0.0}).value;
    CHECK(std::abs(n_infinity(sum_of(us)) - 1.0 / (sig * sig)) < 1e-10);
  }
}

TEST_CASE("equality cases") {
  SUBCASE("single interval") {
    const auto xs = equality_case_construct({{0, 1}}, 0.0, {});
    CHECK(n_infinity(xs[0]) == doctest::Approx(1.0));
    CHECK(n_infinity(xs[1]) == doctest::Approx(1.0));
    CHECK(std::abs(sum_min_entropy(xs).slack) <= 1e-12);
  }
  SUBCASE("two intervals") {
    const auto xs = equality_case_construct({{0, 1}, {2, 3}}, 0.0, {});
    CHECK(n_infinity(xs[0]) == doctest::Approx(4.0));
    CHECK(n_infinity(xs[1]) == doctest::Approx(4.0));
    const EpiReport r = sum_min_entropy(xs);
    CHECK(r.lhs == doctest::Approx(4.0));
    CHECK(std::abs(r.slack) <= 1e-12);
  }
  SUBCASE("translated with a point mass") {
    const auto xs = equality_case_construct({{0, 1}}, 5.0, {-2.0});
    REQUIRE(xs.size() == 3);
    CHECK(xs[2].is_point());
    CHECK(std::abs(sum_min_entropy(xs).slack) <= 1e-12);
  }
  CHECK(code_of([] { equality_case_construct({}, 0.0, {}); }) == ErrorCode::EmptySet);
}

TEST_CASE("quantitative EPI report") {
  const Distribution u = Distribution::uniform(0, 1);
  SUBCASE("two uniforms") {
    const EpiReport r = quantitative_epi_report({u, u}, 0.01);
    CHECK(r.hypothesis_holds);
    REQUIRE(r.indices.has_value());
    CHECK(*r.indices == std::pair<std::size_t, std::size_t>{0, 1});
    CHECK(r.certified);
    CHECK(r.hypothesis_lhs == doctest::Approx(r.hypothesis_lhs_direct).epsilon(1e-12));
  }
  SUBCASE("three uniforms") {
    const EpiReport r = quantitative_epi_report({u, u, u}, 0.01);
    CHECK_FALSE(r.hypothesis_holds);
    CHECK_FALSE(r.certified);
    CHECK(r.hypothesis_lhs == doctest::Approx(0.99 * 0.99 * 16.0 / 9.0));
  }
  SUBCASE("one narrow summand") {
    const EpiReport r = quantitative_epi_report({u, u, Distribution::uniform(0, 0.05)}, 0.01);
    CHECK(r.tail == doctest::Approx(0.0025));
    CHECK(r.tail <= 50 * 0.01 * 2.0025);
    // The narrow box lowers the peak to 1 - 0.0125, which is already more
    // than the 1% allowance, so the hypothesis is not met here.
    CHECK(r.lhs == doctest::Approx(1.0 / (0.9875 * 0.9875)).epsilon(1e-12));
    CHECK_FALSE(r.hypothesis_holds);
  }
  SUBCASE("very narrow summand meets the hypothesis") {
    const EpiReport r = quantitative_epi_report({u, u, Distribution::uniform(0, 0.005)}, 0.01);
    CHECK(r.hypothesis_holds);
    CHECK(r.certified);
    CHECK(r.tail == doctest::Approx(0.000025));
  }
  CHECK(code_of([&] { quantitative_epi_report({u, u}, 0.02); }) == ErrorCode::EpsilonOutOfRange);
}

TEST_CASE("density file parsing") {
  SUBCASE("blocks, comments and points") {
    const auto xs = parse(
        "# two densities and a point\n"
        "0 1 1\n"
        "\n"
        "0 0.5 0 4   # ramp 4x\n"
        "0.5 1 2 -4  # back down to 0\n"
        "---\n"
        "point 2.5\n");
    REQUIRE(xs.size() == 3);
    CHECK(n_infinity(xs[0]) == doctest::Approx(1.0));
    CHECK(xs[2].is_point());
    CHECK(xs[2].location() == 2.5);
  }
  SUBCASE("gaps become zero pieces") {
    const auto xs = parse("0 1 0.5\n2 3 0.5\n");
    REQUIRE(xs.size() == 1);
    CHECK(xs[0].pdf()(1.5) == 0.0);
    CHECK(xs[0].pdf().integral() == doctest::Approx(1.0));
  }
  SUBCASE("near-unit mass is rescaled") {
    const auto xs = parse("0 1 1.0000005\n");
    CHECK(xs[0].pdf().integral() == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(code_of([] { parse("0 1 0.9\n"); }) == ErrorCode::InvalidDensity);
  CHECK(code_of([] { parse("0 1\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse("0 1 abc\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse("1 0 1\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse("0 1 1\n0.5 1.5 1\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse("point\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse("point 1 2\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse("# nothing\n\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse("0 1 1 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0\n"); }) == ErrorCode::DegreeOverflow);
}

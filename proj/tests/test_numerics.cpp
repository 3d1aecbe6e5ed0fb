#include <cmath>
#include <vector>

#include "cubeslice/core.hpp"
#include "cubeslice/piecewise.hpp"
#include "cubeslice/polynomial.hpp"
#include "cubeslice/quadrature.hpp"
#include "doctest.h"

using namespace cubeslice;

namespace {

// Irwin-Hall density of the sum of n uniforms on [0, 1].
double irwin_hall(int n, double x) {
  if (x <= 0.0 || x >= n) return 0.0;
  double s = 0.0, binom = 1.0, fact = 1.0;
  for (int j = 1; j < n; ++j) fact *= j;
  for (int k = 0; k <= static_cast<int>(std::floor(x)); ++k) {
    s += ((k % 2) ? -1.0 : 1.0) * binom * std::pow(x - k, n - 1);
    binom = binom * (n - k) / (k + 1);
  }
  return s / fact;
}

}  // namespace

TEST_CASE("Gauss-Legendre rules") {
  for (int n : {1, 2, 5, 16, 32}) {
    const auto& r = quad::gauss_legendre(n);
    REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
    double w = 0.0;
    for (double x : r.weights) w += x;
    CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
    // Exact for degree 2n - 1.
    const int d = 2 * n - 1;
    const double q = quad::gauss([&](double x) { return std::pow(x, d - (d % 2)); }, 0.0, 1.0, r);
    CHECK(q == doctest::Approx(1.0 / (d - (d % 2) + 1)).epsilon(1e-13));
  }
  CHECK(&quad::gauss_legendre(16) == &quad::gauss_legendre(16));
}

TEST_CASE("adaptive Gauss") {
  const auto e = quad::adaptive_gauss([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-13);
  CHECK(std::abs(e.value - (std::exp(1.0) - 1.0)) < 1e-13);
  // Kink at 1/3 forces subdivision.
  const auto k = quad::adaptive_gauss([](double x) { return std::abs(x - 1.0 / 3.0); }, 0.0, 1.0, 1e-11);
  CHECK(std::abs(k.value - (1.0 / 18.0 + 2.0 / 9.0)) < 1e-10);
}

TEST_CASE("mapped lobe rule") {
  const quad::MappedLobeRule sin2([](double x) { return std::pow(std::sin(kPi * x), 2); });
  CHECK(sin2.mean().value == doctest::Approx(0.5).epsilon(1e-14));
  const auto e = sin2.integrate([](double x) { return x; }, 1e-14);
  CHECK(e.value == doctest::Approx(0.25).epsilon(1e-13));

  // |sin|^s with a non-integer s: mean is Gamma((s+1)/2) / (sqrt(pi) Gamma(s/2 + 1)).
  const double s = 2.37;
  const quad::MappedLobeRule w([&](double x) { return std::pow(std::abs(std::sin(kPi * x)), s); });
  const double ref = std::exp(std::lgamma((s + 1) / 2) - std::lgamma(s / 2 + 1)) / std::sqrt(kPi);
  CHECK(std::abs(w.mean().value - ref) < 1e-13);

  CHECK(quad::smoothstep5(0.0) == 0.0);
  CHECK(quad::smoothstep5(1.0) == 1.0);
  CHECK(quad::smoothstep5(0.5) == doctest::Approx(0.5));
  CHECK(quad::smoothstep5_prime(0.0) == 0.0);
  CHECK(quad::smoothstep5_prime(0.5) == doctest::Approx(1.875));
}

TEST_CASE("polynomial algebra") {
  const poly::Poly p{1.0, -3.0, 2.0};  // (x - 1)(2x - 1)
  CHECK(poly::eval(p, 2.0) == 3.0);
  CHECK(poly::derivative(p) == poly::Poly{-3.0, 4.0});
  CHECK(poly::antiderivative(p) == poly::Poly{0.0, 1.0, -1.5, 2.0 / 3.0});
  const poly::Poly sh = poly::taylor_shift(p, 1.0);
  for (double x : {-1.0, 0.0, 0.3, 2.0}) CHECK(poly::eval(sh, x) == doctest::Approx(poly::eval(p, x + 1.0)));
  const poly::Poly sc = poly::rescale(p, -2.0);
  CHECK(poly::eval(sc, 0.7) == doctest::Approx(poly::eval(p, -1.4)));
  CHECK(poly::integral(p, 0.0, 1.0) == doctest::Approx(1.0 - 1.5 + 2.0 / 3.0));

  poly::Poly z{0.0, 0.0};
  poly::trim(z);
  CHECK(z.empty());
  CHECK(poly::degree(p) == 2);

  const auto r = poly::roots_in(p, 0.0, 2.0);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(0.5));
  CHECK(r[1] == doctest::Approx(1.0));
  CHECK(poly::min_on(p, 0.0, 2.0) == doctest::Approx(-0.125));
  CHECK(poly::max_on(p, 0.0, 2.0) == doctest::Approx(3.0));
}

TEST_CASE("roots of a clustered polynomial") {
  // (x - 0.1)(x - 0.2)(x - 0.3)(x - 0.9)
  poly::Poly p{1.0};
  for (double r : {0.1, 0.2, 0.3, 0.9}) {
    poly::Poly q(p.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i] -= r * p[i];
      q[i + 1] += p[i];
    }
    p = q;
  }
  const auto roots = poly::roots_in(p, 0.0, 1.0);
  REQUIRE(roots.size() == 4);
  CHECK(roots[0] == doctest::Approx(0.1).epsilon(1e-10));
  CHECK(roots[3] == doctest::Approx(0.9).epsilon(1e-10));
}

TEST_CASE("piecewise basics") {
  CHECK_THROWS_AS(PiecewisePoly({0.0, 0.0}, {{1.0}}), Error);
  CHECK_THROWS_AS(PiecewisePoly({0.0, 1.0, 2.0}, {{1.0}}), Error);

  const PiecewisePoly u = PiecewisePoly::constant(0.0, 2.0, 0.5);
  CHECK(u.integral() == doctest::Approx(1.0));
  CHECK(u(-0.1) == 0.0);
  CHECK(u(1.0) == 0.5);
  CHECK(u(2.5) == 0.0);
  CHECK(u.max() == 0.5);

  const PiecewisePoly t = u.translated(3.0);
  CHECK(t.lo() == 3.0);
  CHECK(t(4.0) == 0.5);

  const PiecewisePoly s = u.scaled(-2.0);
  CHECK(s.lo() == doctest::Approx(-4.0));
  CHECK(s.hi() == doctest::Approx(0.0));
  CHECK(s(-1.0) == doctest::Approx(0.25));
  CHECK(s.integral() == doctest::Approx(1.0));
  CHECK(u.times(4.0).max() == 2.0);
}

TEST_CASE("convolution reproduces Irwin-Hall") {
  const PiecewisePoly u = PiecewisePoly::constant(0.0, 1.0, 1.0);
  PiecewisePoly f = u;
  for (int n = 2; n <= 8; ++n) {
    f = convolve(f, u);
    CHECK(f.degree() == n - 1);
    CHECK(f.integral() == doctest::Approx(1.0).epsilon(1e-12));
    for (double x = 0.05; x < n; x += 0.173) CHECK(std::abs(f(x) - irwin_hall(n, x)) < 1e-12);
  }
}

TEST_CASE("convolution with unequal widths and a ramp") {
  // Triangle-shaped result of two unequal boxes: trapezoid with plateau 1/2.
  const PiecewisePoly a = PiecewisePoly::constant(0.0, 1.0, 1.0);
  const PiecewisePoly b = PiecewisePoly::constant(0.0, 2.0, 0.5);
  const PiecewisePoly c = convolve(a, b);
  CHECK(c(0.5) == doctest::Approx(0.25));
  CHECK(c(1.5) == doctest::Approx(0.5));
  CHECK(c(2.5) == doctest::Approx(0.25));
  CHECK(c.max() == doctest::Approx(0.5));

  // Ramp 2x on [0,1] against a unit box: (z^2) on [0,1], 1 - (z-1)^2 on [1,2].
  const PiecewisePoly ramp({0.0, 1.0}, {{0.0, 2.0}});
  const PiecewisePoly r = convolve(ramp, a);
  CHECK(r(0.5) == doctest::Approx(0.25));
  CHECK(r(1.5) == doctest::Approx(0.75));
  CHECK(r.integral() == doctest::Approx(1.0));
}

TEST_CASE("degree overflow") {
  const PiecewisePoly u = PiecewisePoly::constant(0.0, 1.0, 1.0);
  PiecewisePoly f = u;
  for (int n = 2; n <= kMaxDegree + 1; ++n) f = convolve(f, u);
  CHECK(f.degree() == kMaxDegree);
  try {
    convolve(f, u);
    FAIL("expected DegreeOverflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegreeOverflow);
  }
}

#include "cubeslice/ball_integral.hpp"

#include <cmath>
#include <limits>

#include "cubeslice/quadrature.hpp"

namespace cubeslice {

namespace {

// Sinc-power integral over [0, 1] where the integrand is not of the
// weight-times-smooth form (g would blow up at 0).
quad::Estimate first_lobe(double s, double tol) {
  static const quad::MappedLobeRule unit([](double) { return 1.0; });
  return unit.integrate(
      [s](double x) {
        const double px = kPi * x;
        const double v = px < 1e-8 ? 1.0 - px * px / 6.0 : std::sin(px) / px;
        return std::pow(std::abs(v), s);
      },
      tol);
}

}  // namespace

IntegralResult ball_integral(double s, const ToleranceConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(s) || s <= 1.0) throw Error(ErrorCode::DomainError, "B(s) diverges for s <= 1");
  const quad::MappedLobeRule rule([s](double x) { return std::pow(std::abs(std::sin(kPi * x)), s); });
  const quad::Estimate mean = rule.mean();
  const double c = mean.value;

  // Choose K so that the tail remainder uses at most a quarter of the budget.
  const double budget = 0.25 * cfg.quad_abs_tol;
  const double coef = c * (1.0 - c) * s * std::pow(kPi, -s);  // both sides: 2 * (1/2)
  double K = std::ceil(std::pow(coef / budget, 1.0 / (s + 1.0)));
  K = std::max(K, 8.0);
  if (K > static_cast<double>(cfg.tail_cutoff)) {
    throw Error(ErrorCode::NonConvergent, "B(" + format_double(s) + ") needs " + format_double(K) +
                                              " lobes, beyond tail_cutoff");
  }
  const long nK = static_cast<long>(K);
  const double lobe_tol = 0.25 * cfg.quad_abs_tol / static_cast<double>(nK);

  CompensatedSum sum;
  double qerr = 0.0;
  const quad::Estimate l0 = first_lobe(s, lobe_tol);
  sum.add(l0.value);
  qerr += l0.err;
  for (long k = 1; k < nK; ++k) {
    const double kd = static_cast<double>(k);
    const quad::Estimate e = rule.integrate([&](double x) { return std::pow(kPi * (kd + x), -s); }, lobe_tol);
    sum.add(e.value);
    qerr += e.err;
  }
  const double tail_g = std::pow(kPi, -s) * std::pow(K, 1.0 - s) / (s - 1.0);
  sum.add(c * tail_g);
  const double tail_err = 0.5 * c * (1.0 - c) * s * std::pow(kPi, -s) * std::pow(K, -s - 1.0) + mean.err * tail_g;

  IntegralResult r;
  r.value = 2.0 * sum.value();
  r.err_bound = 2.0 * (qerr + tail_err) + 4.0 * std::numeric_limits<double>::epsilon() * sum.abs_sum();
  r.method = Method::Quadrature;
  r.detail = "lobes=" + std::to_string(nK) + ", mean-value tail";
  if (r.err_bound > cfg.quad_abs_tol) {
    throw Error(ErrorCode::NonConvergent, "B(" + format_double(s) + ") error bound " + format_double(r.err_bound));
  }
  return r;
}

double gaussian_comparison(double s) {
  if (!(s > 0)) throw Error(ErrorCode::DomainError, "s must be positive");
  return std::sqrt(2.0 / s);
}

double gaussian_comparison_quadrature(double s) {
  if (!(s > 0)) throw Error(ErrorCode::DomainError, "s must be positive");
  const double a = 0.5 * s / kPi;  // exp(-a t^2)
  // exp(-a t^2) < 1e-30 beyond T.
  const double T = std::sqrt(70.0 / a);
  const auto e = quad::adaptive_gauss([a](double t) { return std::exp(-a * t * t); }, 0.0, T, 1e-14);
  return 2.0 * e.value / kPi;
}

double coordinate_factor(double c, const ToleranceConfig& cfg) {
  if (!(c > 0.0) || !(c < 1.0)) {
    throw Error(ErrorCode::DomainError, "coordinate must lie in (0, 1); c = 1 gives a divergent integral");
  }
  const double s = 1.0 / (c * c);
  return std::sqrt(s) * ball_integral(s, cfg).value;
}

double alpha_coeff_closed(int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "n must be nonnegative");
  if (n > 60) throw Error(ErrorCode::Overflow, "binomial form cancels catastrophically for n > 60");
  CompensatedSum s;
  double binom = 1.0;
  for (int j = 0; j <= n; ++j) {
    s.add((j % 2 ? -binom : binom) / std::sqrt(j + 1.0));
    binom = binom * (n - j) / (j + 1.0);
  }
  return s.value();
}

double alpha_coeff_quadrature(int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "n must be nonnegative");
  // exp(-t^2/pi) < 1e-30 beyond T.
  const double T = std::sqrt(70.0 * kPi);
  const auto e = quad::adaptive_gauss(
      [n](double t) {
        const double g = std::exp(-t * t / kPi);
        return g * std::pow(-std::expm1(-t * t / kPi), n);
      },
      0.0, T, 1e-15);
  return 2.0 * e.value / kPi;
}

double alpha_coeff(int n) { return n <= 20 ? alpha_coeff_closed(n) : alpha_coeff_quadrature(n); }

IntegralResult beta_coeff(int n, const ToleranceConfig& cfg) {
  cfg.validate();
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "n must be nonnegative");
  // Tail beyond T = K pi lies in [int q - n int q^2, int q] with
  // int_T^inf q = 1/(2T) +- pi^2/(4T^3) and int_T^inf q^2 <= 1/(3T^3).
  const double budget = 0.25 * cfg.quad_abs_tol * kPi / 2.0;
  const double c3 = kPi * kPi / 4.0 + n / 6.0;
  double K = std::ceil(std::cbrt(c3 / budget) / kPi);
  K = std::max(K, 4.0);
  if (K > static_cast<double>(cfg.tail_cutoff)) throw Error(ErrorCode::NonConvergent, "beta_n tail too long");
  const long nK = static_cast<long>(K);
  const double T = K * kPi;
  auto integrand = [n](double t) {
    double q;
    if (std::abs(t) < 1e-4) {
      const double t2 = t * t;
      q = 1.0 - t2 / 3.0 + 2.0 * t2 * t2 / 45.0;
    } else {
      const double v = std::sin(t) / t;
      q = v * v;
    }
    return q * std::pow(1.0 - q, n);
  };
  const double lobe_tol = 0.25 * cfg.quad_abs_tol / static_cast<double>(nK);
  CompensatedSum sum;
  double qerr = 0.0;
  for (long k = 0; k < nK; ++k) {
    const auto e = quad::adaptive_gauss(integrand, k * kPi, (k + 1) * kPi, lobe_tol);
    sum.add(e.value);
    qerr += e.err;
  }
  const double T3 = T * T * T;
  sum.add(1.0 / (2.0 * T) - n / (6.0 * T3));
  const double tail_err = kPi * kPi / (4.0 * T3) + n / (6.0 * T3);
  IntegralResult r;
  r.value = 2.0 * sum.value() / kPi;
  r.err_bound = 2.0 * (qerr + tail_err) / kPi;
  r.method = Method::Quadrature;
  r.detail = "lobes=" + std::to_string(nK);
  if (r.err_bound > cfg.quad_abs_tol) throw Error(ErrorCode::NonConvergent, "beta_n error bound too large");
  return r;
}

SeriesCoefficients series_coefficients(int count, const ToleranceConfig& cfg) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "count must be positive");
  SeriesCoefficients sc;
  sc.count = count;
  for (int n = 0; n < count; ++n) {
    const double a = alpha_coeff(n);
    const double b = beta_coeff(n, cfg).value;
    if (n >= 1 && !(a < b && a > 0 && b < 1)) {
      throw Error(ErrorCode::InvalidArgument, "ordering alpha_n < beta_n fails at n = " + std::to_string(n));
    }
    sc.alphas.push_back(a);
    sc.betas.push_back(b);
  }
  return sc;
}

SeriesPartial series_partial(double s, const SeriesCoefficients& coeffs, int N) {
  if (!(s >= 2.0 && s <= 4.0)) throw Error(ErrorCode::DomainError, "series form needs s in [2, 4]");
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "N must be positive");
  if (N >= coeffs.count) throw Error(ErrorCode::InvalidArgument, "not enough stored coefficients");
  const double sig = 0.5 * s - 1.0;
  SeriesPartial p{1.0, 1.0};
  double e = 1.0;
  for (int n = 1; n <= N; ++n) {
    e *= (n - 1.0 - sig) / n;  // e_n = (-1)^n binom(sig, n), nonpositive here
    p.beta_sum += e * coeffs.betas[n];
    p.alpha_sum += e * coeffs.alphas[n];
  }
  return p;
}

SeriesPartial series_partial(double s, int N, const ToleranceConfig& cfg) {
  if (!(s >= 2.0 && s <= 4.0)) throw Error(ErrorCode::DomainError, "series form needs s in [2, 4]");
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "N must be positive");
  return series_partial(s, series_coefficients(N + 1, cfg), N);
}

double first_term_bound(double delta) {
  if (delta < 0) throw Error(ErrorCode::DomainError, "delta must be nonnegative");
  return 2.0 + delta * 6.0 * kSqrt2 / (3.0 - 2.0 * kSqrt2);
}

ThresholdResult reverse_bound_threshold(double delta, const ToleranceConfig& cfg) {
  if (!(delta > 0.0 && delta <= 0.02)) throw Error(ErrorCode::DomainError, "delta must lie in (0, 0.02]");
  auto g = [&](double s) { return ball_integral(s, cfg).value * std::sqrt(s / 2.0) - (1.0 - delta); };
  ThresholdResult r;
  double lo = 2.0, hi = 3.0;
  if (g(hi) >= 0.0) {
    hi = 6.0;
    r.warning = "g(3) >= 0; bracket extended to [2, 6]";
    if (g(hi) >= 0.0) throw Error(ErrorCode::BracketFailure, "g does not change sign on [2, 6]");
  }
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  r.value = lo;
  r.within_lemma_bound = r.value >= 2.0 && r.value <= 2.0 + 50.0 * delta + 1e-8;
  r.within_first_term_bound = r.value <= first_term_bound(delta) + 1e-8;
  return r;
}

}  // namespace cubeslice

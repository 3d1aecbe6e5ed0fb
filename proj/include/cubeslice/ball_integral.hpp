#pragma once

#include <string>
#include <vector>

#include "cubeslice/core.hpp"

namespace cubeslice {

/// B(s) = integral over R of |sin(pi u) / (pi u)|^s du, for s > 1.
///
/// Lobes [k, k+1] are integrated with the mapped Gauss rule. Beyond K lobes the
/// periodic factor |sin(pi u)|^s is replaced by its mean c_s, with the
/// remainder bounded by (c_s (1 - c_s) / 2) |g'(K)| for g(u) = (pi u)^-s.
/// Throws DomainError for s <= 1 and NonConvergent if err_bound exceeds
/// cfg.quad_abs_tol or K would exceed cfg.tail_cutoff.
IntegralResult ball_integral(double s, const ToleranceConfig& cfg = {});

/// sqrt(2 / s).
double gaussian_comparison(double s);
/// Quadrature of (1/pi) * integral exp(-(s/2) t^2 / pi) dt; equals sqrt(2/s).
double gaussian_comparison_quadrature(double s);

/// sqrt(s) B(s) with s = 1 / c^2, for c in (0, 1).
double coordinate_factor(double c, const ToleranceConfig& cfg = {});

/// alpha_n = (1/pi) integral exp(-t^2/pi) (1 - exp(-t^2/pi))^n dt.
/// Binomial closed form up to n = 20, quadrature beyond.
double alpha_coeff(int n);
double alpha_coeff_closed(int n);
double alpha_coeff_quadrature(int n);

/// beta_n = (1/pi) integral (sin^2 t / t^2) (1 - sin^2 t / t^2)^n dt.
IntegralResult beta_coeff(int n, const ToleranceConfig& cfg = {});

struct SeriesCoefficients {
  std::vector<double> alphas;
  std::vector<double> betas;
  int count = 0;
};

/// alpha_n, beta_n for n = 0..count-1. Throws InvalidArgument if some
/// n >= 1 has alpha_n >= beta_n or an entry outside (0, 1).
SeriesCoefficients series_coefficients(int count, const ToleranceConfig& cfg = {});

struct SeriesPartial {
  double beta_sum = 0.0;   // partial sum for B(s)
  double alpha_sum = 0.0;  // partial sum for sqrt(2/s)
};

/// N-term partial sums of B(s) = 1 + sum e_n beta_n and
/// sqrt(2/s) = 1 + sum e_n alpha_n, where e_n = (-1)^n binom(s/2 - 1, n).
/// s must lie in [2, 4].
SeriesPartial series_partial(double s, int N, const ToleranceConfig& cfg = {});
SeriesPartial series_partial(double s, const SeriesCoefficients& coeffs, int N);

struct ThresholdResult {
  double value = 0.0;
  bool within_lemma_bound = false;       // value <= the lemma's cap
  bool within_first_term_bound = false;  // value <= the sharper analytic cap
  std::string warning;
};

/// Largest s >= 2 with B(s) >= (1 - delta) sqrt(2/s), by bisection to 1e-8.
/// delta in (0, 0.02].
ThresholdResult reverse_bound_threshold(double delta, const ToleranceConfig& cfg = {});

/// 2 + delta * 6 sqrt(2) / (3 - 2 sqrt(2)).
double first_term_bound(double delta);

}  // namespace cubeslice

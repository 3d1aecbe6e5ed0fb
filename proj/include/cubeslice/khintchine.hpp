#pragma once

#include <utility>

#include "cubeslice/ball_integral.hpp"
#include "cubeslice/core.hpp"

namespace cubeslice {

enum class MomentMethod { Enumeration, CosineIntegral, MonteCarlo };
const char* to_string(MomentMethod m);

/// E|sum a_k B_k| for independent random signs B_k.
struct RademacherMoment {
  double value = 0.0;
  double err_bound = 0.0;
  MomentMethod method = MomentMethod::Enumeration;
};

/// Exact enumeration over 2^(n-1) sign patterns (Gray code, first sign
/// fixed). At most 24 nonzero coordinates, else DimensionTooLarge.
RademacherMoment r1_exact(const Direction& a);

/// (2/pi) integral_0^inf (1 - prod cos(a_k t)) / t^2 dt, integrated to
/// T = cfg.tail_cutoff; the remainder uses the mean of the cosine product over
/// [T/2, T].
RademacherMoment r1_cosine_integral(const Direction& a, const ToleranceConfig& cfg = {});

enum class FForm { Gamma, Product, Integral };
const char* to_string(FForm f);

struct Fvalue {
  double s = 0.0;
  double value = 0.0;
  double err_bound = 0.0;
  FForm form = FForm::Gamma;
};

/// 2 / sqrt(pi s) * Gamma((s+1)/2) / Gamma(s/2) via log-Gamma.
Fvalue f_gamma(double s);
/// sqrt(2/pi) prod_{k<K} (1 - (s+2k+1)^-2)^(1/2), times the estimated tail
/// factor exp(-1/(4(s+2K))).
Fvalue f_product(double s, long K = 10000);
/// (2/pi) integral_0^inf (1 - |cos(t/sqrt s)|^s) / t^2 dt.
Fvalue f_integral(double s, const ToleranceConfig& cfg = {});

struct FPrime {
  double value = 0.0;
  double lower = 0.0;  // K-term sum only (all terms positive)
  double upper = 0.0;  // plus the integral bound on the remaining terms
};

/// F'(t) = F(t) sum_k 1 / ((t+2k)(t+2k+1)(t+2k+2)).
FPrime f_prime(double t, long K = 100000);

/// sum_k a_k^2 F(1 / a_k^2), zero coordinates contributing 0.
double haagerup_lower_bound(const Direction& a);
double max_coord_bound(const Direction& a);

/// Hypothesis R_1(a) <= (1 + eps)/sqrt2; window [(1 - 30 eps)/sqrt2,
/// (1 + eps)/sqrt2] for the two largest |a_k| and tail mass <= 57 eps over the
/// remaining coordinates. eps in (0, 1/100).
StabilityReport quantitative_khintchine_report(const Direction& a, double eps, const ToleranceConfig& cfg = {});

/// Largest s in [2, 3] with F(s) <= (1 + eps)/sqrt2, by bisection to 1e-8.
/// within_lemma_bound compares against 2(1 + 20 eps). eps in (0, 3/100).
ThresholdResult lemma_treport_threshold(double eps);

/// (F(2/(1+eps)^2), (1 - (pi^2/12) eps)/sqrt2) for eps in (0, 1/100].
std::pair<double, double> lemma_treport2_check(double eps);

/// sum_{k=0}^{K} 1 / ((2k+3)(2k+4)(2k+5)).
double footnote_sum_check(long K);

}  // namespace cubeslice

#include "cubeslice/khintchine.hpp"

#include <algorithm>
#include <cmath>

#include "cubeslice/cube_section.hpp"
#include "cubeslice/quadrature.hpp"

namespace cubeslice {

const char* to_string(MomentMethod m) {
  switch (m) {
    case MomentMethod::Enumeration: return "enumeration";
    case MomentMethod::CosineIntegral: return "cosine_integral";
    case MomentMethod::MonteCarlo: return "monte_carlo";
  }
  return "unknown";
}

const char* to_string(FForm f) {
  switch (f) {
    case FForm::Gamma: return "gamma";
    case FForm::Product: return "product";
    case FForm::Integral: return "integral";
  }
  return "unknown";
}

RademacherMoment r1_exact(const Direction& a) {
  const CanonicalDirection c = canonicalize(a);
  const auto& x = c.coords;
  const std::size_t n = x.size();
  if (n > 24) throw Error(ErrorCode::DimensionTooLarge, "enumeration limited to 24 nonzero coordinates");
  std::vector<int> sign(n, 1);
  auto fresh = [&] {
    CompensatedSum s;
    for (std::size_t k = 0; k < n; ++k) s.add(sign[k] * x[k]);
    return s.value();
  };
  double S = fresh();
  CompensatedSum total;
  total.add(std::abs(S));
  const std::uint64_t patterns = std::uint64_t{1} << (n - 1);
  for (std::uint64_t i = 1; i < patterns; ++i) {
    const std::size_t k = static_cast<std::size_t>(__builtin_ctzll(i)) + 1;
    sign[k] = -sign[k];
    if ((i & 0xFFFF) == 0) {
      S = fresh();  // bound drift of the running sum
    } else {
      S += 2.0 * sign[k] * x[k];
    }
    total.add(std::abs(S));
  }
  RademacherMoment r;
  r.value = total.value() / static_cast<double>(patterns);
  r.err_bound = 0.0;
  r.method = MomentMethod::Enumeration;
  return r;
}

RademacherMoment r1_cosine_integral(const Direction& a, const ToleranceConfig& cfg) {
  cfg.validate();
  const CanonicalDirection c = canonicalize(a);
  const auto& x = c.coords;
  const std::size_t n = x.size();
  const quad::GaussRule& gl = quad::gauss_legendre(16);
  const std::size_t m = gl.nodes.size();
  std::vector<double> off(m), wt(m);
  for (std::size_t i = 0; i < m; ++i) {
    off[i] = 0.5 * (gl.nodes[i] + 1.0);
    wt[i] = 0.5 * gl.weights[i];
  }
  // First unit interval: 1 - prod(1 - v_k) with v_k = 2 sin^2(a_k t / 2).
  CompensatedSum sum;
  for (std::size_t i = 0; i < m; ++i) {
    const double t = off[i];
    double D = 0.0;
    for (double ak : x) {
      const double h = std::sin(0.5 * ak * t);
      const double v = 2.0 * h * h;
      D += v * (1.0 - D);
    }
    sum.add(wt[i] * D / (t * t));
  }
  const long T = cfg.tail_cutoff;
  // Phase rotation: cos(a(k + o)) = Re(e^{iak} e^{iao}).
  std::vector<double> co(n * m), so(n * m), ck(n), sk(n), c1(n), s1(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      co[j * m + i] = std::cos(x[j] * off[i]);
      so[j * m + i] = std::sin(x[j] * off[i]);
    }
    c1[j] = std::cos(x[j]);
    s1[j] = std::sin(x[j]);
  }
  CompensatedSum gbar;
  for (long k = 1; k < T; ++k) {
    if ((k & 1023) == 1) {
      for (std::size_t j = 0; j < n; ++j) {
        ck[j] = std::cos(x[j] * static_cast<double>(k));
        sk[j] = std::sin(x[j] * static_cast<double>(k));
      }
    }
    double panel = 0.0;
    double gpanel = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double g = 1.0;
      for (std::size_t j = 0; j < n; ++j) g *= ck[j] * co[j * m + i] - sk[j] * so[j * m + i];
      const double t = static_cast<double>(k) + off[i];
      panel += wt[i] * (1.0 - g) / (t * t);
      gpanel += wt[i] * g;
    }
    sum.add(panel);
    if (2 * k >= T) gbar.add(gpanel);
    for (std::size_t j = 0; j < n; ++j) {
      const double cn = ck[j] * c1[j] - sk[j] * s1[j];
      sk[j] = sk[j] * c1[j] + ck[j] * s1[j];
      ck[j] = cn;
    }
  }
  const double Td = static_cast<double>(T);
  const double mean_g = gbar.value() / static_cast<double>(T - (T + 1) / 2);
  sum.add((1.0 - mean_g) / Td);
  RademacherMoment r;
  r.value = 2.0 * sum.value() / kPi;
  // Remainder after replacing the product by its mean; the oscillating part
  // is O(1/(freq T^2)) for every nonzero frequency of the product.
  r.err_bound = 2.0 / kPi * (4.0 / (Td * Td) + 1e-3 / Td);
  r.method = MomentMethod::CosineIntegral;
  return r;
}

Fvalue f_gamma(double s) {
  if (!(s > 0) || !std::isfinite(s)) throw Error(ErrorCode::DomainError, "F needs s > 0");
  Fvalue f;
  f.s = s;
  f.form = FForm::Gamma;
  f.value = 2.0 / std::sqrt(kPi * s) * std::exp(std::lgamma(0.5 * (s + 1.0)) - std::lgamma(0.5 * s));
  f.err_bound = 1e-14 * (1.0 + std::abs(std::lgamma(0.5 * s)));
  return f;
}

Fvalue f_product(double s, long K) {
  if (!(s > 0) || !std::isfinite(s)) throw Error(ErrorCode::DomainError, "F needs s > 0");
  if (K < 1) throw Error(ErrorCode::InvalidArgument, "K must be positive");
  CompensatedSum lg;
  for (long k = 0; k < K; ++k) {
    const double x = s + 2.0 * k + 1.0;
    lg.add(0.5 * std::log1p(-1.0 / (x * x)));
  }
  // sum_{k>=K} (1/2) log(1 - x_k^-2) ~ -(1/2) sum x_k^-2 ~ -1/(4(s+2K)).
  const double tail = -0.25 / (s + 2.0 * K);
  Fvalue f;
  f.s = s;
  f.form = FForm::Product;
  f.value = std::sqrt(2.0 / kPi) * std::exp(lg.value() + tail);
  f.err_bound = f.value * (1.0 / (std::pow(s + 2.0 * K, 3.0)) + 1e-15 * static_cast<double>(K));
  return f;
}

namespace {

// (1 - cos(x)^s) / x^2 on [0, pi/2], accurate near 0.
double f_head(double x, double s) {
  const double h = std::sin(0.5 * x);
  const double lc = std::log1p(-2.0 * h * h);
  return -std::expm1(s * lc) / (x * x);
}

}  // namespace

Fvalue f_integral(double s, const ToleranceConfig& cfg) {
  cfg.validate();
  if (!(s > 0) || !std::isfinite(s)) throw Error(ErrorCode::DomainError, "F needs s > 0");
  // With x = t / sqrt(s): F = (2/pi) s^-1/2 integral_0^inf (1 - |cos x|^s) / x^2 dx.
  const double pref = 2.0 / (kPi * std::sqrt(s));
  const double tol = cfg.quad_abs_tol / pref;

  static const quad::MappedLobeRule unit([](double) { return 1.0; });
  const quad::MappedLobeRule lobe([s](double xi) { return std::pow(std::abs(std::sin(kPi * xi)), s); });
  const quad::Estimate mu = lobe.mean();

  // Tail beyond X: (1 - mu)/X +- pi^2 mu (1 - mu) / X^3.
  const double want = 0.25 * tol;
  const double X0 = std::cbrt(kPi * kPi * mu.value * (1.0 - mu.value) / want);
  const long K = std::max(4L, static_cast<long>(std::ceil((X0 - 0.5 * kPi) / kPi)));
  if (K > cfg.tail_cutoff) throw Error(ErrorCode::NonConvergent, "F integral tail too long");
  const double lobe_tol = 0.25 * tol / static_cast<double>(K + 1);

  CompensatedSum sum;
  double qerr = 0.0;
  const quad::Estimate head =
      unit.integrate([s](double xi) { return 0.5 * kPi * f_head(0.5 * kPi * xi, s); }, lobe_tol);
  sum.add(head.value);
  qerr += head.err;
  for (long k = 0; k < K; ++k) {
    const double a = 0.5 * kPi + k * kPi;
    const double b = a + kPi;
    const quad::Estimate e = lobe.integrate(
        [a](double xi) {
          const double x = a + kPi * xi;
          return kPi / (x * x);
        },
        lobe_tol);
    sum.add(1.0 / a - 1.0 / b);
    sum.add(-e.value);
    qerr += e.err;
  }
  const double X = 0.5 * kPi + K * kPi;
  sum.add((1.0 - mu.value) / X);
  const double tail_err = kPi * kPi * mu.value * (1.0 - mu.value) / (X * X * X) + mu.err / X;

  Fvalue f;
  f.s = s;
  f.form = FForm::Integral;
  f.value = pref * sum.value();
  f.err_bound = pref * (qerr + tail_err);
  if (f.err_bound > cfg.quad_abs_tol) {
    throw Error(ErrorCode::NonConvergent, "F integral error bound " + format_double(f.err_bound));
  }
  return f;
}

FPrime f_prime(double t, long K) {
  if (!(t > 0)) throw Error(ErrorCode::DomainError, "F' needs t > 0");
  if (K < 1) throw Error(ErrorCode::InvalidArgument, "K must be positive");
  CompensatedSum s;
  for (long k = K - 1; k >= 0; --k) {
    const double a = t + 2.0 * k;
    s.add(1.0 / (a * (a + 1.0) * (a + 2.0)));
  }
  // Remaining terms: each <= (t+2k)^-3, and sum_{k>=K} (t+2k)^-3 <= 1/(4 (t+2K-2)^2).
  const double b = t + 2.0 * K - 2.0;
  const double tail_hi = 0.25 / (b * b);
  // Midpoint estimate of the remainder for the reported value.
  const double c = t + 2.0 * K + 1.0;
  const double tail_mid = 0.25 / (c * c);
  const double F = f_gamma(t).value;
  FPrime p;
  p.lower = F * s.value();
  p.upper = F * (s.value() + tail_hi);
  p.value = F * (s.value() + tail_mid);
  return p;
}

double haagerup_lower_bound(const Direction& a) {
  CompensatedSum s;
  for (double x : a.coords()) {
    if (x == 0.0) continue;
    const double x2 = x * x;
    s.add(x2 * f_gamma(1.0 / x2).value);
  }
  return s.value();
}

double max_coord_bound(const Direction& a) { return a.max_abs(); }

StabilityReport quantitative_khintchine_report(const Direction& a, double eps, const ToleranceConfig& cfg) {
  if (!(eps > 0.0 && eps < 0.01)) throw Error(ErrorCode::EpsilonOutOfRange, "eps must lie in (0, 1/100)");
  constexpr double kSlack = 1e-9;
  StabilityReport r;
  r.epsilon = eps;
  const CanonicalDirection c = canonicalize(a);
  const RademacherMoment m = c.size() <= 24 ? r1_exact(a) : r1_cosine_integral(a, cfg);
  r.measured = m.value;
  r.threshold = (1.0 + eps) * kInvSqrt2;
  r.hypothesis_holds = m.value <= r.threshold;
  if (a.size() < 2) {
    r.note = "single coordinate";
    return r;
  }
  const auto [j0, j1] = top_two(a);
  CompensatedSum tail;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i != j0 && i != j1) tail.add(a[i] * a[i]);
  }
  r.tail_mass = tail.value();
  r.upper_dev = (kSqrt2 * std::abs(a[j0]) - 1.0) / eps;
  r.lower_dev = (kSqrt2 * std::abs(a[j1]) - 1.0) / eps;
  if (!r.hypothesis_holds) {
    r.note = "hypothesis fails; no conclusion to certify";
    return r;
  }
  r.indices = std::make_pair(j0, j1);
  const double lo = (1.0 - 30.0 * eps) * kInvSqrt2 - kSlack;
  const double hi = (1.0 + eps) * kInvSqrt2 + kSlack;
  const auto inside = [&](std::size_t j) { return std::abs(a[j]) >= lo && std::abs(a[j]) <= hi; };
  r.certified = inside(j0) && inside(j1) && r.tail_mass <= 57.0 * eps + kSlack;
  r.note = std::string("window 30/1/57 (tail over the other coordinates); R1 by ") + to_string(m.method);
  return r;
}

ThresholdResult lemma_treport_threshold(double eps) {
  if (!(eps > 0.0 && eps < 0.03)) throw Error(ErrorCode::EpsilonOutOfRange, "eps must lie in (0, 3/100)");
  const double target = (1.0 + eps) * kInvSqrt2;
  double lo = 2.0, hi = 3.0;
  if (f_gamma(hi).value < target) throw Error(ErrorCode::BracketFailure, "F(3) below (1+eps)/sqrt2");
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (f_gamma(mid).value <= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  ThresholdResult r;
  r.value = lo;
  r.within_lemma_bound = r.value <= 2.0 * (1.0 + 20.0 * eps) + 1e-9;
  r.within_first_term_bound = r.value <= 3.0;
  return r;
}

std::pair<double, double> lemma_treport2_check(double eps) {
  // The endpoint 1/100 is accepted so the boundary case can be evaluated.
  if (!(eps > 0.0 && eps <= 0.01)) throw Error(ErrorCode::EpsilonOutOfRange, "eps must lie in (0, 1/100]");
  const double lhs = f_gamma(2.0 / ((1.0 + eps) * (1.0 + eps))).value;
  const double rhs = (1.0 - kPi * kPi / 12.0 * eps) * kInvSqrt2;
  return {lhs, rhs};
}

double footnote_sum_check(long K) {
  if (K < 0) throw Error(ErrorCode::InvalidArgument, "K must be nonnegative");
  CompensatedSum s;
  for (long k = K; k >= 0; --k) {
    const double a = 2.0 * k + 3.0;
    s.add(1.0 / (a * (a + 1.0) * (a + 2.0)));
  }
  return s.value();
}

}  // namespace cubeslice

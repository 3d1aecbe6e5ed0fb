#include "cubeslice/cube_section.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cubeslice/piecewise.hpp"
#include "cubeslice/quadrature.hpp"

namespace cubeslice {

namespace {

double sinc_pi(double x) {
  const double px = kPi * x;
  if (std::abs(px) < 1e-5) return 1.0 - px * px / 6.0;
  return std::sin(px) / px;
}

double indicator_section(double t) { return std::abs(t) <= 0.5 ? 1.0 : 0.0; }

void require_finite_t(double t) {
  if (!std::isfinite(t)) throw Error(ErrorCode::NonFinite, "offset t must be finite");
}

}  // namespace

IntegralResult section_volume_fourier(const SectionQuery& q, const ToleranceConfig& cfg) {
  cfg.validate();
  require_finite_t(q.t);
  const CanonicalDirection c = canonicalize(q.a);
  const auto& a = c.coords;
  const std::size_t n = a.size();
  IntegralResult r;
  r.method = Method::Quadrature;
  if (n == 1) {
    r.value = indicator_section(q.t);
    r.method = Method::ClosedForm;
    r.detail = "single coordinate";
    return r;
  }
  const double tol = cfg.quad_abs_tol;
  // Cutoff: 2 int_U^inf prod_{j<m} (pi a_j u)^-1 du <= tol / 2.
  double best_U = INFINITY;
  std::size_t best_m = 0;
  double prod = a[0] * a[1];
  for (std::size_t m = 3; m <= n; ++m) {
    prod *= a[m - 1];
    const double md = static_cast<double>(m);
    const double U = std::pow(4.0 / ((md - 1.0) * std::pow(kPi, md) * prod * tol), 1.0 / (md - 1.0));
    if (U < best_U) {
      best_U = U;
      best_m = m;
    }
  }
  if (best_m == 0 || !(best_U <= static_cast<double>(cfg.tail_cutoff))) {
    throw Error(ErrorCode::TailNotBounded,
                "sinc product tail not integrable within tail_cutoff; use the geometric evaluator");
  }
  const double t = q.t;
  const double width = 1.0 / std::max(a[0], 2.0 * std::abs(t));
  const long panels = static_cast<long>(std::ceil(best_U / width));
  const double U = panels * width;
  const double panel_tol = 0.5 * tol / static_cast<double>(panels);
  const std::function<double(double)> f = [&](double u) {
    double v = std::cos(2.0 * kPi * u * t);
    for (double x : a) v *= sinc_pi(x * u);
    return v;
  };
  CompensatedSum sum;
  double qerr = 0.0;
  for (long k = 0; k < panels; ++k) {
    const auto e = quad::adaptive_gauss(f, k * width, (k + 1) * width, panel_tol, 12);
    sum.add(e.value);
    qerr += e.err;
  }
  double mprod = 1.0;
  for (std::size_t j = 0; j < best_m; ++j) mprod *= a[j];
  const double md = static_cast<double>(best_m);
  const double tail = 2.0 / ((md - 1.0) * std::pow(kPi, md) * mprod * std::pow(U, md - 1.0));
  r.value = 2.0 * sum.value();
  r.err_bound = 2.0 * qerr + tail + 8.0 * std::numeric_limits<double>::epsilon() * sum.abs_sum();
  r.detail = "panels=" + std::to_string(panels) + ", tail uses " + std::to_string(best_m) + " factors";
  if (r.err_bound > tol) {
    throw Error(ErrorCode::NonConvergent, "Fourier section error bound " + format_double(r.err_bound));
  }
  return r;
}

GeometricValue section_volume_geometric_detail(const SectionQuery& q) {
  require_finite_t(q.t);
  const CanonicalDirection c = canonicalize(q.a);
  const auto& a = c.coords;
  const std::size_t n = a.size();
  if (n > 12) throw Error(ErrorCode::DimensionTooLarge, "inclusion-exclusion limited to 12 coordinates");
  if (n == 1) return {indicator_section(q.t), 1.0};
  if (a.back() < 1e-8) {
    throw Error(ErrorCode::IllConditioned, "coordinate below 1e-8; reduce the dimension first");
  }
  const double t = std::abs(q.t);
  CompensatedSum half_sum;
  for (double x : a) half_sum.add(0.5 * x);
  const double half = half_sum.value();
  if (t >= half) return {0.0, 1.0};

  double scale = 1.0;
  for (std::size_t j = 0; j < n; ++j) scale *= a[j] * static_cast<double>(j == 0 ? 1 : j);
  // scale = (n-1)! prod a_j
  const int p = static_cast<int>(n) - 1;
  CompensatedSum total;
  const std::size_t count = std::size_t{1} << n;
  for (std::size_t mask = 0; mask < count; ++mask) {
    CompensatedSum x;
    x.add(t);
    x.add(half);
    int bits = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask >> j & 1U) {
        x.add(-a[j]);
        ++bits;
      }
    }
    const double v = x.value();
    if (v <= 0.0) continue;
    const double term = std::pow(v, p) / scale;
    total.add(bits % 2 ? -term : term);
  }
  GeometricValue g;
  g.value = std::max(0.0, total.value());
  g.condition = total.abs_sum() / std::max(g.value, 1.0);
  if (g.condition > 1e8) {
    throw Error(ErrorCode::IllConditioned, "inclusion-exclusion cancellation ratio " + format_double(g.condition));
  }
  return g;
}

double section_volume_geometric(const SectionQuery& q) { return section_volume_geometric_detail(q).value; }

double section_volume_convolution(const SectionQuery& q) {
  require_finite_t(q.t);
  const CanonicalDirection c = canonicalize(q.a);
  const auto& a = c.coords;
  if (a.size() == 1) return indicator_section(q.t);
  if (a.size() > static_cast<std::size_t>(kMaxDegree) + 1) {
    throw Error(ErrorCode::DegreeOverflow, "more than 17 coordinates");
  }
  PiecewisePoly acc = PiecewisePoly::constant(-0.5 * a[0], 0.5 * a[0], 1.0 / a[0]);
  for (std::size_t j = 1; j < a.size(); ++j) {
    // The narrow factor supplies the antiderivatives, the wide one the jumps;
    // this avoids dividing differences by a tiny width.
    acc = convolve(PiecewisePoly::constant(-0.5 * a[j], 0.5 * a[j], 1.0 / a[j]), acc);
  }
  return std::max(0.0, acc(q.t));
}

IntegralResult section_volume(const SectionQuery& q, const ToleranceConfig& cfg) {
  IntegralResult r;
  r.method = Method::ClosedForm;
  try {
    const GeometricValue g = section_volume_geometric_detail(q);
    if (g.condition <= 1e4) {
      r.value = g.value;
      r.err_bound = 64.0 * std::numeric_limits<double>::epsilon() * g.condition * std::max(g.value, 1.0);
      r.detail = "geometric";
      return r;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::IllConditioned && e.code() != ErrorCode::DimensionTooLarge) throw;
  }
  try {
    r.value = section_volume_convolution(q);
    r.err_bound = 1e-12;
    r.detail = "convolution";
    return r;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegreeOverflow) throw;
  }
  r = section_volume_fourier(q, cfg);
  r.detail = "fourier; " + r.detail;
  return r;
}

IntegralResult section_volume_mc(const SectionQuery& q, double h, std::int64_t samples, std::uint64_t seed) {
  require_finite_t(q.t);
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidArgument, "slab half-width must be positive");
  if (samples < 10000) throw Error(ErrorCode::InvalidArgument, "need at least 1e4 samples");
  const auto a = q.a.coords();
  std::mt19937_64 rng(seed);
  constexpr double kInv53 = 1.0 / 9007199254740992.0;
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    double dot = 0.0;
    for (double aj : a) dot += aj * ((static_cast<double>(rng() >> 11) + 0.5) * kInv53 - 0.5);
    if (std::abs(dot - q.t) <= h) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  IntegralResult r;
  r.value = p / (2.0 * h);
  r.err_bound = std::sqrt(p * (1.0 - p) / static_cast<double>(samples)) / (2.0 * h);
  r.method = Method::MonteCarlo;
  r.detail = "hits=" + std::to_string(hits) + ", standard error";
  return r;
}

double projection_bound(const Direction& a) { return 1.0 / a.max_abs(); }

std::pair<std::size_t, std::size_t> top_two(const Direction& a) {
  if (a.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two coordinates");
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (std::abs(a[i]) > std::abs(a[i0])) i0 = i;
  }
  std::size_t i1 = i0 == 0 ? 1 : 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i != i0 && std::abs(a[i]) > std::abs(a[i1])) i1 = i;
  }
  return {i0, i1};
}

StabilityReport quantitative_slice_report(const Direction& a, double t, double eps, const ToleranceConfig& cfg) {
  if (!(eps > 0.0 && eps < 1.0 / 75.0)) throw Error(ErrorCode::EpsilonOutOfRange, "eps must lie in (0, 1/75)");
  constexpr double kSlack = 1e-9;
  StabilityReport r;
  r.epsilon = eps;
  const IntegralResult s = section_volume({a, t}, cfg);
  r.measured = s.value;
  r.threshold = (1.0 - eps) * kSqrt2;
  r.hypothesis_holds = s.value >= r.threshold;
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
  const double lo = (1.0 - 37.5 * eps) * kInvSqrt2 - kSlack;
  const double hi = (1.0 + 2.0 * eps) * kInvSqrt2 + kSlack;
  const auto inside = [&](std::size_t j) { return std::abs(a[j]) >= lo && std::abs(a[j]) <= hi; };
  r.certified = inside(j0) && inside(j1) && r.tail_mass <= 50.0 * eps + kSlack;
  r.note = "window 37.5/2/50; route " + s.detail + "; observed deviations " + format_double(r.upper_dev) + ", " +
           format_double(r.lower_dev);
  return r;
}

}  // namespace cubeslice

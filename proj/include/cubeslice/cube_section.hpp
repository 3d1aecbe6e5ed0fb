#pragma once

#include <cstdint>

#include "cubeslice/ball_integral.hpp"
#include "cubeslice/core.hpp"

namespace cubeslice {

struct SectionQuery {
  Direction a;
  double t = 0.0;
};

/// sigma(a, t) = 2 * integral_0^inf cos(2 pi u t) prod_j sinc(pi a_j u) du,
/// integrated panel by panel up to a cutoff U past which the product of the
/// m largest factors is integrable below half of cfg.quad_abs_tol.
/// TailNotBounded when no m >= 3 gives U <= cfg.tail_cutoff (always for two
/// nonzero coordinates); NonConvergent when err_bound > cfg.quad_abs_tol.
IntegralResult section_volume_fourier(const SectionQuery& q, const ToleranceConfig& cfg = {});

struct GeometricValue {
  double value = 0.0;
  double condition = 0.0;  // sum of |terms| / max(value, 1)
};

/// Inclusion-exclusion over the 2^n cube vertices. n <= 12 nonzero
/// coordinates. IllConditioned if min a_j < 1e-8 or condition > 1e8.
double section_volume_geometric(const SectionQuery& q);
GeometricValue section_volume_geometric_detail(const SectionQuery& q);

/// Density at t of sum_j a_j U_j (U_j uniform on [-1/2, 1/2]) built by exact
/// piecewise-polynomial convolution. At most 17 nonzero coordinates.
double section_volume_convolution(const SectionQuery& q);

/// Geometric route when well conditioned, then the convolution route, then
/// the Fourier route. `detail` names the route taken.
IntegralResult section_volume(const SectionQuery& q, const ToleranceConfig& cfg = {});

/// Fraction of uniform cube samples with |<x, a> - t| <= h, divided by 2h.
/// err_bound is the binomial standard error.
IntegralResult section_volume_mc(const SectionQuery& q, double slab_halfwidth, std::int64_t samples,
                                 std::uint64_t seed);

/// 1 / max_j |a_j|.
double projection_bound(const Direction& a);

/// Hypothesis sigma(a,t) >= (1 - eps) sqrt2; certification window
/// [(1 - 37.5 eps)/sqrt2, (1 + 2 eps)/sqrt2] for the two largest |a_j| and
/// tail mass <= 50 eps. eps in (0, 1/75).
StabilityReport quantitative_slice_report(const Direction& a, double t, double eps,
                                          const ToleranceConfig& cfg = {});

/// Indices of the two largest |a_j|, larger first, ties to the lower index.
std::pair<std::size_t, std::size_t> top_two(const Direction& a);

}  // namespace cubeslice

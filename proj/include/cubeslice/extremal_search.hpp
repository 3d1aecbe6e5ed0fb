#pragma once

#include <cstdint>
#include <vector>

#include "cubeslice/core.hpp"

namespace cubeslice {

struct SearchConfig {
  int restarts = 20;
  int max_iters = 4000;
  double step_init = 0.2;
  double shrink = 0.5;
  std::uint64_t seed = 0;
  double objective_tol = 1e-10;

  void validate() const;
};

struct SearchResult {
  Direction a;
  double value = 0.0;
  int converged_restarts = 0;
};

/// Multistart compass search for the maximum of a -> sigma(a, 0) over the
/// positive orthant of the unit sphere. Each trial move adds +-step to one
/// coordinate, clips negatives to 0 and renormalizes. 2 <= n <= 8.
SearchResult maximize_section(int n, const SearchConfig& cfg = {});

/// Same search for the minimum of a -> R_1(a) by exact enumeration.
/// 2 <= n <= 16.
SearchResult minimize_r1(int n, const SearchConfig& cfg = {});
/// Single descent from a given start.
SearchResult minimize_r1_from(const Direction& start, const SearchConfig& cfg = {});

enum class SamplerKind { Section, Khintchine };

/// Perturbations of (1/sqrt2, 1/sqrt2, 0, ...) with a small random tail,
/// emitted only after the hypothesis check passes: sigma(a, 0) >= (1-eps) sqrt2
/// for Section, R_1(a) <= (1+eps)/sqrt2 for Khintchine. The two large
/// coordinates land at random positions. SamplerStarved after 100 * count
/// attempts.
std::vector<Direction> near_extremal_sampler(int n, double eps, int count, std::uint64_t seed, SamplerKind kind);

}  // namespace cubeslice

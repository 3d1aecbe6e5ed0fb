#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cubeslice/core.hpp"
#include "cubeslice/piecewise.hpp"

namespace cubeslice {

/// Either a point mass or a compactly supported piecewise-polynomial density.
class Distribution {
 public:
  static Distribution point(double location);
  /// Checks total mass 1 within `mass_tol` and nonnegativity at every
  /// per-piece extremum (InvalidDensity otherwise).
  static Distribution density(PiecewisePoly pdf, double mass_tol = 1e-12);
  /// Uniform density on [lo, hi].
  static Distribution uniform(double lo, double hi);
  /// Uniform density on a finite union of disjoint closed intervals.
  static Distribution uniform_on(std::vector<std::pair<double, double>> intervals);

  bool is_point() const noexcept { return !pdf_.has_value(); }
  double location() const noexcept { return location_; }
  const PiecewisePoly& pdf() const;

 private:
  Distribution() = default;
  double location_ = 0.0;
  std::optional<PiecewisePoly> pdf_;
};

/// Essential supremum of the density; +inf for a point mass.
double m_functional(const Distribution& X);
/// M^-2, or 0 for a point mass.
double n_infinity(const Distribution& X);
/// Law of lambda X. ZeroScale for lambda = 0.
Distribution scale(const Distribution& X, double lambda);
/// Law of X + Y for independent X, Y.
Distribution convolve(const Distribution& X, const Distribution& Y);
/// Law of the independent sum of all entries.
Distribution sum_of(const std::vector<Distribution>& Xs);

struct EpiReport {
  double lhs = 0.0;    // N_inf(sum)
  double rhs = 0.0;    // (1/2) sum N_inf(X_i)
  double slack = 0.0;  // lhs - rhs
  // Filled by quantitative_epi_report.
  double epsilon = 0.0;
  bool hypothesis_holds = false;
  double hypothesis_lhs = 0.0;         // (1 - eps)^2 N_inf(sum), by homogeneity
  double hypothesis_lhs_direct = 0.0;  // N_inf((1 - eps) sum), scaling the law
  std::optional<std::pair<std::size_t, std::size_t>> indices;
  double tail = 0.0;  // sum of N_inf over the other summands
  bool certified = false;
  std::string note;
};

/// lhs by iterated exact convolution, rhs by summation. Needs >= 2 entries.
EpiReport sum_min_entropy(const std::vector<Distribution>& Xs);

struct RogozinResult {
  double sum_x = 0.0;          // N_inf(sum X_i)
  double sum_z = 0.0;          // N_inf(sum Z_i) by exact convolution
  double sum_z_section = 0.0;  // the same through sigma(theta, 0)^-2 scaled
  bool holds = false;          // sum_x >= sum_z - 1e-9
  bool routes_agree = false;   // |sum_z - sum_z_section| <= 1e-7
};

/// Compares against Z_i uniform on [-w_i/2, w_i/2], w_i = sqrt(N_inf(X_i)).
RogozinResult rogozin_compare(const std::vector<Distribution>& Xs);

/// [uniform(A), uniform(x - A), point masses...]. EmptySet when |A| = 0.
std::vector<Distribution> equality_case_construct(std::vector<std::pair<double, double>> A, double x,
                                                  const std::vector<double>& extra_point_masses);

/// Hypothesis (1 - eps)^2 N_inf(sum) <= (1/2) sum N_inf(X_i). When it holds,
/// the two largest N_inf(X_i) must lie in [(1 - 37.5 eps)^2 rhs,
/// (1 + 2 eps)^2 rhs] and the rest sum to at most 50 eps sum N_inf(X_i).
/// eps in (0, 1/75).
EpiReport quantitative_epi_report(const std::vector<Distribution>& Xs, double eps);

/// Text form, one entry per block:
///   lo hi c0 c1 ... cD    piece on [lo, hi], coefficients in (x - lo)
///   point x               a point mass (a block by itself)
/// Blocks are separated by blank lines or a line "---"; '#' starts a comment.
/// A density whose mass is within 1e-6 of 1 is rescaled to mass 1; anything
/// farther is InvalidDensity. Malformed lines are ParseError.
std::vector<Distribution> parse_distributions(std::istream& in);

}  // namespace cubeslice

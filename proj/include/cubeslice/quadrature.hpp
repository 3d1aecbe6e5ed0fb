#pragma once

#include <functional>
#include <vector>

namespace cubeslice::quad {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule with n nodes (n >= 1). Nodes by Newton iteration on P_n.
const GaussRule& gauss_legendre(int n);

template <class F>
double gauss(const F& f, double a, double b, const GaussRule& rule) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return s * half;
}

struct Estimate {
  double value = 0.0;
  double err = 0.0;
};

/// 16- against 32-point Gauss-Legendre on [a, b], bisecting while the two
/// disagree by more than `abs_tol` (split evenly between halves).
/// The returned error is the sum of |Q32 - Q16| over accepted panels.
Estimate adaptive_gauss(const std::function<double(double)>& f, double a, double b, double abs_tol,
                        int max_depth = 30);

/// Integrates w(xi) * g(xi) over xi in [0, 1] for a fixed weight w that
/// vanishes at both ends like |xi|^s (for instance |sin(pi xi)|^s).
///
/// Nodes are Gauss-Legendre points pushed through the quintic smoothstep
/// xi = tau^3 (10 - 15 tau + 6 tau^2), which flattens the endpoint kinks.
/// Weight values at the nodes are tabulated once, so the same rule is reused
/// on every lobe of a periodic integrand.
class MappedLobeRule {
 public:
  explicit MappedLobeRule(const std::function<double(double)>& weight);

  /// Doubling 32 -> 64 -> ... -> 512 until consecutive orders agree within
  /// `abs_tol`; err is the last disagreement.
  template <class G>
  Estimate integrate(const G& g, double abs_tol) const {
    double prev = apply(0, g);
    for (std::size_t k = 1; k < levels_.size(); ++k) {
      const double cur = apply(k, g);
      const double diff = std::abs(cur - prev);
      if (diff <= abs_tol || k + 1 == levels_.size()) return {cur, diff};
      prev = cur;
    }
    return {prev, 0.0};
  }

  /// Mean of the weight over one period.
  Estimate mean() const;

 private:
  struct Level {
    std::vector<double> xi;
    std::vector<double> ww;  // Gauss weight * jacobian * w(xi)
  };

  template <class G>
  double apply(std::size_t level, const G& g) const {
    const Level& L = levels_[level];
    double s = 0.0;
    for (std::size_t i = 0; i < L.xi.size(); ++i) s += L.ww[i] * g(L.xi[i]);
    return s;
  }

  std::vector<Level> levels_;
};

/// Map from [0,1] to [0,1] used by MappedLobeRule, and its derivative.
double smoothstep5(double tau);
double smoothstep5_prime(double tau);

}  // namespace cubeslice::quad

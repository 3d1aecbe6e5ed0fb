#pragma once

#include <vector>

#include "cubeslice/polynomial.hpp"

namespace cubeslice {

inline constexpr int kMaxDegree = 16;

/// Compactly supported piecewise polynomial. Piece i lives on
/// [breaks[i], breaks[i+1]] and is stored in the local variable x - breaks[i].
/// Outside [breaks.front(), breaks.back()] the function is 0.
class PiecewisePoly {
 public:
  PiecewisePoly() = default;
  /// Throws InvalidArgument unless breaks strictly increase and
  /// pieces.size() + 1 == breaks.size().
  PiecewisePoly(std::vector<double> breaks, std::vector<poly::Poly> pieces);

  static PiecewisePoly constant(double lo, double hi, double value);

  const std::vector<double>& breaks() const noexcept { return breaks_; }
  const std::vector<poly::Poly>& pieces() const noexcept { return pieces_; }
  std::size_t size() const noexcept { return pieces_.size(); }
  bool empty() const noexcept { return pieces_.empty(); }
  double lo() const { return breaks_.front(); }
  double hi() const { return breaks_.back(); }
  int degree() const;

  /// Right-continuous evaluation; 0 outside the support.
  double operator()(double x) const;
  double integral() const;
  double max() const;
  double min() const;

  /// x -> p(x - shift).
  PiecewisePoly translated(double shift) const;
  /// x -> p(x / lambda) / |lambda|  (density of lambda X).
  PiecewisePoly scaled(double lambda) const;
  PiecewisePoly times(double c) const;

 private:
  std::vector<double> breaks_;
  std::vector<poly::Poly> pieces_;
};

/// Exact convolution (f * g)(z) = integral of f(z - y) g(y) dy.
///
/// Uses the jump expansion f * g = sum_k sum_m J_k^(m) F_{m+1}(z - b_k), where
/// J_k^(m) is the jump of the m-th derivative of g at its break b_k and F_m is
/// the m-th iterated antiderivative of f. Throws DegreeOverflow if the result
/// would exceed kMaxDegree.
PiecewisePoly convolve(const PiecewisePoly& f, const PiecewisePoly& g);

}  // namespace cubeslice

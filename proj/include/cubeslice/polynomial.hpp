#pragma once

#include <vector>

namespace cubeslice::poly {

/// Coefficients c[0] + c[1] x + ... + c[d] x^d.
using Poly = std::vector<double>;

double eval(const Poly& p, double x);
Poly derivative(const Poly& p);
/// Antiderivative vanishing at 0.
Poly antiderivative(const Poly& p);
/// Coefficients of x -> p(x + h).
Poly taylor_shift(const Poly& p, double h);
/// Coefficients of x -> p(lambda x).
Poly rescale(const Poly& p, double lambda);
/// Drops trailing zero coefficients; the zero polynomial becomes {}.
void trim(Poly& p);
int degree(const Poly& p);
/// Integral of p over [lo, hi].
double integral(const Poly& p, double lo, double hi);

/// Real roots of p in [lo, hi], ascending. Found by isolating monotone runs
/// between roots of p' (recursively) and bisecting each sign change.
std::vector<double> roots_in(const Poly& p, double lo, double hi);

/// Extremes of p over the closed interval [lo, hi].
double max_on(const Poly& p, double lo, double hi);
double min_on(const Poly& p, double lo, double hi);

}  // namespace cubeslice::poly

#include "cubeslice/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace cubeslice::poly {

double eval(const Poly& p, double x) {
  double v = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
  return v;
}

Poly derivative(const Poly& p) {
  if (p.size() <= 1) return {};
  Poly d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<double>(i);
  return d;
}

Poly antiderivative(const Poly& p) {
  Poly a(p.size() + 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) a[i + 1] = p[i] / static_cast<double>(i + 1);
  return a;
}

Poly taylor_shift(const Poly& p, double h) {
  Poly c = p;
  if (h == 0.0) return c;
  const std::size_t n = c.size();
  // Repeated synthetic division (Horner) by (x - (-h)).
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = n - 1; j > i; --j) c[j - 1] += h * c[j];
  }
  return c;
}

Poly rescale(const Poly& p, double lambda) {
  Poly c = p;
  double f = 1.0;
  for (double& x : c) {
    x *= f;
    f *= lambda;
  }
  return c;
}

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0.0) p.pop_back();
}

int degree(const Poly& p) {
  for (std::size_t i = p.size(); i > 0; --i) {
    if (p[i - 1] != 0.0) return static_cast<int>(i - 1);
  }
  return -1;
}

double integral(const Poly& p, double lo, double hi) {
  const Poly a = antiderivative(p);
  return eval(a, hi) - eval(a, lo);
}

namespace {

double bisect_root(const Poly& p, double lo, double hi, double flo) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = eval(p, mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> roots_in(const Poly& p_in, double lo, double hi) {
  Poly p = p_in;
  trim(p);
  std::vector<double> out;
  const int d = degree(p);
  if (d <= 0) return out;
  if (d == 1) {
    const double r = -p[0] / p[1];
    if (r >= lo && r <= hi) out.push_back(r);
    return out;
  }
  std::vector<double> cuts{lo};
  for (double r : roots_in(derivative(p), lo, hi)) {
    if (r > cuts.back()) cuts.push_back(r);
  }
  if (hi > cuts.back()) cuts.push_back(hi);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const double fa = eval(p, a), fb = eval(p, b);
    if (fa == 0.0) {
      if (out.empty() || out.back() != a) out.push_back(a);
      continue;
    }
    if (fb == 0.0) continue;  // picked up as the next segment's left end
    if ((fa < 0) != (fb < 0)) out.push_back(bisect_root(p, a, b, fa));
  }
  if (!cuts.empty() && eval(p, hi) == 0.0 && (out.empty() || out.back() != hi)) out.push_back(hi);
  return out;
}

double max_on(const Poly& p, double lo, double hi) {
  double m = std::max(eval(p, lo), eval(p, hi));
  for (double r : roots_in(derivative(p), lo, hi)) m = std::max(m, eval(p, r));
  return m;
}

double min_on(const Poly& p, double lo, double hi) {
  double m = std::min(eval(p, lo), eval(p, hi));
  for (double r : roots_in(derivative(p), lo, hi)) m = std::min(m, eval(p, r));
  return m;
}

}  // namespace cubeslice::poly

#include "cubeslice/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "cubeslice/core.hpp"

namespace cubeslice::quad {

namespace {

GaussRule build_rule(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.weights[i] = w;
    r.nodes[n - 1 - i] = x;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

namespace {

void adaptive_step(const std::function<double(double)>& f, double a, double b, double tol, int depth,
                   const GaussRule& lo, const GaussRule& hi, Estimate& acc) {
  const double q_lo = gauss(f, a, b, lo);
  const double q_hi = gauss(f, a, b, hi);
  const double diff = std::abs(q_hi - q_lo);
  if (diff <= tol || depth <= 0) {
    acc.value += q_hi;
    acc.err += diff;
    return;
  }
  const double m = 0.5 * (a + b);
  adaptive_step(f, a, m, 0.5 * tol, depth - 1, lo, hi, acc);
  adaptive_step(f, m, b, 0.5 * tol, depth - 1, lo, hi, acc);
}

}  // namespace

Estimate adaptive_gauss(const std::function<double(double)>& f, double a, double b, double abs_tol,
                        int max_depth) {
  Estimate acc;
  adaptive_step(f, a, b, abs_tol, max_depth, gauss_legendre(16), gauss_legendre(32), acc);
  return acc;
}

double smoothstep5(double tau) { return tau * tau * tau * (10.0 - 15.0 * tau + 6.0 * tau * tau); }

double smoothstep5_prime(double tau) {
  const double u = tau * (1.0 - tau);
  return 30.0 * u * u;
}

MappedLobeRule::MappedLobeRule(const std::function<double(double)>& weight) {
  for (int n = 32; n <= 512; n *= 2) {
    const GaussRule& r = gauss_legendre(n);
    Level L;
    L.xi.resize(n);
    L.ww.resize(n);
    for (int i = 0; i < n; ++i) {
      const double tau = 0.5 * (r.nodes[i] + 1.0);
      const double xi = smoothstep5(tau);
      L.xi[i] = xi;
      L.ww[i] = 0.5 * r.weights[i] * smoothstep5_prime(tau) * weight(xi);
    }
    levels_.push_back(std::move(L));
  }
}

Estimate MappedLobeRule::mean() const {
  return integrate([](double) { return 1.0; }, 0.0);
}

}  // namespace cubeslice::quad

#include "cubeslice/extremal_search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>

#include "cubeslice/cube_section.hpp"
#include "cubeslice/khintchine.hpp"

namespace cubeslice {

void SearchConfig::validate() const {
  if (restarts < 1 || max_iters < 1 || !(step_init > 0) || !(shrink > 0 && shrink < 1) || !(objective_tol > 0)) {
    throw Error(ErrorCode::InvalidArgument, "invalid search configuration");
  }
}

namespace {

constexpr double kMinStep = 1e-10;
constexpr int kStallWindow = 50;

// Clip to the orthant and renormalize; nullopt if everything was clipped.
std::optional<std::vector<double>> project(std::vector<double> x) {
  for (double& v : x) v = std::max(v, 0.0);
  double s = 0.0;
  for (double v : x) s += v * v;
  if (!(s > 0)) return std::nullopt;
  const double r = std::sqrt(s);
  for (double& v : x) v /= r;
  return x;
}

struct LocalResult {
  std::vector<double> x;
  double value;
  bool converged;
};

// Maximizes `f` by compass search.
LocalResult compass(std::vector<double> x, const std::function<double(const std::vector<double>&)>& f,
                    const SearchConfig& cfg) {
  x = *project(std::move(x));
  double best = f(x);
  double step = cfg.step_init;
  std::vector<double> history{best};
  bool converged = false;
  for (int it = 0; it < cfg.max_iters; ++it) {
    bool improved = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (int sgn : {1, -1}) {
        std::vector<double> y = x;
        y[i] += sgn * step;
        const auto p = project(std::move(y));
        if (!p) continue;
        const double v = f(*p);
        if (v > best) {
          best = v;
          x = *p;
          improved = true;
        }
      }
    }
    if (!improved) step *= cfg.shrink;
    history.push_back(best);
    const bool stalled = history.size() > kStallWindow &&
                         best - history[history.size() - 1 - kStallWindow] < cfg.objective_tol;
    if (step < kMinStep || (stalled && step < 1e-6)) {
      converged = true;
      break;
    }
  }
  return {x, best, converged};
}

std::vector<double> random_start(int n, int r, std::mt19937_64& rng) {
  std::vector<double> x(static_cast<std::size_t>(n));
  if (r % 2 == 0) {
    std::normal_distribution<double> g(0.0, 1.0);
    for (double& v : x) v = std::abs(g(rng));
  } else {
    // Dirichlet with small concentration: most mass on a few coordinates.
    std::gamma_distribution<double> g(0.3, 1.0);
    for (double& v : x) v = std::sqrt(g(rng));
  }
  double s = 0.0;
  for (double v : x) s += v;
  if (!(s > 0)) x[0] = 1.0;
  return x;
}

SearchResult multistart(int n, const SearchConfig& cfg, const std::function<double(const std::vector<double>&)>& f,
                        double sign) {
  std::mt19937_64 rng(cfg.seed);
  std::optional<LocalResult> best;
  int converged = 0;
  for (int r = 0; r < cfg.restarts; ++r) {
    LocalResult lr = compass(random_start(n, r, rng), f, cfg);
    if (!lr.converged) continue;
    ++converged;
    if (!best || lr.value > best->value || (lr.value == best->value && lr.x < best->x)) best = std::move(lr);
  }
  if (!best) throw Error(ErrorCode::NoConvergence, "no restart converged");
  return {Direction::normalize(best->x), sign * best->value, converged};
}

}  // namespace

SearchResult maximize_section(int n, const SearchConfig& cfg) {
  cfg.validate();
  if (n < 2 || n > 8) throw Error(ErrorCode::InvalidArgument, "section search needs 2 <= n <= 8");
  const auto f = [](const std::vector<double>& x) {
    return section_volume({Direction::normalize(x), 0.0}).value;
  };
  return multistart(n, cfg, f, 1.0);
}

SearchResult minimize_r1(int n, const SearchConfig& cfg) {
  cfg.validate();
  if (n < 2 || n > 16) throw Error(ErrorCode::InvalidArgument, "R1 search needs 2 <= n <= 16");
  const auto f = [](const std::vector<double>& x) { return -r1_exact(Direction::normalize(x)).value; };
  return multistart(n, cfg, f, -1.0);
}

SearchResult minimize_r1_from(const Direction& start, const SearchConfig& cfg) {
  cfg.validate();
  std::vector<double> x;
  for (double v : start.coords()) x.push_back(std::abs(v));
  const auto f = [](const std::vector<double>& y) { return -r1_exact(Direction::normalize(y)).value; };
  LocalResult lr = compass(std::move(x), f, cfg);
  if (!lr.converged) throw Error(ErrorCode::NoConvergence, "descent did not converge");
  return {Direction::normalize(lr.x), -lr.value, 1};
}

std::vector<Direction> near_extremal_sampler(int n, double eps, int count, std::uint64_t seed, SamplerKind kind) {
  const double eps_max = kind == SamplerKind::Section ? 1.0 / 75.0 : 1.0 / 100.0;
  if (!(eps > 0.0 && eps < eps_max)) throw Error(ErrorCode::EpsilonOutOfRange, "eps outside the theorem's range");
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "need n >= 2");
  if (count < 0) throw Error(ErrorCode::InvalidArgument, "count must be nonnegative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> G(0.0, 1.0);
  // Both scales overshoot the hypothesis boundary so that the gate, not the
  // proposal, decides; roughly one proposal in six survives.
  const double tail_scale = 6.0 * eps;
  const double angle_scale = 3.0 * eps;
  std::vector<Direction> out;
  const long max_attempts = 100L * count;
  for (long attempt = 0; attempt < max_attempts && static_cast<int>(out.size()) < count; ++attempt) {
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    std::size_t i0 = static_cast<std::size_t>(U(rng) * n) % n;
    std::size_t i1 = static_cast<std::size_t>(U(rng) * (n - 1)) % (n - 1);
    if (i1 >= i0) ++i1;
    const double b = n > 2 ? tail_scale * U(rng) : 0.0;
    const double theta = 0.25 * kPi + angle_scale * (2.0 * U(rng) - 1.0);
    const double main = std::sqrt(std::max(0.0, 1.0 - b * b));
    x[i0] = main * std::cos(theta);
    x[i1] = main * std::sin(theta);
    if (n > 2) {
      std::vector<double> t;
      double s = 0.0;
      for (int k = 0; k < n - 2; ++k) {
        // Sparse tails: each coordinate is switched off with probability 1/2.
        const double v = U(rng) < 0.5 ? 0.0 : G(rng);
        t.push_back(v);
        s += v * v;
      }
      if (s > 0) {
        std::size_t k = 0;
        for (std::size_t j = 0; j < x.size(); ++j) {
          if (j == i0 || j == i1) continue;
          x[j] = b * t[k++] / std::sqrt(s);
        }
      }
    }
    const Direction a = Direction::normalize(x);
    bool ok;
    if (kind == SamplerKind::Section) {
      ok = section_volume({a, 0.0}).value >= (1.0 - eps) * kSqrt2;
    } else {
      ok = r1_exact(a).value <= (1.0 + eps) * kInvSqrt2;
    }
    if (ok) out.push_back(a);
  }
  if (static_cast<int>(out.size()) < count) {
    throw Error(ErrorCode::SamplerStarved, "found " + std::to_string(out.size()) + " of " + std::to_string(count) +
                                               " hypothesis-satisfying samples");
  }
  return out;
}

}  // namespace cubeslice

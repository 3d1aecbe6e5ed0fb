#include "cubeslice/certify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "cubeslice/ball_integral.hpp"
#include "cubeslice/cube_section.hpp"
#include "cubeslice/extremal_search.hpp"
#include "cubeslice/khintchine.hpp"
#include "cubeslice/minentropy.hpp"

namespace cubeslice {

namespace {

class Sheet {
 public:
  explicit Sheet(std::string provenance)
      : table_({"check", "param", "value", "reference", "pass"}, std::move(provenance)) {}

  void row(const std::string& check, Cell param, double value, double reference, bool ok) {
    table_.add_row({check, std::move(param), value, reference, ok});
    pass_ = pass_ && ok;
  }

  Certification done() { return {std::move(table_), pass_}; }

 private:
  ResultTable table_;
  bool pass_ = true;
};

std::vector<double> or_default(const std::vector<double>& given, std::vector<double> fallback) {
  return given.empty() ? fallback : given;
}

Direction random_direction(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> U(lo, hi);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = coin(rng) ? U(rng) : -U(rng);
  return Direction::normalize(v);
}

Direction gaussian_direction(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> G(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = G(rng);
  return Direction::normalize(v);
}

Distribution random_step_density(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pieces(1, 6);
  std::uniform_real_distribution<double> width(0.05, 1.0), height(0.1, 1.0), shift(-2.0, 2.0);
  const int k = pieces(rng);
  std::vector<double> br{shift(rng)};
  std::vector<poly::Poly> p;
  double mass = 0.0;
  for (int i = 0; i < k; ++i) {
    const double w = width(rng), h = height(rng);
    br.push_back(br.back() + w);
    p.push_back({h});
    mass += w * h;
  }
  for (auto& q : p) q[0] /= mass;
  return Distribution::density(PiecewisePoly(std::move(br), std::move(p)), 1e-12);
}

std::vector<Distribution> random_collection(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(2, 5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int n = count(rng);
  std::vector<Distribution> xs;
  for (int i = 0; i < n; ++i) {
    if (i > 0 && U(rng) < 0.1) {
      xs.push_back(Distribution::point(4.0 * U(rng) - 2.0));
    } else {
      xs.push_back(random_step_density(rng));
    }
  }
  return xs;
}

// ---- 1 -------------------------------------------------------------------
Certification cert_ball_integral(const CertifyOptions& o) {
  Sheet sh("Ball integral inequality: B(s) + err < sqrt(2/s) for s > 2, identity at s = 2");
  const IntegralResult b2 = ball_integral(2.0, o.cfg);
  sh.row("B(2)", 2.0, b2.value, 1.0, std::abs(b2.value - 1.0) <= 1e-10);
  for (double s : or_default(o.grid, {2.01, 2.1, 2.5, 3, 4, 6, 10, 20, 50, 100})) {
    const IntegralResult b = ball_integral(s, o.cfg);
    const double bound = gaussian_comparison(s);
    sh.row("B(s)+err", s, b.value + b.err_bound, bound, b.value + b.err_bound < bound);
  }
  return sh.done();
}

// ---- 2 -------------------------------------------------------------------
Certification cert_series(const CertifyOptions& o) {
  Sheet sh("series coefficients: alpha_1, beta_1 by quadrature; alpha_n < beta_n");
  const double a1 = alpha_coeff_quadrature(1);
  const double a1_ref = (kSqrt2 - 1.0) / kSqrt2;
  sh.row("alpha_1", 1.0, a1, a1_ref, std::abs(a1 - a1_ref) <= 1e-8);
  const double b1 = beta_coeff(1, o.cfg).value;
  sh.row("beta_1", 1.0, b1, 1.0 / 3.0, std::abs(b1 - 1.0 / 3.0) <= 1e-8);
  for (int n = 1; n <= 20; ++n) {
    const double a = alpha_coeff(n);
    const IntegralResult b = beta_coeff(n, o.cfg);
    sh.row("beta_n-alpha_n", static_cast<std::int64_t>(n), b.value - b.err_bound - a, 0.0,
           a < b.value - b.err_bound);
  }
  return sh.done();
}

// ---- 3 -------------------------------------------------------------------
Certification cert_lem_s(const CertifyOptions& o) {
  Sheet sh("reverse bound threshold: 2 < s*(delta) <= 2 + 50 delta and <= first-term bound");
  for (double d : or_default(o.grid, {1e-4, 1e-3, 5e-3, 1e-2, 2e-2})) {
    const ThresholdResult t = reverse_bound_threshold(d, o.cfg);
    sh.row("s*<=2+50d", d, t.value, 2.0 + 50.0 * d, t.value > 2.0 && t.within_lemma_bound);
    sh.row("s*<=first_term", d, t.value, first_term_bound(d), t.within_first_term_bound);
  }
  return sh.done();
}

// ---- 4 -------------------------------------------------------------------
Certification cert_sections(const CertifyOptions& o) {
  Sheet sh("cube sections: extremal value, Fourier vs geometric, sqrt2 and projection bounds");
  const Direction ex = Direction::normalize(std::vector<double>{1.0, 1.0});
  const double g = section_volume_geometric({ex, 0.0});
  sh.row("sigma_extremal", 0.0, g, kSqrt2, std::abs(g - kSqrt2) <= 1e-9);
  std::mt19937_64 rng(o.seed ^ 0x5EC710u);
  std::uniform_int_distribution<int> dim(2, 6);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  ToleranceConfig cfg = o.cfg;
  cfg.quad_abs_tol = std::max(cfg.quad_abs_tol, 1e-8);
  double worst_diff = 0.0, worst_sqrt2 = -INFINITY, worst_proj = -INFINITY;
  for (int i = 0; i < 100; ++i) {
    const int n = dim(rng);
    const Direction a = random_direction(rng, n, 0.1, 1.0);
    double half = 0.0;
    for (double x : a.coords()) half += 0.5 * std::abs(x);
    const double t = (2.0 * U(rng) - 1.0) * half;
    const double geo = section_volume_geometric({a, t});
    // Two coordinates leave the sinc product non-integrable past any cutoff;
    // the convolution evaluator is the second route there.
    const double other = n >= 3 ? section_volume_fourier({a, t}, cfg).value : section_volume_convolution({a, t});
    worst_diff = std::max(worst_diff, std::abs(geo - other));
    worst_sqrt2 = std::max(worst_sqrt2, std::max(geo, other) - kSqrt2);
    worst_proj = std::max(worst_proj, std::max(geo, other) - projection_bound(a));
  }
  sh.row("max|fourier-geometric|", static_cast<std::int64_t>(100), worst_diff, o.cfg.agreement_tol,
         worst_diff <= o.cfg.agreement_tol);
  sh.row("max(sigma-sqrt2)", static_cast<std::int64_t>(100), worst_sqrt2, 1e-9, worst_sqrt2 <= 1e-9);
  sh.row("max(sigma-1/max|a|)", static_cast<std::int64_t>(100), worst_proj, 1e-9, worst_proj <= 1e-9);
  return sh.done();
}

// ---- 5 / 9 ----------------------------------------------------------------
Certification cert_fuzz(const CertifyOptions& o, SamplerKind kind) {
  const bool section = kind == SamplerKind::Section;
  Sheet sh(section ? "quantitative slicing fuzz: windows 37.5eps / 2eps, tail 50eps"
                   : "quantitative Khintchine fuzz: windows 30eps / eps, tail 57eps");
  const std::vector<double> eps =
      or_default(o.eps, section ? std::vector<double>{1e-3, 5e-3, 1e-2} : std::vector<double>{1e-3, 5e-3, 9e-3});
  for (double e : eps) {
    int held = 0, certified = 0, total = 0;
    double worst_low = INFINITY, worst_tail = 0.0;
    for (int n = 2; n <= 6; ++n) {
      const std::uint64_t seed = o.seed * 1000003u + static_cast<std::uint64_t>(n) * 7919u +
                                 static_cast<std::uint64_t>(std::llround(e * 1e6));
      for (const Direction& a : near_extremal_sampler(n, e, 40, seed, kind)) {
        const StabilityReport r = section ? quantitative_slice_report(a, 0.0, e, o.cfg)
                                          : quantitative_khintchine_report(a, e, o.cfg);
        ++total;
        held += r.hypothesis_holds;
        certified += r.certified;
        worst_low = std::min(worst_low, r.lower_dev);
        worst_tail = std::max(worst_tail, r.tail_mass / e);
      }
    }
    sh.row("certified/held", e, certified, held, held == total && certified == held);
    sh.row("min lower_dev", e, worst_low, section ? -37.5 : -30.0, worst_low >= (section ? -37.5 : -30.0));
    sh.row("max tail/eps", e, worst_tail, section ? 50.0 : 57.0, worst_tail <= (section ? 50.0 : 57.0));
  }
  return sh.done();
}

// ---- 6 -------------------------------------------------------------------
Certification cert_f_values(const CertifyOptions& o) {
  Sheet sh("Haagerup F: values, three-form agreement, monotonicity, upper limit");
  const double f2 = f_gamma(2.0).value, f3 = f_gamma(3.0).value;
  sh.row("F(2)", 2.0, f2, kInvSqrt2, std::abs(f2 - kInvSqrt2) <= 1e-10);
  const double f3_ref = 4.0 / (kPi * std::sqrt(3.0));
  sh.row("F(3)", 3.0, f3, f3_ref, std::abs(f3 - f3_ref) <= 1e-10);
  for (double s : or_default(o.grid, {0.5, 1, 2, 3, 4, 10, 50})) {
    const double fg = f_gamma(s).value;
    const double dp = std::abs(fg - f_product(s, 10000).value);
    const double di = std::abs(fg - f_integral(s, o.cfg).value);
    sh.row("|gamma-product|", s, dp, 1e-8, dp <= 1e-8);
    sh.row("|gamma-integral|", s, di, 1e-7, di <= 1e-7);
  }
  double min_step = INFINITY, max_f = 0.0, prev = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double s = 0.5 + (100.0 - 0.5) * i / 99.0;
    const double f = f_gamma(s).value;
    if (i > 0) min_step = std::min(min_step, f - prev);
    max_f = std::max(max_f, f);
    prev = f;
  }
  sh.row("min increment", static_cast<std::int64_t>(100), min_step, 0.0, min_step > 0.0);
  sh.row("max F", static_cast<std::int64_t>(100), max_f, std::sqrt(2.0 / kPi), max_f < std::sqrt(2.0 / kPi));
  return sh.done();
}

// ---- 7 -------------------------------------------------------------------
Certification cert_lem_treport(const CertifyOptions& o) {
  Sheet sh("F thresholds, derivative bounds and the footnote sum");
  for (double e : or_default(o.eps, {1e-3, 1e-2, 2.9e-2})) {
    const ThresholdResult t = lemma_treport_threshold(e);
    sh.row("threshold<=2(1+20eps)", e, t.value, 2.0 * (1.0 + 20.0 * e), t.within_lemma_bound);
  }
  const double lo_ref = 1.0 / (40.0 * kSqrt2);
  double min_lower = INFINITY;
  for (int i = 0; i < 50; ++i) min_lower = std::min(min_lower, f_prime(2.0 + i / 49.0).lower);
  sh.row("min F' on [2,3]", static_cast<std::int64_t>(50), min_lower, lo_ref, min_lower >= lo_ref);
  const double hi_ref = kPi * kPi / (48.0 * kSqrt2);
  const double a = 2.0 / (1.01 * 1.01);
  double max_upper = 0.0;
  for (int i = 0; i < 50; ++i) max_upper = std::max(max_upper, f_prime(a + (2.0 - a) * i / 49.0).upper);
  sh.row("max F' on [2/1.01^2,2]", static_cast<std::int64_t>(50), max_upper, hi_ref, max_upper <= hi_ref);
  for (double e : {0.005, 0.01}) {
    const auto [lhs, rhs] = lemma_treport2_check(e);
    sh.row("F(2/(1+eps)^2)-(1-pi^2eps/12)/sqrt2", e, lhs - rhs, 0.0, lhs >= rhs);
  }
  const double fs = footnote_sum_check(5);
  sh.row("footnote sum K=5", static_cast<std::int64_t>(5), fs, 1.0 / 40.0, fs >= 1.0 / 40.0);
  return sh.done();
}

// ---- 8 -------------------------------------------------------------------
Certification cert_khintchine(const CertifyOptions& o) {
  Sheet sh("Khintchine: Szarek constant, enumeration vs cosine integral, Haagerup lower bound");
  const Direction sz = Direction::from_unit(std::vector<double>{kInvSqrt2, kInvSqrt2});
  const double r = r1_exact(sz).value;
  sh.row("R1(1/sqrt2,1/sqrt2)", 2.0, r, kInvSqrt2, std::abs(r - kInvSqrt2) <= 1e-15);
  std::mt19937_64 rng(o.seed ^ 0x4B41u);
  std::uniform_int_distribution<int> d12(1, 12), d16(1, 16);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Direction a = gaussian_direction(rng, d12(rng));
    worst = std::max(worst, std::abs(r1_exact(a).value - r1_cosine_integral(a, o.cfg).value));
  }
  sh.row("max|exact-cosine|", static_cast<std::int64_t>(100), worst, 1e-6, worst <= 1e-6);
  double worst_h = -INFINITY, worst_m = -INFINITY;
  for (int i = 0; i < 500; ++i) {
    const Direction a = gaussian_direction(rng, d16(rng));
    const double r1 = r1_exact(a).value;
    worst_h = std::max(worst_h, haagerup_lower_bound(a) - r1);
    worst_m = std::max(worst_m, max_coord_bound(a) - r1);
  }
  sh.row("max(haagerup-R1)", static_cast<std::int64_t>(500), worst_h, 1e-12, worst_h <= 1e-12);
  sh.row("max(max|a|-R1)", static_cast<std::int64_t>(500), worst_m, 1e-12, worst_m <= 1e-12);
  const Direction q = Direction::normalize(std::vector<double>{1, 1, 1, 1});
  const double h = haagerup_lower_bound(q), e = r1_exact(q).value;
  sh.row("haagerup(1,1,1,1)/2", 4.0, h, e, std::abs(h - e) <= 1e-10 && std::abs(e - 0.75) <= 1e-10);
  return sh.done();
}

// ---- 10 ------------------------------------------------------------------
Certification cert_min_epi(const CertifyOptions& o) {
  Sheet sh("min-entropy power: equality, Bobkov-Chistyakov slack, Rogozin, section identity, equality cases");
  const EpiReport two = sum_min_entropy({Distribution::uniform(0, 1), Distribution::uniform(0, 1)});
  sh.row("slack iid uniforms", 2.0, two.slack, 0.0, std::abs(two.slack) <= 1e-10);
  std::mt19937_64 rng(o.seed ^ 0xE91u);
  double min_slack = INFINITY, min_rog = INFINITY;
  bool agree = true;
  for (int i = 0; i < 200; ++i) {
    const auto xs = random_collection(rng);
    const EpiReport r = sum_min_entropy(xs);
    min_slack = std::min(min_slack, r.slack);
    const RogozinResult g = rogozin_compare(xs);
    min_rog = std::min(min_rog, g.sum_x - g.sum_z);
    agree = agree && g.routes_agree;
  }
  sh.row("min slack", static_cast<std::int64_t>(200), min_slack, -1e-9, min_slack >= -1e-9);
  sh.row("min Rogozin gap", static_cast<std::int64_t>(200), min_rog, -1e-9, min_rog >= -1e-9 && agree);
  std::uniform_int_distribution<int> dim(2, 5);
  std::uniform_real_distribution<double> U(0.05, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    std::vector<double> th(static_cast<std::size_t>(dim(rng)));
    for (double& x : th) x = U(rng);
    const Direction theta = Direction::normalize(th);
    std::vector<Distribution> us;
    for (double x : theta.coords()) us.push_back(Distribution::uniform(-0.5 * x, 0.5 * x));
    const double conv = n_infinity(sum_of(us));
    const double sig = section_volume({theta, 0.0}, o.cfg).value;
    worst = std::max(worst, std::abs(conv - 1.0 / (sig * sig)));
  }
  sh.row("max|N(sum)-sigma^-2|", static_cast<std::int64_t>(50), worst, 1e-7, worst <= 1e-7);
  std::uniform_int_distribution<int> parts(1, 3), extras(0, 2);
  std::uniform_real_distribution<double> len(0.1, 1.0), gap(0.05, 1.0), pos(-3.0, 3.0);
  double worst_eq = 0.0;
  for (int i = 0; i < 20; ++i) {
    std::vector<std::pair<double, double>> A;
    double x0 = pos(rng);
    for (int k = parts(rng); k > 0; --k) {
      const double l = len(rng);
      A.emplace_back(x0, x0 + l);
      x0 += l + gap(rng);
    }
    std::vector<double> pts;
    for (int k = extras(rng); k > 0; --k) pts.push_back(pos(rng));
    const auto xs = equality_case_construct(A, pos(rng), pts);
    worst_eq = std::max(worst_eq, std::abs(sum_min_entropy(xs).slack));
  }
  sh.row("max|slack| equality cases", static_cast<std::int64_t>(20), worst_eq, 1e-10, worst_eq <= 1e-10);
  return sh.done();
}

// ---- 11 ------------------------------------------------------------------
Certification cert_search(const CertifyOptions& o) {
  Sheet sh("extremal search: sqrt2 section maximum with two-point support, 1/sqrt2 Khintchine minimum");
  SearchConfig sc;
  sc.seed = o.seed;
  sc.restarts = 8;
  for (int n = 2; n <= 4; ++n) {
    const SearchResult r = maximize_section(n, sc);
    int big = 0, small = 0;
    for (double x : r.a.coords()) {
      if (std::abs(std::abs(x) - kInvSqrt2) <= 1e-3) ++big;
      if (std::abs(x) < 1e-3) ++small;
    }
    const bool support = big == 2 && small == n - 2;
    sh.row("max sigma(a,0)", static_cast<std::int64_t>(n), r.value, kSqrt2,
           std::abs(r.value - kSqrt2) <= 1e-5 && support);
  }
  for (int n = 2; n <= 8; ++n) {
    const SearchResult r = minimize_r1(n, sc);
    sh.row("min R1(a)", static_cast<std::int64_t>(n), r.value, kInvSqrt2, std::abs(r.value - kInvSqrt2) <= 1e-6);
  }
  const SearchResult a = maximize_section(3, sc), b = maximize_section(3, sc);
  bool same = a.value == b.value;
  for (std::size_t i = 0; i < a.a.size(); ++i) same = same && a.a[i] == b.a[i];
  sh.row("repeatable", static_cast<std::int64_t>(3), a.value - b.value, 0.0, same);
  return sh.done();
}

using Runner = std::function<Certification(const CertifyOptions&)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> m{
      {"ball-integral", cert_ball_integral},
      {"series-coefficients", cert_series},
      {"lem-s", cert_lem_s},
      {"cube-sections", cert_sections},
      {"quant-ball", [](const CertifyOptions& o) { return cert_fuzz(o, SamplerKind::Section); }},
      {"f-values", cert_f_values},
      {"lem-treport", cert_lem_treport},
      {"khintchine", cert_khintchine},
      {"quant-khintchine", [](const CertifyOptions& o) { return cert_fuzz(o, SamplerKind::Khintchine); }},
      {"min-epi", cert_min_epi},
      {"extremal-search", cert_search},
  };
  return m;
}

}  // namespace

const std::vector<std::string>& certification_ids() {
  static const std::vector<std::string> ids{"ball-integral", "series-coefficients", "lem-s",       "cube-sections",
                                            "quant-ball",    "f-values",            "lem-treport", "khintchine",
                                            "quant-khintchine", "min-epi",          "extremal-search"};
  return ids;
}

Certification certify(const std::string& id, const CertifyOptions& opt) {
  opt.cfg.validate();
  const auto& m = runners();
  const auto it = m.find(id);
  if (it == m.end()) throw Error(ErrorCode::InvalidArgument, "unknown theorem id '" + id + "'");
  return it->second(opt);
}

}  // namespace cubeslice

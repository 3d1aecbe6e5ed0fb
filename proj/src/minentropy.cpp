#include "cubeslice/minentropy.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include "cubeslice/cube_section.hpp"

namespace cubeslice {

using poly::Poly;

Distribution Distribution::point(double location) {
  if (!std::isfinite(location)) throw Error(ErrorCode::NonFinite, "point mass location must be finite");
  Distribution d;
  d.location_ = location;
  return d;
}

Distribution Distribution::density(PiecewisePoly pdf, double mass_tol) {
  if (pdf.empty()) throw Error(ErrorCode::InvalidDensity, "density has no pieces");
  const double mass = pdf.integral();
  if (std::abs(mass - 1.0) > mass_tol) {
    throw Error(ErrorCode::InvalidDensity, "density integrates to " + format_double(mass));
  }
  const double peak = pdf.max();
  if (pdf.min() < -1e-12 * std::max(1.0, peak)) throw Error(ErrorCode::InvalidDensity, "density takes negative values");
  Distribution d;
  d.pdf_ = std::move(pdf);
  return d;
}

Distribution Distribution::uniform(double lo, double hi) {
  if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "uniform needs lo < hi");
  return density(PiecewisePoly::constant(lo, hi, 1.0 / (hi - lo)), 1e-12);
}

Distribution Distribution::uniform_on(std::vector<std::pair<double, double>> iv) {
  std::sort(iv.begin(), iv.end());
  double len = 0.0;
  for (const auto& [lo, hi] : iv) {
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
      throw Error(ErrorCode::InvalidArgument, "interval endpoints must be finite with lo <= hi");
    }
    len += hi - lo;
  }
  if (iv.empty() || !(len > 0.0)) throw Error(ErrorCode::EmptySet, "set has zero length");
  std::vector<double> breaks;
  std::vector<Poly> pieces;
  for (const auto& [lo, hi] : iv) {
    if (hi == lo) continue;
    if (!breaks.empty()) {
      if (lo < breaks.back()) throw Error(ErrorCode::InvalidArgument, "intervals overlap");
      if (lo > breaks.back()) {
        pieces.push_back(Poly{0.0});
        breaks.push_back(lo);
      }
    } else {
      breaks.push_back(lo);
    }
    pieces.push_back(Poly{1.0 / len});
    breaks.push_back(hi);
  }
  return density(PiecewisePoly(std::move(breaks), std::move(pieces)), 1e-12);
}

const PiecewisePoly& Distribution::pdf() const {
  if (!pdf_) throw Error(ErrorCode::InvalidArgument, "a point mass has no density");
  return *pdf_;
}

double m_functional(const Distribution& X) { return X.is_point() ? INFINITY : X.pdf().max(); }

double n_infinity(const Distribution& X) {
  if (X.is_point()) return 0.0;
  const double m = X.pdf().max();
  return 1.0 / (m * m);
}

Distribution scale(const Distribution& X, double lambda) {
  if (lambda == 0.0) throw Error(ErrorCode::ZeroScale, "scale factor must be nonzero");
  if (X.is_point()) return Distribution::point(lambda * X.location());
  return Distribution::density(X.pdf().scaled(lambda), 1e-9);
}

Distribution convolve(const Distribution& X, const Distribution& Y) {
  if (X.is_point() && Y.is_point()) return Distribution::point(X.location() + Y.location());
  if (X.is_point()) return Distribution::density(Y.pdf().translated(X.location()), 1e-9);
  if (Y.is_point()) return Distribution::density(X.pdf().translated(Y.location()), 1e-9);
  return Distribution::density(convolve(X.pdf(), Y.pdf()), 1e-9);
}

Distribution sum_of(const std::vector<Distribution>& Xs) {
  if (Xs.empty()) throw Error(ErrorCode::InvalidArgument, "empty collection");
  Distribution acc = Xs.front();
  for (std::size_t i = 1; i < Xs.size(); ++i) acc = convolve(acc, Xs[i]);
  return acc;
}

EpiReport sum_min_entropy(const std::vector<Distribution>& Xs) {
  if (Xs.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two distributions");
  EpiReport r;
  CompensatedSum rhs;
  for (const auto& X : Xs) rhs.add(n_infinity(X));
  r.rhs = 0.5 * rhs.value();
  r.lhs = n_infinity(sum_of(Xs));
  r.slack = r.lhs - r.rhs;
  return r;
}

RogozinResult rogozin_compare(const std::vector<Distribution>& Xs) {
  if (Xs.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two distributions");
  RogozinResult r;
  r.sum_x = n_infinity(sum_of(Xs));
  std::vector<double> w;
  for (const auto& X : Xs) {
    const double v = n_infinity(X);
    if (v > 0.0) w.push_back(std::sqrt(v));
  }
  if (w.empty()) {
    r.sum_z = r.sum_z_section = 0.0;
  } else {
    std::vector<Distribution> Z;
    for (double wi : w) Z.push_back(Distribution::uniform(-0.5 * wi, 0.5 * wi));
    r.sum_z = n_infinity(sum_of(Z));
    // sum Z = W <theta, U>, density at 0 = sigma(theta, 0) / W.
    CompensatedSum w2;
    for (double wi : w) w2.add(wi * wi);
    const double W = std::sqrt(w2.value());
    const Direction theta = Direction::normalize(w);
    const double sig = section_volume({theta, 0.0}).value;
    r.sum_z_section = W * W / (sig * sig);
  }
  r.holds = r.sum_x >= r.sum_z - 1e-9;
  r.routes_agree = std::abs(r.sum_z - r.sum_z_section) <= 1e-7;
  return r;
}

std::vector<Distribution> equality_case_construct(std::vector<std::pair<double, double>> A, double x,
                                                  const std::vector<double>& extra_point_masses) {
  std::vector<Distribution> out;
  out.push_back(Distribution::uniform_on(A));
  std::vector<std::pair<double, double>> reflected;
  for (const auto& [lo, hi] : A) reflected.emplace_back(x - hi, x - lo);
  out.push_back(Distribution::uniform_on(reflected));
  for (double p : extra_point_masses) out.push_back(Distribution::point(p));
  return out;
}

EpiReport quantitative_epi_report(const std::vector<Distribution>& Xs, double eps) {
  if (!(eps > 0.0 && eps < 1.0 / 75.0)) throw Error(ErrorCode::EpsilonOutOfRange, "eps must lie in (0, 1/75)");
  constexpr double kSlack = 1e-9;
  if (Xs.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two distributions");
  std::vector<double> N;
  CompensatedSum total;
  for (const auto& X : Xs) {
    N.push_back(n_infinity(X));
    total.add(N.back());
  }
  const Distribution S = sum_of(Xs);
  EpiReport r;
  r.epsilon = eps;
  r.lhs = n_infinity(S);
  r.rhs = 0.5 * total.value();
  r.slack = r.lhs - r.rhs;
  r.hypothesis_lhs = (1.0 - eps) * (1.0 - eps) * r.lhs;
  r.hypothesis_lhs_direct = n_infinity(scale(S, 1.0 - eps));
  r.hypothesis_holds = r.hypothesis_lhs <= r.rhs;

  std::size_t i0 = 0;
  for (std::size_t i = 1; i < N.size(); ++i) {
    if (N[i] > N[i0]) i0 = i;
  }
  std::size_t i1 = i0 == 0 ? 1 : 0;
  for (std::size_t i = 0; i < N.size(); ++i) {
    if (i != i0 && N[i] > N[i1]) i1 = i;
  }
  CompensatedSum tail;
  for (std::size_t i = 0; i < N.size(); ++i) {
    if (i != i0 && i != i1) tail.add(N[i]);
  }
  r.tail = tail.value();
  if (!r.hypothesis_holds) {
    r.note = "hypothesis fails; no conclusion to certify";
    return r;
  }
  r.indices = std::make_pair(i0, i1);
  const double lo = (1.0 - 37.5 * eps) * (1.0 - 37.5 * eps) * r.rhs - kSlack;
  const double hi = (1.0 + 2.0 * eps) * (1.0 + 2.0 * eps) * r.rhs + kSlack;
  const auto inside = [&](std::size_t i) { return N[i] >= lo && N[i] <= hi; };
  r.certified = inside(i0) && inside(i1) && r.tail <= 50.0 * eps * total.value() + kSlack;
  r.note = "hypothesis via homogeneity " + format_double(r.hypothesis_lhs) + ", direct " +
           format_double(r.hypothesis_lhs_direct);
  return r;
}

namespace {

struct PendingPiece {
  double lo, hi;
  Poly coeffs;
};

Distribution finish_block(std::vector<PendingPiece>& block, int line) {
  std::sort(block.begin(), block.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  std::vector<double> breaks{block.front().lo};
  std::vector<Poly> pieces;
  for (auto& p : block) {
    if (p.lo < breaks.back()) {
      throw Error(ErrorCode::ParseError, "overlapping pieces in block ending at line " + std::to_string(line));
    }
    if (p.lo > breaks.back()) {
      pieces.push_back(Poly{0.0});
      breaks.push_back(p.lo);
    }
    pieces.push_back(std::move(p.coeffs));
    breaks.push_back(p.hi);
  }
  PiecewisePoly pdf(std::move(breaks), std::move(pieces));
  const double mass = pdf.integral();
  if (!(std::abs(mass - 1.0) <= 1e-6)) {
    throw Error(ErrorCode::InvalidDensity, "block ending at line " + std::to_string(line) + " has mass " +
                                                format_double(mass));
  }
  return Distribution::density(pdf.times(1.0 / mass), 1e-12);
}

}  // namespace

std::vector<Distribution> parse_distributions(std::istream& in) {
  std::vector<Distribution> out;
  std::vector<PendingPiece> block;
  std::string raw;
  int line_no = 0;
  auto flush = [&] {
    if (!block.empty()) {
      out.push_back(finish_block(block, line_no));
      block.clear();
    }
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first) || first == "---") {
      flush();
      continue;
    }
    const std::string where = " at line " + std::to_string(line_no);
    if (first == "point") {
      flush();
      double x;
      std::string extra;
      if (!(ss >> x) || (ss >> extra)) throw Error(ErrorCode::ParseError, "expected 'point <x>'" + where);
      out.push_back(Distribution::point(x));
      continue;
    }
    std::vector<double> nums;
    {
      std::istringstream all(line);
      std::string tok;
      while (all >> tok) {
        try {
          std::size_t used = 0;
          const double v = std::stod(tok, &used);
          if (used != tok.size()) throw std::invalid_argument(tok);
          nums.push_back(v);
        } catch (const std::exception&) {
          throw Error(ErrorCode::ParseError, "not a number '" + tok + "'" + where);
        }
      }
    }
    if (nums.size() < 3) throw Error(ErrorCode::ParseError, "expected 'lo hi c0 [c1 ...]'" + where);
    for (double v : nums) {
      if (!std::isfinite(v)) throw Error(ErrorCode::ParseError, "non-finite value" + where);
    }
    if (!(nums[0] < nums[1])) throw Error(ErrorCode::ParseError, "need lo < hi" + where);
    if (nums.size() - 2 > static_cast<std::size_t>(kMaxDegree) + 1) {
      throw Error(ErrorCode::DegreeOverflow, "piece degree above 16" + where);
    }
    block.push_back({nums[0], nums[1], Poly(nums.begin() + 2, nums.end())});
  }
  flush();
  if (out.empty()) throw Error(ErrorCode::ParseError, "no distributions found");
  return out;
}

}  // namespace cubeslice

#include "cubeslice/piecewise.hpp"

#include <algorithm>
#include <cmath>

#include "cubeslice/core.hpp"

namespace cubeslice {

using poly::Poly;

PiecewisePoly::PiecewisePoly(std::vector<double> breaks, std::vector<Poly> pieces)
    : breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
  if (pieces_.empty() || breaks_.size() != pieces_.size() + 1) {
    throw Error(ErrorCode::InvalidArgument, "need one more break than pieces");
  }
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
    if (!(breaks_[i] < breaks_[i + 1]) || !std::isfinite(breaks_[i + 1]) || !std::isfinite(breaks_[i])) {
      throw Error(ErrorCode::InvalidArgument, "breaks must be finite and strictly increasing");
    }
  }
  for (const auto& p : pieces_) {
    for (double c : p) {
      if (!std::isfinite(c)) throw Error(ErrorCode::NonFinite, "non-finite polynomial coefficient");
    }
  }
}

PiecewisePoly PiecewisePoly::constant(double lo, double hi, double value) {
  return PiecewisePoly({lo, hi}, {Poly{value}});
}

int PiecewisePoly::degree() const {
  int d = 0;
  for (const auto& p : pieces_) d = std::max(d, poly::degree(p));
  return d;
}

double PiecewisePoly::operator()(double x) const {
  if (pieces_.empty() || x < breaks_.front() || x > breaks_.back()) return 0.0;
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - breaks_.begin());
  i = i == 0 ? 0 : i - 1;
  if (i >= pieces_.size()) i = pieces_.size() - 1;
  return poly::eval(pieces_[i], x - breaks_[i]);
}

double PiecewisePoly::integral() const {
  CompensatedSum s;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    s.add(poly::integral(pieces_[i], 0.0, breaks_[i + 1] - breaks_[i]));
  }
  return s.value();
}

double PiecewisePoly::max() const {
  double m = -INFINITY;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    m = std::max(m, poly::max_on(pieces_[i], 0.0, breaks_[i + 1] - breaks_[i]));
  }
  return m;
}

double PiecewisePoly::min() const {
  double m = INFINITY;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    m = std::min(m, poly::min_on(pieces_[i], 0.0, breaks_[i + 1] - breaks_[i]));
  }
  return m;
}

PiecewisePoly PiecewisePoly::translated(double shift) const {
  auto b = breaks_;
  for (double& x : b) x += shift;
  return PiecewisePoly(std::move(b), pieces_);
}

PiecewisePoly PiecewisePoly::scaled(double lambda) const {
  if (lambda == 0.0) throw Error(ErrorCode::ZeroScale, "scale factor must be nonzero");
  const double inv = 1.0 / lambda;
  const double amp = 1.0 / std::abs(lambda);
  std::vector<double> b;
  std::vector<Poly> p;
  const std::size_t m = pieces_.size();
  if (lambda > 0) {
    for (double x : breaks_) b.push_back(lambda * x);
    for (const auto& q : pieces_) {
      Poly r = poly::rescale(q, inv);
      for (double& c : r) c *= amp;
      p.push_back(std::move(r));
    }
  } else {
    for (std::size_t i = breaks_.size(); i > 0; --i) b.push_back(lambda * breaks_[i - 1]);
    for (std::size_t i = m; i > 0; --i) {
      const std::size_t k = i - 1;
      Poly r = poly::rescale(poly::taylor_shift(pieces_[k], breaks_[k + 1] - breaks_[k]), inv);
      for (double& c : r) c *= amp;
      p.push_back(std::move(r));
    }
  }
  return PiecewisePoly(std::move(b), std::move(p));
}

PiecewisePoly PiecewisePoly::times(double c) const {
  auto p = pieces_;
  for (auto& q : p) {
    for (double& x : q) x *= c;
  }
  return PiecewisePoly(breaks_, std::move(p));
}

namespace {

// m-th iterated antiderivative of a piecewise polynomial, 0 left of the
// support, continued to the right by a single polynomial.
struct Antiderivative {
  std::vector<Poly> pieces;
  Poly tail;  // in the local variable x - breaks.back()
};

std::vector<Antiderivative> antiderivative_chain(const PiecewisePoly& f, int count) {
  const auto& br = f.breaks();
  std::vector<Antiderivative> chain;
  Antiderivative cur{f.pieces(), Poly{}};
  chain.push_back(cur);
  for (int m = 1; m <= count; ++m) {
    Antiderivative next;
    double left = 0.0;
    for (std::size_t i = 0; i < cur.pieces.size(); ++i) {
      Poly a = poly::antiderivative(cur.pieces[i]);
      a[0] += left;
      left = poly::eval(a, br[i + 1] - br[i]);
      next.pieces.push_back(std::move(a));
    }
    next.tail = poly::antiderivative(cur.tail);
    if (next.tail.empty()) next.tail.push_back(0.0);
    next.tail[0] += left;
    chain.push_back(next);
    cur = std::move(next);
  }
  return chain;
}

// m-th derivative of q at x.
double derivative_at(const Poly& q, int m, double x) {
  double s = 0.0;
  double xp = 1.0;
  for (std::size_t j = static_cast<std::size_t>(m); j < q.size(); ++j) {
    double falling = 1.0;
    for (int r = 0; r < m; ++r) falling *= static_cast<double>(j - r);
    s += q[j] * falling * xp;
    xp *= x;
  }
  return s;
}

}  // namespace

PiecewisePoly convolve(const PiecewisePoly& f, const PiecewisePoly& g) {
  if (f.empty() || g.empty()) throw Error(ErrorCode::InvalidArgument, "cannot convolve an empty function");
  const int df = f.degree();
  const int dg = g.degree();
  const int dout = df + dg + 1;
  if (dout > kMaxDegree) {
    throw Error(ErrorCode::DegreeOverflow, "convolution degree " + std::to_string(dout) + " exceeds " +
                                               std::to_string(kMaxDegree));
  }
  const auto chain = antiderivative_chain(f, dg + 1);
  const auto& fb = f.breaks();
  const auto& gb = g.breaks();
  const auto& gp = g.pieces();
  const std::size_t K = gp.size();

  // Jumps of g^(m) at every break of g.
  std::vector<std::vector<double>> jump(K + 1, std::vector<double>(dg + 1, 0.0));
  for (std::size_t k = 0; k <= K; ++k) {
    for (int m = 0; m <= dg; ++m) {
      double j = 0.0;
      if (k < K) j += derivative_at(gp[k], m, 0.0);
      if (k > 0) j -= derivative_at(gp[k - 1], m, gb[k] - gb[k - 1]);
      jump[k][m] = j;
    }
  }

  std::vector<double> z;
  for (double x : fb) {
    for (double b : gb) z.push_back(x + b);
  }
  std::sort(z.begin(), z.end());
  std::vector<double> zb;
  for (double x : z) {
    if (zb.empty() || x - zb.back() > 1e-12 * (1.0 + std::abs(x))) zb.push_back(x);
  }
  // The extreme sums are exact; make sure merging kept them.
  zb.front() = fb.front() + gb.front();
  zb.back() = fb.back() + gb.back();
  if (zb.size() < 2) throw Error(ErrorCode::InvalidArgument, "degenerate convolution support");

  std::vector<Poly> out;
  out.reserve(zb.size() - 1);
  for (std::size_t j = 0; j + 1 < zb.size(); ++j) {
    Poly acc(static_cast<std::size_t>(dout + 1), 0.0);
    const double mid = 0.5 * (zb[j] + zb[j + 1]);
    for (std::size_t k = 0; k <= K; ++k) {
      const double x = mid - gb[k];
      if (x < fb.front()) continue;
      std::size_t i;
      double origin;
      bool tail = false;
      if (x >= fb.back()) {
        tail = true;
        i = 0;
        origin = fb.back();
      } else {
        i = static_cast<std::size_t>(std::upper_bound(fb.begin(), fb.end(), x) - fb.begin()) - 1;
        origin = fb[i];
      }
      const double h = zb[j] - gb[k] - origin;
      for (int m = 0; m <= dg; ++m) {
        const double c = jump[k][m];
        if (c == 0.0) continue;
        const Poly& src = tail ? chain[m + 1].tail : chain[m + 1].pieces[i];
        const Poly shifted = poly::taylor_shift(src, h);
        for (std::size_t r = 0; r < shifted.size() && r < acc.size(); ++r) acc[r] += c * shifted[r];
      }
    }
    out.push_back(std::move(acc));
  }
  return PiecewisePoly(std::move(zb), std::move(out));
}

}  // namespace cubeslice

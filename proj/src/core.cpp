#include "cubeslice/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include <json.hpp>

namespace cubeslice {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TailNotBounded: return "TailNotBounded";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::DegreeOverflow: return "DegreeOverflow";
    case ErrorCode::ZeroScale: return "ZeroScale";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::InvalidDensity: return "InvalidDensity";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SamplerStarved: return "SamplerStarved";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

namespace {

void require_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, "direction has a non-finite entry");
  }
}

// Scaled 2-norm; avoids overflow/underflow for extreme magnitudes.
double norm2(std::span<const double> v) {
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  CompensatedSum s;
  for (double x : v) s.add((x / scale) * (x / scale));
  return scale * std::sqrt(s.value());
}

}  // namespace

Direction Direction::normalize(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorCode::InvalidArgument, "direction must have n >= 1");
  require_finite(v);
  const double nrm = norm2(v);
  if (nrm == 0.0) throw Error(ErrorCode::ZeroVector, "cannot normalize the zero vector");
  std::vector<double> c(v.begin(), v.end());
  for (double& x : c) x /= nrm;
  return Direction(std::move(c));
}

Direction Direction::from_unit(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorCode::InvalidArgument, "direction must have n >= 1");
  require_finite(v);
  CompensatedSum s;
  for (double x : v) s.add(x * x);
  if (std::abs(s.value() - 1.0) > kUnitNormTol) {
    throw Error(ErrorCode::InvalidArgument, "coordinates are not unit-norm within 1e-12");
  }
  return Direction(std::vector<double>(v.begin(), v.end()));
}

double Direction::max_abs() const {
  double m = 0.0;
  for (double x : coords_) m = std::max(m, std::abs(x));
  return m;
}

CanonicalDirection canonicalize(const Direction& a) {
  CanonicalDirection out;
  const auto c = a.coords();
  out.original_signs.resize(c.size());
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < c.size(); ++i) {
    out.original_signs[i] = (c[i] > 0) - (c[i] < 0);
    if (c[i] != 0.0) idx.push_back(i);
  }
  if (idx.empty()) throw Error(ErrorCode::AllZero, "every coordinate is zero");
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t i, std::size_t j) { return std::abs(c[i]) > std::abs(c[j]); });
  out.dropped_zeros = c.size() - idx.size();
  out.original_index = idx;
  out.coords.reserve(idx.size());
  for (std::size_t i : idx) out.coords.push_back(std::abs(c[i]));
  return out;
}

Direction CanonicalDirection::restore() const {
  std::vector<double> v(original_signs.size(), 0.0);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const std::size_t j = original_index[i];
    v[j] = original_signs[j] * coords[i];
  }
  return Direction::from_unit(v);
}

void ToleranceConfig::validate() const {
  if (!(quad_abs_tol > 0) || series_terms <= 0 || tail_cutoff <= 0 || !(agreement_tol > 0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerance settings must be strictly positive");
  }
}

const char* to_string(Method m) {
  switch (m) {
    case Method::Quadrature: return "quadrature";
    case Method::Series: return "series";
    case Method::ClosedForm: return "closed_form";
    case Method::MonteCarlo: return "monte_carlo";
  }
  return "unknown";
}

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
  abs_ += std::abs(x);
}

ResultTable::ResultTable(std::vector<std::string> columns, std::string provenance)
    : columns_(std::move(columns)), provenance_(std::move(provenance)) {}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw Error(ErrorCode::InvalidArgument, "row width does not match the table header");
  }
  rows_.push_back(std::move(row));
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

namespace {

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return std::to_string(v);
        }
      },
      c);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

void ResultTable::write_csv(std::ostream& os) const {
  if (!provenance_.empty()) os << "# " << provenance_ << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << csv_escape(columns_[i]);
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(cell_text(row[i]));
    os << '\n';
  }
}

void ResultTable::write_json(std::ostream& os) const {
  nlohmann::ordered_json doc;
  doc["provenance"] = provenance_;
  doc["columns"] = columns_;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : rows_) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              // JSON has no inf/nan; keep them as strings.
              if (std::isfinite(v)) {
                obj[columns_[i]] = v;
              } else {
                obj[columns_[i]] = format_double(v);
              }
            } else {
              obj[columns_[i]] = v;
            }
          },
          row[i]);
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  os << doc.dump(2) << '\n';
}

}  // namespace cubeslice

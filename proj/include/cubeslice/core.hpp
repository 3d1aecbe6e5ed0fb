#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cubeslice {

enum class ErrorCode {
  ZeroVector,
  NonFinite,
  AllZero,
  InvalidArgument,
  TailNotBounded,
  NonConvergent,
  DimensionTooLarge,
  IllConditioned,
  EpsilonOutOfRange,
  DomainError,
  BracketFailure,
  Overflow,
  DegreeOverflow,
  ZeroScale,
  EmptySet,
  InvalidDensity,
  NoConvergence,
  SamplerStarved,
  ParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline constexpr double kUnitNormTol = 1e-12;

/// Unit vector a in R^n. Only obtainable through `normalize` or `from_unit`,
/// so every instance satisfies |sum a_j^2 - 1| <= 1e-12.
class Direction {
 public:
  static Direction normalize(std::span<const double> v);
  /// Accepts coordinates that are already unit-norm; anything farther than
  /// kUnitNormTol from the sphere is rejected with InvalidArgument.
  static Direction from_unit(std::span<const double> v);

  std::span<const double> coords() const noexcept { return coords_; }
  std::size_t size() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double max_abs() const;

 private:
  explicit Direction(std::vector<double> c) : coords_(std::move(c)) {}
  std::vector<double> coords_;
};

/// |a_j| with zeros removed, sorted nonincreasing. `original_index[i]` is the
/// caller's index of canonical coordinate i; ties keep the lower original
/// index first.
struct CanonicalDirection {
  std::vector<double> coords;
  std::size_t dropped_zeros = 0;
  std::vector<std::size_t> original_index;
  std::vector<int> original_signs;  // -1, 0, +1 per original coordinate

  std::size_t size() const noexcept { return coords.size(); }
  std::size_t original_size() const noexcept { return original_signs.size(); }
  /// Rebuilds the original (signed, permuted, zero-padded) direction.
  Direction restore() const;
};

CanonicalDirection canonicalize(const Direction& a);

struct ToleranceConfig {
  double quad_abs_tol = 1e-10;
  int series_terms = 60;
  long tail_cutoff = 200000;
  double agreement_tol = 1e-6;

  void validate() const;
};

enum class Method { Quadrature, Series, ClosedForm, MonteCarlo };
const char* to_string(Method m);

struct IntegralResult {
  double value = 0.0;
  double err_bound = 0.0;  // standard error (not a certificate) for MonteCarlo
  Method method = Method::Quadrature;
  std::string detail;
};

struct StabilityReport {
  bool hypothesis_holds = false;
  double epsilon = 0.0;
  double measured = 0.0;   // sigma(a,t) or R_1(a)
  double threshold = 0.0;  // hypothesis boundary the measurement is compared to
  std::optional<std::pair<std::size_t, std::size_t>> indices;
  double lower_dev = 0.0;  // (sqrt2 |a_j| - 1) / eps for the smaller selected coordinate
  double upper_dev = 0.0;  // same for the larger one
  double tail_mass = 0.0;
  bool certified = false;
  std::string note;

  /// A hypothesis-satisfying input whose conclusion failed.
  bool violation() const noexcept { return hypothesis_holds && !certified; }
};

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }
  double abs_sum() const noexcept { return abs_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double abs_ = 0.0;
};

using Cell = std::variant<std::string, double, std::int64_t, bool>;

class ResultTable {
 public:
  ResultTable(std::vector<std::string> columns, std::string provenance = {});

  void add_row(std::vector<Cell> row);
  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
  const std::string& provenance() const noexcept { return provenance_; }

  void write_csv(std::ostream& os) const;
  void write_json(std::ostream& os) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::string provenance_;
};

std::string format_double(double x);

inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kPi = 3.14159265358979323846;

}  // namespace cubeslice

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cubeslice/core.hpp"

namespace cubeslice {

struct CertifyOptions {
  std::vector<double> eps;   // overrides the default epsilon grid
  std::vector<double> grid;  // overrides the default parameter grid
  std::uint64_t seed = 0;
  ToleranceConfig cfg;
};

struct Certification {
  ResultTable table;
  bool pass = false;
};

/// Theorem ids accepted by `certify`, in acceptance-criterion order.
const std::vector<std::string>& certification_ids();

/// Runs one certification sweep. Every table has the columns
/// check, param, value, reference, pass; `pass` is the conjunction of the
/// per-row verdicts. Throws InvalidArgument for an unknown id.
Certification certify(const std::string& id, const CertifyOptions& opt = {});

}  // namespace cubeslice

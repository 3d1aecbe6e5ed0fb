#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "cubeslice/core.hpp"
#include "doctest.h"

using namespace cubeslice;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

Direction dir(std::vector<double> v) { return Direction::normalize(v); }

}  // namespace

TEST_CASE("normalize") {
  const Direction a = dir({3, 4});
  CHECK(a[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(a[1] == doctest::Approx(0.8).epsilon(1e-15));

  const Direction b = dir({1, 1});
  CHECK(std::abs(b[0] - kInvSqrt2) <= 2e-16);
  CHECK(std::abs(b[1] - kInvSqrt2) <= 2e-16);

  CHECK(code_of([] { dir({0, 0}); }) == ErrorCode::ZeroVector);
  CHECK(code_of([] { dir({}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { dir({1, std::numeric_limits<double>::quiet_NaN()}); }) == ErrorCode::NonFinite);
  CHECK(code_of([] { dir({1, INFINITY}); }) == ErrorCode::NonFinite);
}

TEST_CASE("normalize survives extreme magnitudes") {
  const Direction big = dir({3e300, 4e300});
  CHECK(big[0] == doctest::Approx(0.6));
  const Direction tiny = dir({3e-300, 4e-300});
  CHECK(tiny[1] == doctest::Approx(0.8));
}

TEST_CASE("unit norm invariant over random inputs") {
  unsigned x = 12345;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + trial % 9);
    for (double& c : v) {
      x = x * 1103515245u + 12345u;
      c = static_cast<double>(x % 20001) / 1000.0 - 10.0;
    }
    v[0] += 0.5;  // keep it away from the zero vector
    const Direction a = Direction::normalize(v);
    double s = 0.0;
    for (double c : a.coords()) s += c * c;
    CHECK(std::abs(s - 1.0) <= kUnitNormTol);
  }
}

TEST_CASE("from_unit") {
  const std::vector<double> ok{0.6, 0.8};
  CHECK(Direction::from_unit(ok)[1] == 0.8);
  const std::vector<double> off{0.6, 0.8001};
  CHECK(code_of([&] { Direction::from_unit(off); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("canonicalize") {
  SUBCASE("signs and zeros") {
    const Direction a = Direction::from_unit(std::vector<double>{0.0, -kInvSqrt2, kInvSqrt2});
    const CanonicalDirection c = canonicalize(a);
    REQUIRE(c.size() == 2);
    CHECK(c.coords[0] == kInvSqrt2);
    CHECK(c.coords[1] == kInvSqrt2);
    CHECK(c.dropped_zeros == 1);
    // Equal magnitudes keep the lower index first.
    CHECK(c.original_index[0] == 1);
    CHECK(c.original_index[1] == 2);
  }
  SUBCASE("identity") {
    const CanonicalDirection c = canonicalize(dir({1}));
    CHECK(c.coords == std::vector<double>{1.0});
    CHECK(c.dropped_zeros == 0);
  }
  SUBCASE("sorting") {
    const CanonicalDirection c = canonicalize(Direction::from_unit(std::vector<double>{0.6, -0.8}));
    CHECK(c.coords == std::vector<double>{0.8, 0.6});
  }
  SUBCASE("restore is the inverse") {
    const Direction a = dir({0.0, -2.0, 5.0, 0.0, 1.0, -5.0});
    const Direction r = canonicalize(a).restore();
    REQUIRE(r.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(r[i] == a[i]);
  }
}

TEST_CASE("ToleranceConfig validation") {
  ToleranceConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.quad_abs_tol = 0.0;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidArgument);
  cfg = {};
  cfg.tail_cutoff = -1;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("compensated sum recovers cancellation") {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-6));
  CHECK(s.abs_sum() == doctest::Approx(2.0));
}

TEST_CASE("format_double") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.333333333333333");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(-INFINITY) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("ResultTable output") {
  ResultTable t({"name", "x", "n", "ok"}, "demo");
  t.add_row({std::string("a,b"), 0.5, std::int64_t{3}, true});
  t.add_row({std::string("plain"), INFINITY, std::int64_t{-1}, false});
  CHECK_THROWS_AS(t.add_row({0.5}), Error);

  std::ostringstream csv;
  t.write_csv(csv);
  CHECK(csv.str() == "# demo\nname,x,n,ok\n\"a,b\",0.5,3,true\nplain,inf,-1,false\n");

  std::ostringstream js;
  t.write_json(js);
  const auto doc = nlohmann::json::parse(js.str());
  CHECK(doc["provenance"] == "demo");
  CHECK(doc["columns"].size() == 4);
  CHECK(doc["rows"][0]["x"].get<double>() == 0.5);
  CHECK(doc["rows"][0]["n"].get<int>() == 3);
  CHECK(doc["rows"][0]["ok"].get<bool>());
  CHECK(doc["rows"][1]["x"] == "inf");
}

TEST_CASE("error messages carry the code name") {
  const Error e(ErrorCode::TailNotBounded, "x");
  CHECK(std::string(e.what()) == "TailNotBounded: x");
  CHECK(std::string(to_string(Method::MonteCarlo)) == "monte_carlo");
}

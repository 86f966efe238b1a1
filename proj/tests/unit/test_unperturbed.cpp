#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "subharmonic/errors.hpp"
#include "subharmonic/unperturbed.hpp"

using namespace subharmonic;
using std::numbers::pi;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("energy levels and axis initial conditions") {
  CHECK(kind_of([] { EnergyLevel(1.0); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([] { EnergyLevel(-1.0); }) == ErrorKind::OutOfRange);
  const PlanarState x = ic_on_axis(EnergyLevel(0.28));
  CHECK(x.u() == 0.0);
  CHECK(x.v() == doctest::Approx(1.6).epsilon(1e-14));
  CHECK(ic_on_axis(EnergyLevel(-1.0 + 5e-5)).v() == doctest::Approx(0.01).epsilon(1e-10));
  CHECK(EnergyLevel::from_axis_velocity(1.6).value() == doctest::Approx(0.28));
}

TEST_CASE("complete elliptic integral") {
  CHECK(complete_elliptic_k(0.0) == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(complete_elliptic_k(std::sqrt(0.5)) == doctest::Approx(1.8540746773013719).epsilon(1e-14));
  CHECK(complete_elliptic_k(0.8) == doctest::Approx(1.9953027776647297).epsilon(1e-14));
}

TEST_CASE("period oracle") {
  CHECK(period_oracle(1e-8) == doctest::Approx(2 * pi).epsilon(1e-14));
  CHECK(kind_of([] { period_oracle(2.0); }) == ErrorKind::OutOfRange);
}

TEST_CASE("period of a level") {
  CHECK(std::abs(period_of_level(0.01) - 2 * pi) < 1e-4);
  CHECK(std::abs(period_of_level(1.6) - period_oracle(1.6)) < 1e-7);
  CHECK(kind_of([] { period_of_level(2.0); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([] { period_of_level(0.0); }) == ErrorKind::OutOfRange);
  const double a = period_of_level(1.99), b = period_of_level(1.999), c = period_of_level(1.9999);
  CHECK(a < b);
  CHECK(b < c);
  CHECK(c > 23.0);
}

TEST_CASE("period function is increasing and matches the oracle on a grid") {
  std::vector<double> grid;
  for (int i = 0; i < 100; ++i) grid.push_back(0.05 + 1.9 * i / 99.0);
  const auto rows = period_curve(grid);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(std::abs(rows[i].T_c - rows[i].T_oracle) < 1e-7);
    CHECK(rows[i].c == doctest::Approx(0.5 * grid[i] * grid[i] - 1.0));
    if (i > 0) CHECK(rows[i].T_c > rows[i - 1].T_c);
  }
}

TEST_CASE("parallel and serial period curves are bit-identical") {
  std::vector<double> grid;
  for (int i = 0; i < 24; ++i) grid.push_back(0.1 + 0.07 * i);
  const auto par = period_curve(grid);
  const auto ser = period_curve_serial(grid);
  REQUIRE(par.size() == ser.size());
  CHECK(std::memcmp(par.data(), ser.data(), par.size() * sizeof(PeriodCurveRow)) == 0);
}

TEST_CASE("level_for_period inverts the period function") {
  const double Tc = period_of_level(1.6);
  const ResonanceSpec one = level_for_period(Tc, 1, 1);
  CHECK(std::abs(one.v0 - 1.6) < 1e-8);

  const ResonanceSpec three = level_for_period(period_oracle(1.6) / 3, 3, 1);
  CHECK(std::abs(three.c - 0.28) < 1e-8);
  CHECK(three.T_c == doctest::Approx(3 * three.T).epsilon(1e-9));

  for (auto [v, m, n] : {std::tuple{0.7, 2, 1}, std::tuple{1.3, 5, 2}, std::tuple{1.9, 3, 2}}) {
    const double T = period_of_level(v) * n / m;
    CHECK(std::abs(level_for_period(T, m, n).v0 - v) < 1e-8);
  }
  CHECK(kind_of([] { level_for_period(6.0, 1, 1); }) == ErrorKind::Unattainable);
  CHECK(kind_of([] { level_for_period(3.0, 2, 4); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("resonance from a level") {
  const ResonanceSpec spec = resonance_from_level(1.6, 3, 1);
  CHECK(spec.T == doctest::Approx(spec.T_c / 3));
  CHECK(spec.omega == doctest::Approx(2 * pi / spec.T));
  CHECK(spec.c == doctest::Approx(0.28));
  CHECK_NOTHROW(spec.validate());
  ResonanceSpec broken = spec;
  broken.T *= 1.001;
  CHECK_THROWS_AS(broken.validate(), Error);
  const ResonanceSpec two_five = resonance_from_level(1.6, 5, 2);
  CHECK(two_five.T == doctest::Approx(2 * two_five.T_c / 5));
}

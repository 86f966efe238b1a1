#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "helpers.hpp"
#include "subharmonic/dynamics.hpp"
#include "subharmonic/errors.hpp"
#include "subharmonic/integrator.hpp"

using namespace subharmonic;
using std::numbers::pi;

TEST_CASE("planar state rejects non-finite coordinates") {
  CHECK_THROWS_AS(PlanarState(std::nan(""), 0.0), Error);
  CHECK_THROWS_AS(PlanarState(0.0, std::numeric_limits<double>::infinity()), Error);
  CHECK(distance(PlanarState(0, 0), PlanarState(3, 4)) == doctest::Approx(5.0));
}

TEST_CASE("forcing spec validation and evaluation") {
  CHECK_THROWS_AS(ForcingSpec(0.0, {}), Error);
  CHECK_THROWS_AS(ForcingSpec(1.0, {{1.0, 0, PhaseKind::Sine}}), Error);
  const ForcingSpec g(2.0, {{1.0, 1, PhaseKind::Sine}, {4.0, 2, PhaseKind::Cosine}});
  const double t = 0.37;
  CHECK(g.value(t) == doctest::Approx(std::sin(2 * t) + 4 * std::cos(4 * t)).epsilon(1e-15));
  CHECK(g.derivative(t) == doctest::Approx(2 * std::cos(2 * t) - 16 * std::sin(4 * t)).epsilon(1e-15));
  CHECK(g.period() == doctest::Approx(pi));
  CHECK(ForcingSpec().value(1.0) == 0.0);
}

TEST_CASE("eval_field examples") {
  const SystemSpec free{};
  CHECK(eval_field(PlanarState(0, 0), 12.3, free) == PlanarState(0, 0));
  const PlanarState at_saddle = eval_field(PlanarState(pi, 0), 0.0, free);
  CHECK(at_saddle.u() == 0.0);
  CHECK(std::abs(at_saddle.v()) < 1e-15);

  const double omega = 2.0;
  const SystemSpec forced{ForcingSpec::sine(omega), 0.2};
  const double quarter = 0.25 * 2 * pi / omega;
  const PlanarState f = eval_field(PlanarState(0, 1.6), quarter, forced);
  CHECK(f.u() == 1.6);
  CHECK(f.v() == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("eval_field is periodic in t") {
  const SystemSpec sys{ForcingSpec(1.3, {{1, 1, PhaseKind::Sine}, {0.5, 3, PhaseKind::Cosine}}), 0.7};
  const PlanarState x(0.4, -0.9);
  for (double t : {0.0, 0.8, 3.1}) {
    CHECK(eval_field(x, t, sys).v() ==
          doctest::Approx(eval_field(x, t + sys.forcing.period(), sys).v()).epsilon(1e-14));
  }
}

TEST_CASE("hamiltonian and wedge examples") {
  CHECK(hamiltonian(PlanarState(0, 0)) == -1.0);
  CHECK(hamiltonian(PlanarState(pi, 0)) == doctest::Approx(1.0));
  CHECK(hamiltonian(PlanarState(0, 1.6)) == doctest::Approx(0.28));
  CHECK(wedge({1, 0}, {0, 1}) == 1.0);
  CHECK(wedge({2, 3}, {2, 3}) == 0.0);
  const double v = 1.3, u = 0.4, G = 0.7;
  CHECK(wedge({v, -std::sin(u)}, {0, G}) == doctest::Approx(v * G));
}

TEST_CASE("variational_field_2 examples") {
  const SystemSpec free{};
  VariationalState2 s{PlanarState(0, 0.5), Mat2::identity()};
  auto d = VariationalState2::unpack(variational_field_2(s.pack(), 0.0, free));
  CHECK(d.jac == Mat2::from_rows(0, 1, -1, 0));
  s.base = PlanarState(pi, 0.5);
  d = VariationalState2::unpack(variational_field_2(s.pack(), 0.0, free));
  CHECK(d.jac(0, 1) == 1.0);
  CHECK(d.jac(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("propagated jacobian has unit determinant") {
  const double omega = 2.36;
  for (double eps : {0.0, 0.3}) {
    const SystemSpec sys{ForcingSpec::sine(omega), eps};
    auto rhs = [&sys](double t, const VariationalVector2& y) { return variational_field_2(y, t, sys); };
    const VariationalState2 start{PlanarState(0.3, 1.1), Mat2::identity()};
    const auto end = VariationalState2::unpack(integrate<6>(rhs, start.pack(), 0.0, 2 * pi / omega));
    CHECK(std::abs(end.jac.det() - 1.0) < 1e-8);
  }
}

TEST_CASE("variational_field_3 reduces to the 2x2 system") {
  const SystemSpec free{ForcingSpec::sine(1.7), 0.0};
  VariationalState3 s;
  s.base = PlanarState(0.6, -0.2);
  s.clock = 0.9;
  const auto d3 = VariationalState3::unpack(variational_field_3(s.pack(), free));
  const auto d2 = VariationalState2::unpack(
      variational_field_2(VariationalState2{s.base, Mat2::identity()}.pack(), s.clock, free));
  CHECK(d3.jac_at(0, 0) == d2.jac(0, 0));
  CHECK(d3.jac_at(0, 1) == d2.jac(0, 1));
  CHECK(d3.jac_at(1, 0) == d2.jac(1, 0));
  CHECK(d3.jac_at(1, 1) == d2.jac(1, 1));
  CHECK(d3.jac_at(0, 2) == 0.0);
  CHECK(d3.jac_at(1, 2) == 0.0);
  CHECK(d3.clock == 1.0);
}

TEST_CASE("extended variational system against finite differences in t0") {
  const SystemSpec sys{ForcingSpec(2.36, {{1, 1, PhaseKind::Sine}, {0.5, 2, PhaseKind::Cosine}}), 0.3};
  const PlanarState x(0.2, 1.5);
  const double t0 = 0.4, span = 2.5;

  auto rhs3 = [&sys](double, const VariationalVector3& y) { return variational_field_3(y, sys); };
  VariationalState3 start;
  start.base = x;
  start.clock = t0;
  const auto end = VariationalState3::unpack(integrate<12>(rhs3, start.pack(), 0.0, span));
  CHECK(end.jac_at(2, 0) == 0.0);
  CHECK(end.jac_at(2, 1) == 0.0);
  CHECK(end.jac_at(2, 2) == 1.0);

  // Flow over a fixed elapsed time, as a function of the starting phase.
  auto rhs = [&sys](double t, const FlowVector& y) { return eval_field(y, t, sys); };
  const auto cfg = test_support::tight_config();
  const double h = 1e-6;
  const auto plus = integrate<2>(rhs, x.vec(), t0 + h, t0 + h + span, cfg);
  const auto minus = integrate<2>(rhs, x.vec(), t0 - h, t0 - h + span, cfg);
  CHECK(std::abs((plus[0] - minus[0]) / (2 * h) - end.jac_at(0, 2)) < 1e-5);
  CHECK(std::abs((plus[1] - minus[1]) / (2 * h) - end.jac_at(1, 2)) < 1e-5);
}

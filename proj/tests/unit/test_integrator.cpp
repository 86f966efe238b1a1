#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "subharmonic/dynamics.hpp"
#include "subharmonic/errors.hpp"
#include "subharmonic/integrator.hpp"
#include "subharmonic/unperturbed.hpp"

using namespace subharmonic;
using std::numbers::pi;

namespace {

StateVector<2> oscillator(double, const StateVector<2>& y) { return {y[1], -y[0]}; }

auto pendulum() {
  return [](double t, const FlowVector& y) { return eval_field(y, t, SystemSpec{}); };
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("harmonic oscillator returns after one period") {
  const auto y = integrate<2>(oscillator, {1.0, 0.0}, 0.0, 2 * pi);
  CHECK(std::abs(y[0] - 1.0) < 1e-8);
  CHECK(std::abs(y[1]) < 1e-8);
}

TEST_CASE("backward integration retraces the forward one") {
  const auto fwd = integrate<2>(oscillator, {1.0, 0.0}, 0.0, 3.0);
  const auto back = integrate<2>(oscillator, fwd, 3.0, 0.0);
  CHECK(std::abs(back[0] - 1.0) < 1e-8);
  CHECK(std::abs(back[1]) < 1e-8);
}

TEST_CASE("dense output matches the exact oscillator solution") {
  double worst = 0.0;
  auto observe = [&](const DenseStep<2>& step) {
    for (int k = 1; k < 8; ++k) {
      const double t = step.t_begin + (step.t_end - step.t_begin) * k / 8.0;
      const auto y = step(t);
      worst = std::max(worst, std::abs(y[0] - std::cos(t)) + std::abs(y[1] + std::sin(t)));
    }
    return true;
  };
  const std::vector<double> times{5.0};
  integrate_observed<2>(oscillator, {1.0, 0.0}, 0.0, std::span<const double>(times), IntegratorConfig{}, observe);
  CHECK(worst < 1e-8);
}

TEST_CASE("integrate_to_times lands on every requested time") {
  const std::vector<double> times{0.5, 1.0, 2.5};
  const auto ys = integrate_to_times<2>(oscillator, {1.0, 0.0}, 0.0, std::span<const double>(times));
  REQUIRE(ys.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(ys[i][0] - std::cos(times[i])) < 1e-9);
}

TEST_CASE("pendulum closes after its period and conserves energy") {
  const double Tc = period_of_level(1.6);
  const auto y = integrate<2>(pendulum(), {0.0, 1.6}, 0.0, Tc);
  CHECK(std::abs(y[0]) < 1e-7);
  CHECK(std::abs(y[1] - 1.6) < 1e-7);
  CHECK(std::abs(hamiltonian(PlanarState(y[0], y[1])) - 0.28) < 1e-8);

  double drift = 0.0;
  auto observe = [&](const DenseStep<2>& step) {
    const auto& y1 = step(step.t_end);
    drift = std::max(drift, std::abs(hamiltonian(PlanarState(y1[0], y1[1])) - 0.28));
    return true;
  };
  const std::vector<double> times{3 * Tc};
  integrate_observed<2>(pendulum(), {0.0, 1.6}, 0.0, std::span<const double>(times), IntegratorConfig{}, observe);
  CHECK(drift < 1e-8);
}

TEST_CASE("tightening tolerances changes the pendulum state by less than the error scale") {
  const double span = 10 * period_of_level(1.6) / 3;
  IntegratorConfig loose;
  IntegratorConfig tight;
  tight.rel_tol = tight.abs_tol = 0.5e-10;
  const auto a = integrate<2>(pendulum(), {0.0, 1.6}, 0.0, span, loose);
  const auto b = integrate<2>(pendulum(), {0.0, 1.6}, 0.0, span, tight);
  CHECK(std::hypot(a[0] - b[0], a[1] - b[1]) < 1e-7);
}

TEST_CASE("step limit is reported") {
  IntegratorConfig cfg;
  cfg.max_steps = 5;
  CHECK_THROWS_AS(integrate<2>(oscillator, {1.0, 0.0}, 0.0, 100.0, cfg), Error);
  try {
    integrate<2>(oscillator, {1.0, 0.0}, 0.0, 100.0, cfg);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StepLimitExceeded);
  }
  cfg.rel_tol = -1.0;
  CHECK_THROWS_AS(integrate<2>(oscillator, {1.0, 0.0}, 0.0, 1.0, cfg), Error);
}

TEST_CASE("section events on the pendulum") {
  const double Tc = period_of_level(1.6);
  const EventSpec<2> up{[](const FlowVector& y, double) { return y[0]; }, 1, 1};
  const auto full = find_event<2>(pendulum(), {0.0, 1.6}, 0.0, up);
  CHECK(std::abs(full.t - Tc) < 1e-9);
  CHECK(std::abs(full.y[1] - 1.6) < 1e-8);

  const EventSpec<2> any{[](const FlowVector& y, double) { return y[0]; }, 0, 1};
  const auto half = find_event<2>(pendulum(), {0.0, 1.6}, 0.0, any);
  CHECK(std::abs(half.t - Tc / 2) < 1e-9);
  CHECK(std::abs(half.y[1] + 1.6) < 1e-8);

  const EventSpec<2> second{[](const FlowVector& y, double) { return y[0]; }, 1, 2};
  CHECK(std::abs(find_event<2>(pendulum(), {0.0, 1.6}, 0.0, second).t - 2 * Tc) < 1e-8);
}

TEST_CASE("event time does not depend on max_step") {
  const EventSpec<2> up{[](const FlowVector& y, double) { return y[0]; }, 1, 1};
  IntegratorConfig small;
  small.max_step = 0.05;
  const double a = find_event<2>(pendulum(), {0.0, 1.6}, 0.0, up).t;
  const double b = find_event<2>(pendulum(), {0.0, 1.6}, 0.0, up, small).t;
  CHECK(std::abs(a - b) < 1e-9);
}

TEST_CASE("event that never fires") {
  IntegratorConfig cfg;
  cfg.max_steps = 2000;
  const EventSpec<2> never{[](const FlowVector&, double) { return 1.0; }, 0, 1};
  try {
    find_event<2>(pendulum(), {0.0, 1.6}, 0.0, never, cfg);
    FAIL("expected EventNotFound");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EventNotFound);
  }
  try {
    find_event<2>(pendulum(), {0.0, 1.6}, 0.0, never, IntegratorConfig{}, 50.0);
    FAIL("expected EventNotFound");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EventNotFound);
  }
}

TEST_CASE("event location is deterministic") {
  const EventSpec<2> up{[](const FlowVector& y, double) { return y[0]; }, 1, 1};
  const auto a = find_event<2>(pendulum(), {0.0, 1.3}, 0.0, up);
  const auto b = find_event<2>(pendulum(), {0.0, 1.3}, 0.0, up);
  CHECK(same_bits(a.t, b.t));
  CHECK(same_bits(a.y[0], b.y[0]));
  CHECK(same_bits(a.y[1], b.y[1]));
}

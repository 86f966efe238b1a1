#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "subharmonic/errors.hpp"
#include "subharmonic/melnikov.hpp"
#include "subharmonic/strobo_map.hpp"

using namespace subharmonic;

namespace {

struct Setup {
  ResonanceSpec spec;
  ForcingSpec forcing;
  PlanarState x0;
};

Setup third_sine() {
  const ResonanceSpec spec = resonance_from_level(1.6, 3, 1);
  return {spec, ForcingSpec::sine(spec.omega), PlanarState(0, 1.6)};
}

Setup two_thirds(double second_harmonic) {
  const ResonanceSpec spec = resonance_from_level(1.7, 3, 2);
  return {spec,
          ForcingSpec(spec.omega, {{1.0, 1, PhaseKind::Sine}, {second_harmonic, 2, PhaseKind::Cosine}}),
          PlanarState(0, 1.7)};
}

}  // namespace

TEST_CASE("sine forcing on the third-period level") {
  const Setup s = third_sine();
  CHECK(std::abs(melnikov_value(0.0, s.x0, s.spec, s.forcing)) < 1e-9);

  const MelnikovProfile p = melnikov_profile(s.x0, s.spec, s.forcing, 96);
  CHECK_FALSE(p.identically_zero);
  int in_first_period = 0;
  for (const auto& z : p.zeros) {
    CHECK(std::abs(melnikov_value(z.t0, s.x0, s.spec, s.forcing)) < 1e-10);
    if (z.t0 < s.spec.T - 1e-9) {
      ++in_first_period;
      const bool at_zero = std::abs(z.t0) < 1e-6;
      const bool at_half = std::abs(z.t0 - s.spec.T / 2) < 1e-6;
      CHECK((at_zero || at_half));
    }
  }
  CHECK(in_first_period == 2);
  CHECK(p.zeros.size() == 6);
  CHECK(s.spec.T / 2 == doctest::Approx(1.33).epsilon(1e-2));
}

TEST_CASE("sine profile is a pure sinusoid") {
  const Setup s = third_sine();
  const MelnikovProfile p = melnikov_profile(s.x0, s.spec, s.forcing, 64);
  const double A = melnikov_value(s.spec.T / 4, s.x0, s.spec, s.forcing);
  for (const auto& sample : p.samples) {
    CHECK(std::abs(sample.value - A * std::sin(s.spec.omega * sample.t0)) < 1e-8 * std::abs(A));
  }
}

TEST_CASE("profile samples cover one period") {
  const Setup s = third_sine();
  const MelnikovProfile p = melnikov_profile(s.x0, s.spec, s.forcing, 32);
  REQUIRE(p.samples.size() == 32);
  CHECK(p.samples.front().t0 == 0.0);
  for (std::size_t i = 1; i < p.samples.size(); ++i) CHECK(p.samples[i].t0 > p.samples[i - 1].t0);
  CHECK(p.samples.back().t0 < s.spec.m * s.spec.T);
  CHECK_THROWS_AS(melnikov_profile(s.x0, s.spec, s.forcing, 8), Error);
}

TEST_CASE("Melnikov function is periodic in the phase") {
  const Setup s = two_thirds(4.0);
  const double period = s.spec.m * s.spec.T;
  for (double t0 : {0.3, 1.9}) {
    CHECK(melnikov_value(t0, s.x0, s.spec, s.forcing) ==
          doctest::Approx(melnikov_value(t0 + period, s.x0, s.spec, s.forcing)).epsilon(1e-9));
  }
}

TEST_CASE("moving x0 along the orbit shifts the phase") {
  const Setup s = two_thirds(4.0);
  const double tau = 0.8;
  const PlanarState shifted = strobo(s.x0, 0.0, SystemSpec{}, tau);
  for (double t0 : {0.1, 2.0, 5.0}) {
    CHECK(std::abs(melnikov_value(t0, shifted, s.spec, s.forcing) -
                   melnikov_value(t0 - tau, s.x0, s.spec, s.forcing)) < 1e-8);
  }
}

TEST_CASE("degenerate two-thirds resonance with pure sine") {
  const ResonanceSpec spec = resonance_from_level(1.6, 3, 2);
  const ForcingSpec g = ForcingSpec::sine(spec.omega);
  for (double t0 : {0.0, 1.1, 4.2}) CHECK(std::abs(melnikov_value(t0, PlanarState(0, 1.6), spec, g)) < 1e-8);
  const MelnikovProfile p = melnikov_profile(PlanarState(0, 1.6), spec, g, 64);
  CHECK(p.identically_zero);
  CHECK(p.max_abs < 1e-8);
  try {
    melnikov_seeds(p);
    FAIL("expected NoSimpleZeros");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoSimpleZeros);
  }
}

TEST_CASE("two-harmonic forcing on the two-thirds level") {
  const Setup s = two_thirds(4.0);
  const MelnikovProfile p = melnikov_profile(s.x0, s.spec, s.forcing, 96);
  REQUIRE_FALSE(p.zeros.empty());
  CHECK(std::abs(p.zeros.front().t0 - 0.7035) < 2e-3);
  for (const auto& z : p.zeros) CHECK(std::abs(z.slope) > 1e-6 * p.max_abs);
}

TEST_CASE("even harmonics of the orbit frequency do not contribute") {
  // v(t + T_c/2) = -v(t), so v has only odd harmonics of 2 pi / T_c; cos(2 omega t)
  // is the sixth harmonic on the third-period level.
  const Setup s = third_sine();
  const ForcingSpec second(s.spec.omega, {{1e7, 2, PhaseKind::Cosine}});
  for (double t0 : {0.0, 0.4, 1.7}) {
    CHECK(std::abs(melnikov_value(t0, s.x0, s.spec, second)) < 1e-10 * 1e7);
  }
  const ForcingSpec heavy(s.spec.omega, {{1.0, 1, PhaseKind::Sine}, {1e7, 2, PhaseKind::Cosine}});
  CHECK(melnikov_seeds(melnikov_profile(s.x0, s.spec, heavy, 96)).size() == 6);

  // Quadrature noise from the extra term must not push the zero at 0 to mT.
  const ForcingSpec mild(s.spec.omega, {{1.0, 1, PhaseKind::Sine}, {20.0, 2, PhaseKind::Cosine}});
  const auto seeds = melnikov_seeds(melnikov_profile(s.x0, s.spec, mild, 256));
  REQUIRE(seeds.size() == 6);
  CHECK(seeds[0].t0 == 0.0);
  CHECK(seeds[1].t0 == doctest::Approx(s.spec.T / 2).epsilon(1e-9));
}

TEST_CASE("a heavy odd harmonic adds zeros") {
  const Setup s = third_sine();
  const ForcingSpec heavy(s.spec.omega, {{1.0, 1, PhaseKind::Sine}, {1e4, 3, PhaseKind::Cosine}});
  const auto seeds = melnikov_seeds(melnikov_profile(s.x0, s.spec, heavy, 192));
  CHECK(seeds.size() > 2 * static_cast<std::size_t>(s.spec.m));
}

TEST_CASE("seeds pair x0 with each zero") {
  const Setup s = third_sine();
  const auto seeds = melnikov_seeds(melnikov_profile(s.x0, s.spec, s.forcing, 96));
  REQUIRE(seeds.size() == 6);
  CHECK(seeds[0].t0 == 0.0);
  CHECK(seeds[1].t0 == doctest::Approx(s.spec.T / 2).epsilon(1e-9));
  for (const auto& seed : seeds) CHECK(seed.x0 == s.x0);
}

TEST_CASE("inputs must match the resonance") {
  const Setup s = third_sine();
  CHECK_THROWS_AS(melnikov_value(0.0, PlanarState(0, 1.5), s.spec, s.forcing), Error);
  CHECK_THROWS_AS(melnikov_value(0.0, s.x0, s.spec, ForcingSpec::sine(1.0)), Error);
}

TEST_CASE("parallel and serial profiles are bit-identical") {
  const Setup s = two_thirds(4.0);
  const auto par = melnikov_profile(s.x0, s.spec, s.forcing, 48);
  const auto ser = melnikov_profile_serial(s.x0, s.spec, s.forcing, 48);
  REQUIRE(par.samples.size() == ser.samples.size());
  CHECK(std::memcmp(par.samples.data(), ser.samples.data(), par.samples.size() * sizeof(MelnikovSample)) == 0);
  REQUIRE(par.zeros.size() == ser.zeros.size());
  CHECK(std::memcmp(par.zeros.data(), ser.zeros.data(), par.zeros.size() * sizeof(MelnikovZero)) == 0);
}

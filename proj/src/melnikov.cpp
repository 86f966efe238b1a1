#include "subharmonic/melnikov.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "subharmonic/errors.hpp"
#include "subharmonic/roots.hpp"

namespace subharmonic {
namespace {

void check_inputs(const PlanarState& x0, const ResonanceSpec& spec, const ForcingSpec& forcing) {
  if (std::abs(hamiltonian(x0) - spec.c) > 1e-9) {
    throw Error(ErrorKind::SpecMismatch, "x0 is not on the resonant level H = c");
  }
  if (std::abs(forcing.omega() - spec.omega) > 1e-9 * spec.omega) {
    throw Error(ErrorKind::SpecMismatch, "forcing frequency differs from the resonance");
  }
  if (spec.m < 1 || spec.n < 1) throw Error(ErrorKind::SpecMismatch, "m and n must be positive");
}

double evaluate(double t0, const PlanarState& x0, double period, const ForcingSpec& forcing,
                const IntegratorConfig& cfg) {
  const SystemSpec unperturbed{};
  // (u, v, M) with M' = f(x) ^ (0, g(t + t0)).
  auto rhs = [&](double t, const StateVector<3>& y) -> StateVector<3> {
    const auto f = eval_field(FlowVector{y[0], y[1]}, t, unperturbed);
    return {f[0], f[1], wedge(f, Vec2{0.0, forcing.value(t + t0)})};
  };
  return integrate<3>(rhs, StateVector<3>{x0.u(), x0.v(), 0.0}, 0.0, period, cfg)[2];
}

MelnikovProfile build_profile(const PlanarState& x0, const ResonanceSpec& spec,
                              const ForcingSpec& forcing, int sample_count,
                              const IntegratorConfig& cfg, bool parallel) {
  check_inputs(x0, spec, forcing);
  if (sample_count < 16) throw Error(ErrorKind::InvalidArgument, "need at least 16 Melnikov samples");

  const double period = spec.m * spec.T;
  MelnikovProfile profile{spec, forcing, x0, {}, {}, 0.0, false};
  profile.samples.resize(static_cast<std::size_t>(sample_count));
  for (int k = 0; k < sample_count; ++k) profile.samples[k].t0 = period * k / sample_count;

  if (parallel) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < sample_count; ++k) {
      try {
        profile.samples[k].value = evaluate(profile.samples[k].t0, x0, period, forcing, cfg);
      } catch (...) {
#pragma omp critical(subharmonic_melnikov_profile)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (auto& s : profile.samples) s.value = evaluate(s.t0, x0, period, forcing, cfg);
  }

  for (const auto& s : profile.samples) profile.max_abs = std::max(profile.max_abs, std::abs(s.value));
  const double max_speed = std::sqrt(2.0 * (spec.c + 1.0));
  if (profile.max_abs < 1e-8 * period * max_speed) {
    profile.identically_zero = true;
    return profile;
  }

  auto value_at = [&](double t0) { return evaluate(t0, x0, period, forcing, cfg); };
  const double ftol = 1e-11 * std::max(1.0, profile.max_abs);
  const double simple = 1e-6 * profile.max_abs / period;
  const double h = period * 1e-6;
  for (int k = 0; k < sample_count; ++k) {
    const MelnikovSample& a = profile.samples[k];
    // The last bracket closes on M(mT) = M(0).
    const MelnikovSample b = k + 1 < sample_count ? profile.samples[k + 1]
                                                  : MelnikovSample{period, profile.samples[0].value};
    double root;
    if (a.value == 0.0) {
      root = a.t0;
    } else if (b.value != 0.0 && (a.value > 0.0) != (b.value > 0.0)) {
      root = refine_root(value_at, a.t0, b.t0, a.value, b.value, ftol).x;
    } else {
      continue;
    }
    root = std::fmod(root, period);
    if (root < 0.0) root += period;
    // A zero just below mT is the zero at 0 seen through the wrap bracket.
    if (period - root < 1e-8 * period) root = 0.0;
    const double slope = (value_at(root + h) - value_at(root - h)) / (2.0 * h);
    if (std::abs(slope) > simple) profile.zeros.push_back({root, slope});
  }
  std::sort(profile.zeros.begin(), profile.zeros.end(),
            [](const MelnikovZero& l, const MelnikovZero& r) { return l.t0 < r.t0; });
  return profile;
}

}  // namespace

IntegratorConfig melnikov_default_config() {
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-12;
  return cfg;
}

double melnikov_value(double t0, const PlanarState& x0, const ResonanceSpec& spec,
                      const ForcingSpec& forcing, const IntegratorConfig& cfg) {
  check_inputs(x0, spec, forcing);
  return evaluate(t0, x0, spec.m * spec.T, forcing, cfg);
}

MelnikovProfile melnikov_profile(const PlanarState& x0, const ResonanceSpec& spec,
                                 const ForcingSpec& forcing, int sample_count,
                                 const IntegratorConfig& cfg) {
  return build_profile(x0, spec, forcing, sample_count, cfg, true);
}

MelnikovProfile melnikov_profile_serial(const PlanarState& x0, const ResonanceSpec& spec,
                                        const ForcingSpec& forcing, int sample_count,
                                        const IntegratorConfig& cfg) {
  return build_profile(x0, spec, forcing, sample_count, cfg, false);
}

std::vector<NewtonSeed> melnikov_seeds(const MelnikovProfile& profile) {
  if (profile.zeros.empty()) {
    throw Error(ErrorKind::NoSimpleZeros,
                profile.identically_zero ? "Melnikov function vanishes identically"
                                         : "Melnikov function has no simple zeros");
  }
  std::vector<NewtonSeed> seeds;
  seeds.reserve(profile.zeros.size());
  for (const auto& z : profile.zeros) seeds.push_back({profile.x0, z.t0});
  return seeds;
}

}  // namespace subharmonic

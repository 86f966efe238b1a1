#pragma once

#include <vector>

#include "subharmonic/dynamics.hpp"
#include "subharmonic/integrator.hpp"
#include "subharmonic/unperturbed.hpp"

namespace subharmonic {

struct MelnikovZero {
  double t0;
  double slope;  // M'(t0), central difference
};

struct MelnikovSample {
  double t0;
  double value;
};

/// Subharmonic Melnikov function M(t0) sampled over one period [0, mT).
struct MelnikovProfile {
  ResonanceSpec spec;
  ForcingSpec forcing;
  PlanarState x0;
  std::vector<MelnikovSample> samples;
  std::vector<MelnikovZero> zeros;  // simple zeros only, increasing t0
  double max_abs = 0.0;
  bool identically_zero = false;
};

/// Integration settings used for Melnikov quadrature unless overridden.
IntegratorConfig melnikov_default_config();

/// M(t0) = int_0^{mT} f(phi_0(t; x0)) ^ g(phi_0(t; x0), t + t0) dt, integrated as
/// an extra component of the unperturbed flow. Throws Error(SpecMismatch) when
/// x0 is off the level set or the forcing frequency disagrees with the resonance.
double melnikov_value(double t0, const PlanarState& x0, const ResonanceSpec& spec,
                      const ForcingSpec& forcing,
                      const IntegratorConfig& cfg = melnikov_default_config());

/// Uniform samples (OpenMP over grid points), sign-change bracketing, then
/// safeguarded refinement of each zero on melnikov_value.
MelnikovProfile melnikov_profile(const PlanarState& x0, const ResonanceSpec& spec,
                                 const ForcingSpec& forcing, int sample_count,
                                 const IntegratorConfig& cfg = melnikov_default_config());

/// Same profile with the sampling done on the calling thread.
MelnikovProfile melnikov_profile_serial(const PlanarState& x0, const ResonanceSpec& spec,
                                        const ForcingSpec& forcing, int sample_count,
                                        const IntegratorConfig& cfg = melnikov_default_config());

struct NewtonSeed {
  PlanarState x0;
  double t0;
};

/// One seed per simple zero. Throws Error(NoSimpleZeros) when there are none;
/// that is the undecided case where first-order theory neither proves nor
/// rules out persistence.
std::vector<NewtonSeed> melnikov_seeds(const MelnikovProfile& profile);

}  // namespace subharmonic

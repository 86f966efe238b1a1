#pragma once

#include <span>
#include <vector>

#include "subharmonic/dynamics.hpp"
#include "subharmonic/integrator.hpp"

namespace subharmonic {

/// Energy c of a librational level H = c, strictly inside (-1, 1).
class EnergyLevel {
 public:
  /// Throws Error(OutOfRange) outside the open interval.
  explicit EnergyLevel(double c);
  double value() const { return c_; }

  /// Level through (0, v0) on the section, c = v0^2/2 - 1.
  static EnergyLevel from_axis_velocity(double v0);

 private:
  double c_;
};

/// Unperturbed orbit resonant with the forcing: T_c = (m/n) T.
struct ResonanceSpec {
  int m = 1;       // map period
  int n = 1;       // loops around the origin
  double T = 0.0;  // forcing period
  double omega = 0.0;
  double c = 0.0;
  double T_c = 0.0;
  double v0 = 0.0; // crossing velocity on {u = 0}

  /// Throws Error(InvalidArgument) unless gcd(m, n) = 1 and the congruency holds
  /// to 1e-9 relative.
  void validate() const;
};

PlanarState ic_on_axis(const EnergyLevel& c);

/// Return time of (0, v0) to {u = 0, v > 0} under the unperturbed flow.
/// Tolerances 1e-12: resonant periods feed the Melnikov phase, whose zeros
/// shift by the period error.
IntegratorConfig period_default_config();

double period_of_level(double v0, const IntegratorConfig& cfg = period_default_config());

/// Complete elliptic integral of the first kind K(k) (modulus k), by AGM.
double complete_elliptic_k(double k);

/// Closed-form period 4 K(v0/2); independent check for period_of_level.
double period_oracle(double v0);

/// Finds the level whose period is (m/n) * T_target: geometric bracketing in v0
/// followed by bisection to a width of 1e-12.
ResonanceSpec level_for_period(double T_target, int m, int n, const IntegratorConfig& cfg = period_default_config());

/// Resonance built from a chosen level: T = (n/m) * T_c(v0).
ResonanceSpec resonance_from_level(double v0, int m, int n, const IntegratorConfig& cfg = period_default_config());

struct PeriodCurveRow {
  double v0;
  double c;
  double T_c;
  double T_oracle;
};

/// Period function on a grid of axis velocities (OpenMP over grid points).
std::vector<PeriodCurveRow> period_curve(std::span<const double> v0s, const IntegratorConfig& cfg = period_default_config());
std::vector<PeriodCurveRow> period_curve_serial(std::span<const double> v0s,
                                                const IntegratorConfig& cfg = period_default_config());

}  // namespace subharmonic

#pragma once

#include <span>
#include <string>
#include <vector>

#include "subharmonic/dynamics.hpp"
#include "subharmonic/integrator.hpp"
#include "subharmonic/matrix2.hpp"

namespace subharmonic {

/// Iterates of the time-T map taken at phase t0. points[0] is the start point
/// and points[k] = s^k(points[0]).
struct StroboOrbit {
  std::vector<PlanarState> points;
  double t0 = 0.0;
  double T = 0.0;
  double epsilon = 0.0;
};

/// s(x) = phi(t0 + T; x, t0).
PlanarState strobo(const PlanarState& x, double t0, const SystemSpec& sys, double T,
                   const IntegratorConfig& cfg = {});

/// k images of x from a single integration over [t0, t0 + kT].
StroboOrbit strobo_iterate(const PlanarState& x, double t0, const SystemSpec& sys, double T, int k,
                           const IntegratorConfig& cfg = {});

struct FlowJacobian {
  PlanarState end;
  Mat2 jac;
};

/// Flow and its derivative with respect to the initial state over [t0, t0 + duration].
FlowJacobian flow_with_jacobian(const PlanarState& x, double t0, const SystemSpec& sys,
                                double duration, const IntegratorConfig& cfg = {});

/// D s^m(x) for duration = m T: one variational integration, no matrix products.
Mat2 monodromy(const PlanarState& x, double t0, const SystemSpec& sys, double duration,
               const IntegratorConfig& cfg = {});

/// Net polar angle (radians, counter-clockwise positive) swept around the
/// origin by the trajectory over [t0, t0 + duration], tracked continuously.
double accumulated_angle(const PlanarState& x, double t0, const SystemSpec& sys, double duration,
                         const IntegratorConfig& cfg = {});

/// Number of loops for a swept angle (the flow turns clockwise, so angles are negative).
inline double loops_from_angle(double angle) { return -angle / (2.0 * std::numbers::pi); }

struct TrajectorySample {
  double t;
  PlanarState x;
};

/// `samples` + 1 uniformly spaced points of the trajectory over [t0, t0 + duration].
std::vector<TrajectorySample> sample_trajectory(const PlanarState& x, double t0,
                                                const SystemSpec& sys, double duration, int samples,
                                                const IntegratorConfig& cfg = {});

enum class ScanStatus { Ok, Escaped, IntegrationFailed };

std::string_view to_string(ScanStatus status);

struct ScanResult {
  StroboOrbit orbit;
  ScanStatus status = ScanStatus::Ok;
  std::string message;
};

struct ScanOptions {
  int iterations = 100;
  /// Trajectories with |v| above this are truncated and flagged Escaped.
  double escape_speed = 10.0;
};

/// One orbit per seed, in seed order. Failures are recorded per seed.
/// Seeds are distributed over OpenMP threads.
std::vector<ScanResult> scan(std::span<const PlanarState> seeds, double t0, const SystemSpec& sys,
                             double T, const ScanOptions& opts, const IntegratorConfig& cfg = {});

/// Reference implementation of `scan` on the calling thread.
std::vector<ScanResult> scan_serial(std::span<const PlanarState> seeds, double t0,
                                    const SystemSpec& sys, double T, const ScanOptions& opts,
                                    const IntegratorConfig& cfg = {});

/// Seeds on the segment from a to b, endpoints included.
std::vector<PlanarState> seed_line(const PlanarState& a, const PlanarState& b, int count);

}  // namespace subharmonic

#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subharmonic/dynamics.hpp"
#include "subharmonic/integrator.hpp"
#include "subharmonic/matrix2.hpp"

namespace subharmonic {

struct NewtonOptions {
  double residual_tol = 1e-10;
  int max_iters = 20;
  /// Any iterate farther than this from the seed aborts with Diverged.
  double divergence_radius = 1.0;
  /// DF is treated as singular when its smallest singular value is below this.
  double singular_tol = 1e-8;
};

enum class NewtonFailure { None, Diverged, SingularJacobian, MaxIters, TangentialCrossing };

std::string_view to_string(NewtonFailure failure);

/// Newton unknowns: (u, v) for the stroboscopic solver, (v0, t0) for the
/// Poincare solver.
struct NewtonIterate {
  Vec2 unknowns;
  double residual;
};

struct NewtonReport {
  std::vector<NewtonIterate> iterates;
  bool converged = false;
  NewtonFailure failure = NewtonFailure::None;
  std::string message;

  /// Newton steps taken (linear solves), not counting the seed evaluation.
  int steps() const { return iterates.empty() ? 0 : static_cast<int>(iterates.size()) - 1; }
};

enum class Stability { Saddle, Elliptic, Parabolic };

std::string_view to_string(Stability stability);

struct Classification {
  Stability stability;
  std::array<std::complex<double>, 2> multipliers;
};

/// Saddle iff |tr| > 2 + 1e-8, elliptic iff |tr| < 2 - 1e-8, otherwise
/// parabolic. Throws Error(InconsistentMonodromy) when |det - 1| > 1e-4.
Classification classify(const Mat2& monodromy);

struct PeriodicOrbitRecord {
  PlanarState x_eps;
  double t0 = 0.0;
  int m = 1;
  int n = 1;
  double epsilon = 0.0;
  Mat2 monodromy;
  std::array<std::complex<double>, 2> multipliers;
  Stability stability = Stability::Parabolic;
  double residual = 0.0;
};

struct NewtonResult {
  std::optional<PeriodicOrbitRecord> record;  // set iff report.converged
  NewtonReport report;
};

/// Fixed point of s^m at phase t0: F(x) = s^m(x) - x with DF = D s^m - I from
/// one variational integration per step. The record's n is the winding count
/// of the converged orbit.
NewtonResult newton_strobo(const PlanarState& seed, double t0, const SystemSpec& sys, int m,
                           double T, const NewtonOptions& opts = {},
                           const IntegratorConfig& cfg = {});

/// Image of (0, v0) at time t0 under the return map to {u = 0}, leaving and
/// returning in the direction of sign(v0), with the derivative with respect to
/// (v0, t0).
struct PoincareImage {
  double v;
  double t;
  Mat2 jac;
};

/// Throws Error(TangentialCrossing) if the departure or arrival is tangent to
/// the section (|u'| < 1e-8).
PoincareImage poincare_map(double v0, double t0, const SystemSpec& sys,
                           const IntegratorConfig& cfg = {});

/// n-fold composition, derivative chained across the n returns.
PoincareImage poincare_power(double v0, double t0, const SystemSpec& sys, int n,
                             const IntegratorConfig& cfg = {});

/// Solves P^n(v0, t0) = (v0, t0 + mT) for (v0, t0).
NewtonResult newton_poincare(double seed_v0, double seed_t0, const SystemSpec& sys, int n, int m,
                             double T, const NewtonOptions& opts = {},
                             const IntegratorConfig& cfg = {});

enum class SolverKind { Strobo, Poincare };

struct ContinuationPolicy {
  double initial_step = 0.01;
  double min_step = 1e-5;
  double grow = 1.5;
  double shrink = 0.5;
  /// Converging in at most this many Newton steps counts as easy.
  int easy_steps = 4;
};

struct ContinuationResult {
  std::vector<PeriodicOrbitRecord> branch;  // starts with the input record
  bool reached_target = false;
  std::string message;  // StepTooSmall diagnostics when the march stalls
};

/// Natural-parameter march in epsilon. The strobo solver keeps t0 fixed; the
/// Poincare solver lets (v0, t0) float.
ContinuationResult continue_in_epsilon(const PeriodicOrbitRecord& start, const ForcingSpec& forcing,
                                       double T, SolverKind solver, double eps_target,
                                       const ContinuationPolicy& policy = {},
                                       const NewtonOptions& opts = {},
                                       const IntegratorConfig& cfg = {});

/// Indices of records that are distinct orbits: two records at the same phase
/// modulo T are the same orbit when one point matches an iterate of the other
/// within 1e-6.
std::vector<std::size_t> distinct_orbits(std::span<const PeriodicOrbitRecord> records,
                                         const ForcingSpec& forcing, double T,
                                         const IntegratorConfig& cfg = {});

}  // namespace subharmonic

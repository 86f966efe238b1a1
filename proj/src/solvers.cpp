#include "subharmonic/solvers.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "subharmonic/errors.hpp"
#include "subharmonic/strobo_map.hpp"

namespace subharmonic {
namespace {

constexpr double kTransversalityTol = 1e-8;
// Returns to the section are expected within a few orbit periods; a missing
// return (e.g. an iterate outside the separatrix) stops here instead of
// exhausting max_steps.
constexpr double kMaxReturnTime = 1e3;

struct Evaluation {
  Vec2 residual;
  Mat2 jacobian;
};

template <class Evaluate>
NewtonReport run_newton(const Vec2& seed, Evaluate&& evaluate, const NewtonOptions& opts,
                        Evaluation& last) {
  if (opts.max_iters < 0 || !(opts.residual_tol > 0.0) || !(opts.divergence_radius > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "invalid Newton options");
  }
  NewtonReport report;
  Vec2 z = seed;
  for (int it = 0;; ++it) {
    Evaluation e;
    try {
      e = evaluate(z);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::TangentialCrossing) throw;
      report.failure = NewtonFailure::TangentialCrossing;
      report.message = err.what();
      return report;
    }
    const double r = norm(e.residual);
    report.iterates.push_back({z, r});
    if (!std::isfinite(r)) {
      report.failure = NewtonFailure::Diverged;
      report.message = "non-finite residual";
      return report;
    }
    const auto [smax, smin] = singular_values(e.jacobian);
    if (smin < opts.singular_tol) {
      report.failure = NewtonFailure::SingularJacobian;
      char buf[64];
      std::snprintf(buf, sizeof buf, "smallest singular value of DF is %.3e", smin);
      report.message = buf;
      return report;
    }
    if (r < opts.residual_tol) {
      report.converged = true;
      last = e;
      return report;
    }
    if (it == opts.max_iters) {
      report.failure = NewtonFailure::MaxIters;
      report.message = "residual " + std::to_string(r) + " after " + std::to_string(it) + " steps";
      return report;
    }
    Vec2 dz;
    if (!solve(e.jacobian, Vec2{-e.residual[0], -e.residual[1]}, dz)) {
      report.failure = NewtonFailure::SingularJacobian;
      report.message = "zero pivot in the Newton system";
      return report;
    }
    z = {z[0] + dz[0], z[1] + dz[1]};
    const double drift = std::hypot(z[0] - seed[0], z[1] - seed[1]);
    if (drift > opts.divergence_radius) {
      report.failure = NewtonFailure::Diverged;
      report.message = "iterate (" + std::to_string(z[0]) + ", " + std::to_string(z[1]) +
                       ") is " + std::to_string(drift) + " away from the seed";
      return report;
    }
  }
}

int winding_count(const PlanarState& x, double t0, const SystemSpec& sys, double duration,
                  const IntegratorConfig& cfg) {
  return static_cast<int>(std::lround(std::abs(loops_from_angle(accumulated_angle(x, t0, sys, duration, cfg)))));
}

PeriodicOrbitRecord make_record(const PlanarState& x, double t0, int m, int n, double epsilon,
                                const Mat2& mono, double residual) {
  const Classification cls = classify(mono);
  PeriodicOrbitRecord rec;
  rec.x_eps = x;
  rec.t0 = t0;
  rec.m = m;
  rec.n = n;
  rec.epsilon = epsilon;
  rec.monodromy = mono;
  rec.multipliers = cls.multipliers;
  rec.stability = cls.stability;
  rec.residual = residual;
  return rec;
}

}  // namespace

std::string_view to_string(NewtonFailure failure) {
  switch (failure) {
    case NewtonFailure::None: return "none";
    case NewtonFailure::Diverged: return "diverged";
    case NewtonFailure::SingularJacobian: return "singular_jacobian";
    case NewtonFailure::MaxIters: return "max_iters";
    case NewtonFailure::TangentialCrossing: return "tangential_crossing";
  }
  return "unknown";
}

std::string_view to_string(Stability stability) {
  switch (stability) {
    case Stability::Saddle: return "saddle";
    case Stability::Elliptic: return "elliptic";
    case Stability::Parabolic: return "parabolic";
  }
  return "unknown";
}

Classification classify(const Mat2& monodromy) {
  const double det = monodromy.det();
  if (!(std::abs(det - 1.0) <= 1e-4)) {
    throw Error(ErrorKind::InconsistentMonodromy, "det = " + std::to_string(det));
  }
  const double tr = std::abs(monodromy.trace());
  Classification cls;
  cls.multipliers = eigenvalues(monodromy);
  cls.stability = tr > 2.0 + 1e-8 ? Stability::Saddle
                  : tr < 2.0 - 1e-8 ? Stability::Elliptic
                                    : Stability::Parabolic;
  return cls;
}

NewtonResult newton_strobo(const PlanarState& seed, double t0, const SystemSpec& sys, int m,
                           double T, const NewtonOptions& opts, const IntegratorConfig& cfg) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "m must be >= 1");
  const double duration = m * T;
  auto evaluate = [&](const Vec2& z) {
    const FlowJacobian fj = flow_with_jacobian(PlanarState(z[0], z[1]), t0, sys, duration, cfg);
    return Evaluation{{fj.end.u() - z[0], fj.end.v() - z[1]}, fj.jac - Mat2::identity()};
  };
  Evaluation last;
  NewtonResult result{std::nullopt, run_newton(seed.vec(), evaluate, opts, last)};
  if (result.report.converged) {
    const Vec2 z = result.report.iterates.back().unknowns;
    const PlanarState x(z[0], z[1]);
    const Mat2 mono = last.jacobian + Mat2::identity();
    result.record = make_record(x, t0, m, winding_count(x, t0, sys, duration, cfg), sys.epsilon, mono,
                                result.report.iterates.back().residual);
  }
  return result;
}

PoincareImage poincare_map(double v0, double t0, const SystemSpec& sys,
                           const IntegratorConfig& cfg) {
  if (!(std::abs(v0) >= kTransversalityTol)) {
    throw Error(ErrorKind::TangentialCrossing, "departure velocity on the section is ~0");
  }
  auto rhs = [&sys](double, const VariationalVector3& y) { return variational_field_3(y, sys); };
  VariationalState3 start;
  start.base = PlanarState(0.0, v0);
  start.clock = t0;
  EventSpec<12> section{[](const VariationalVector3& y, double) { return y[0]; }, v0 > 0.0 ? 1 : -1, 1};
  const auto hit = find_event<12>(rhs, start.pack(), 0.0, section, cfg, kMaxReturnTime);
  const VariationalState3 end = VariationalState3::unpack(hit.y);

  const auto f = eval_field(end.base.vec(), end.clock, sys);
  if (std::abs(f[0]) < kTransversalityTol) {
    throw Error(ErrorKind::TangentialCrossing, "return is tangent to the section");
  }
  // Implicit-function derivatives of the return time with respect to (v0, t0).
  const double dtau_dv = -end.jac_at(0, 1) / f[0];
  const double dtau_dt = -end.jac_at(0, 2) / f[0];
  PoincareImage image;
  image.v = end.base.v();
  image.t = end.clock;
  image.jac = Mat2::from_rows(end.jac_at(1, 1) + f[1] * dtau_dv, end.jac_at(1, 2) + f[1] * dtau_dt,
                              dtau_dv, 1.0 + dtau_dt);
  return image;
}

PoincareImage poincare_power(double v0, double t0, const SystemSpec& sys, int n,
                             const IntegratorConfig& cfg) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  PoincareImage acc{v0, t0, Mat2::identity()};
  for (int i = 0; i < n; ++i) {
    const PoincareImage step = poincare_map(acc.v, acc.t, sys, cfg);
    acc = {step.v, step.t, step.jac * acc.jac};
  }
  return acc;
}

NewtonResult newton_poincare(double seed_v0, double seed_t0, const SystemSpec& sys, int n, int m,
                             double T, const NewtonOptions& opts, const IntegratorConfig& cfg) {
  if (m < 1 || n < 1) throw Error(ErrorKind::InvalidArgument, "m and n must be >= 1");
  const double shift = m * T;
  auto evaluate = [&](const Vec2& z) {
    const PoincareImage p = poincare_power(z[0], z[1], sys, n, cfg);
    return Evaluation{{p.v - z[0], p.t - (z[1] + shift)}, p.jac - Mat2::identity()};
  };
  Evaluation last;
  NewtonResult result{std::nullopt, run_newton(Vec2{seed_v0, seed_t0}, evaluate, opts, last)};
  if (result.report.converged) {
    const Vec2 z = result.report.iterates.back().unknowns;
    const PlanarState x(0.0, z[0]);
    const Mat2 mono = monodromy(x, z[1], sys, shift, cfg);
    result.record = make_record(x, z[1], m, n, sys.epsilon, mono, result.report.iterates.back().residual);
  }
  return result;
}

ContinuationResult continue_in_epsilon(const PeriodicOrbitRecord& start, const ForcingSpec& forcing,
                                       double T, SolverKind solver, double eps_target,
                                       const ContinuationPolicy& policy, const NewtonOptions& opts,
                                       const IntegratorConfig& cfg) {
  if (!(policy.initial_step > 0.0 && policy.min_step > 0.0 && policy.grow >= 1.0 &&
        policy.shrink > 0.0 && policy.shrink < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "invalid continuation policy");
  }
  ContinuationResult out;
  out.branch.push_back(start);
  const double direction = eps_target >= start.epsilon ? 1.0 : -1.0;
  double step = policy.initial_step;
  while (out.branch.back().epsilon != eps_target) {
    const PeriodicOrbitRecord& last = out.branch.back();
    const double remaining = std::abs(eps_target - last.epsilon);
    const double eps = step >= remaining ? eps_target : last.epsilon + direction * step;
    const SystemSpec sys{forcing, eps};
    NewtonResult attempt;
    try {
      attempt = solver == SolverKind::Strobo
                    ? newton_strobo(last.x_eps, last.t0, sys, last.m, T, opts, cfg)
                    : newton_poincare(last.x_eps.v(), last.t0, sys, last.n, last.m, T, opts, cfg);
    } catch (const Error&) {
      attempt = {};
    }
    if (attempt.record) {
      const bool easy = attempt.report.steps() <= policy.easy_steps;
      out.branch.push_back(*attempt.record);
      if (easy) step *= policy.grow;
      continue;
    }
    step *= policy.shrink;
    if (step < policy.min_step) {
      out.message = std::string(to_string(ErrorKind::StepTooSmall)) +
                    ": continuation stalled after epsilon = " + std::to_string(last.epsilon);
      return out;
    }
  }
  out.reached_target = true;
  return out;
}

std::vector<std::size_t> distinct_orbits(std::span<const PeriodicOrbitRecord> records,
                                         const ForcingSpec& forcing, double T,
                                         const IntegratorConfig& cfg) {
  std::vector<std::size_t> kept;
  std::vector<StroboOrbit> kept_iterates;
  auto phase_gap = [T](double a, double b) {
    const double d = std::fmod(std::abs(a - b), T);
    return std::min(d, T - d);
  };
  for (std::size_t i = 0; i < records.size(); ++i) {
    const PeriodicOrbitRecord& rec = records[i];
    bool duplicate = false;
    for (std::size_t j = 0; j < kept.size() && !duplicate; ++j) {
      const PeriodicOrbitRecord& other = records[kept[j]];
      if (other.m != rec.m || phase_gap(other.t0, rec.t0) > 1e-9 * T) continue;
      for (const PlanarState& p : kept_iterates[j].points) {
        if (distance(p, rec.x_eps) < 1e-6) {
          duplicate = true;
          break;
        }
      }
    }
    if (duplicate) continue;
    kept.push_back(i);
    const SystemSpec sys{forcing, rec.epsilon};
    kept_iterates.push_back(rec.m > 1 ? strobo_iterate(rec.x_eps, rec.t0, sys, T, rec.m - 1, cfg)
                                      : StroboOrbit{{rec.x_eps}, rec.t0, T, rec.epsilon});
  }
  return kept;
}

}  // namespace subharmonic

#pragma once

// Adaptive Dormand-Prince 5(4) integration with continuous (dense) output and
// directional event location. Header-only: the state dimension is a template
// parameter so the augmented systems (2, 3, 6 and 12 components) run without
// heap traffic.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subharmonic/errors.hpp"
#include "subharmonic/roots.hpp"

namespace subharmonic {

template <std::size_t N>
using StateVector = std::array<double, N>;

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double initial_step = 1e-3;
  double max_step = 1.0;
  long max_steps = 10'000'000;

  void validate() const {
    if (!(rel_tol > 0.0 && abs_tol > 0.0 && initial_step > 0.0 && max_step > 0.0 && max_steps > 0)) {
      throw Error(ErrorKind::InvalidArgument, "integrator settings must be positive");
    }
  }
};

/// Continuous extension of one accepted step (Hairer's DOPRI5 interpolant).
template <std::size_t N>
struct DenseStep {
  double t_begin = 0.0;
  double t_end = 0.0;
  std::array<StateVector<N>, 5> coeff{};

  StateVector<N> operator()(double t) const {
    const double h = t_end - t_begin;
    const double theta = h != 0.0 ? (t - t_begin) / h : 1.0;
    const double theta1 = 1.0 - theta;
    StateVector<N> y;
    for (std::size_t i = 0; i < N; ++i) {
      y[i] = coeff[0][i] +
             theta * (coeff[1][i] +
                      theta1 * (coeff[2][i] + theta * (coeff[3][i] + theta1 * coeff[4][i])));
    }
    return y;
  }
  const StateVector<N>& front() const { return coeff[0]; }
};

namespace dp {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
}  // namespace dp

/// Stepper for y' = rhs(t, y). Integrates forward or backward depending on the
/// sign of `direction`.
template <std::size_t N, class Rhs>
class DormandPrince {
 public:
  using State = StateVector<N>;

  DormandPrince(Rhs rhs, const State& y0, double t0, double direction, const IntegratorConfig& cfg)
      : rhs_(std::move(rhs)), cfg_(cfg), t_(t0), y_(y0), dir_(direction < 0.0 ? -1.0 : 1.0) {
    cfg_.validate();
    h_ = std::min(cfg_.initial_step, cfg_.max_step);
    k1_ = rhs_(t_, y_);
  }

  double time() const { return t_; }
  const State& state() const { return y_; }
  long attempts() const { return attempts_; }

  /// One accepted step that never passes `t_limit`; lands on it exactly when clipped.
  const DenseStep<N>& step(double t_limit) {
    const double remaining0 = dir_ * (t_limit - t_);
    if (!(remaining0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "step limit behind current time");
    for (;;) {
      if (attempts_ >= cfg_.max_steps) {
        throw Error(ErrorKind::StepLimitExceeded,
                    "max_steps=" + std::to_string(cfg_.max_steps) + " at t=" + std::to_string(t_));
      }
      ++attempts_;
      const double remaining = dir_ * (t_limit - t_);
      double habs = std::min({h_, cfg_.max_step, remaining});
      bool lands = habs == remaining;
      // Avoid leaving a sliver smaller than a rounding error before t_limit.
      if (!lands && remaining - habs <= 1e-12 * remaining) {
        habs = remaining;
        lands = true;
      }
      const double tiny = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t_), 1.0);
      if (habs <= tiny && !lands) {
        throw Error(ErrorKind::StepUnderflow, "step size collapsed at t=" + std::to_string(t_));
      }
      const double h = dir_ * habs;

      State tmp, k2, k3, k4, k5, k6, k7, y5;
      for (std::size_t i = 0; i < N; ++i) tmp[i] = y_[i] + h * dp::a21 * k1_[i];
      k2 = rhs_(t_ + dp::c2 * h, tmp);
      for (std::size_t i = 0; i < N; ++i) tmp[i] = y_[i] + h * (dp::a31 * k1_[i] + dp::a32 * k2[i]);
      k3 = rhs_(t_ + dp::c3 * h, tmp);
      for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y_[i] + h * (dp::a41 * k1_[i] + dp::a42 * k2[i] + dp::a43 * k3[i]);
      k4 = rhs_(t_ + dp::c4 * h, tmp);
      for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y_[i] + h * (dp::a51 * k1_[i] + dp::a52 * k2[i] + dp::a53 * k3[i] + dp::a54 * k4[i]);
      k5 = rhs_(t_ + dp::c5 * h, tmp);
      for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y_[i] + h * (dp::a61 * k1_[i] + dp::a62 * k2[i] + dp::a63 * k3[i] +
                              dp::a64 * k4[i] + dp::a65 * k5[i]);
      const double t_new = lands ? t_limit : t_ + h;
      k6 = rhs_(t_ + h, tmp);
      for (std::size_t i = 0; i < N; ++i)
        y5[i] = y_[i] + h * (dp::a71 * k1_[i] + dp::a73 * k3[i] + dp::a74 * k4[i] +
                             dp::a75 * k5[i] + dp::a76 * k6[i]);
      k7 = rhs_(t_new, y5);

      double err2 = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double e = h * (dp::e1 * k1_[i] + dp::e3 * k3[i] + dp::e4 * k4[i] + dp::e5 * k5[i] +
                              dp::e6 * k6[i] + dp::e7 * k7[i]);
        const double sc = cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y_[i]), std::abs(y5[i]));
        err2 += (e / sc) * (e / sc);
      }
      const double err = std::sqrt(err2 / static_cast<double>(N));

      if (!std::isfinite(err) || err > 1.0) {
        const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
        h_ = habs * fac;
        continue;
      }

      dense_.t_begin = t_;
      dense_.t_end = t_new;
      for (std::size_t i = 0; i < N; ++i) {
        const double ydiff = y5[i] - y_[i];
        const double bspl = h * k1_[i] - ydiff;
        dense_.coeff[0][i] = y_[i];
        dense_.coeff[1][i] = ydiff;
        dense_.coeff[2][i] = bspl;
        dense_.coeff[3][i] = ydiff - h * k7[i] - bspl;
        dense_.coeff[4][i] = h * (dp::d1 * k1_[i] + dp::d3 * k3[i] + dp::d4 * k4[i] +
                                  dp::d5 * k5[i] + dp::d6 * k6[i] + dp::d7 * k7[i]);
      }
      const double fac = err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
      // Clipped steps do not shrink the proposal for the next one.
      h_ = lands ? std::max(h_, habs * fac) : habs * fac;
      t_ = t_new;
      y_ = y5;
      k1_ = k7;
      return dense_;
    }
  }

 private:
  Rhs rhs_;
  IntegratorConfig cfg_;
  double t_;
  State y_;
  State k1_;
  double dir_;
  double h_ = 0.0;
  long attempts_ = 0;
  DenseStep<N> dense_;
};

template <std::size_t N, class Rhs>
DormandPrince<N, std::decay_t<Rhs>> make_stepper(Rhs&& rhs, const StateVector<N>& y0, double t0,
                                                 double t1, const IntegratorConfig& cfg) {
  return DormandPrince<N, std::decay_t<Rhs>>(std::forward<Rhs>(rhs), y0, t0, t1 >= t0 ? 1.0 : -1.0,
                                             cfg);
}

/// State at t1 of y' = rhs(t, y), y(t0) = y0. t1 < t0 integrates backward.
template <std::size_t N, class Rhs>
StateVector<N> integrate(Rhs&& rhs, const StateVector<N>& y0, double t0, double t1,
                         const IntegratorConfig& cfg = {}) {
  if (t1 == t0) return y0;
  auto stepper = make_stepper<N>(std::forward<Rhs>(rhs), y0, t0, t1, cfg);
  while (stepper.time() != t1) stepper.step(t1);
  return stepper.state();
}

/// Integrates once through all `times` (monotone in the integration direction),
/// with steps clipped to land exactly on each. `observe(step)` is called for
/// every accepted step; returning false stops the integration early and the
/// result then holds only the samples reached.
template <std::size_t N, class Rhs, class Observer>
std::vector<StateVector<N>> integrate_observed(Rhs&& rhs, const StateVector<N>& y0, double t0,
                                               std::span<const double> times,
                                               const IntegratorConfig& cfg, Observer&& observe) {
  std::vector<StateVector<N>> out;
  out.reserve(times.size());
  if (times.empty()) return out;
  auto stepper = make_stepper<N>(std::forward<Rhs>(rhs), y0, t0, times.back(), cfg);
  for (double target : times) {
    while (stepper.time() != target) {
      if (!observe(stepper.step(target))) return out;
    }
    out.push_back(stepper.state());
  }
  return out;
}

template <std::size_t N, class Rhs>
std::vector<StateVector<N>> integrate_to_times(Rhs&& rhs, const StateVector<N>& y0, double t0,
                                               std::span<const double> times,
                                               const IntegratorConfig& cfg = {}) {
  return integrate_observed<N>(std::forward<Rhs>(rhs), y0, t0, times, cfg,
                               [](const DenseStep<N>&) { return true; });
}

template <std::size_t N>
struct EventSpec {
  std::function<double(const StateVector<N>&, double)> event_value;
  /// +1: value increasing through zero, -1: decreasing, 0: either.
  int direction = 0;
  int target_count = 1;
};

template <std::size_t N>
struct EventHit {
  double t = 0.0;
  StateVector<N> y{};
  int crossings_seen = 0;
};

/// Integrates forward from (t0, y0) until the `target_count`-th zero of
/// `event.event_value` crossed in `event.direction`. A zero at the start does
/// not count. The crossing is bracketed between accepted steps and refined on
/// the dense output of that step. The search horizon is `t_max` when given,
/// otherwise t0 + max_steps * max_step.
template <std::size_t N, class Rhs>
EventHit<N> find_event(Rhs&& rhs, const StateVector<N>& y0, double t0, const EventSpec<N>& event,
                       const IntegratorConfig& cfg = {}, std::optional<double> t_max = {}) {
  if (event.target_count < 1 || event.direction < -1 || event.direction > 1) {
    throw Error(ErrorKind::InvalidArgument, "event target_count >= 1 and direction in {-1,0,1}");
  }
  const double horizon = t_max ? *t_max : t0 + static_cast<double>(cfg.max_steps) * cfg.max_step;
  if (!(horizon > t0)) throw Error(ErrorKind::InvalidArgument, "event horizon must lie after t0");
  auto stepper = make_stepper<N>(std::forward<Rhs>(rhs), y0, t0, horizon, cfg);
  double g_prev = event.event_value(y0, t0);
  int count = 0;
  try {
    while (stepper.time() != horizon) {
      const DenseStep<N>& step = stepper.step(horizon);
      const double g_new = event.event_value(stepper.state(), stepper.time());
      const bool crossed = g_prev != 0.0 && (g_new == 0.0 || (g_prev > 0.0) != (g_new > 0.0));
      if (crossed) {
        const int dir = g_prev < 0.0 ? 1 : -1;
        if (event.direction == 0 || event.direction == dir) {
          if (++count == event.target_count) {
            auto value_at = [&](double t) { return event.event_value(step(t), t); };
            const RootResult r = refine_root(value_at, step.t_begin, step.t_end, g_prev, g_new, 1e-14);
            return EventHit<N>{r.x, step(r.x), count};
          }
        }
      }
      g_prev = g_new;
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::StepLimitExceeded) throw;
  }
  throw Error(ErrorKind::EventNotFound, "found " + std::to_string(count) + " of " +
                                            std::to_string(event.target_count) + " crossings");
}

}  // namespace subharmonic

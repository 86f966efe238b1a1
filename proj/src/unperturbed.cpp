#include "subharmonic/unperturbed.hpp"

#include <cmath>
#include <exception>
#include <numeric>
#include <string>

#include "subharmonic/errors.hpp"

namespace subharmonic {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_axis_velocity(double v0) {
  if (!(v0 > 0.0 && v0 < 2.0)) {
    throw Error(ErrorKind::OutOfRange, "axis velocity must lie in (0, 2), got " + std::to_string(v0));
  }
}

void check_resonance_integers(int m, int n) {
  if (m < 1 || n < 1) throw Error(ErrorKind::InvalidArgument, "m and n must be positive");
  if (std::gcd(m, n) != 1) throw Error(ErrorKind::InvalidArgument, "m and n must be coprime");
}

PeriodCurveRow period_row(double v0, const IntegratorConfig& cfg) {
  return {v0, EnergyLevel::from_axis_velocity(v0).value(), period_of_level(v0, cfg), period_oracle(v0)};
}

}  // namespace

EnergyLevel::EnergyLevel(double c) : c_(c) {
  if (!(c > -1.0 && c < 1.0)) {
    throw Error(ErrorKind::OutOfRange, "energy level must lie in (-1, 1), got " + std::to_string(c));
  }
}

EnergyLevel EnergyLevel::from_axis_velocity(double v0) {
  check_axis_velocity(v0);
  return EnergyLevel(0.5 * v0 * v0 - 1.0);
}

void ResonanceSpec::validate() const {
  check_resonance_integers(m, n);
  const double expected = static_cast<double>(m) / n * T;
  if (!(std::abs(T_c - expected) <= 1e-9 * std::abs(T_c))) {
    throw Error(ErrorKind::InvalidArgument, "resonance congruency T_c = (m/n) T violated");
  }
}

PlanarState ic_on_axis(const EnergyLevel& c) {
  return PlanarState(0.0, std::sqrt(2.0 * (c.value() + 1.0)));
}

IntegratorConfig period_default_config() {
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-12;
  return cfg;
}

double period_of_level(double v0, const IntegratorConfig& cfg) {
  check_axis_velocity(v0);
  const SystemSpec unperturbed{};
  auto rhs = [&](double t, const FlowVector& y) { return eval_field(y, t, unperturbed); };
  EventSpec<2> section{[](const FlowVector& y, double) { return y[0]; }, +1, 1};
  return find_event<2>(rhs, FlowVector{0.0, v0}, 0.0, section, cfg).t;
}

double complete_elliptic_k(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw Error(ErrorKind::OutOfRange, "elliptic modulus must lie in [0, 1)");
  double a = 1.0;
  double b = std::sqrt((1.0 - k) * (1.0 + k));
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-15 * a; ++i) {
    const double next = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next;
  }
  return std::numbers::pi / (a + b);
}

double period_oracle(double v0) {
  check_axis_velocity(v0);
  return 4.0 * complete_elliptic_k(0.5 * v0);
}

ResonanceSpec level_for_period(double T_target, int m, int n, const IntegratorConfig& cfg) {
  check_resonance_integers(m, n);
  if (!(T_target > 0.0) || !std::isfinite(T_target)) {
    throw Error(ErrorKind::InvalidArgument, "forcing period must be positive");
  }
  const double required = static_cast<double>(m) / n * T_target;
  if (required <= kTwoPi) {
    throw Error(ErrorKind::Unattainable,
                "orbit period " + std::to_string(required) + " is not above the minimal period 2*pi");
  }
  auto mismatch = [&](double v0) { return period_of_level(v0, cfg) - required; };

  double lo = 1.0, hi = 1.0;
  double f_lo = mismatch(lo);
  double f_hi = f_lo;
  for (int i = 0; f_lo > 0.0; ++i) {
    if (i == 60) throw Error(ErrorKind::NoConvergence, "no lower bracket for the requested period");
    hi = lo;
    f_hi = f_lo;
    lo *= 0.5;
    f_lo = mismatch(lo);
  }
  for (int i = 0; f_hi < 0.0; ++i) {
    if (i == 50) throw Error(ErrorKind::NoConvergence, "no upper bracket for the requested period");
    lo = hi;
    f_lo = f_hi;
    hi = 2.0 - 0.5 * (2.0 - hi);
    f_hi = mismatch(hi);
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = mismatch(mid);
    if (f_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    (f_mid < 0.0 ? lo : hi) = mid;
  }

  ResonanceSpec spec;
  spec.m = m;
  spec.n = n;
  spec.T = T_target;
  spec.omega = kTwoPi / T_target;
  spec.v0 = 0.5 * (lo + hi);
  spec.c = EnergyLevel::from_axis_velocity(spec.v0).value();
  spec.T_c = period_of_level(spec.v0, cfg);
  if (!(std::abs(spec.T_c - required) <= 1e-9 * required)) {
    throw Error(ErrorKind::NoConvergence, "bisection did not reach the requested period");
  }
  return spec;
}

ResonanceSpec resonance_from_level(double v0, int m, int n, const IntegratorConfig& cfg) {
  check_resonance_integers(m, n);
  ResonanceSpec spec;
  spec.m = m;
  spec.n = n;
  spec.v0 = v0;
  spec.c = EnergyLevel::from_axis_velocity(v0).value();
  spec.T_c = period_of_level(v0, cfg);
  spec.T = static_cast<double>(n) / m * spec.T_c;
  spec.omega = kTwoPi / spec.T;
  return spec;
}

std::vector<PeriodCurveRow> period_curve_serial(std::span<const double> v0s,
                                                const IntegratorConfig& cfg) {
  std::vector<PeriodCurveRow> rows;
  rows.reserve(v0s.size());
  for (double v0 : v0s) rows.push_back(period_row(v0, cfg));
  return rows;
}

std::vector<PeriodCurveRow> period_curve(std::span<const double> v0s, const IntegratorConfig& cfg) {
  for (double v0 : v0s) check_axis_velocity(v0);
  const auto count = static_cast<long>(v0s.size());
  std::vector<PeriodCurveRow> rows(v0s.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      rows[i] = period_row(v0s[i], cfg);
    } catch (...) {
#pragma omp critical(subharmonic_period_curve)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

}  // namespace subharmonic

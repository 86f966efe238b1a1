#include "subharmonic/strobo_map.hpp"

#include <cmath>

#include "subharmonic/errors.hpp"

namespace subharmonic {
namespace {

auto flow_rhs(const SystemSpec& sys) {
  return [&sys](double t, const FlowVector& y) { return eval_field(y, t, sys); };
}

std::vector<double> uniform_times(double t0, double step, int count) {
  std::vector<double> times(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) times[i] = t0 + (i + 1) * step;
  return times;
}

// Wrapped difference of two polar angles, in (-pi, pi].
double angle_step(double from, double to) {
  double d = to - from;
  while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
  while (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
  return d;
}

ScanResult scan_one(const PlanarState& seed, double t0, const SystemSpec& sys, double T,
                    const ScanOptions& opts, const IntegratorConfig& cfg) {
  ScanResult result;
  result.orbit = {{seed}, t0, T, sys.epsilon};
  const auto times = uniform_times(t0, T, opts.iterations);
  bool escaped = false;
  try {
    const auto states = integrate_observed<2>(
        flow_rhs(sys), seed.vec(), t0, times, cfg, [&](const DenseStep<2>& step) {
          escaped = std::abs(step(step.t_end)[1]) > opts.escape_speed;
          return !escaped;
        });
    for (const auto& y : states) result.orbit.points.emplace_back(y[0], y[1]);
  } catch (const Error& e) {
    result.status = ScanStatus::IntegrationFailed;
    result.message = e.what();
    return result;
  }
  if (escaped) {
    result.status = ScanStatus::Escaped;
    result.message = "|v| exceeded " + std::to_string(opts.escape_speed) + " after " +
                     std::to_string(result.orbit.points.size() - 1) + " iterates";
  }
  return result;
}

}  // namespace

std::string_view to_string(ScanStatus status) {
  switch (status) {
    case ScanStatus::Ok: return "ok";
    case ScanStatus::Escaped: return "escaped";
    case ScanStatus::IntegrationFailed: return "integration_failed";
  }
  return "unknown";
}

PlanarState strobo(const PlanarState& x, double t0, const SystemSpec& sys, double T,
                   const IntegratorConfig& cfg) {
  const auto y = integrate<2>(flow_rhs(sys), x.vec(), t0, t0 + T, cfg);
  return PlanarState(y[0], y[1]);
}

StroboOrbit strobo_iterate(const PlanarState& x, double t0, const SystemSpec& sys, double T, int k,
                           const IntegratorConfig& cfg) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "iterate count must be >= 1");
  StroboOrbit orbit{{x}, t0, T, sys.epsilon};
  const auto times = uniform_times(t0, T, k);
  for (const auto& y : integrate_to_times<2>(flow_rhs(sys), x.vec(), t0, times, cfg)) {
    orbit.points.emplace_back(y[0], y[1]);
  }
  return orbit;
}

FlowJacobian flow_with_jacobian(const PlanarState& x, double t0, const SystemSpec& sys,
                                double duration, const IntegratorConfig& cfg) {
  auto rhs = [&sys](double t, const VariationalVector2& y) { return variational_field_2(y, t, sys); };
  const VariationalState2 start{x, Mat2::identity()};
  const auto end = VariationalState2::unpack(integrate<6>(rhs, start.pack(), t0, t0 + duration, cfg));
  return {end.base, end.jac};
}

Mat2 monodromy(const PlanarState& x, double t0, const SystemSpec& sys, double duration,
               const IntegratorConfig& cfg) {
  return flow_with_jacobian(x, t0, sys, duration, cfg).jac;
}

double accumulated_angle(const PlanarState& x, double t0, const SystemSpec& sys, double duration,
                         const IntegratorConfig& cfg) {
  if (duration == 0.0) return 0.0;
  constexpr int kSubsamples = 8;
  double previous = std::atan2(x.v(), x.u());
  double total = 0.0;
  const double times[] = {t0 + duration};
  integrate_observed<2>(flow_rhs(sys), x.vec(), t0, times, cfg, [&](const DenseStep<2>& step) {
    for (int j = 1; j <= kSubsamples; ++j) {
      const double t = step.t_begin + (step.t_end - step.t_begin) * j / kSubsamples;
      const auto y = j == kSubsamples ? step(step.t_end) : step(t);
      const double angle = std::atan2(y[1], y[0]);
      total += angle_step(previous, angle);
      previous = angle;
    }
    return true;
  });
  return total;
}

std::vector<TrajectorySample> sample_trajectory(const PlanarState& x, double t0,
                                                const SystemSpec& sys, double duration, int samples,
                                                const IntegratorConfig& cfg) {
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "sample count must be >= 1");
  std::vector<TrajectorySample> out{{t0, x}};
  const auto times = uniform_times(t0, duration / samples, samples);
  const auto states = integrate_to_times<2>(flow_rhs(sys), x.vec(), t0, times, cfg);
  for (std::size_t i = 0; i < states.size(); ++i) {
    out.push_back({times[i], PlanarState(states[i][0], states[i][1])});
  }
  return out;
}

std::vector<ScanResult> scan_serial(std::span<const PlanarState> seeds, double t0,
                                    const SystemSpec& sys, double T, const ScanOptions& opts,
                                    const IntegratorConfig& cfg) {
  std::vector<ScanResult> results;
  results.reserve(seeds.size());
  for (const auto& seed : seeds) results.push_back(scan_one(seed, t0, sys, T, opts, cfg));
  return results;
}

std::vector<ScanResult> scan(std::span<const PlanarState> seeds, double t0, const SystemSpec& sys,
                             double T, const ScanOptions& opts, const IntegratorConfig& cfg) {
  if (opts.iterations < 1) throw Error(ErrorKind::InvalidArgument, "iterate count must be >= 1");
  const auto count = static_cast<long>(seeds.size());
  std::vector<ScanResult> results(seeds.size());
  // scan_one never throws; every seed owns its slot.
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) results[i] = scan_one(seeds[i], t0, sys, T, opts, cfg);
  return results;
}

std::vector<PlanarState> seed_line(const PlanarState& a, const PlanarState& b, int count) {
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "seed count must be >= 1");
  if (count == 1) return {a};
  std::vector<PlanarState> seeds;
  seeds.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double s = static_cast<double>(i) / (count - 1);
    seeds.emplace_back(a.u() + s * (b.u() - a.u()), a.v() + s * (b.v() - a.v()));
  }
  return seeds;
}

}  // namespace subharmonic

#include "subharmonic/dynamics.hpp"

#include <string>

#include "subharmonic/errors.hpp"

namespace subharmonic {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::StepLimitExceeded: return "StepLimitExceeded";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::EventNotFound: return "EventNotFound";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::Unattainable: return "Unattainable";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SpecMismatch: return "SpecMismatch";
    case ErrorKind::NoSimpleZeros: return "NoSimpleZeros";
    case ErrorKind::InconsistentMonodromy: return "InconsistentMonodromy";
    case ErrorKind::TangentialCrossing: return "TangentialCrossing";
    case ErrorKind::StepTooSmall: return "StepTooSmall";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

PlanarState::PlanarState(double u, double v) : u_(u), v_(v) {
  if (!std::isfinite(u) || !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidArgument, "non-finite phase-space point");
  }
}

double distance(const PlanarState& a, const PlanarState& b) {
  return std::hypot(a.u() - b.u(), a.v() - b.v());
}

ForcingSpec::ForcingSpec(double omega, std::vector<ForcingTerm> terms)
    : omega_(omega), terms_(std::move(terms)) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw Error(ErrorKind::InvalidArgument, "forcing frequency must be positive");
  }
  for (const auto& term : terms_) {
    if (term.harmonic < 1) throw Error(ErrorKind::InvalidArgument, "harmonic must be >= 1");
    if (!std::isfinite(term.amplitude)) {
      throw Error(ErrorKind::InvalidArgument, "forcing amplitude must be finite");
    }
  }
}

ForcingSpec ForcingSpec::sine(double omega) {
  return ForcingSpec(omega, {ForcingTerm{1.0, 1, PhaseKind::Sine}});
}

double ForcingSpec::value(double t) const {
  double g = 0.0;
  for (const auto& term : terms_) {
    const double arg = term.harmonic * omega_ * t;
    g += term.amplitude * (term.kind == PhaseKind::Sine ? std::sin(arg) : std::cos(arg));
  }
  return g;
}

double ForcingSpec::derivative(double t) const {
  double dg = 0.0;
  for (const auto& term : terms_) {
    const double w = term.harmonic * omega_;
    const double arg = w * t;
    dg += term.amplitude * w * (term.kind == PhaseKind::Sine ? std::cos(arg) : -std::sin(arg));
  }
  return dg;
}

VariationalVector2 VariationalState2::pack() const {
  return {base.u(), base.v(), jac.a[0], jac.a[1], jac.a[2], jac.a[3]};
}

VariationalState2 VariationalState2::unpack(const VariationalVector2& y) {
  return {PlanarState(y[0], y[1]), Mat2{{y[2], y[3], y[4], y[5]}}};
}

VariationalVector3 VariationalState3::pack() const {
  VariationalVector3 y{};
  y[0] = base.u();
  y[1] = base.v();
  y[2] = clock;
  for (int k = 0; k < 9; ++k) y[3 + k] = jac[k];
  return y;
}

VariationalState3 VariationalState3::unpack(const VariationalVector3& y) {
  VariationalState3 s;
  s.base = PlanarState(y[0], y[1]);
  s.clock = y[2];
  for (int k = 0; k < 9; ++k) s.jac[k] = y[3 + k];
  return s;
}

FlowVector eval_field(const FlowVector& x, double t, const SystemSpec& sys) {
  const double g = sys.epsilon != 0.0 ? sys.epsilon * sys.forcing.value(t) : 0.0;
  return {x[1], -std::sin(x[0]) + g};
}

PlanarState eval_field(const PlanarState& x, double t, const SystemSpec& sys) {
  const auto f = eval_field(x.vec(), t, sys);
  return PlanarState(f[0], f[1]);
}

double hamiltonian(const PlanarState& x) { return 0.5 * x.v() * x.v() - std::cos(x.u()); }

VariationalVector2 variational_field_2(const VariationalVector2& y, double t,
                                       const SystemSpec& sys) {
  const auto f = eval_field(FlowVector{y[0], y[1]}, t, sys);
  const double c = -std::cos(y[0]);
  // d/dt J = [[0, 1], [c, 0]] * J
  return {f[0], f[1], y[4], y[5], c * y[2], c * y[3]};
}

VariationalVector3 variational_field_3(const VariationalVector3& y, const SystemSpec& sys) {
  const double s = y[2];
  const auto f = eval_field(FlowVector{y[0], y[1]}, s, sys);
  const double c = -std::cos(y[0]);
  const double dg = sys.epsilon != 0.0 ? sys.epsilon * sys.forcing.derivative(s) : 0.0;
  VariationalVector3 d{};
  d[0] = f[0];
  d[1] = f[1];
  d[2] = 1.0;
  // J = [[0, 1, 0], [c, 0, dg], [0, 0, 0]]; row-major product J * Phi.
  const double* phi = y.data() + 3;
  double* dphi = d.data() + 3;
  for (int j = 0; j < 3; ++j) {
    dphi[j] = phi[3 + j];
    dphi[3 + j] = c * phi[j] + dg * phi[6 + j];
    dphi[6 + j] = 0.0;
  }
  return d;
}

}  // namespace subharmonic

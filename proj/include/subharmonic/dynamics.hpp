#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "subharmonic/matrix2.hpp"

namespace subharmonic {

/// Point (u, v) of the phase plane: angle in radians and angular velocity.
/// Angles are never reduced modulo 2*pi here.
class PlanarState {
 public:
  constexpr PlanarState() = default;
  /// Throws Error(InvalidArgument) on non-finite coordinates.
  PlanarState(double u, double v);

  constexpr double u() const { return u_; }
  constexpr double v() const { return v_; }
  constexpr Vec2 vec() const { return {u_, v_}; }

  friend constexpr bool operator==(const PlanarState&, const PlanarState&) = default;

 private:
  double u_ = 0.0;
  double v_ = 0.0;
};

double distance(const PlanarState& a, const PlanarState& b);

enum class PhaseKind { Sine, Cosine };

struct ForcingTerm {
  double amplitude = 1.0;
  int harmonic = 1;
  PhaseKind kind = PhaseKind::Sine;
};

/// State-independent trigonometric forcing g(t) = sum_k a_k trig(h_k * omega * t).
/// An empty term list is the unperturbed case g == 0.
class ForcingSpec {
 public:
  ForcingSpec() = default;
  ForcingSpec(double omega, std::vector<ForcingTerm> terms);

  /// g(t) = sin(omega t), the reference forcing.
  static ForcingSpec sine(double omega);
  /// Same spectrum at a different base frequency.
  ForcingSpec with_omega(double omega) const { return ForcingSpec(omega, terms_); }

  double omega() const { return omega_; }
  double period() const { return 2.0 * std::numbers::pi / omega_; }
  const std::vector<ForcingTerm>& terms() const { return terms_; }

  double value(double t) const;
  double derivative(double t) const;

 private:
  double omega_ = 1.0;
  std::vector<ForcingTerm> terms_;
};

/// u' = v, v' = -sin(u) + epsilon * g(t).
struct SystemSpec {
  ForcingSpec forcing;
  double epsilon = 0.0;
};

// Augmented state layouts used by the integrator. Jacobians are row-major.
using FlowVector = std::array<double, 2>;          // (u, v)
using VariationalVector2 = std::array<double, 6>;  // (u, v, J00, J01, J10, J11)
using VariationalVector3 = std::array<double, 12>; // (u, v, s, J00 .. J22)

struct VariationalState2 {
  PlanarState base;
  Mat2 jac;

  VariationalVector2 pack() const;
  static VariationalState2 unpack(const VariationalVector2& y);
};

struct VariationalState3 {
  PlanarState base;
  double clock = 0.0;
  std::array<double, 9> jac{1, 0, 0, 0, 1, 0, 0, 0, 1};

  double jac_at(int i, int j) const { return jac[3 * i + j]; }
  VariationalVector3 pack() const;
  static VariationalState3 unpack(const VariationalVector3& y);
};

PlanarState eval_field(const PlanarState& x, double t, const SystemSpec& sys);
FlowVector eval_field(const FlowVector& x, double t, const SystemSpec& sys);

/// H(u, v) = v^2/2 - cos(u).
double hamiltonian(const PlanarState& x);

/// a1*b2 - a2*b1.
constexpr double wedge(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

/// Jacobian of the unperturbed field; the forcing does not depend on the state.
inline Mat2 field_jacobian(double u) { return Mat2::from_rows(0.0, 1.0, -std::cos(u), 0.0); }

VariationalVector2 variational_field_2(const VariationalVector2& y, double t,
                                       const SystemSpec& sys);

/// Autonomized system (u, v, s) with s' = 1 and its 3x3 variational equation.
VariationalVector3 variational_field_3(const VariationalVector3& y, const SystemSpec& sys);

}  // namespace subharmonic

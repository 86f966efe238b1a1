#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <utility>

namespace subharmonic {

using Vec2 = std::array<double, 2>;

/// Row-major 2x2 matrix.
struct Mat2 {
  std::array<double, 4> a{1.0, 0.0, 0.0, 1.0};

  static constexpr Mat2 identity() { return Mat2{}; }
  static constexpr Mat2 from_rows(double a00, double a01, double a10, double a11) {
    return Mat2{{a00, a01, a10, a11}};
  }

  constexpr double operator()(int i, int j) const { return a[2 * i + j]; }
  constexpr double& operator()(int i, int j) { return a[2 * i + j]; }

  constexpr double trace() const { return a[0] + a[3]; }
  constexpr double det() const { return a[0] * a[3] - a[1] * a[2]; }

  friend constexpr Mat2 operator*(const Mat2& x, const Mat2& y) {
    return from_rows(x.a[0] * y.a[0] + x.a[1] * y.a[2], x.a[0] * y.a[1] + x.a[1] * y.a[3],
                     x.a[2] * y.a[0] + x.a[3] * y.a[2], x.a[2] * y.a[1] + x.a[3] * y.a[3]);
  }
  friend constexpr Vec2 operator*(const Mat2& m, const Vec2& v) {
    return {m.a[0] * v[0] + m.a[1] * v[1], m.a[2] * v[0] + m.a[3] * v[1]};
  }
  friend constexpr Mat2 operator+(const Mat2& x, const Mat2& y) {
    return Mat2{{x.a[0] + y.a[0], x.a[1] + y.a[1], x.a[2] + y.a[2], x.a[3] + y.a[3]}};
  }
  friend constexpr Mat2 operator-(const Mat2& x, const Mat2& y) {
    return Mat2{{x.a[0] - y.a[0], x.a[1] - y.a[1], x.a[2] - y.a[2], x.a[3] - y.a[3]}};
  }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

inline double norm(const Vec2& v) { return std::hypot(v[0], v[1]); }

/// Singular values (largest first).
inline std::pair<double, double> singular_values(const Mat2& m) {
  // Closed form via the two invariants of m^T m.
  const double fro2 = m.a[0] * m.a[0] + m.a[1] * m.a[1] + m.a[2] * m.a[2] + m.a[3] * m.a[3];
  const double d = std::abs(m.det());
  const double s = std::sqrt(std::max(0.0, fro2 + 2.0 * d));
  const double t = std::sqrt(std::max(0.0, fro2 - 2.0 * d));
  const double smax = 0.5 * (s + t);
  const double smin = smax > 0.0 ? d / smax : 0.0;
  return {smax, smin};
}

inline std::array<std::complex<double>, 2> eigenvalues(const Mat2& m) {
  const double half_tr = 0.5 * m.trace();
  const double disc = half_tr * half_tr - m.det();
  if (disc >= 0.0) {
    const double r = std::sqrt(disc);
    // Larger-magnitude root first, the other from the product to avoid cancellation.
    const double l1 = half_tr >= 0.0 ? half_tr + r : half_tr - r;
    const double l2 = l1 != 0.0 ? m.det() / l1 : half_tr - r;
    return {std::complex<double>(l1, 0.0), std::complex<double>(l2, 0.0)};
  }
  const double im = std::sqrt(-disc);
  return {std::complex<double>(half_tr, im), std::complex<double>(half_tr, -im)};
}

/// Solves m x = b by Gaussian elimination with partial pivoting. Returns false
/// when a pivot vanishes.
inline bool solve(const Mat2& m, const Vec2& b, Vec2& x) {
  double a00 = m.a[0], a01 = m.a[1], a10 = m.a[2], a11 = m.a[3];
  double b0 = b[0], b1 = b[1];
  if (std::abs(a10) > std::abs(a00)) {
    std::swap(a00, a10);
    std::swap(a01, a11);
    std::swap(b0, b1);
  }
  if (a00 == 0.0) return false;
  const double l = a10 / a00;
  const double u11 = a11 - l * a01;
  if (u11 == 0.0) return false;
  x[1] = (b1 - l * b0) / u11;
  x[0] = (b0 - a01 * x[1]) / a00;
  return std::isfinite(x[0]) && std::isfinite(x[1]);
}

}  // namespace subharmonic

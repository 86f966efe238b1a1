#pragma once

#include <cmath>
#include <limits>
#include <utility>

namespace subharmonic {

struct RootResult {
  double x = 0.0;
  double fx = 0.0;
  int evaluations = 0;
};

/// Safeguarded secant/bisection on a sign-changing bracket [a, b].
///
/// Each iteration takes an Illinois-weighted secant step and falls back to
/// bisection whenever the secant point leaves the bracket or two consecutive
/// steps fail to halve it. Stops when |f| <= ftol or the bracket is within a
/// few ulps. The returned point is the bracket end with the smallest |f|.
template <class F>
RootResult refine_root(F&& f, double a, double b, double fa, double fb, double ftol,
                       int max_evaluations = 200) {
  RootResult best{std::abs(fa) <= std::abs(fb) ? a : b, std::abs(fa) <= std::abs(fb) ? fa : fb, 0};
  if (fa == 0.0) return {a, fa, 0};
  if (fb == 0.0) return {b, fb, 0};

  // Weighted copies of the endpoint values (Illinois modification).
  double wa = fa, wb = fb;
  int side = 0;
  double width = std::abs(b - a);
  int slow = 0;

  while (best.evaluations < max_evaluations) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300)) {
      break;
    }
    double x = b - wb * (b - a) / (wb - wa);
    const double lo = std::min(a, b), hi = std::max(a, b);
    if (!(x > lo && x < hi) || slow >= 2) {
      x = 0.5 * (a + b);
      slow = 0;
    }
    const double fx = f(x);
    ++best.evaluations;
    if (std::abs(fx) < std::abs(best.fx)) {
      best.x = x;
      best.fx = fx;
    }
    if (fx == 0.0 || std::abs(fx) <= ftol) {
      best.x = x;
      best.fx = fx;
      return best;
    }
    if ((fx > 0.0) == (fb > 0.0)) {
      b = x;
      fb = wb = fx;
      if (side == -1) wa *= 0.5;
      side = -1;
    } else {
      a = x;
      fa = wa = fx;
      if (side == 1) wb *= 0.5;
      side = 1;
    }
    const double new_width = std::abs(b - a);
    slow = new_width > 0.5 * width ? slow + 1 : 0;
    width = new_width;
  }
  return best;
}

}  // namespace subharmonic

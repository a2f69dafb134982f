#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

namespace dfa {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

template <typename F, typename R>
R simpson_step(F&& f, double a, double b, R fa, R fm, R fb, R whole, double tol,
               int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const R flm = f(lm), frm = f(rm);
  const R left = (b - a) / 12.0 * (fa + 4.0 * flm + fm);
  const R right = (b - a) / 12.0 * (fm + 4.0 * frm + fb);
  const R delta = left + right - whole;
  if (depth <= 0) throw QuadratureError("adaptive Simpson: depth exhausted");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson on a finite interval; f must be smooth on [a, b].
template <typename F>
auto adaptive_simpson(F&& f, double a, double b, double tol = 1e-10,
                      int max_depth = 60) {
  using R = decltype(f(a));
  if (a == b) return R{};
  const R fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
  const R whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Tanh-sinh (double exponential) quadrature on (a, b). Robust against
/// integrable endpoint singularities (log, inverse square root).
template <typename F>
auto tanh_sinh(F&& f, double a, double b, double tol = 1e-11) {
  using R = decltype(f(a));
  const double c = 0.5 * (b + a), d = 0.5 * (b - a);
  const double tmax = 4.0;  // weights below ~1e-90 beyond this
  double h = 1.0;

  auto eval = [&](double t) -> R {
    const double u = M_PI_2 * std::sinh(t);
    const double x = std::tanh(u);
    const double w = M_PI_2 * std::cosh(t) / (std::cosh(u) * std::cosh(u));
    const double xx = c + d * x;
    if (xx <= a || xx >= b) return R{};  // underflow to the endpoint
    return f(xx) * (d * w);
  };

  R sum = eval(0.0);
  for (double t = h; t <= tmax; t += h) sum += eval(t) + eval(-t);
  R prev = sum * h;

  for (int level = 1; level <= 12; ++level) {
    h /= 2;
    R refine{};
    for (double t = h; t <= tmax; t += 2 * h) refine += eval(t) + eval(-t);
    sum += refine;
    R cur = sum * h;
    if (level >= 3 && std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur)))
      return cur;
    prev = cur;
  }
  return prev;
}

/// Integral over [a, inf) of a function decaying at least exponentially:
/// unit panels until the running increments fall below tol.
template <typename F>
auto integrate_to_infinity(F&& f, double a, double tol = 1e-11,
                           double panel = 1.0) {
  using R = decltype(f(a));
  R total{};
  double lo = a;
  int quiet = 0;
  for (int i = 0; i < 4000; ++i) {
    R piece = adaptive_simpson(f, lo, lo + panel, tol / 8);
    total += piece;
    lo += panel;
    if (std::abs(piece) < tol * std::max(1.0, std::abs(total))) {
      if (++quiet >= 3) return total;
    } else {
      quiet = 0;
    }
  }
  throw QuadratureError("integrate_to_infinity: no decay detected");
}

}  // namespace dfa

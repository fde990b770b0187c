#pragma once

#include <cmath>
#include <string>

#include "relaysleep/error.hpp"

namespace relaysleep {

namespace detail {

template <class F>
double simpson_step(const F& f, double a, double fa, double b, double fb, double m, double fm,
                    double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  if (!std::isfinite(flm) || !std::isfinite(frm)) {
    throw Error(Errc::integrand_singularity, "integrand not finite near " + std::to_string(m));
  }
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature with Richardson correction.
///
/// `rel_tol` is relative to a coarse 5-point estimate of the integral, so the
/// absolute target scales with the magnitude of the result. Every
/// integral of the load model goes through here.
template <class F>
double integrate_adaptive(const F& f, double a, double b, double rel_tol = 1e-8, int max_depth = 48) {
  require(b > a, Errc::invalid_argument, "integration interval must satisfy lo < hi");
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm)) {
    throw Error(Errc::integrand_singularity, "integrand not finite on interval endpoints");
  }
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double q1 = f(0.5 * (a + m));
  const double q3 = f(0.5 * (m + b));
  const double coarse = (b - a) / 12.0 * (fa + 4.0 * q1 + 2.0 * fm + 4.0 * q3 + fb);
  double scale = std::abs(coarse);
  if (scale == 0.0) scale = std::abs(whole);
  const double tol = scale > 0.0 ? rel_tol * scale : rel_tol;
  return detail::simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

}  // namespace relaysleep

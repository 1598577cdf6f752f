#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <vector>

namespace lspec {

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
};

// Adaptive 15-point Gauss–Kronrod on [a,b]; works for real or complex f.
template <class F>
auto gk_adaptive(F&& f, double a, double b, double rel_tol = 1e-12,
                 unsigned max_depth = 18) {
  using R = decltype(f(a));
  double err = 0.0;
  R v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, max_depth, rel_tol, &err);
  return QuadResult<R>{v, err};
}

// Gauss–Legendre nodes/weights on [a,b] (fixed 16 or 30 point rules).
struct GLRule {
  std::vector<double> x, w;
};

GLRule gauss_legendre(int npts, double a, double b);

// Composite rule: `panels` equal panels of the npts-point rule.
GLRule composite_gl(int npts, int panels, double a, double b);

}  // namespace lspec

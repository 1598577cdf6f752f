#pragma once

#include <string>
#include <vector>

#include "lspec/metric.hpp"
#include "lspec/special.hpp"

namespace lspec {

// Value of a meromorphic function at α with simple-pole bookkeeping. Off a pole
// `value` is the function value; at a pole (residue mode) it is the finite part.
struct MeroValue {
  cplx value{};
  int pole_order = 0;
  cplx residue{};
  double pole_distance = 0.0;
};

struct ElemValue {
  cplx alpha, z;
  double q = 0.0;
  cplx value;
  double pole_distance = 0.0;
};

inline constexpr double kPoleTol = 1e-8;

// log(-z) on the principal branch, except that the boundary z > 0 is reached
// from the upper half-plane (arg(-z) = -π).
cplx log_minus_z(cplx z);

// ∫_{R^n} (|ξ|² - z)^{-α} dξ continued in α.
MeroValue euclid_integral(cplx alpha, cplx z, int n, bool residue_mode = false);
// The same through the pole series plus a quadrature tail (independent oracle).
cplx euclid_series(cplx alpha, cplx z, int n);

// F_α(z) at x = 0. Upper half plane (incl. the real axis) carries the Wick
// factor +i, the lower half plane -i.
MeroValue fa_diag(cplx alpha, cplx z, int n, bool residue_mode = false);

// F_α(z, q) for q = Q(x) ≠ 0 and Im z > 0.
cplx fa_offdiag(cplx alpha, cplx z, double q, int n, double tol = 1e-11);
ElemValue elem_value(cplx alpha, cplx z, double q, int n);

double minkowski_square(const Vec& x);  // -x0² + Σ xi²

struct PdeReport {
  double residual = 0.0;           // max |(□-z)F_α - αF_{α-1}|
  double scale = 0.0;              // max |αF_{α-1}| (or max|zF_α| if α = 0)
  double gradient_residual = 0.0;  // max |2∂F_α - η x F_{α-1}|
  double gradient_scale = 0.0;
  std::size_t points = 0;
  double relative() const { return residual / std::max(scale, 1e-300); }
  double gradient_relative() const { return gradient_residual / std::max(gradient_scale, 1e-300); }
};

// Spacelike sample grid: points with Q(x) in [qmin, qmax].
std::vector<Vec> spacelike_grid(int n, int count, double qmin = 0.3, double qmax = 2.0,
                                std::uint64_t seed = 11);
PdeReport pde_check(cplx alpha, cplx z, const std::vector<Vec>& points, double h = 0.02,
                    double lightcone_margin = 0.05);

struct BernsteinReport {
  std::string status;  // "ok" or "prefactor-zero"
  cplx rhs{};          // F_{α+1}
  cplx lhs_printed{};    // A F_α with the operator as printed
  cplx lhs_corrected{};
  double residual_printed = 0.0;  // relative
  double residual_corrected = 0.0;
};
BernsteinReport bernstein_check(cplx alpha, cplx z, const Vec& x, double h = 0.02);

}  // namespace lspec

#pragma once

#include <cstdint>
#include <vector>

#include "lspec/geomkit.hpp"
#include "lspec/poly.hpp"

namespace lspec {

struct HadamardOptions {
  int radial_nodes = 16;    // Gauss–Legendre nodes on [0, radius]
  int directions = 0;       // 0: the 2n(n-1) directions (±e_i ± e_j)/√2
  double radius = 0.0;      // 0: chart radius
  int metric_degree = 8;    // polynomial model of g̃ - η
  int metric_fit_dirs = 300;
  int metric_fit_radii = 10;
  int u_degree = 6;         // polynomial model of u_k for the next level
  int u_fit_dirs = 160;
  int u_fit_radii = 8;
  int sigma_nodes = 16;     // Gauss–Legendre rule of the integrating-factor quadrature
  std::uint64_t seed = 1;
};

// Transport coefficients in a normal chart:
//   u_0 = |g̃|^{-1/4},  u_k(y) = -|g̃(y)|^{-1/4} ∫_0^1 σ^{k-1} |g̃(σy)|^{1/4} (P u_{k-1})(σy) dσ
// with P = g̃^{jk}∂_j∂_k + (∂_j g̃^{jk})∂_k + b^k∂_k, b^k = g̃^{jk}∂_j log|g̃|^{1/2}.
class HadamardSolver {
 public:
  HadamardSolver(const NormalChart& chart, int order, const HadamardOptions& opt = {});

  int order() const { return order_; }
  int dim() const { return n_; }
  double radius() const { return radius_; }
  const NormalChart& chart() const { return chart_; }
  const PolyFit& metric_fit() const { return gfit_; }
  const PolyFit& u_fit(int k) const { return ufit_.at(k - 1); }

  // metric model at y: g, ∂g (c*n*n + a*n + b), optionally ∂∂g
  void metric_jet(const double* y, Mat& g, std::vector<double>& dg, std::vector<double>* ddg) const;
  double u0(const double* y) const;
  double h(const double* y) const;  // y^k ∂_k log|g̃|^{1/2}
  double b_dot_eta_y(const double* y) const;  // b^j η_jk y^k
  // value, gradient, Hessian of u_k (k = 0 analytic in the metric model,
  // k >= 1 from its polynomial model)
  void u_jet(int k, const double* y, double& v, double* g, double* H) const;
  double P_u(int k, const double* y) const;  // (P u_k)(y)
  double u(int k, const double* y) const;    // integrating-factor value (k = 0: u0)

 private:
  const NormalChart& chart_;
  int n_, order_;
  double radius_;
  HadamardOptions opt_;
  PolyFit gfit_;
  std::vector<PolyFit> ufit_;
  std::vector<double> sx_, sw_;
};

struct HadamardSequence {
  int order = 0;
  double radius = 0.0;
  std::vector<Vec> directions;
  std::vector<double> t;                               // radial nodes
  std::vector<std::vector<std::vector<double>>> values;  // [k][direction][node]
  std::vector<double> diag;                            // Richardson + direction average
  std::vector<double> diag_spread;                     // max-min over directions, relative
  std::vector<double> diag_direct;                     // -(P u_{k-1})(0)/k
  std::vector<double> residuals;                       // transport residual, k >= 1 (index k)
  double metric_fit_residual = 0.0;
  std::vector<double> u_fit_residual;                  // relative rms, index k
};

HadamardSequence hadamard_sequence(const NormalChart& chart, int N, const HadamardOptions& opt = {});

// ODE-level quantities (no polynomial model): |g̃(y)|^{-1/4} and the radial
// derivative of log|g̃|^{1/2} along the ray through y.
double u0_exact(const NormalChart& chart, const Vec& y);
double h_function(const NormalChart& chart, const Vec& y);

std::vector<Vec> diagonal_directions(int n);

}  // namespace lspec

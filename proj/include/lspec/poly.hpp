#pragma once

#include <Eigen/Dense>
#include <vector>

namespace lspec {

// Monomials y^e with dmin <= |e| <= dmax in n variables, evaluated in the
// scaled variable s = y / scale.
class MonomialBasis {
 public:
  MonomialBasis() = default;
  MonomialBasis(int n, int dmin, int dmax, double scale);
  int size() const { return int(exps_.size()); }
  int dim() const { return n_; }
  double scale() const { return scale_; }
  const std::vector<int>& exponent(int k) const { return exps_[k]; }

  void values(const double* y, double* out) const;
  // out_v[k], out_g[k*n + i], out_h[(k*n + i)*n + j] (derivatives in y)
  void jets(const double* y, double* out_v, double* out_g, double* out_h) const;

 private:
  int n_ = 0, dmax_ = 0;
  double scale_ = 1.0;
  std::vector<std::vector<int>> exps_;
};

// Vector-valued polynomial fitted by least squares.
struct PolyFit {
  MonomialBasis basis;
  Eigen::MatrixXd coef;  // basis.size() x ncomp
  double rms_residual = 0.0;
  double max_residual = 0.0;

  int ncomp() const { return int(coef.cols()); }
  void eval(const double* y, double* out) const;
  // value/gradient/Hessian per component: v[c], g[c*n+i], h[(c*n+i)*n+j]
  void jets(const double* y, double* v, double* g, double* h) const;
};

// rows of Y are sample points; rows of V are sample values
PolyFit fit_poly(const MonomialBasis& basis, const Eigen::MatrixXd& Y, const Eigen::MatrixXd& V);

}  // namespace lspec

#include "lspec/poly.hpp"

#include <functional>

namespace lspec {

MonomialBasis::MonomialBasis(int n, int dmin, int dmax, double scale)
    : n_(n), dmax_(dmax), scale_(scale) {
  std::vector<int> e(n, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n - 1) {
      e[i] = left;
      exps_.push_back(e);
      return;
    }
    for (int p = left; p >= 0; --p) {
      e[i] = p;
      rec(i + 1, left - p);
    }
  };
  for (int d = dmin; d <= dmax; ++d) rec(0, d);
}

void MonomialBasis::values(const double* y, double* out) const {
  std::vector<double> pw(n_ * (dmax_ + 1));
  for (int i = 0; i < n_; ++i) {
    double s = y[i] / scale_, p = 1.0;
    for (int k = 0; k <= dmax_; ++k, p *= s) pw[i * (dmax_ + 1) + k] = p;
  }
  for (int k = 0; k < size(); ++k) {
    double v = 1.0;
    for (int i = 0; i < n_; ++i) v *= pw[i * (dmax_ + 1) + exps_[k][i]];
    out[k] = v;
  }
}

void MonomialBasis::jets(const double* y, double* ov, double* og, double* oh) const {
  const int D = dmax_ + 1, n = n_;
  // pw[i][k] = s_i^k, with s^(-1) treated through the exponent factor
  std::vector<double> pw(n * (D + 1), 0.0);
  for (int i = 0; i < n; ++i) {
    double s = y[i] / scale_, p = 1.0;
    for (int k = 0; k <= D; ++k, p *= s) pw[i * (D + 1) + k] = p;
  }
  auto P = [&](int i, int k) { return k < 0 ? 0.0 : pw[i * (D + 1) + k]; };
  const double is = 1.0 / scale_, is2 = is * is;
  for (int k = 0; k < size(); ++k) {
    const auto& e = exps_[k];
    double v = 1.0;
    for (int i = 0; i < n; ++i) v *= P(i, e[i]);
    ov[k] = v;
    for (int i = 0; i < n; ++i) {
      double gi = e[i] == 0 ? 0.0 : e[i] * P(i, e[i] - 1);
      for (int j = 0; j < n; ++j)
        if (j != i) gi *= P(j, e[j]);
      og[k * n + i] = gi * is;
      for (int j = 0; j < n; ++j) {
        double h;
        if (i == j) {
          h = e[i] < 2 ? 0.0 : e[i] * (e[i] - 1) * P(i, e[i] - 2);
          if (h != 0.0)
            for (int m = 0; m < n; ++m)
              if (m != i) h *= P(m, e[m]);
        } else {
          h = (e[i] == 0 || e[j] == 0) ? 0.0 : e[i] * e[j] * P(i, e[i] - 1) * P(j, e[j] - 1);
          if (h != 0.0)
            for (int m = 0; m < n; ++m)
              if (m != i && m != j) h *= P(m, e[m]);
        }
        oh[(k * n + i) * n + j] = h * is2;
      }
    }
  }
}

void PolyFit::eval(const double* y, double* out) const {
  std::vector<double> b(basis.size());
  basis.values(y, b.data());
  for (int c = 0; c < ncomp(); ++c) {
    double s = 0.0;
    for (int k = 0; k < basis.size(); ++k) s += coef(k, c) * b[k];
    out[c] = s;
  }
}

void PolyFit::jets(const double* y, double* v, double* g, double* h) const {
  const int m = basis.size(), n = basis.dim();
  std::vector<double> bv(m), bg(m * n), bh(m * n * n);
  basis.jets(y, bv.data(), bg.data(), bh.data());
  for (int c = 0; c < ncomp(); ++c) {
    double sv = 0.0;
    std::vector<double> sg(n, 0.0), sh(n * n, 0.0);
    for (int k = 0; k < m; ++k) {
      double a = coef(k, c);
      if (a == 0.0) continue;
      sv += a * bv[k];
      for (int i = 0; i < n; ++i) sg[i] += a * bg[k * n + i];
      if (h)
        for (int q = 0; q < n * n; ++q) sh[q] += a * bh[k * n * n + q];
    }
    v[c] = sv;
    for (int i = 0; i < n; ++i) g[c * n + i] = sg[i];
    if (h)
      for (int q = 0; q < n * n; ++q) h[c * n * n + q] = sh[q];
  }
}

PolyFit fit_poly(const MonomialBasis& basis, const Eigen::MatrixXd& Y, const Eigen::MatrixXd& V) {
  const int N = int(Y.rows()), m = basis.size();
  Eigen::MatrixXd A(N, m);
  std::vector<double> row(m), y(Y.cols());
  for (int r = 0; r < N; ++r) {
    for (int i = 0; i < Y.cols(); ++i) y[i] = Y(r, i);
    basis.values(y.data(), row.data());
    for (int k = 0; k < m; ++k) A(r, k) = row[k];
  }
  PolyFit f;
  f.basis = basis;
  f.coef = A.colPivHouseholderQr().solve(V);
  Eigen::MatrixXd R = A * f.coef - V;
  f.rms_residual = std::sqrt(R.squaredNorm() / double(R.size()));
  f.max_residual = R.cwiseAbs().maxCoeff();
  return f;
}

}  // namespace lspec

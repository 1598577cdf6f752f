#include "lspec/hadamard.hpp"

#include <cmath>

#include "lspec/parallel.hpp"
#include "lspec/quad.hpp"

namespace lspec {

std::vector<Vec> diagonal_directions(int n) {
  std::vector<Vec> d;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int si = -1; si <= 1; si += 2)
        for (int sj = -1; sj <= 1; sj += 2)
          d.push_back((si * Vec::Unit(n, i) + sj * Vec::Unit(n, j)) / std::sqrt(2.0));
  return d;
}

HadamardSolver::HadamardSolver(const NormalChart& chart, int order, const HadamardOptions& opt)
    : chart_(chart), n_(chart.dim()), order_(order), opt_(opt) {
  if (order < 0 || order > 3) throw DomainError("Hadamard order is capped at 3");
  radius_ = opt.radius > 0 ? opt.radius : chart.radius();
  if (radius_ > chart.radius() * (1 + 1e-12)) throw RadiusError("Hadamard radius exceeds the chart radius");
  auto rule = gauss_legendre(opt.sigma_nodes, 0.0, 1.0);
  sx_ = rule.x;
  sw_ = rule.w;
  gfit_ = fit_pulled_metric(chart, opt.metric_degree, radius_, opt.metric_fit_dirs,
                            opt.metric_fit_radii, opt.seed);
  // polynomial models of u_1..u_N, each built from the previous level
  for (int k = 1; k <= order; ++k) {
    auto dirs = sample_directions(n_, opt.u_fit_dirs, opt.seed + 1000 * k);
    const int R = opt.u_fit_radii;
    const std::size_t N = dirs.size() * R + 1;
    Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(N, n_), V(N, 1);
    parallel_for(N, [&](std::size_t i) {
      Vec y = Vec::Zero(n_);
      if (i + 1 < N) y = dirs[i / R] * (radius_ * double(i % R + 1) / R);
      Y.row(i) = y.transpose();
      V(i, 0) = u(k, y.data());
    });
    ufit_.push_back(fit_poly(MonomialBasis(n_, 0, opt.u_degree, radius_), Y, V));
  }
}

void HadamardSolver::metric_jet(const double* y, Mat& g, std::vector<double>& dg,
                                std::vector<double>* ddg) const {
  const int n = n_, nc = n * (n + 1) / 2;
  std::vector<double> v(nc), gr(nc * n), H(ddg ? nc * n * n : 0);
  gfit_.jets(y, v.data(), gr.data(), ddg ? H.data() : nullptr);
  g = eta(n);
  dg.assign(n * n * n, 0.0);
  if (ddg) ddg->assign(n * n * n * n, 0.0);
  int comp = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b, ++comp) {
      g(a, b) += v[comp];
      if (b != a) g(b, a) = g(a, b);
      for (int c = 0; c < n; ++c) {
        dg[(c * n + a) * n + b] = dg[(c * n + b) * n + a] = gr[comp * n + c];
        if (ddg)
          for (int d = 0; d < n; ++d)
            (*ddg)[((c * n + d) * n + a) * n + b] = (*ddg)[((c * n + d) * n + b) * n + a] =
                H[(comp * n + c) * n + d];
      }
    }
}

namespace {

// log|det g| derivatives from the metric jet
struct DetJet {
  double L = 0.0;
  std::vector<double> dL, ddL;
};

DetJet det_jet(int n, const Mat& g, const std::vector<double>& dg, const std::vector<double>* ddg,
               Mat* ginv_out = nullptr, std::vector<Mat>* dgm_out = nullptr) {
  DetJet d;
  Mat gi = g.inverse();
  d.L = std::log(std::abs(g.determinant()));
  std::vector<Mat> dgm(n, Mat(n, n)), gidg(n);
  for (int c = 0; c < n; ++c) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) dgm[c](a, b) = dg[(c * n + a) * n + b];
    gidg[c] = gi * dgm[c];
  }
  d.dL.resize(n);
  for (int c = 0; c < n; ++c) d.dL[c] = gidg[c].trace();
  if (ddg) {
    d.ddL.resize(n * n);
    for (int c = 0; c < n; ++c)
      for (int e = 0; e < n; ++e) {
        double t1 = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) t1 += gi(b, a) * (*ddg)[((c * n + e) * n + a) * n + b];
        d.ddL[c * n + e] = t1 - (gidg[c] * gidg[e]).trace();
      }
  }
  if (ginv_out) *ginv_out = gi;
  if (dgm_out) *dgm_out = dgm;
  return d;
}

}  // namespace

double HadamardSolver::u0(const double* y) const {
  Mat g;
  std::vector<double> dg;
  metric_jet(y, g, dg, nullptr);
  return std::pow(std::abs(g.determinant()), -0.25);
}

double HadamardSolver::h(const double* y) const {
  Mat g;
  std::vector<double> dg;
  metric_jet(y, g, dg, nullptr);
  auto d = det_jet(n_, g, dg, nullptr);
  double s = 0.0;
  for (int c = 0; c < n_; ++c) s += 0.5 * y[c] * d.dL[c];
  return s;
}

double HadamardSolver::b_dot_eta_y(const double* y) const {
  Mat g, gi;
  std::vector<double> dg;
  metric_jet(y, g, dg, nullptr);
  auto d = det_jet(n_, g, dg, nullptr, &gi);
  Mat et = eta(n_);
  double s = 0.0;
  for (int k = 0; k < n_; ++k) {
    double bk = 0.0;
    for (int j = 0; j < n_; ++j) bk += gi(j, k) * 0.5 * d.dL[j];
    s += bk * et(k, k) * y[k];
  }
  return s;
}

void HadamardSolver::u_jet(int k, const double* y, double& v, double* gout, double* H) const {
  const int n = n_;
  if (k == 0) {
    Mat g;
    std::vector<double> dg, ddg;
    metric_jet(y, g, dg, &ddg);
    auto d = det_jet(n, g, dg, &ddg);
    v = std::exp(-0.25 * d.L);
    for (int c = 0; c < n; ++c) gout[c] = -0.25 * v * d.dL[c];
    for (int c = 0; c < n; ++c)
      for (int e = 0; e < n; ++e)
        H[c * n + e] = v * (d.dL[c] * d.dL[e] / 16.0 - d.ddL[c * n + e] / 4.0);
    return;
  }
  u_fit(k).jets(y, &v, gout, H);
}

double HadamardSolver::P_u(int k, const double* y) const {
  const int n = n_;
  double v;
  std::vector<double> gu(n), Hu(n * n);
  u_jet(k, y, v, gu.data(), Hu.data());
  Mat g, gi;
  std::vector<double> dg;
  std::vector<Mat> dgm;
  metric_jet(y, g, dg, nullptr);
  auto d = det_jet(n, g, dg, nullptr, &gi, &dgm);
  double s = 0.0;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) s += gi(j, l) * Hu[j * n + l];
  // ∂_j g^{jk} = -(g^{-1} ∂_j g g^{-1})^{jk}
  for (int kk = 0; kk < n; ++kk) {
    double divg = 0.0, b = 0.0;
    for (int j = 0; j < n; ++j) {
      divg -= (gi * dgm[j] * gi)(j, kk);
      b += gi(j, kk) * 0.5 * d.dL[j];
    }
    s += (divg + b) * gu[kk];
  }
  return s;
}

double HadamardSolver::u(int k, const double* y) const {
  if (k == 0) return u0(y);
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += y[i] * y[i];
  if (std::sqrt(t) > radius_ * (1 + 1e-12)) throw DomainError("point outside the Hadamard ball");
  std::vector<double> ys(n_);
  double acc = 0.0;
  for (std::size_t q = 0; q < sx_.size(); ++q) {
    double s = sx_[q];
    for (int i = 0; i < n_; ++i) ys[i] = s * y[i];
    acc += sw_[q] * std::pow(s, k - 1) * P_u(k - 1, ys.data()) / u0(ys.data());
  }
  return -acc * u0(y);
}

HadamardSequence hadamard_sequence(const NormalChart& chart, int N, const HadamardOptions& opt) {
  if (opt.radial_nodes != 8 && opt.radial_nodes != 16 && opt.radial_nodes != 20 && opt.radial_nodes != 30)
    throw GridError("radial_nodes must be 8, 16, 20 or 30");
  HadamardSolver S(chart, N, opt);
  const int n = chart.dim();
  HadamardSequence out;
  out.order = N;
  out.radius = S.radius();
  out.directions = opt.directions > 0 ? sample_directions(n, opt.directions, opt.seed + 7)
                                      : diagonal_directions(n);
  out.t = gauss_legendre(opt.radial_nodes, 0.0, S.radius()).x;
  out.metric_fit_residual = S.metric_fit().max_residual;
  const std::size_t D = out.directions.size(), T = out.t.size();
  out.values.assign(N + 1, std::vector<std::vector<double>>(D, std::vector<double>(T)));
  out.residuals.assign(N + 1, 0.0);
  out.u_fit_residual.assign(N + 1, 0.0);
  out.diag.assign(N + 1, 0.0);
  out.diag_spread.assign(N + 1, 0.0);
  out.diag_direct.assign(N + 1, 0.0);
  out.diag[0] = 1.0;
  out.diag_direct[0] = 1.0;
  const double r = 0.05 * S.radius();
  Vec zero = Vec::Zero(n);
  for (int k = 0; k <= N; ++k) {
    std::vector<double> res(D * T, 0.0), rich(D, 0.0);
    parallel_for(D * T + D, [&](std::size_t i) {
      if (i < D * T) {
        std::size_t d = i / T, j = i % T;
        Vec y = out.directions[d] * out.t[j];
        double uk = S.u(k, y.data());
        out.values[k][d][j] = uk;
        if (k >= 1) {
          double v;
          std::vector<double> gu(n), Hu(n * n);
          S.u_jet(k, y.data(), v, gu.data(), Hu.data());
          double rho = 0.0;
          for (int c = 0; c < n; ++c) rho += y[c] * gu[c];
          double e = 2 * k * uk + S.h(y.data()) * uk + 2 * rho + 2 * S.P_u(k - 1, y.data());
          res[i] = std::abs(e) / std::max(1.0, std::abs(uk));
        }
        return;
      }
      std::size_t d = i - D * T;
      double f[3];
      for (int q = 0; q < 3; ++q) {
        Vec y = out.directions[d] * (r / double(1 << q));
        f[q] = S.u(k, y.data());
      }
      double r1a = 2 * f[1] - f[0], r1b = 2 * f[2] - f[1];
      rich[d] = (4 * r1b - r1a) / 3.0;
    });
    if (k >= 1) {
      for (double e : res) out.residuals[k] = std::max(out.residuals[k], e);
      double lo = 1e300, hi = -1e300, s = 0.0;
      for (double v : rich) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        s += v;
      }
      out.diag[k] = s / double(D);
      out.diag_spread[k] = (hi - lo) / std::max(1.0, std::abs(out.diag[k]));
      out.diag_direct[k] = -S.P_u(k - 1, zero.data()) / double(k);
      out.u_fit_residual[k] = S.u_fit(k).rms_residual;
    }
  }
  return out;
}

double u0_exact(const NormalChart& chart, const Vec& y) {
  if (y.norm() >= chart.radius()) throw DomainError("point outside the chart");
  return std::pow(std::abs(chart.pulled_metric(y).determinant()), -0.25);
}

double h_function(const NormalChart& chart, const Vec& y) {
  double t = y.norm();
  if (t >= chart.radius()) throw DomainError("point outside the chart");
  if (t == 0.0) return 0.0;
  Vec v = y / t;
  // 4th-order central difference of log|g̃|^{1/2} in t, step 0.1 t (clipped to the chart)
  double dt = std::min(0.1 * t, 0.2 * (chart.radius() - t));
  auto gs = chart.ray_metric(v, {t - 2 * dt, t - dt, t + dt, t + 2 * dt});
  double l[4];
  for (int q = 0; q < 4; ++q) l[q] = 0.5 * std::log(std::abs(gs[q].determinant()));
  return t * (l[0] - 8 * l[1] + 8 * l[2] - l[3]) / (12 * dt);
}

}  // namespace lspec

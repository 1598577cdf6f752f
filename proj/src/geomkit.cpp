#include "lspec/geomkit.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <random>

#include "lspec/parallel.hpp"

namespace lspec {

namespace odeint = boost::numeric::odeint;

Mat eta(int n) {
  Mat e = -Mat::Identity(n, n);
  e(0, 0) = 1.0;
  return e;
}

void check_signature(const Mat& g) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.transpose()));
  const auto& ev = es.eigenvalues();
  int pos = 0, neg = 0;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] > 0) ++pos;
    else if (ev[i] < 0) ++neg;
  }
  if (pos != 1 || neg != g.rows() - 1)
    throw SignatureError("metric is not of signature (+,-,...,-)");
}

void christoffel(const MetricJet& jet, Christoffel& out, bool with_derivatives) {
  const int n = jet.n, nn = n * n, n3 = nn * n;
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> g(
      jet.g.data(), n, n);
  Mat gi = g.inverse();
  std::vector<double> low(n3);  // Γ_{σμν}
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        low[(s * n + a) * n + b] = 0.5 * (jet.d(a, s, b) + jet.d(b, s, a) - jet.d(s, a, b));
  out.n = n;
  out.G.assign(n3, 0.0);
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) {
      double gir = gi(r, s);
      if (gir == 0.0) continue;
      for (int k = 0; k < nn; ++k) out.G[r * nn + k] += gir * low[s * nn + k];
    }
  if (!with_derivatives) return;
  out.dG.assign(n3 * n, 0.0);
  std::vector<double> dlow(nn);
  for (int l = 0; l < n; ++l) {
    Mat dg(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) dg(a, b) = jet.d(l, a, b);
    Mat dgi = -gi * dg * gi;
    for (int s = 0; s < n; ++s) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          dlow[a * n + b] =
              0.5 * (jet.dd(l, a, s, b) + jet.dd(l, b, s, a) - jet.dd(l, s, a, b));
      for (int r = 0; r < n; ++r) {
        double* dst = &out.dG[(l * n + r) * nn];
        double c1 = dgi(r, s), c2 = gi(r, s);
        for (int k = 0; k < nn; ++k) dst[k] += c1 * low[s * nn + k] + c2 * dlow[k];
      }
    }
  }
}

namespace {

CurvaturePack assemble(int n, const Mat& g, const std::vector<double>& G,
                       const std::vector<double>& dG) {
  const int nn = n * n;
  auto Gm = [&](int r, int a, int b) { return G[(r * n + a) * n + b]; };
  auto dGm = [&](int l, int r, int a, int b) { return dG[((l * n + r) * n + a) * n + b]; };
  std::vector<double> up(nn * nn);  // R^ρ_{σμν}
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s)
      for (int m = 0; m < n; ++m)
        for (int v = 0; v < n; ++v) {
          double val = dGm(m, r, v, s) - dGm(v, r, m, s);
          for (int l = 0; l < n; ++l) val += Gm(r, m, l) * Gm(l, v, s) - Gm(r, v, l) * Gm(l, m, s);
          up[((r * n + s) * n + m) * n + v] = val;
        }
  CurvaturePack c;
  c.n = n;
  c.riemann.assign(nn * nn, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int r = 0; r < n; ++r) s += g(i, r) * up[((r * n + k) * n + j) * n + l];
          c.riemann[((i * n + k) * n + j) * n + l] = -s;
        }
  c.ricci.assign(nn, 0.0);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += up[((j * n + k) * n + j) * n + l];
      c.ricci[k * n + l] = s;
    }
  Mat gi = g.inverse();
  c.scalar = 0.0;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) c.scalar += gi(k, l) * c.ricci[k * n + l];
  return c;
}

}  // namespace

double CurvaturePack::symmetry_defect() const {
  double scale = 1.0, worst = 0.0;
  for (double v : riemann) scale = std::max(scale, std::abs(v));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          double r = R(i, k, j, l);
          worst = std::max(worst, std::abs(r + R(k, i, j, l)));
          worst = std::max(worst, std::abs(r + R(i, k, l, j)));
          worst = std::max(worst, std::abs(r + R(i, j, l, k) + R(i, l, k, j)));
        }
  return worst / scale;
}

CurvaturePack curvature(const MetricField& m, const Vec& x) {
  m.check_point(x.data());
  const int n = m.dim();
  Mat g = m.g(x);
  check_signature(g);
  MetricJet jet;
  m.jet(x.data(), 2, jet);
  Christoffel chr;
  christoffel(jet, chr, true);
  return assemble(n, g, chr.G, chr.dG);
}

CurvaturePack curvature_fd(const MetricField& m, const Vec& x, double h) {
  const int n = m.dim();
  if (!m.patch().contains(x.data(), 4 * h)) throw DomainError("FD stencil leaves the patch");
  Mat g0 = m.g(x);
  check_signature(g0);
  static const double c[4] = {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12};
  static const int off[4] = {-2, -1, 1, 2};
  // Γ_μ as matrices (Γ_μ)^ρ_σ = Γ^ρ_{μσ}, from central differences of g
  auto gammas = [&](const Vec& p) {
    std::vector<Mat> dg(n, Mat::Zero(n, n));
    for (int a = 0; a < n; ++a)
      for (int q = 0; q < 4; ++q) {
        Vec pp = p;
        pp[a] += off[q] * h;
        dg[a] += c[q] / h * m.g(pp);
      }
    Mat gi = m.g(p).inverse();
    std::vector<Mat> Gam(n, Mat::Zero(n, n));
    for (int mu = 0; mu < n; ++mu)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          double acc = 0.0;
          for (int t = 0; t < n; ++t)
            acc += gi(r, t) * (dg[mu](t, s) + dg[s](t, mu) - dg[t](mu, s));
          Gam[mu](r, s) = 0.5 * acc;
        }
    return Gam;
  };
  std::vector<Mat> Gam = gammas(x);
  // dGam[l][mu] = ∂_l Γ_mu
  std::vector<std::vector<Mat>> dGam(n, std::vector<Mat>(n, Mat::Zero(n, n)));
  for (int l = 0; l < n; ++l)
    for (int q = 0; q < 4; ++q) {
      Vec pp = x;
      pp[l] += off[q] * h;
      auto Gq = gammas(pp);
      for (int mu = 0; mu < n; ++mu) dGam[l][mu] += c[q] / h * Gq[mu];
    }
  // R(μ,ν) = ∂_μΓ_ν - ∂_νΓ_μ + [Γ_μ, Γ_ν]  (matrix in ρ,σ)
  CurvaturePack out;
  out.n = n;
  out.riemann.assign(n * n * n * n, 0.0);
  out.ricci.assign(n * n, 0.0);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu) {
      Mat Rmn = dGam[mu][nu] - dGam[nu][mu] + Gam[mu] * Gam[nu] - Gam[nu] * Gam[mu];
      Mat low = g0 * Rmn;  // lowered first index
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) out.riemann[((i * n + k) * n + mu) * n + nu] = -low(i, k);
      for (int k = 0; k < n; ++k) out.ricci[k * n + nu] += Rmn(mu, k);  // R^j_{kjl}
    }
  Mat gi = g0.inverse();
  out.scalar = 0.0;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) out.scalar += gi(k, l) * out.ricci[k * n + l];
  return out;
}

Frame make_frame(const MetricField& m, const Vec& x) {
  const int n = m.dim();
  Mat g = m.g(x);
  check_signature(g);
  if (!(g(0, 0) > 0)) throw SignatureError("time coordinate is not timelike at the base point");
  Frame f{x, Mat::Zero(n, n)};
  Mat et = eta(n);
  for (int mu = 0; mu < n; ++mu) {
    Vec w = Vec::Unit(n, mu);
    for (int nu = 0; nu < mu; ++nu) {
      Vec e = f.e.col(nu);
      w -= et(nu, nu) * (w.dot(g * e)) * e;
    }
    double q = w.dot(g * w) * et(mu, mu);
    if (!(q > 0)) throw SignatureError("Gram-Schmidt breakdown building the frame");
    f.e.col(mu) = w / std::sqrt(q);
  }
  if (f.e(0, 0) < 0) f.e.col(0) *= -1.0;
  return f;
}

// ---------------------------------------------------------------- geodesics

namespace {

using State = std::vector<double>;

struct GeoSystem {
  const MetricField* m;
  int n, nf;
  void operator()(const State& s, State& ds, double) const {
    const double* x = s.data();
    if (!m->patch().contains(x)) throw EscapeError("geodesic left the coordinate patch");
    MetricJet jet;
    m->jet(x, nf > 0 ? 2 : 1, jet);
    Christoffel chr;
    christoffel(jet, chr, nf > 0);
    const double* v = x + n;
    const int nn = n * n;
    for (int r = 0; r < n; ++r) {
      ds[r] = v[r];
      double a = 0.0;
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) a += chr.G[r * nn + p * n + q] * v[p] * v[q];
      ds[n + r] = -a;
    }
    for (int f = 0; f < nf; ++f) {
      const double* J = x + 2 * n + f * n;
      const double* Jd = x + 2 * n + nf * n + f * n;
      double* dJ = &ds[2 * n + f * n];
      double* dJd = &ds[2 * n + nf * n + f * n];
      for (int r = 0; r < n; ++r) {
        dJ[r] = Jd[r];
        double a = 0.0;
        for (int l = 0; l < n; ++l) {
          if (J[l] == 0.0) continue;
          const double* dG = &chr.dG[(l * n + r) * nn];
          double t = 0.0;
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) t += dG[p * n + q] * v[p] * v[q];
          a += t * J[l];
        }
        double b = 0.0;
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q) b += chr.G[r * nn + p * n + q] * v[p] * Jd[q];
        dJd[r] = -a - 2.0 * b;
      }
    }
  }
};

}  // namespace

std::vector<GeodesicSample> geodesic(const MetricField& m, const Vec& x, const Vec& v,
                                     const std::vector<double>& s_out, const Mat* Jd0,
                                     const OdeSettings& ode) {
  const int n = m.dim(), nf = Jd0 ? int(Jd0->cols()) : 0;
  if (!m.patch().contains(x.data())) throw DomainError("geodesic start point outside patch");
  State st(2 * n + 2 * n * nf, 0.0);
  for (int i = 0; i < n; ++i) {
    st[i] = x[i];
    st[n + i] = v[i];
  }
  for (int f = 0; f < nf; ++f)
    for (int i = 0; i < n; ++i) st[2 * n + nf * n + f * n + i] = (*Jd0)(i, f);

  auto unpack = [&](const State& s, double t) {
    GeodesicSample g;
    g.s = t;
    g.x = Eigen::Map<const Vec>(s.data(), n);
    g.v = Eigen::Map<const Vec>(s.data() + n, n);
    g.J = Mat(n, nf);
    for (int f = 0; f < nf; ++f)
      for (int i = 0; i < n; ++i) g.J(i, f) = s[2 * n + f * n + i];
    return g;
  };

  std::vector<double> times{0.0};
  for (double t : s_out) {
    if (t < times.back()) throw DomainError("geodesic output parameters must ascend from 0");
    if (t > times.back()) times.push_back(t);
  }
  std::vector<GeodesicSample> got;
  got.push_back(unpack(st, 0.0));
  if (times.size() > 1) {
    GeoSystem sys{&m, n, nf};
    auto stepper = odeint::make_controlled(ode.abs_tol, ode.rel_tol,
                                           odeint::runge_kutta_dopri5<State>());
    double dt0 = 1e-2 * times.back();
    try {
      odeint::integrate_times(
          stepper, sys, st, times.begin(), times.end(), dt0,
          [&](const State& s, double t) {
            if (t > 0.0) got.push_back(unpack(s, t));
          },
          odeint::max_step_checker(200000));
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw StepError(std::string("geodesic integrator: ") + e.what());
    }
  }
  // map back onto the requested list (duplicates and zeros allowed)
  std::vector<GeodesicSample> out;
  out.reserve(s_out.size());
  std::size_t k = 0;
  for (double t : s_out) {
    while (k + 1 < got.size() && got[k].s < t) ++k;
    out.push_back(got[k]);
  }
  return out;
}

Vec exp_map(const MetricField& m, const Vec& x, const Vec& v, const OdeSettings& ode) {
  return geodesic(m, x, v, {1.0}, nullptr, ode).back().x;
}

Vec exp_inverse(const MetricField& m, const Vec& x, const Vec& p, const OdeSettings& ode,
                double tol) {
  const int n = m.dim();
  Mat I = Mat::Identity(n, n);
  Vec v = p - x;
  auto shoot = [&](const Vec& w) { return geodesic(m, x, w, {1.0}, &I, ode).back(); };
  GeodesicSample s = shoot(v);
  Vec F = s.x - p;
  for (int it = 0; it < 60; ++it) {
    double r = F.norm();
    if (r <= tol) return v;
    Vec dv = s.J.fullPivLu().solve(F);
    double lam = 1.0;
    bool ok = false;
    for (int k = 0; k < 8; ++k, lam *= 0.5) {
      Vec w = v - lam * dv;
      GeodesicSample t;
      try {
        t = shoot(w);
      } catch (const EscapeError&) {
        continue;
      }
      Vec Ft = t.x - p;
      if (Ft.norm() < r) {
        v = w;
        s = t;
        F = Ft;
        ok = true;
        break;
      }
    }
    if (!ok) break;
  }
  if (F.norm() <= tol) return v;
  throw ConvergenceError("exp_inverse: Newton shooting did not converge");
}

// -------------------------------------------------------------- normal chart

NormalChart::NormalChart(MetricPtr metric, const Vec& base, const ChartOptions& opt)
    : metric_(std::move(metric)), ode_(opt.ode) {
  if (!metric_->patch().contains(base.data())) throw DomainError("chart base outside patch");
  frame_ = make_frame(*metric_, base);
  if (opt.radius > 0) {
    if (!verify(opt.radius))
      throw RadiusError("requested chart radius exceeds the verified injectivity margin");
    radius_ = opt.radius;
    return;
  }
  double r = 0.1 * metric_->patch().scale();
  for (int k = 0; k <= opt.max_halvings; ++k, r *= 0.5) {
    if (verify(r)) {
      radius_ = r;
      return;
    }
  }
  throw RadiusError("no verified chart radius after halving");
}

bool NormalChart::verify(double r) const {
  const int n = dim();
  std::vector<Vec> dirs;
  for (int i = 0; i < n; ++i) {
    dirs.push_back(Vec::Unit(n, i));
    dirs.push_back(-Vec::Unit(n, i));
    for (int j = i + 1; j < n; ++j)
      for (int si = -1; si <= 1; si += 2)
        for (int sj = -1; sj <= 1; sj += 2)
          dirs.push_back((si * Vec::Unit(n, i) + sj * Vec::Unit(n, j)) / std::sqrt(2.0));
  }
  for (const Vec& v : dirs) {
    try {
      auto gs = ray_metric(v, {0.25 * r, 0.5 * r, r});
      for (const Mat& g : gs) {
        double d = std::abs(g.determinant());
        if (!(d > 0.2 && d < 5.0)) return false;
        check_signature(g);
      }
    } catch (const Error&) {
      return false;
    }
  }
  return true;
}

Vec NormalChart::point(const Vec& y) const { return exp_map(*metric_, base(), frame_.e * y, ode_); }

std::vector<Mat> NormalChart::ray_metric(const Vec& v, const std::vector<double>& ts) const {
  const int n = dim();
  std::vector<double> sorted(ts);
  std::sort(sorted.begin(), sorted.end());
  Vec V = frame_.e * v;
  auto samples = geodesic(*metric_, base(), V, sorted, &frame_.e, ode_);
  std::vector<Mat> out(ts.size());
  std::vector<double> buf(n * n);
  for (std::size_t q = 0; q < ts.size(); ++q) {
    double t = ts[q];
    if (t == 0.0) {
      out[q] = eta(n);
      continue;
    }
    auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
    const GeodesicSample& s = samples[it - sorted.begin()];
    metric_->eval(s.x.data(), buf.data());
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> g(
        buf.data(), n, n);
    Mat K = s.J / t;
    out[q] = K.transpose() * g * K;
  }
  return out;
}

Mat NormalChart::pulled_metric(const Vec& y) const {
  double t = y.norm();
  if (t == 0.0) return eta(dim());
  return ray_metric(y / t, {t})[0];
}

double NormalChart::density(const Vec& y) const {
  return std::sqrt(std::abs(pulled_metric(y).determinant()));
}

Vec NormalChart::normal_coords(const Vec& p) const {
  Vec v = exp_inverse(*metric_, base(), p, ode_);
  return frame_.e.fullPivLu().solve(v);
}

// ------------------------------------------------------------------- fits

std::vector<Vec> sample_directions(int n, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<Vec> out;
  out.reserve(count);
  while (int(out.size()) < count) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = nd(rng);
    double r = v.norm();
    if (r < 1e-3) continue;
    out.push_back(v / r);
  }
  return out;
}

PolyFit fit_pulled_metric(const NormalChart& chart, int degree, double a, int ndirs, int nradii,
                          std::uint64_t seed) {
  const int n = chart.dim(), nc = n * (n + 1) / 2;
  auto dirs = sample_directions(n, ndirs, seed);
  std::vector<double> radii;
  for (int j = 1; j <= nradii; ++j) radii.push_back(a * j / nradii);
  Eigen::MatrixXd Y(ndirs * nradii, n), V(ndirs * nradii, nc);
  Mat et = eta(n);
  parallel_for(dirs.size(), [&](std::size_t d) {
    auto gs = chart.ray_metric(dirs[d], radii);
    for (int j = 0; j < nradii; ++j) {
      int row = int(d) * nradii + j;
      Y.row(row) = radii[j] * dirs[d].transpose();
      int k = 0;
      for (int p = 0; p < n; ++p)
        for (int q = p; q < n; ++q) V(row, k++) = gs[j](p, q) - et(p, q);
    }
  });
  return fit_poly(MonomialBasis(n, 2, degree, a), Y, V);
}

Taylor2 metric_taylor2(const NormalChart& chart, double stencil_radius) {
  const int n = chart.dim();
  double a = stencil_radius > 0 ? stencil_radius : std::min(0.1, chart.radius());
  PolyFit fit = fit_pulled_metric(chart, 5, a, 80, 6, 0x7a11);
  if (fit.max_residual > 1e-7) throw FitError("quadratic jet fit residual too large");
  Taylor2 t;
  t.n = n;
  t.T.assign(n * n * n * n, 0.0);
  t.fit_residual = fit.max_residual;
  int comp = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j, ++comp)
      for (int k = 0; k < fit.basis.size(); ++k) {
        const auto& e = fit.basis.exponent(k);
        int s = 0;
        for (int q : e) s += q;
        if (s != 2) continue;
        int p = -1, q = -1;
        for (int m = 0; m < n; ++m)
          for (int r = 0; r < e[m]; ++r) (p < 0 ? p : q) = m;
        double c = fit.coef(k, comp) / (a * a);
        auto put = [&](int k1, int l1, double val) {
          t.T[((i * n + j) * n + k1) * n + l1] = val;
          t.T[((j * n + i) * n + k1) * n + l1] = val;
        };
        if (p == q) {
          put(p, p, c);
        } else {
          put(p, q, 0.5 * c);
          put(q, p, 0.5 * c);
        }
      }
  return t;
}

}  // namespace lspec

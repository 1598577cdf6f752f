#include "lspec/ultrastatic.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "lspec/parallel.hpp"

namespace lspec {

namespace {


double unit_ball_volume(int d) { return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1); }

// c = (a * b) restricted to [0, A]; a, b nonnegative integer sequences on [0, A]
std::vector<double> conv_trunc(const std::vector<double>& a, const std::vector<double>& b,
                               std::size_t A) {
  std::size_t M = 1;
  while (M < 2 * (A + 1)) M <<= 1;
  const std::size_t H = M / 2 + 1;
  double* in = fftw_alloc_real(M);
  fftw_complex* fa = fftw_alloc_complex(H);
  fftw_complex* fb = fftw_alloc_complex(H);
  fftw_plan pa = fftw_plan_dft_r2c_1d(int(M), in, fa, FFTW_ESTIMATE);
  fftw_plan pb = fftw_plan_dft_r2c_1d(int(M), in, fb, FFTW_ESTIMATE);
  fftw_plan back = fftw_plan_dft_c2r_1d(int(M), fa, in, FFTW_ESTIMATE);
  std::fill(in, in + M, 0.0);
  std::copy(a.begin(), a.begin() + A + 1, in);
  fftw_execute(pa);
  std::fill(in, in + M, 0.0);
  std::copy(b.begin(), b.begin() + A + 1, in);
  fftw_execute(pb);
  for (std::size_t k = 0; k < H; ++k) {
    double re = fa[k][0] * fb[k][0] - fa[k][1] * fb[k][1];
    double im = fa[k][0] * fb[k][1] + fa[k][1] * fb[k][0];
    fa[k][0] = re;
    fa[k][1] = im;
  }
  fftw_execute(back);
  std::vector<double> c(A + 1);
  for (std::size_t k = 0; k <= A; ++k) c[k] = std::nearbyint(in[k] / double(M));
  fftw_destroy_plan(pa);
  fftw_destroy_plan(pb);
  fftw_destroy_plan(back);
  fftw_free(in);
  fftw_free(fa);
  fftw_free(fb);
  return c;
}

double sphere_multiplicity(int d, long l) {
  if (l == 0) return 1.0;
  if (d == 1) return 2.0;
  return std::nearbyint((2.0 * l + d - 1) *
                        std::exp(std::lgamma(double(l + d - 1)) - std::lgamma(double(l + 1)) -
                                 std::lgamma(double(d))));
}

// composite 20-point rule on the t = 1/s support of the profile, fine enough
// for phase rates up to omega
GLRule t_rule(const SchwartzProfile& p, double omega) {
  double a = 1.0 / p.hi(), b = 1.0 / p.lo();
  int panels = std::max(24, int(std::ceil((b - a) * omega / 6.0)));
  return composite_gl(20, panels, a, b);
}

// f̂(1/t) t^{−3/2} e^{iμ0 t/Λ²} weights on a rule
std::vector<cplx> t_weights(const SchwartzProfile& p, const GLRule& r, cplx mu0, double Lambda) {
  std::vector<cplx> w(r.x.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    double t = r.x[i];
    w[i] = r.w[i] * p.fhat(1.0 / t) * std::pow(t, -1.5) * std::exp(kI * mu0 * t / (Lambda * Lambda));
  }
  return w;
}

cplx fresnel_prefactor(double Lambda) {
  return Lambda * std::polar(1.0, -kPi / 4) / (2.0 * std::sqrt(kPi));
}

}  // namespace

double SpectralModel::lattice_step() const {
  return kind == ModelKind::Torus ? std::pow(2 * kPi / param, 2) : 0.0;
}

double SpectralModel::weyl_count(double lam) const {
  return unit_ball_volume(d) * volume * std::pow(lam, 0.5 * d) / std::pow(2 * kPi, d);
}

std::string SpectralModel::describe() const {
  std::ostringstream o;
  o.precision(17);
  o << (kind == ModelKind::Torus ? "torus:" : "sphere:") << d << ":" << param;
  return o.str();
}

SpectralModel build_model(ModelKind kind, int d, double param, double lambda_max, std::size_t cap) {
  if (!(lambda_max > 0)) throw DomainError("lambda_max must be positive");
  if (d < 1) throw DimensionError("model dimension must be >= 1");
  if (!(param > 0)) throw DomainError("model size must be positive");
  SpectralModel m;
  m.kind = kind;
  m.d = d;
  m.param = param;
  m.lambda_max = lambda_max;
  if (kind == ModelKind::Sphere) {
    const double r2 = param * param;
    m.volume = 2 * std::pow(kPi, 0.5 * (d + 1)) / std::tgamma(0.5 * (d + 1)) * std::pow(param, d);
    for (long l = 0;; ++l) {
      double lam = double(l) * double(l + d - 1) / r2;
      if (lam > lambda_max) break;
      if (m.lambda.size() >= cap) throw MemoryError("level count exceeds the cap");
      m.lambda.push_back(lam);
      m.mult.push_back(sphere_multiplicity(d, l));
    }
  } else {
    m.volume = std::pow(param, d);
    const double k = m.lattice_step();
    const double Ad = std::floor(lambda_max / k * (1 + 1e-14));
    if (Ad + 1 > double(cap)) throw MemoryError("lattice level count exceeds the cap");
    const std::size_t A = std::size_t(Ad);
    std::vector<double> r1(A + 1, 0.0);
    r1[0] = 1;
    for (std::size_t j = 1; j * j <= A; ++j) r1[j * j] = 2;
    std::vector<double> r = r1;
    for (int i = 1; i < d; ++i) r = conv_trunc(r, r1, A);
    for (std::size_t a = 0; a <= A; ++a)
      if (r[a] > 0) {
        m.lambda.push_back(k * double(a));
        m.mult.push_back(r[a]);
      }
  }
  double count = 0.0;
  for (double x : m.mult) count += x;
  m.weyl_ratio = count / m.weyl_count(lambda_max);
  return m;
}

SpectralModel parse_model(const std::string& spec, double lambda_max) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  if (parts.size() != 3 || (parts[0] != "sphere" && parts[0] != "torus"))
    throw ConfigError("model must look like sphere:d:r or torus:d:L");
  try {
    return build_model(parts[0] == "torus" ? ModelKind::Torus : ModelKind::Sphere,
                       std::stoi(parts[1]), std::stod(parts[2]), lambda_max);
  } catch (const std::invalid_argument&) {
    throw ConfigError("model parameters must be numbers");
  }
}

cplx level_tau_integral(const SchwartzProfile& p, cplx mu, double Lambda) {
  auto r = t_rule(p, std::abs(mu) / (Lambda * Lambda));
  auto w = t_weights(p, r, mu, Lambda);
  cplx s = 0.0;
  for (auto x : w) s += x;
  return fresnel_prefactor(Lambda) * s;
}

cplx level_tau_integral_quad(const SchwartzProfile& p, cplx mu, double Lambda, double tol) {
  // τ = Λσ: (Λ/2π)∫ f(μ/Λ² − σ²) dσ, f evaluated with a rule resolving its phase
  auto f = [&](cplx w) {
    GLRule r = t_rule(p, std::abs(w));
    cplx s = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      double t = r.x[i];
      s += r.w[i] * p.fhat(1.0 / t) / t * std::exp(kI * w * t);
    }
    return s;
  };
  cplx w0 = mu / (Lambda * Lambda);
  // |f(w)| decays like exp(−c√|w|); stop where it is below tol
  double W = 64;
  while (W < 1e6 && std::abs(f(cplx(-W, 0))) > 1e-3 * tol) W *= 2;
  double smax = std::sqrt(std::max(0.0, w0.real()) + W);
  auto g = [&](double s) { return f(w0 - s * s); };
  auto q = gk_adaptive(g, 0.0, smax, tol, 30);
  return Lambda / kPi * q.value;
}

namespace {

struct TailCert {
  double bound = 0.0, constant = 0.0;
};

TailCert tail_certificate(const SpectralModel& m, const SchwartzProfile& p, double Lambda, cplx mu0,
                          double x0, int K) {
  // sampled on [x0, 4 x0]; values below the quadrature noise floor carry no
  // information and are skipped
  double C = 0.0;
  bool resolved = false;
  double noise0 = 0.0;
  for (int j = 0; j <= 16; ++j) {
    double om = x0 * std::pow(2.0, j / 8.0);
    auto r = t_rule(p, om + std::abs(mu0) / (Lambda * Lambda));
    auto w = t_weights(p, r, mu0, Lambda);
    cplx s = 0.0;
    double l1 = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      s += w[i] * std::exp(kI * om * r.x[i]);
      l1 += std::abs(w[i]);
    }
    double noise = 1e3 * 2.2e-16 * l1;
    if (j == 0) noise0 = noise;
    if (std::abs(s) <= noise) continue;
    resolved = true;
    C = std::max(C, std::abs(s) * std::pow(1 + om, K));
  }
  if (!resolved) C = noise0 * std::pow(1 + x0, K);
  // Σ_{λ>λc} mult C (λ/Λ²)^{−K} with N(λ) <= 2 Weyl(λ)
  const double dd = 0.5 * m.d;
  double Wc = unit_ball_volume(m.d) * m.volume / std::pow(2 * kPi, m.d);
  double bound = std::abs(fresnel_prefactor(Lambda)) / m.volume * 2 * Wc * C * K *
                 std::pow(Lambda, m.d) * std::pow(x0, dd - K) / (K - dd);
  return {bound, C};
}

double leading_scale(const SpectralModel& m, const SchwartzProfile& p, double Lambda) {
  double n = m.n();
  return p.moment(0.5 * n - 1) * std::pow(Lambda, n) / (std::pow(2.0, n) * std::pow(kPi, 0.5 * n));
}

double choose_cut(const SpectralModel& m, const SchwartzProfile& p, double Lambda, cplx mu0,
                  const KernelOptions& opt, TailCert& cert) {
  const double L2 = Lambda * Lambda;
  if (opt.lambda_cut > 0) {
    cert = tail_certificate(m, p, Lambda, mu0, opt.lambda_cut / L2, opt.decay_power);
    return opt.lambda_cut;
  }
  const double target = 0.1 * opt.tol * leading_scale(m, p, Lambda);
  double prev = INFINITY;
  int rising = 0;
  for (double x0 = 64; x0 <= 1e7 && rising < 4; x0 *= std::sqrt(2.0)) {
    cert = tail_certificate(m, p, Lambda, mu0, x0, opt.decay_power);
    if (cert.bound <= target) return x0 * L2;
    rising = cert.bound >= prev ? rising + 1 : 0;
    prev = cert.bound;
  }
  throw TailError("the decay certificate cannot reach the target tolerance");
}

}  // namespace

double required_lambda_max(const SpectralModel& model, const SchwartzProfile& p, double Lambda,
                           double mass, double eps, const KernelOptions& opt) {
  TailCert cert;
  return choose_cut(model, p, Lambda, cplx(mass * mass, eps), opt, cert);
}

KernelResult kernel_diag(const SpectralModel& m, const SchwartzProfile& p, double Lambda,
                         double mass, double eps, const KernelOptions& opt) {
  if (!(Lambda > 0)) throw DomainError("Lambda must be positive");
  if (mass < 0 || eps < 0) throw DomainError("mass and eps must be >= 0");
  if (opt.decay_power <= m.d / 2 + 1) throw DomainError("decay power too small for the dimension");
  const double L2 = Lambda * Lambda;
  const cplx mu0(mass * mass, eps);
  TailCert cert;
  const double cut = choose_cut(m, p, Lambda, mu0, opt, cert);
  if (cut > m.lambda_max * (1 + 1e-12)) {
    std::ostringstream o;
    o << "model lambda_max " << m.lambda_max << " is below the certified cut " << cut;
    throw TailError(o.str());
  }

  KernelResult res;
  res.lambda_cut = cut;
  res.tail = cert.bound;
  res.tail_constant = cert.constant;

  const double kap = m.lattice_step();
  long K = 0;
  double top;
  std::size_t nl = 0;
  if (m.kind == ModelKind::Torus) {
    K = long(std::floor(std::sqrt(cut / kap * (1 + 1e-14))));
    top = m.d * kap * double(K) * double(K);
  } else {
    while (nl < m.lambda.size() && m.lambda[nl] <= cut) ++nl;
    top = nl ? m.lambda[nl - 1] : 0.0;
  }
  GLRule r = t_rule(p, top / L2 + std::abs(mu0) / L2);
  auto w = t_weights(p, r, mu0, Lambda);
  res.nodes = int(r.x.size());
  std::vector<cplx> part(r.x.size());
  const double r2 = m.kind == ModelKind::Sphere ? m.param * m.param : 1.0;
  parallel_for(r.x.size(), [&](std::size_t i) {
    if (w[i] == 0.0) return;
    const double beta = r.x[i] / L2;
    cplx S;
    if (m.kind == ModelKind::Torus) {
      // θ(β) = Σ_{|k|<=K} e^{iκk²β}; p_{k+1} = p_k q^{2k+1}
      const cplx q = std::polar(1.0, kap * beta), q2 = q * q;
      cplx th = 1.0, pk = 1.0, step = q;
      for (long k = 1; k <= K; ++k) {
        if (k % 128 == 0) {
          pk = std::polar(1.0, kap * beta * double(k) * double(k));
          step = std::polar(1.0, kap * beta * double(2 * k + 1));
        } else {
          pk *= step;
          step *= q2;
        }
        th += 2.0 * pk;
      }
      S = std::pow(th, m.d);
    } else {
      // λ_{l+1} − λ_l = (2l + d)/r²
      const cplx q2 = std::polar(1.0, 2 * beta / r2);
      cplx pl = 1.0, step = std::polar(1.0, m.d * beta / r2);
      S = 0.0;
      for (std::size_t l = 0; l < nl; ++l) {
        if (l % 128 == 0 && l) {
          pl = std::polar(1.0, m.lambda[l] * beta);
          step = std::polar(1.0, double(2 * l + m.d) * beta / r2);
        }
        S += m.mult[l] * pl;
        pl *= step;
        step *= q2;
      }
    }
    part[i] = w[i] * S;
  });
  cplx s = 0.0;
  for (auto x : part) s += x;
  res.value = fresnel_prefactor(Lambda) / m.volume * s;
  if (opt.lambda_cut <= 0 && res.tail > 0.1 * opt.tol * std::abs(res.value))
    throw TailError("certified tail exceeds 0.1 x target tolerance");
  return res;
}

FitReport fit_expansion(const std::vector<double>& Lambda, const std::vector<cplx>& values, int n,
                        int terms) {
  if (terms != 2 && terms != 3) throw DomainError("terms must be 2 or 3");
  if (Lambda.size() != values.size()) throw DomainError("sample size mismatch");
  std::vector<double> distinct = Lambda;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (int(distinct.size()) < terms) throw ConditioningError("fewer distinct Lambda values than terms");
  if (int(Lambda.size()) < 2 * terms) throw DomainError("need at least 2 x terms samples");
  if (!(distinct.front() > 0)) throw DomainError("Lambda must be positive");
  if (distinct.back() < 3 * distinct.front()) throw DomainError("Lambda spread must be >= 3");
  const int N = int(Lambda.size());
  const double Lm = distinct.back();
  Eigen::MatrixXcd A(N, terms);
  Eigen::VectorXcd b(N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < terms; ++j) A(i, j) = std::pow(Lambda[i] / Lm, n - 2 * j);
    b(i) = values[i];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  auto sv = svd.singularValues();
  FitReport rep;
  rep.condition = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  if (!(rep.condition <= 1e8)) throw ConditioningError("design matrix condition number above 1e8");
  Eigen::VectorXcd x = A.colPivHouseholderQr().solve(b);
  rep.residual = (A * x - b).norm() / std::max(b.norm(), 1e-300);
  for (int j = 0; j < terms; ++j) rep.coef.push_back(x(j) / std::pow(Lm, n - 2 * j));
  return rep;
}

ResolventCheck mode_resolvent_check(double lambda, cplx z, double t0, double h,
                                    const std::vector<double>& u, int branch) {
  if (!(z.imag() > 0)) throw DomainError("mode resolvent needs Im z > 0");
  if (branch != 1 && branch != -1) throw DomainError("branch must be +1 or -1");
  const int N = int(u.size());
  if (N < 32 || !(h > 0)) throw GridError("grid needs >= 32 nodes and a positive step");
  cplx k = std::sqrt(cplx(lambda) - z);  // Im k < 0: e^{−ik|t|} decays
  if (branch < 0) k = -k;
  const double span = h * (N - 1);
  if (branch < 0) {
    std::ostringstream o;
    o << "branch Im k > 0 grows like exp(" << std::abs(k.imag()) << "|t|) and is rejected";
    throw BranchError(o.str());
  }
  if (std::abs(k) * h > 0.3) throw GridError("grid too coarse for the mode frequency");
  double umax = 0.0;
  for (double x : u) umax = std::max(umax, std::abs(x));
  for (int j : {0, 1, 2, N - 3, N - 2, N - 1})
    if (std::abs(u[j]) > 1e-10 * std::max(umax, 1e-300)) throw GridError("u must vanish at the grid ends");
  ResolventCheck out;
  out.scale = umax;
  if (umax == 0.0) return out;
  const double tm = t0 + 0.5 * span;
  std::vector<cplx> fp(N), fm(N), A(N, 0.0), B(N, 0.0);
  for (int j = 0; j < N; ++j) {
    double s = t0 + j * h - tm;
    fp[j] = std::exp(kI * k * s) * u[j];
    fm[j] = std::exp(-kI * k * s) * u[j];
  }
  auto F = [&](const std::vector<cplx>& f, int j) { return j < 0 || j >= N ? cplx(0) : f[j]; };
  auto cell = [&](const std::vector<cplx>& f, int j) {
    return h / 24.0 * (-F(f, j - 1) + 13.0 * F(f, j) + 13.0 * F(f, j + 1) - F(f, j + 2));
  };
  for (int j = 1; j < N; ++j) A[j] = A[j - 1] + cell(fp, j - 1);
  for (int j = N - 2; j >= 0; --j) B[j] = B[j + 1] + cell(fm, j);
  std::vector<cplx> conv(N);
  for (int j = 0; j < N; ++j) {
    double t = t0 + j * h - tm;
    conv[j] = std::exp(-kI * k * t) * A[j] + std::exp(kI * k * t) * B[j];
  }
  const cplx cn = 0.5 * kI / k, cl = -0.5 / k;
  for (int j = 0; j < N; ++j) out.vmax = std::max(out.vmax, std::abs(cn * conv[j]));
  for (int j = 2; j < N - 2; ++j) {
    cplx d2 = (-conv[j - 2] + 16.0 * conv[j - 1] - 30.0 * conv[j] + 16.0 * conv[j + 1] - conv[j + 2]) /
              (12.0 * h * h);
    cplx L = d2 + (cplx(lambda) - z) * conv[j];
    out.residual = std::max(out.residual, std::abs(cn * L - u[j]));
    out.residual_literal = std::max(out.residual_literal, std::abs(cl * L - u[j]));
  }
  return out;
}

}  // namespace lspec

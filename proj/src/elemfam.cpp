#include "lspec/elemfam.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <random>

namespace lspec {

namespace bq = boost::math::quadrature;

namespace {

void check_even(int n) {
  if (n < 2 || n % 2 != 0) throw DimensionError("dimension must be even and >= 2");
}

// the rules grow their abscissa tables lazily, so one per thread
bq::tanh_sinh<double>& ts_rule() {
  thread_local bq::tanh_sinh<double> r(15);
  return r;
}
bq::exp_sinh<double>& es_rule() {
  thread_local bq::exp_sinh<double> r(9);
  return r;
}

// nearest pole of Γ(α+1-n/2), i.e. α = n/2-1-j, j >= 0
double diag_pole(cplx alpha, int n, int* j) {
  double top = n / 2 - 1;
  long jj = std::lround(top - alpha.real());
  if (jj < 0) jj = 0;
  *j = int(jj);
  return std::abs(alpha - (top - jj));
}

}  // namespace

cplx log_minus_z(cplx z) {
  if (z.imag() == 0.0 && z.real() > 0.0) return cplx(std::log(z.real()), -kPi);
  return std::log(-z);
}

MeroValue euclid_integral(cplx alpha, cplx z, int n, bool residue_mode) {
  check_even(n);
  if (n > 8) throw DimensionError("euclid_integral supports 2 <= n <= 8");
  if (z.imag() == 0.0 && z.real() >= 0.0) throw BranchError("z on [0, inf): -z is on the cut");
  const int h = n / 2;
  const cplx L = std::log(-z);
  const double pin = std::pow(kPi, h);
  MeroValue out;
  // nearest pole in {1..n/2}
  int k = int(std::lround(alpha.real()));
  k = std::clamp(k, 1, h);
  out.pole_distance = std::abs(alpha - double(k));
  if (out.pole_distance < kPoleTol) {
    if (!residue_mode) throw PoleError("euclid_integral evaluated at a pole");
    const int j = h - k;
    out.pole_order = 1;
    out.residue = pin * std::pow(z, j) / (factorial(j) * factorial(k - 1));
    out.value = out.residue * (digamma_int(j + 1) - digamma_int(k) - L);
    return out;
  }
  // Γ(α-n/2)/Γ(α) = 1/∏_{i=1}^{n/2}(α-i)
  cplx den = 1.0;
  for (int i = 1; i <= h; ++i) den *= alpha - double(i);
  out.value = pin * std::exp((double(h) - alpha) * L) / den;
  return out;
}

cplx euclid_series(cplx alpha, cplx z, int n) {
  check_even(n);
  if (z.imag() == 0.0 && z.real() >= 0.0) throw BranchError("z on [0, inf)");
  const cplx s = alpha - double(n / 2);
  const cplx L = std::log(-z);
  const double phi = -L.imag(), az = std::abs(z);
  // ∫_0^{e^{iφ}} t^{s-1} e^{tz} dt termwise
  cplx sum = 0.0, zk = 1.0;
  for (int k = 0; k < 400; ++k) {
    if (k > 0) zk *= z / double(k);
    cplx term = zk * std::exp(kI * phi * (s + double(k))) / (s + double(k));
    sum += term;
    if (k > 2 * az + 10 && std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  // rest of the ray: t = r e^{iφ}, tz = -r|z|
  auto f = [&](double r) -> cplx {
    return std::exp((s - 1.0) * (std::log(r) + kI * phi) + kI * phi - r * az);
  };
  double err = 0.0, l1 = 0.0;
  cplx tail = es_rule().integrate(f, 1.0, std::numeric_limits<double>::infinity(), 1e-14, &err, &l1);
  return std::pow(kPi, n / 2) * rgamma_c(alpha) * (sum + tail);
}

MeroValue fa_diag(cplx alpha, cplx z, int n, bool residue_mode) {
  check_even(n);
  if (z == cplx(0.0, 0.0)) throw BranchError("fa_diag needs z != 0");
  const cplx W = z.imag() >= 0.0 ? kI : -kI;
  const double c = std::pow(4.0 * kPi, -0.5 * n);
  const cplx L = log_minus_z(z);
  MeroValue out;
  int j = 0;
  out.pole_distance = diag_pole(alpha, n, &j);
  if (out.pole_distance < kPoleTol) {
    if (!residue_mode) throw PoleError("fa_diag evaluated at a pole");
    out.pole_order = 1;
    cplx mz_j = std::exp(double(j) * L);  // (-z)^j
    double sgn = (j % 2 == 0) ? 1.0 : -1.0;
    out.residue = W * c * sgn * mz_j / factorial(j);
    out.value = out.residue * (digamma_int(j + 1) - L);
    return out;
  }
  out.value = W * c * gamma_c(alpha + 1.0 - 0.5 * n) * std::exp((0.5 * n - alpha - 1.0) * L);
  return out;
}

cplx fa_offdiag(cplx alpha, cplx z, double q, int n, double tol) {
  check_even(n);
  if (!(z.imag() > 0.0)) throw DomainError("fa_offdiag needs Im z > 0");
  if (q == 0.0) throw DomainError("fa_offdiag needs q != 0 (use fa_diag)");
  const double argz = std::arg(z);
  const double phi = q > 0 ? std::min(kPi / 4, 0.5 * argz) : -std::min(kPi / 4, 0.5 * (kPi - argz));
  const cplx eph = std::polar(1.0, phi);
  const cplx p = 0.5 * n - alpha - 2.0;
  auto f = [&](double r) -> cplx {
    if (!(r > 0.0)) return 0.0;
    cplx u = r * eph;
    cplx e = kI * u * (0.25 * q) + kI * z / u + p * (std::log(r) + kI * phi) + kI * phi;
    if (e.real() < -700.0) return 0.0;
    return std::exp(e);
  };
  // the phase stationary scale of e^{iuq/4 + iz/u}
  const double rs = std::sqrt(4.0 * std::abs(z) / std::abs(q));
  double e1 = 0, e2 = 0, l1 = 0, l2 = 0;
  cplx a, b;
  try {
    a = ts_rule().integrate(f, 0.0, rs, tol, &e1, &l1);
    b = es_rule().integrate(f, rs, std::numeric_limits<double>::infinity(), tol, &e2, &l2);
  } catch (const std::exception& ex) {
    throw ConvergenceError(std::string("fa_offdiag quadrature: ") + ex.what());
  }
  cplx I = a + b;
  if (!std::isfinite(I.real()) || !std::isfinite(I.imag()) ||
      e1 + e2 > std::max(1e-9, 1e3 * tol) * std::max(1.0, l1 + l2))
    throw ConvergenceError("fa_offdiag quadrature did not reach tolerance");
  const cplx C = std::pow(4.0 * kPi, -0.5 * n) * std::exp(kI * kPi * (alpha + 1.0) * 0.5) *
                 std::exp(-kI * kPi * double(n - 2) * 0.25);
  return C * I;
}

ElemValue elem_value(cplx alpha, cplx z, double q, int n) {
  ElemValue v{alpha, z, q, 0.0, 0.0};
  int j;
  v.pole_distance = diag_pole(alpha, n, &j);
  v.value = q == 0.0 ? fa_diag(alpha, z, n).value : fa_offdiag(alpha, z, q, n);
  return v;
}

double minkowski_square(const Vec& x) { return x.squaredNorm() - 2.0 * x[0] * x[0]; }

std::vector<Vec> spacelike_grid(int n, int count, double qmin, double qmax, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(-0.5, 0.5), uq(qmin, qmax);
  std::normal_distribution<double> nd;
  std::vector<Vec> pts;
  for (int k = 0; k < count; ++k) {
    Vec x(n);
    x[0] = ut(rng);
    Vec d(n - 1);
    for (int i = 0; i < n - 1; ++i) d[i] = nd(rng);
    d.normalize();
    double r = std::sqrt(uq(rng) + x[0] * x[0]);
    x.tail(n - 1) = r * d;
    pts.push_back(x);
  }
  return pts;
}

namespace {

// F on the 4th-order star stencil around x: index 0 is the centre,
// 1 + 4μ + {0,1,2,3} are offsets {-2,-1,+1,+2}·h e_μ.
struct Star {
  std::vector<Vec> pts;
  static constexpr int off[4] = {-2, -1, 1, 2};
  Star(const Vec& x, double h) {
    pts.push_back(x);
    for (int m = 0; m < x.size(); ++m)
      for (int o : off) {
        Vec y = x;
        y[m] += o * h;
        pts.push_back(y);
      }
  }
};

cplx d2(const std::vector<cplx>& f, int m, double h) {
  const cplx* s = &f[1 + 4 * m];
  return (-s[0] + 16.0 * s[1] - 30.0 * f[0] + 16.0 * s[2] - s[3]) / (12.0 * h * h);
}
cplx d1(const std::vector<cplx>& f, int m, double h) {
  const cplx* s = &f[1 + 4 * m];
  return (s[0] - 8.0 * s[1] + 8.0 * s[2] - s[3]) / (12.0 * h);
}
cplx box(const std::vector<cplx>& f, int n, double h) {
  cplx b = d2(f, 0, h);
  for (int m = 1; m < n; ++m) b -= d2(f, m, h);
  return b;
}

}  // namespace

PdeReport pde_check(cplx alpha, cplx z, const std::vector<Vec>& points, double h,
                    double lightcone_margin) {
  PdeReport r;
  r.points = points.size();
  for (const Vec& x : points) {
    const int n = int(x.size());
    Star st(x, h);
    std::vector<cplx> F(st.pts.size());
    for (std::size_t k = 0; k < st.pts.size(); ++k) {
      double q = minkowski_square(st.pts[k]);
      if (std::abs(q) < lightcone_margin) throw DomainError("pde_check stencil touches the light cone");
      F[k] = fa_offdiag(alpha, z, q, n);
    }
    const double q0 = minkowski_square(x);
    cplx Fm = (alpha == cplx(0.0, 0.0)) ? cplx(0.0) : alpha * fa_offdiag(alpha - 1.0, z, q0, n);
    cplx res = box(F, n, h) - z * F[0] - Fm;
    r.residual = std::max(r.residual, std::abs(res));
    r.scale = std::max(r.scale, std::abs(Fm) > 0 ? std::abs(Fm) : std::abs(z * F[0]));
    cplx Fprev = fa_offdiag(alpha - 1.0, z, q0, n);
    for (int m = 0; m < n; ++m) {
      double etax = (m == 0 ? 1.0 : -1.0) * x[m];
      cplx g = 2.0 * d1(F, m, h) - etax * Fprev;
      r.gradient_residual = std::max(r.gradient_residual, std::abs(g));
      r.gradient_scale = std::max(r.gradient_scale, std::abs(etax * Fprev));
    }
  }
  return r;
}

BernsteinReport bernstein_check(cplx alpha, cplx z, const Vec& x, double h) {
  const int n = int(x.size());
  BernsteinReport b;
  const double q0 = minkowski_square(x);
  b.rhs = fa_offdiag(alpha + 1.0, z, q0, n);
  if (std::abs(alpha) < kPoleTol) {
    b.status = "prefactor-zero";
    return b;
  }
  b.status = "ok";
  Star st(x, h);
  std::vector<cplx> F(st.pts.size()), QF(st.pts.size());
  for (std::size_t k = 0; k < st.pts.size(); ++k) {
    double q = minkowski_square(st.pts[k]);
    F[k] = fa_offdiag(alpha, z, q, n);
    QF[k] = q * F[k];
  }
  // as printed: α(Q(∂)Q(x) + 2(α+1) - 4(α+1)(α+2)) / (4(α+1)(α+2)z), Q(∂) = -□
  cplx a1 = alpha + 1.0, a2 = alpha + 2.0;
  b.lhs_printed = alpha * (-box(QF, n, h) + (2.0 * a1 - 4.0 * a1 * a2) * F[0]) / (4.0 * a1 * a2 * z);
  // from (□-z)F_α = αF_{α-1} and -Q F_α = (4α+8-2n)F_{α+1} + 4zF_{α+2}
  b.lhs_corrected =
      -(q0 * (box(F, n, h) - z * F[0]) + alpha * (4.0 * alpha + 4.0 - 2.0 * n) * F[0]) /
      (4.0 * alpha * z);
  b.residual_printed = std::abs(b.lhs_printed - b.rhs) / std::abs(b.rhs);
  b.residual_corrected = std::abs(b.lhs_corrected - b.rhs) / std::abs(b.rhs);
  return b;
}

}  // namespace lspec

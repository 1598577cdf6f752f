#include "lspec/specpowers.hpp"

#include <cmath>
#include <sstream>

namespace lspec {

SchwartzProfile::SchwartzProfile(double center, double halfwidth, double amplitude)
    : c_(center), h_(halfwidth), a_(amplitude) {
  if (!(halfwidth > 0) || !(center - halfwidth > 0))
    throw DomainError("profile support must lie inside (0, inf)");
  rule_ = composite_gl(30, 24, lo(), hi());
  fw_.resize(rule_.x.size());
  for (std::size_t i = 0; i < fw_.size(); ++i) fw_[i] = fhat(rule_.x[i]) * rule_.w[i];
}

SchwartzProfile SchwartzProfile::parse(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  if (parts.size() < 3 || parts.size() > 4 || parts[0] != "bump")
    throw ConfigError("profile must look like bump:center:halfwidth[:amplitude]");
  try {
    double a = parts.size() == 4 ? std::stod(parts[3]) : 1.0;
    return SchwartzProfile(std::stod(parts[1]), std::stod(parts[2]), a);
  } catch (const std::invalid_argument&) {
    throw ConfigError("profile parameters must be numbers");
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

std::string SchwartzProfile::describe() const {
  std::ostringstream o;
  o.precision(17);
  o << "bump:" << c_ << ":" << h_ << ":" << a_;
  return o.str();
}

double SchwartzProfile::fhat(double t) const {
  double x = (t - c_) / h_;
  if (std::abs(x) >= 1.0) return 0.0;
  return a_ * std::exp(-1.0 / (1.0 - x * x));
}

cplx SchwartzProfile::f(cplx w) const {
  cplx s = 0.0;
  for (std::size_t i = 0; i < fw_.size(); ++i) s += fw_[i] * std::exp(kI * w / rule_.x[i]) / rule_.x[i];
  return s;
}

cplx SchwartzProfile::mellin(cplx alpha) const {
  cplx s = 0.0;
  for (std::size_t i = 0; i < fw_.size(); ++i) s += fw_[i] * std::exp((alpha - 1.0) * std::log(rule_.x[i]));
  return s;
}

double SchwartzProfile::moment(double p) const {
  double s = 0.0;
  for (std::size_t i = 0; i < fw_.size(); ++i) s += fw_[i] * std::pow(rule_.x[i], p);
  return s;
}

double ck_coefficient(const SchwartzProfile& p, int n, int k) { return p.moment(0.5 * n - k - 1); }

double ck_coefficient_gk(const SchwartzProfile& p, int n, int k) {
  double e = 0.5 * n - k - 1;
  return gk_adaptive([&](double t) { return p.fhat(t) * std::pow(t, e); }, p.lo(), p.hi(), 1e-14).value;
}

namespace {
void check_pd(const PowerDiagonal& pd) {
  if (pd.n < 2 || pd.n % 2) throw DimensionError("PowerDiagonal needs even n >= 2");
  if (pd.u.empty()) throw DomainError("PowerDiagonal needs at least u_0");
  if (!(pd.eps > 0)) throw DomainError("eps must be positive");
  if (pd.sign != 1 && pd.sign != -1) throw DomainError("sign must be +1 or -1");
}
}  // namespace

MeroValue cpower_diag(const PowerDiagonal& pd, cplx alpha, bool residue_mode) {
  check_pd(pd);
  const int h = pd.n / 2;
  const double c = std::pow(4.0 * kPi, -0.5 * pd.n);
  const cplx W = pd.wick(), L = log_minus_z(pd.z0());
  int p = std::clamp(int(std::lround(alpha.real())), 1, h);
  MeroValue out;
  out.pole_distance = std::abs(alpha - double(p));
  const bool at_pole = out.pole_distance < kPoleTol;
  if (at_pole && !residue_mode) throw PoleError("cpower_diag evaluated at a pole");
  for (std::size_t m = 0; m < pd.u.size(); ++m) {
    if (pd.u[m] == 0.0) continue;
    const int q = h - int(m);
    const cplx A = pd.u[m] * W * c;
    if (at_pole && q >= p) {
      double prod = 1.0, harm = 0.0;
      for (int j = 1; j <= q; ++j)
        if (j != p) {
          prod *= double(p - j);
          harm += 1.0 / double(p - j);
        }
      cplx r = A * std::exp(double(q - p) * L) / prod;
      out.residue += r;
      out.value += r * (-L - harm);
      out.pole_order = 1;
      continue;
    }
    cplx R = 1.0;
    if (q >= 0)
      for (int j = 1; j <= q; ++j) R /= alpha - double(j);
    else
      for (int j = 0; j < -q; ++j) R *= alpha + double(j);
    out.value += A * std::exp((double(q) - alpha) * L) * R;
  }
  return out;
}

cplx cpower_diag_direct(const PowerDiagonal& pd, cplx alpha) {
  check_pd(pd);
  cplx s = 0.0;
  for (std::size_t m = 0; m < pd.u.size(); ++m) {
    if (pd.u[m] == 0.0) continue;
    cplx fac = pochhammer_factor(alpha, int(m)) * rgamma_c(alpha + double(m));
    if (fac == cplx(0.0)) continue;
    s += pd.u[m] * fac * fa_diag(alpha + double(m) - 1.0, pd.z0(), pd.n).value;
  }
  return s;
}

std::vector<int> cpower_poles(const PowerDiagonal& pd) {
  std::vector<int> p;
  for (int k = pd.n / 2; k >= 1; --k) p.push_back(k);
  return p;
}

cplx cpower_residue_circle(const PowerDiagonal& pd, double pole, double r, int m) {
  return circle_residue([&](cplx a) { return cpower_diag(pd, a).value; }, pole, r, m);
}

cplx limit_residue(const PowerDiagonal& pd, int m) {
  const int h = pd.n / 2;
  if (m < 0 || m >= h) throw DomainError("limit_residue needs 0 <= m < n/2");
  double um = m < int(pd.u.size()) ? pd.u[m] : 0.0;
  return pd.wick() * um / (std::pow(2.0, pd.n) * std::pow(kPi, h) * factorial(h - m - 1));
}

cplx gamma_weighted_residues(const PowerDiagonal& pd, int k) {
  check_pd(pd);
  if (k < 0 || k > 2) throw DomainError("gamma_weighted_residues supports k in {0,1,2}");
  if (pd.n / 2 - k < 1)
    throw DimensionError("the pole alpha = n/2 - k meets the Gamma(alpha) pole; needs n/2 - k >= 1");
  if (int(pd.u.size()) <= k) throw DomainError("need u_k for the requested residue");
  const double c = std::pow(4.0 * kPi, -0.5 * pd.n);
  const cplx z0 = pd.z0();
  cplx s = 0.0;
  for (int m = 0; m <= k; ++m) s += pd.u[m] * std::pow(z0, k - m) / factorial(k - m);
  return pd.wick() * c * s;
}

cplx gamma_weighted_residue_circle(const PowerDiagonal& pd, int k, double r, int m) {
  double p = pd.n / 2 - k;
  return circle_residue([&](cplx a) { return gamma_c(a) * cpower_diag(pd, a).value; }, p, r, m);
}

std::vector<cplx> predicted_coefficients(const SchwartzProfile& p, int n, double mass, double eps,
                                         double u1, double u2) {
  const cplx w(-mass * mass, -eps);
  const cplx den = kI * std::pow(2.0, n) * std::pow(kPi, 0.5 * n);
  auto ph = [](double k) { return std::polar(1.0, k * kPi / 4); };
  return {ph(n) * ck_coefficient(p, n, 0) / den,
          ph(n - 2) * ck_coefficient(p, n, 1) * (w + u1) / den,
          ph(n - 4) * ck_coefficient(p, n, 2) * (0.5 * w * w + w * u1 + u2) / den};
}

cplx predicted_expansion(const SchwartzProfile& p, int n, double mass, double eps, double u1,
                         double u2, double Lambda) {
  if (!(Lambda > 0)) throw DomainError("Lambda must be positive");
  auto c = predicted_coefficients(p, n, mass, eps, u1, u2);
  return c[0] * std::pow(Lambda, n) + c[1] * std::pow(Lambda, n - 2) + c[2] * std::pow(Lambda, n - 4);
}

MellinResult f_of_operator_diag(const PowerDiagonal& pd_in, const SchwartzProfile& p, double Lambda,
                                double c, double tol) {
  PowerDiagonal pd = pd_in;
  pd.sign = +1;  // f(P + iε)
  check_pd(pd);
  if (!(c > 0.5 * pd.n)) throw DomainError("vertical line must satisfy c > n/2");
  if (!(Lambda > 0)) throw DomainError("Lambda must be positive");
  const double logL2 = 2.0 * std::log(Lambda);
  auto g = [&](double y) {
    cplx a(c, y);
    return std::exp(kI * a * (kPi / 2) + a * logL2 + lgamma_c(a)) * p.mellin(a) *
           cpower_diag(pd, a).value / (2 * kPi);
  };
  MellinResult r;
  const double width = 2.0;
  double Y = 0.0, l1 = 0.0;
  for (int panel = 0;; ++panel) {
    double a = Y, b = Y + width;
    auto up = gk_adaptive(g, a, b, tol, 12);
    auto dn = gk_adaptive(g, -b, -a, tol, 12);
    r.value += up.value + dn.value;
    r.error += up.error + dn.error;
    double edge = std::abs(g(b)) + std::abs(g(-b));
    l1 += std::abs(up.value) + std::abs(dn.value);
    Y = b;
    if (edge * width < 1e-3 * tol * std::max(std::abs(r.value), 1e-300) && panel > 3) break;
    if (Y > 4000.0) throw TailError("Mellin integrand has not decayed at the truncation height");
  }
  r.height = Y;
  return r;
}

}  // namespace lspec

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "cli.hpp"
#include "lspec/contour.hpp"
#include "lspec/elemfam.hpp"
#include "lspec/geomkit.hpp"
#include "lspec/hadamard.hpp"
#include "lspec/scflow.hpp"
#include "lspec/specpowers.hpp"
#include "lspec/ultrastatic.hpp"

namespace lspec::cli {

namespace {

std::string sci(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3e", x);
  return b;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// State shared between criteria (u_k of the test metrics, spectral models).
struct Shared {
  std::map<std::string, double> u1, scalar;
  double sphere_u0 = 1.0;
  bool have_sphere = false;
  std::unique_ptr<SpectralModel> torus;
  SchwartzProfile profile;
  KernelOptions ko;

  void sphere_transport() {
    if (have_sphere) return;
    auto m = make_metric("ultrastatic-sphere");
    Vec x = default_point(*m);
    NormalChart chart(m, x);
    auto seq = hadamard_sequence(chart, 1);
    sphere_u0 = seq.diag[0];
    u1["ultrastatic-sphere"] = seq.diag[1];
    scalar["ultrastatic-sphere"] = curvature(*m, x).scalar;
    have_sphere = true;
  }
  const SpectralModel& torus_model(double Lmax, double eps) {
    if (!torus) {
      auto probe = build_model(ModelKind::Torus, 3, 2 * kPi, 16.0);
      double lm = required_lambda_max(probe, profile, Lmax, 0.0, eps, ko);
      torus = std::make_unique<SpectralModel>(build_model(ModelKind::Torus, 3, 2 * kPi, lm * 1.001));
    }
    return *torus;
  }
};

using Body = std::function<void(Criterion&, Shared&)>;

// frame components of the Riemann tensor
double frame_riemann(const CurvaturePack& cv, const Mat& E, int i, int k, int j, int l) {
  const int n = cv.n;
  double s = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) s += cv.R(a, b, c, d) * E(a, i) * E(b, k) * E(c, j) * E(d, l);
  return s;
}

void c1_curvature(Criterion& c, Shared&) {
  auto flat = make_metric("minkowski");
  auto cf = curvature(*flat, Vec::Constant(4, 0.3));
  double fr = std::abs(cf.scalar);
  for (double v : cf.riemann) fr = std::max(fr, std::abs(v));
  auto sph = make_metric("ultrastatic-sphere");
  Vec x = default_point(*sph);
  auto a = curvature(*sph, x), b = curvature_fd(*sph, x);
  double d = std::abs(a.scalar - b.scalar);
  for (std::size_t k = 0; k < a.riemann.size(); ++k) d = std::max(d, std::abs(a.riemann[k] - b.riemann[k]));
  c.pass = fr <= 1e-10 && d <= 1e-5;
  c.detail = "flat |R| " + sci(fr) + " (tol 1e-10), sphere vs FD " + sci(d) + " (tol 1e-5)";
  c.data = Json{{"flat_max", num(fr)}, {"sphere_fd_diff", num(d)}, {"sphere_scalar", num(a.scalar)}};
}

void c2_chart(Criterion& c, Shared&) {
  double radial = 0, jet = 0;
  for (std::string name : {"ultrastatic-sphere", "expanding"}) {
    auto m = make_metric(name);
    Vec x = default_point(*m);
    NormalChart ch(m, x);
    auto dirs = sample_directions(4, 100, 17);
    Mat et = eta(4);
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      Vec y = dirs[k] * ch.radius() * (0.1 + 0.9 * double(k) / dirs.size());
      radial = std::max(radial, (ch.pulled_metric(y) * y - et * y).cwiseAbs().maxCoeff());
    }
    auto cv = curvature(*m, x);
    const Mat& E = ch.frame().e;
    Taylor2 t = metric_taylor2(ch);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            double expect = (frame_riemann(cv, E, i, k, j, l) + frame_riemann(cv, E, i, l, j, k)) / 6.0;
            jet = std::max(jet, std::abs(t.at(i, j, k, l) - expect));
          }
  }
  c.pass = radial <= 1e-7 && jet <= 1e-4;
  c.detail = "radial identity " + sci(radial) + " (tol 1e-7), Taylor jet " + sci(jet) + " (tol 1e-4)";
  c.data = Json{{"radial", num(radial)}, {"taylor_jet", num(jet)}};
}

void c3_hadamard(Criterion& c, Shared& s) {
  s.sphere_transport();
  auto m = make_metric("expanding");
  Vec x = default_point(*m);
  NormalChart chart(m, x);
  auto seq = hadamard_sequence(chart, 1);
  s.u1["expanding"] = seq.diag[1];
  s.scalar["expanding"] = curvature(*m, x).scalar;
  double worst = 0;
  std::ostringstream o;
  for (auto& [name, u1] : s.u1) {
    double R = s.scalar[name];
    double e = std::abs(u1 + R / 6) / std::max(1.0, std::abs(R));
    worst = std::max(worst, e);
    o << name << " u1 " << num(u1).substr(0, 12) << " R " << num(R).substr(0, 8) << "; ";
    c.data[name] = Json{{"u1", num(u1)}, {"R", num(R)}, {"error", num(e)}};
  }
  c.pass = worst <= 1e-3 && s.u1.size() >= 2;
  c.detail = o.str() + "worst " + sci(worst) + " (tol 1e-3)";
}

void c4_euclid(Criterion& c, Shared&) {
  double worst = 0;
  for (int k : {1, 2})
    for (cplx z : {cplx(-1, 0), cplx(-1, 2)}) {
      cplx expect = std::pow(z, 2 - k) * kPi * kPi / (factorial(2 - k) * std::tgamma(double(k)));
      cplx circ = circle_residue([&](cplx a) { return euclid_integral(a, z, 4).value; }, double(k));
      worst = std::max(worst, rel(circ, expect));
    }
  c.pass = worst <= 1e-8;
  c.detail = "worst relative " + sci(worst) + " (tol 1e-8)";
  c.data = Json{{"worst", num(worst)}};
}

void c5_contour(Criterion& c, Shared&) {
  double worst = 0;
  for (double a : {1.5, 2.3, 3.7})
    for (int k : {0, 1, 2})
      for (double e : {0.1, 1.0})
        for (int sign : {-1, 1}) worst = std::max(worst, power_identity_check(a, k, e, 2.0, sign).rel_err);
  c.pass = worst <= 1e-6;
  c.detail = "36 cases, worst relative " + sci(worst) + " (tol 1e-6)";
  c.data = Json{{"worst", num(worst)}};
}

void c6_pde(Criterion& c, Shared&) {
  auto grid = spacelike_grid(4, 6);
  double worst = 0;
  for (double a : {2.0, 3.5})
    for (cplx z : {cplx(0, 2), cplx(1, 2)}) worst = std::max(worst, pde_check(a, z, grid).relative());
  c.pass = worst <= 1e-3;
  c.detail = "worst relative residual " + sci(worst) + " (tol 1e-3)";
  c.data = Json{{"worst", num(worst)}, {"points", grid.size()}};
}

void c7_residues(Criterion& c, Shared& s) {
  s.sphere_transport();
  double worst = 0, zero = 0;
  for (int sign : {-1, 1}) {
    PowerDiagonal pd;
    pd.n = 4;
    pd.eps = 1e-6;
    pd.sign = sign;
    pd.u = {s.sphere_u0, s.u1["ultrastatic-sphere"]};
    for (int p : {2, 1}) {
      cplx ci = cpower_residue_circle(pd, p);
      cplx th = limit_residue(pd, 2 - p);
      worst = std::max(worst, rel(ci, th));
    }
    for (double p : {0.0, -1.0}) zero = std::max(zero, std::abs(cpower_residue_circle(pd, p)));
  }
  c.pass = worst <= 1e-3 && zero <= 1e-10;
  c.detail = "sphere u_m, eps 1e-6: poles " + sci(worst) + " (tol 1e-3), |Res| at 0,-1 " + sci(zero) +
             " (tol 1e-10)";
  c.data = Json{{"worst_pole", num(worst)}, {"worst_zero", num(zero)}};
}

void c8_kkw(Criterion& c, Shared& s) {
  s.sphere_transport();
  const double R = s.scalar["ultrastatic-sphere"];
  std::vector<double> e{1e-1, 1e-2, 1e-3};
  std::vector<cplx> r;
  for (double eps : e) {
    PowerDiagonal pd;
    pd.n = 4;
    pd.eps = eps;
    pd.sign = -1;
    pd.u = {s.sphere_u0, s.u1["ultrastatic-sphere"]};
    r.push_back(cpower_residue_circle(pd, 1.0));
  }
  // quadratic through the three points, evaluated at ε = 0
  cplx lim = 0;
  for (int i = 0; i < 3; ++i) {
    double w = 1;
    for (int j = 0; j < 3; ++j)
      if (j != i) w *= (0 - e[j]) / (e[i] - e[j]);
    lim += w * r[i];
  }
  const cplx target = R / (kI * 6.0 * 16.0 * kPi * kPi);
  double err = rel(lim, target);
  c.pass = err <= 2e-3;
  c.detail = "limit " + num(lim.imag()).substr(0, 12) + "i vs " + num(target.imag()).substr(0, 12) + "i, rel " +
             sci(err) + " (tol 2e-3)";
  c.data = Json{{"limit", cnum(lim)}, {"target", cnum(target)}, {"rel", num(err)}};
}

std::vector<double> lambda_grid() { return {10, 20, 30, 40, 50, 60}; }

void c9_torus(Criterion& c, Shared& s) {
  const double eps = 1e-2;
  auto& m = s.torus_model(60, eps);
  std::vector<double> L = lambda_grid();
  std::vector<cplx> v;
  for (double lam : L) v.push_back(kernel_diag(m, s.profile, lam, 0.0, eps, s.ko).value);
  auto fit = fit_expansion(L, v, 4, 3);
  const cplx pred = std::polar(1.0, kPi) * ck_coefficient(s.profile, 4, 0) / (kI * 16.0 * kPi * kPi);
  double dm = std::abs(std::abs(fit.coef[0]) - std::abs(pred)) / std::abs(pred);
  double dp = std::abs(std::arg(fit.coef[0] / pred));
  double r1 = std::abs(fit.coef[1]) / std::abs(fit.coef[0]);
  c.pass = dm <= 0.02 && dp <= 0.02 && r1 <= 0.02;
  c.detail = "c0 modulus " + sci(dm) + ", phase " + sci(dp) + " (tol 2e-2); |c1|/|c0| " + sci(r1) +
             " (tol 2e-2); lambda_max " + sci(m.lambda_max);
  c.data = Json{{"c0_fit", cnum(fit.coef[0])}, {"c0_pred", cnum(pred)}, {"c1_fit", cnum(fit.coef[1])},
                {"modulus_rel", num(dm)}, {"phase", num(dp)}, {"c1_ratio", num(r1)}};
}

void c10_sphere(Criterion& c, Shared& s) {
  const double eps = 1e-2;
  auto probe = build_model(ModelKind::Sphere, 3, 1.0, 16.0);
  double lm = required_lambda_max(probe, s.profile, 60, 0.0, eps, s.ko);
  auto m = build_model(ModelKind::Sphere, 3, 1.0, lm * 1.001);
  auto metric = make_metric("ultrastatic-sphere");
  const double R = curvature(*metric, default_point(*metric)).scalar, u1 = -R / 6;
  std::vector<double> L = lambda_grid();
  std::vector<cplx> v;
  for (double lam : L) v.push_back(kernel_diag(m, s.profile, lam, 0.0, eps, s.ko).value);
  auto fit = fit_expansion(L, v, 4, 3);
  const cplx pred = std::polar(1.0, kPi / 2) * ck_coefficient(s.profile, 4, 1) * u1 / (kI * 16.0 * kPi * kPi);
  double err = rel(fit.coef[1], pred);
  c.pass = err <= 0.05;
  c.detail = "u1 " + num(u1).substr(0, 8) + ", c1 fit vs prediction " + sci(err) + " (tol 5e-2)";
  c.data = Json{{"c1_fit", cnum(fit.coef[1])}, {"c1_pred", cnum(pred)}, {"rel", num(err)}, {"u1", num(u1)}};
}

void c11_mellin(Criterion& c, Shared& s) {
  const double eps = 1e-2, L = 40;
  auto& m = s.torus_model(60, eps);
  cplx spec = kernel_diag(m, s.profile, L, 0.0, eps, s.ko).value;
  PowerDiagonal pd;
  pd.n = 4;
  pd.eps = eps;
  pd.u = {1.0};
  cplx mel = f_of_operator_diag(pd, s.profile, L, 2.5).value;
  double err = rel(mel, spec);
  c.pass = err <= 0.02;
  c.detail = "Lambda 40: relative " + sci(err) + " (tol 2e-2)";
  c.data = Json{{"spectral", cnum(spec)}, {"mellin", cnum(mel)}, {"rel", num(err)}};
}

void c12_flow(Criterion& c, Shared&) {
  auto m = make_metric("minkowski");
  auto r = nontrapping_certificate(*m, 100);
  c.pass = r.classified == 100 && r.worst_closest < 1e-3 && r.reversal_swaps;
  c.detail = std::to_string(r.classified) + "/100 classified, closest " + sci(r.worst_closest) +
             " (tol 1e-3), reversal " + (r.reversal_swaps ? "swaps" : "does not swap");
  c.data = Json{{"classified", r.classified}, {"worst_closest", num(r.worst_closest)},
                {"reversal_swaps", r.reversal_swaps}};
}

struct Entry {
  int id;
  const char* title;
  double budget;  // seconds, 0: none
  bool slow;
  Body body;
};

}  // namespace

std::string criterion_line(const Criterion& c) {
  char head[96];
  std::snprintf(head, sizeof head, "%-4s %2d  %-34s %8.2fs  ", c.skipped ? "SKIP" : (c.pass ? "PASS" : "FAIL"),
                c.id, c.title.c_str(), c.seconds);
  return head + c.detail;
}

std::vector<Criterion> run_acceptance(const std::string& suite, std::ostream* live) {
  if (suite != "full" && suite != "quick") throw ConfigError("suite must be full or quick");
  const std::vector<Entry> entries{
      {1, "Curvature engine", 5, false, c1_curvature},
      {2, "Normal-chart identities", 30, false, c2_chart},
      {3, "Hadamard u_1 = -R/6", 120, true, c3_hadamard},
      {4, "Euclidean residue", 0, false, c4_euclid},
      {5, "Contour identity", 60, false, c5_contour},
      {6, "PDE identity", 0, false, c6_pde},
      {7, "Complex-power residues", 0, true, c7_residues},
      {8, "KKW-type identity", 0, true, c8_kkw},
      {9, "Spectral action, torus", 300, true, c9_torus},
      {10, "Spectral action, sphere S^3", 600, true, c10_sphere},
      {11, "Mellin vs spectral", 0, true, c11_mellin},
      {12, "Non-trapping certificate", 0, false, c12_flow},
  };
  Shared sh;
  std::vector<Criterion> out;
  for (auto& e : entries) {
    Criterion c;
    c.id = e.id;
    c.title = e.title;
    if (suite == "quick" && e.slow) {
      c.skipped = true;
      c.detail = "skipped in the quick suite";
    } else {
      auto t0 = std::chrono::steady_clock::now();
      try {
        e.body(c, sh);
      } catch (const Error& err) {
        c.pass = false;
        c.detail = std::string("error ") + err.what();
        c.data = Json{{"error", err.kind()}, {"message", err.what()}};
      }
      c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (e.budget > 0) {
        c.detail += "; runtime budget " + std::to_string(int(e.budget)) + "s";
        if (c.seconds > e.budget) {
          c.pass = false;
          c.detail += " exceeded";
        }
      }
    }
    if (live) *live << criterion_line(c) << std::endl;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace lspec::cli

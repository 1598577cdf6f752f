#pragma once

#include <vector>

#include "lspec/contour.hpp"
#include "lspec/elemfam.hpp"
#include "lspec/quad.hpp"

namespace lspec {

// f̂(t) = A exp(-1/(1-x²)), x = (t - center)/halfwidth, supported in (0, ∞).
// The profile itself is f(w) = ∫ f̂(s) e^{iw/s} ds/s, which is the function
// whose Mellin representation uses 𝓜f̂(α) = ∫ t^{α-1} f̂(t) dt.
class SchwartzProfile {
 public:
  SchwartzProfile(double center = 1.5, double halfwidth = 0.5, double amplitude = 1.0);
  static SchwartzProfile parse(const std::string& spec);  // "bump:c:h[:A]"

  double center() const { return c_; }
  double halfwidth() const { return h_; }
  double amplitude() const { return a_; }
  double lo() const { return c_ - h_; }
  double hi() const { return c_ + h_; }

  double fhat(double t) const;
  cplx f(cplx w) const;
  cplx mellin(cplx alpha) const;
  // ∫ f̂(t) t^{p} dt with the pinned composite rule
  double moment(double p) const;
  std::string describe() const;

 private:
  double c_, h_, a_;
  GLRule rule_;
  std::vector<double> fw_;  // f̂(t_i) w_i
};

double ck_coefficient(const SchwartzProfile& p, int n, int k);
// Same integral by adaptive Gauss–Kronrod (second rule for cross-checks).
double ck_coefficient_gk(const SchwartzProfile& p, int n, int k);

struct PowerDiagonal {
  int n = 4;
  double mass = 0.0;
  double eps = 1e-2;
  int sign = -1;            // -1: (P - iε)^{-α}, +1: (P + iε)^{-α}
  std::vector<double> u;    // u_0(0), ..., u_N(0)
  cplx z0() const { return cplx(-mass * mass, -sign * eps); }
  cplx wick() const { return sign < 0 ? kI : -kI; }
};

// Σ_m u_m (α)_m/Γ(α+m) F_{α+m-1}(z0), evaluated through the equivalent closed
// form u_m W c Γ(α-q)/Γ(α) (-z0)^{q-α}, q = n/2 - m (entire except α in 1..n/2).
MeroValue cpower_diag(const PowerDiagonal& pd, cplx alpha, bool residue_mode = false);
// Literal assembly from pochhammer_factor and fa_diag (PoleError on any
// fa_diag pole, including the cancelled ones at α <= 0).
cplx cpower_diag_direct(const PowerDiagonal& pd, cplx alpha);
std::vector<int> cpower_poles(const PowerDiagonal& pd);
cplx cpower_residue_circle(const PowerDiagonal& pd, double pole, double r = 1e-3, int m = 64);

// ε → 0 residue at α = n/2 - m: ∓ i u_m / (2^n π^{n/2} (n/2-m-1)!)
cplx limit_residue(const PowerDiagonal& pd, int m);

// Res_{α=n/2-k} Γ(α)(P ± iε)^{-α}(x,x), k in {0,1,2}
cplx gamma_weighted_residues(const PowerDiagonal& pd, int k);
cplx gamma_weighted_residue_circle(const PowerDiagonal& pd, int k, double r = 1e-3, int m = 64);

cplx predicted_expansion(const SchwartzProfile& p, int n, double mass, double eps, double u1,
                         double u2, double Lambda);
// individual terms Λ^n, Λ^{n-2}, Λ^{n-4} coefficients
std::vector<cplx> predicted_coefficients(const SchwartzProfile& p, int n, double mass, double eps,
                                         double u1, double u2);

struct MellinResult {
  cplx value{};
  double error = 0.0;
  double height = 0.0;  // truncation |Im α|
};
// (1/2π)∫ e^{iαπ/2} Λ^{2α} Γ(α) 𝓜f̂(α) (P+iε)^{-α}(x,x) dy on α = c + iy.
MellinResult f_of_operator_diag(const PowerDiagonal& pd, const SchwartzProfile& p, double Lambda,
                                double c, double tol = 1e-10);

}  // namespace lspec

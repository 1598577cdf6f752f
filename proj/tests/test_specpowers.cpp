#include <cmath>

#include "doctest.h"
#include "lspec/specpowers.hpp"

using namespace lspec;

namespace {
PowerDiagonal make_pd(std::vector<double> u, double eps, int sign, double mass = 0.0, int n = 4) {
  PowerDiagonal pd;
  pd.n = n;
  pd.u = std::move(u);
  pd.eps = eps;
  pd.sign = sign;
  pd.mass = mass;
  return pd;
}
const double c4 = 1.0 / (16 * kPi * kPi);
}  // namespace

TEST_CASE("cpower_diag agrees with the literal assembly off the poles") {
  auto pd = make_pd({1.0, 0.7, -0.4}, 0.05, -1, 0.3);
  for (cplx a : {cplx(2.6, 0.3), cplx(1.3, -0.2), cplx(0.4, 1.0), cplx(-0.6, 0.1)}) {
    cplx x = cpower_diag(pd, a).value, y = cpower_diag_direct(pd, a);
    CHECK(std::abs(x - y) < 1e-12 * std::abs(x));
  }
  // the Γ zero kills the F pole near non-positive integers
  for (double p : {0.0, -1.0, -2.0}) {
    cplx v = cpower_diag_direct(pd, p + 1e-7);
    CHECK(std::abs(v) < 1e6 * c4);
    CHECK(std::abs(v - cpower_diag(pd, p).value) < 1e-5 * c4);
  }
  CHECK_THROWS_AS(cpower_diag(pd, 1.0), PoleError);
}

TEST_CASE("cpower_diag: residues") {
  // Minkowski: u_1 = 0, residue at α = 1 vanishes as ε → 0
  auto flat = make_pd({1.0, 0.0, 0.0}, 1e-9, -1);
  CHECK(std::abs(cpower_diag(flat, 1.0, true).residue) < 2e-9 * c4);  // = c·ε
  // circle vs analytic assembly, every pole, both branches
  for (int sign : {-1, 1}) {
    auto pd = make_pd({1.0, 0.8, 0.3}, 0.1, sign, 0.5);
    for (int p : cpower_poles(pd)) {
      cplx an = cpower_diag(pd, double(p), true).residue, ci = cpower_residue_circle(pd, p);
      CHECK(std::abs(an - ci) < 1e-8 * std::abs(an));
    }
    for (double p : {0.0, -1.0, -2.0}) CHECK(std::abs(cpower_residue_circle(pd, p)) < 1e-10 * c4);
  }
  // the two branches are complex conjugates for real mass and u
  auto m = make_pd({1.0, 0.8, 0.3}, 0.1, -1, 0.5), p = make_pd({1.0, 0.8, 0.3}, 0.1, +1, 0.5);
  for (cplx a : {cplx(2.7, 0.0), cplx(0.3, 0.0), cplx(1.5, 0.0)})
    CHECK(std::abs(cpower_diag(m, a).value - std::conj(cpower_diag(p, a).value)) < 1e-13);
  CHECK(std::abs(cpower_diag(m, 1.0, true).residue - std::conj(cpower_diag(p, 1.0, true).residue)) < 1e-15);
}

TEST_CASE("cpower_diag: residues converge linearly in eps to the limit") {
  std::vector<double> errs;
  for (double e : {0.1, 0.01, 0.001}) {
    auto pd = make_pd({1.0, 1.0}, e, -1);
    errs.push_back(std::abs(cpower_diag(pd, 1.0, true).residue - limit_residue(pd, 1)));
  }
  CHECK(errs[1] / errs[0] == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(errs[2] / errs[1] == doctest::Approx(0.1).epsilon(1e-6));
  auto pd = make_pd({1.0, 1.0}, 1e-3, -1);
  CHECK(std::abs(limit_residue(pd, 0) - kI * c4) < 1e-16);
}

TEST_CASE("gamma weighted residues") {
  auto pd = make_pd({1.0, 0.6, 0.2}, 0.05, -1, 0.4, 6);
  const double c6 = std::pow(4 * kPi, -3.0);
  CHECK(std::abs(gamma_weighted_residues(pd, 0) - kI * c6) < 1e-16);
  cplx w = pd.z0();
  CHECK(std::abs(gamma_weighted_residues(pd, 1) - kI * c6 * (w + 0.6)) < 1e-16);
  CHECK(std::abs(gamma_weighted_residues(pd, 2) - kI * c6 * (0.5 * w * w + 0.6 * w + 0.2)) < 1e-16);
  for (int k : {0, 1, 2}) {
    cplx a = gamma_weighted_residues(pd, k), c = gamma_weighted_residue_circle(pd, k);
    CHECK(std::abs(a - c) < 1e-6 * std::abs(a));
  }
  auto p4 = make_pd({1.0, 0.6, 0.2}, 0.05, +1, 0.0, 4);
  CHECK_THROWS_AS(gamma_weighted_residues(p4, 2), DimensionError);
  auto flat = make_pd({1.0, 0.0, 0.0}, 1e-8, +1, 0.0, 4);
  CHECK(std::abs(gamma_weighted_residues(flat, 1)) < 2e-8 * c4);  // = c·ε
  CHECK(std::abs(gamma_weighted_residues(flat, 0) + kI * c4) < 1e-16);
}

TEST_CASE("profile and c_k") {
  SchwartzProfile p;
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(ck_coefficient(p, 4, k) - ck_coefficient_gk(p, 4, k)) < 1e-10);
    double r = ck_coefficient(p, 4, k) / ck_coefficient(p, 4, k + 1);
    CHECK(r >= 1.0);
    CHECK(r <= 2.0);
  }
  SchwartzProfile q(1.5, 0.5, 3.0);
  CHECK(ck_coefficient(q, 4, 1) == doctest::Approx(3.0 * ck_coefficient(p, 4, 1)).epsilon(1e-14));
  // f decays upward in the upper half-plane
  CHECK(std::abs(p.f(cplx(3.0, 20.0))) < std::exp(-9.0) * std::abs(p.f(cplx(3.0, 0.0))) + 1e-300);
  CHECK_THROWS_AS(SchwartzProfile::parse("bump:x:1"), ConfigError);
  CHECK(SchwartzProfile::parse("bump:1.5:0.5").center() == 1.5);
}

TEST_CASE("predicted expansion") {
  SchwartzProfile p;
  auto c = predicted_coefficients(p, 4, 0.0, 0.0, 0.0, 0.0);
  CHECK(std::abs(c[0] - std::polar(1.0, kPi) * ck_coefficient(p, 4, 0) / (kI * 16.0 * kPi * kPi)) < 1e-16);
  CHECK(std::abs(c[1]) < 1e-300);
  CHECK(std::abs(c[0]) == doctest::Approx(ck_coefficient(p, 4, 0) / (16 * kPi * kPi)).epsilon(1e-14));
  // a_0 = (4π)^{-n/2} times C_0(f) = i^{-1} e^{inπ/4} ∫f̂ t^{n/2-1}
  for (int n : {4, 6}) {
    cplx C0 = std::polar(1.0, n * kPi / 4) * ck_coefficient(p, n, 0) / kI;
    auto cc = predicted_coefficients(p, n, 0, 0, 0, 0);
    CHECK(std::abs(std::pow(4 * kPi, -0.5 * n) * C0 - cc[0]) < 1e-16);
  }
}

TEST_CASE("Mellin route: flat consistency, Lambda scaling, c independence") {
  SchwartzProfile p;
  auto pd = make_pd({1.0, 0.0, 0.0}, 1e-2, +1);
  auto m40 = f_of_operator_diag(pd, p, 40.0, 2.5);
  cplx pr = predicted_expansion(p, 4, 0.0, 1e-2, 0, 0, 40.0);
  CHECK(std::abs(m40.value - pr) < 0.02 * std::abs(pr));
  auto m80 = f_of_operator_diag(pd, p, 80.0, 2.5);
  CHECK(std::abs(m80.value / m40.value - 16.0) < 0.03 * 16.0);
  auto pe = make_pd({1.0, 0.0, 0.0}, 0.5, +1);
  auto a = f_of_operator_diag(pe, p, 1.0, 2.5), b = f_of_operator_diag(pe, p, 1.0, 3.5);
  CHECK(std::abs(a.value - b.value) < 1e-8 * std::abs(a.value));
  CHECK_THROWS_AS(f_of_operator_diag(pd, p, 10.0, 1.5), DomainError);
}

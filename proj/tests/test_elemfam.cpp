#include <cmath>

#include "doctest.h"
#include "lspec/elemfam.hpp"
#include "lspec/quad.hpp"

using namespace lspec;

TEST_CASE("euclid_integral: radial quadrature oracle n=4 alpha=3 z=-1") {
  auto v = euclid_integral(3.0, -1.0, 4);
  // ∫ 2π² r³ (r²+1)^{-3} dr over [0, ∞), mapped r = t/(1-t)
  auto f = [](double t) {
    double r = t / (1 - t), dr = 1 / ((1 - t) * (1 - t));
    return 2 * kPi * kPi * r * r * r / std::pow(r * r + 1, 3) * dr;
  };
  double ref = gk_adaptive(f, 0.0, 1.0, 1e-14).value;
  CHECK(std::abs(v.value - cplx(kPi * kPi / 2)) < 1e-13);
  CHECK(std::abs(ref - kPi * kPi / 2) < 1e-12);
}

TEST_CASE("euclid_integral: residues against the closed form and the circle") {
  for (int k : {1, 2})
    for (cplx z : {cplx(-1, 0), cplx(-1, 2)}) {
      cplx expect = std::pow(z, 2 - k) * kPi * kPi / (factorial(2 - k) * std::tgamma(double(k)));
      auto mv = euclid_integral(double(k), z, 4, true);
      CHECK(mv.pole_order == 1);
      CHECK(std::abs(mv.residue - expect) < 1e-12 * std::abs(expect));
      cplx circ = circle_residue([&](cplx a) { return euclid_integral(a, z, 4).value; }, double(k));
      CHECK(std::abs(circ - expect) < 1e-8 * std::abs(expect));
    }
  CHECK_THROWS_AS(euclid_integral(1.0, -1.0, 4), PoleError);
  CHECK_THROWS_AS(euclid_integral(2.5, 1.0, 4), BranchError);
}

TEST_CASE("euclid_integral: series oracle and decay") {
  for (cplx a : {cplx(0.7, 0.2), cplx(2.5, 0), cplx(-1.3, 0.5), cplx(3.2, -1)})
    for (cplx z : {cplx(-1, 0), cplx(-1, 2), cplx(0.5, 1.5), cplx(2, -0.3)}) {
      cplx e = euclid_integral(a, z, 4).value, s = euclid_series(a, z, 4);
      CHECK(std::abs(e - s) < 1e-10 * std::max(1.0, std::abs(e)));
    }
  double prev = 1e300;
  for (double a : {5.0, 10.0, 20.0, 40.0}) {
    double v = std::abs(euclid_integral(a, -1.0, 6).value);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < 1e-3);  // π³/((α-1)(α-2)(α-3)) at z = -1
  // finite part: Laurent consistency
  auto mv = euclid_integral(2.0, cplx(-1, 2), 4, true);
  double d = 1e-5;
  cplx mid = 0.5 * (euclid_integral(2.0 + d, cplx(-1, 2), 4).value + euclid_integral(2.0 - d, cplx(-1, 2), 4).value);
  CHECK(std::abs(mid - mv.value) < 1e-8);
}

TEST_CASE("fa_diag: frozen value and scaling") {
  auto v = fa_diag(2.0, kI, 4);
  CHECK(std::abs(v.value - cplx(-1.0 / (16 * kPi * kPi))) < 1e-15);
  // Wick factor times the Euclidean integral: F_α(z) = iΓ(α+1)/(2π)^n E(α+1, z)
  for (cplx a : {cplx(2.3, 0.4), cplx(3.5, 0)}) {
    cplx z(0.4, 1.1);
    cplx w = kI * gamma_c(a + 1.0) / std::pow(2 * kPi, 4) * euclid_integral(a + 1.0, z, 4).value;
    CHECK(std::abs(fa_diag(a, z, 4).value - w) < 1e-13 * std::abs(w));
    double lam = 1.7;
    cplx lhs = fa_diag(a, lam * lam * z, 4).value * std::pow(lam, 2.0 * (a + 1.0) - 4.0);
    CHECK(std::abs(lhs - fa_diag(a, z, 4).value) < 1e-12 * std::abs(lhs));
  }
}

TEST_CASE("fa_diag: residue consistency and meromorphic structure") {
  const int n = 4;
  const double c = 1.0 / (16 * kPi * kPi);
  for (int m = 0; m <= 2; ++m)
    for (cplx z : {cplx(0.3, 0.8), cplx(-1, -0.5)}) {
      double a0 = n / 2 - m;
      auto g = [&](cplx a) { return rgamma_c(a + double(m)) * fa_diag(a + double(m) - 1.0, z, n).value; };
      cplx r = circle_residue(g, a0);
      cplx expect = (z.imag() >= 0 ? kI : -kI) * c / factorial(n / 2 - 1);
      CHECK(std::abs(r - expect) < 1e-10 * std::abs(expect));
    }
  // δ·F(α0+δ) → residue along four directions
  cplx z(0.5, 1.0);
  for (int j = 0; j < 3; ++j) {
    double a0 = 1 - j;
    auto mv = fa_diag(a0, z, n, true);
    for (int q = 0; q < 4; ++q) {
      cplx d = 1e-4 * std::polar(1.0, kPi * q / 2);
      cplx v = d * fa_diag(a0 + d, z, n).value;
      CHECK(std::abs(v - mv.residue) < 1e-3 * std::abs(mv.residue));
    }
    cplx circ = circle_residue([&](cplx a) { return fa_diag(a, z, n).value; }, a0);
    CHECK(std::abs(circ - mv.residue) < 1e-10 * std::abs(mv.residue));
  }
  CHECK_THROWS_AS(fa_diag(1.0, z, n), PoleError);
  CHECK_THROWS_AS(fa_diag(1.5, z, 3), DimensionError);
}

TEST_CASE("fa_diag: conjugation across the real axis") {
  for (double a : {0.3, 1.7, 2.5})
    for (double y : {0.5, 2.0}) {
      cplx up = fa_diag(a, cplx(0, y), 4).value, lo = fa_diag(a, cplx(0, -y), 4).value;
      CHECK(std::abs(lo - std::conj(up)) < 1e-10 * std::abs(up));
    }
}

TEST_CASE("fa_offdiag: q to 0 limit and decay") {
  cplx z(0.3, 1.2);
  for (cplx a : {cplx(3.5, 0), cplx(4.2, 0.3)}) {
    cplx d = fa_diag(a, z, 4).value;
    for (double q : {1e-4, -1e-4}) {
      cplx o = fa_offdiag(a, z, q, 4);
      CHECK(std::abs(o - d) < 1e-3 * std::abs(d));
    }
  }
  double prev = 1e300;
  std::vector<double> y2f;
  for (double y : {1.0, 4.0, 16.0, 64.0}) {
    double v = std::abs(fa_offdiag(2.0, cplx(0, y), -1.0, 4));
    CHECK(v < prev);
    prev = v;
    y2f.push_back(y * y * v);
  }
  // y²|F| turns over: faster than (Im z)^{-2} once y is large
  CHECK(y2f[3] < y2f[2]);
  CHECK(y2f[3] < y2f[0] * 1.5);
  CHECK_THROWS_AS(fa_offdiag(2.0, cplx(1, 0), 1.0, 4), DomainError);
}

TEST_CASE("pde identities on a spacelike grid") {
  auto grid = spacelike_grid(4, 6);
  for (double a : {2.0, 3.5})
    for (cplx z : {cplx(0, 2), cplx(1, 2)}) {
      auto r = pde_check(a, z, grid);
      CHECK(r.relative() < 1e-3);
      CHECK(r.gradient_relative() < 1e-3);
    }
  auto r0 = pde_check(0.0, cplx(0, 2), grid);
  CHECK(r0.relative() < 1e-3);
  auto r3 = pde_check(3.0, cplx(0, 2), grid);
  CHECK(r3.relative() < 1e-3);
}

TEST_CASE("bernstein functional equation") {
  Vec x(4);
  x << 0.2, 0.6, 0.5, 0.4;
  auto b = bernstein_check(4.0, cplx(0, 3), x);
  CHECK(b.status == "ok");
  CHECK(b.residual_corrected < 1e-2);
  auto b6 = bernstein_check(4.0, cplx(0, 6), x);
  CHECK(b6.residual_corrected < 1e-2);
  // the operator as printed does not reproduce F_{α+1}
  CHECK(b.residual_printed > 1e-1);
  CHECK(bernstein_check(0.0, cplx(0, 3), x).status == "prefactor-zero");
}

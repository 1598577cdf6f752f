#include <cmath>

#include "doctest.h"
#include "lspec/ultrastatic.hpp"

using namespace lspec;

namespace {
const double kTwoPi = 2 * 3.14159265358979323846;
}

TEST_CASE("ultrastatic: sphere levels and multiplicities") {
  auto m = build_model(ModelKind::Sphere, 3, 1.0, 2000);
  REQUIRE(m.lambda.size() > 10);
  CHECK(m.lambda[0] == 0.0);
  CHECK(m.mult[0] == 1.0);
  for (std::size_t l = 0; l < m.lambda.size(); ++l) {
    CHECK(m.lambda[l] == double(l * (l + 2)));
    CHECK(m.mult[l] == double((l + 1) * (l + 1)));
  }
  // spherical-harmonic dimension C(l+d,d) − C(l+d−2,d) for d = 5
  auto m5 = build_model(ModelKind::Sphere, 5, 2.0, 500);
  auto binom = [](long a, long b) {
    if (a < b || b < 0) return 0.0;
    double r = 1;
    for (long i = 1; i <= b; ++i) r = r * double(a - b + i) / double(i);
    return r;
  };
  for (std::size_t l = 0; l < m5.lambda.size(); ++l) {
    CHECK(m5.mult[l] == doctest::Approx(binom(l + 5, 5) - binom(long(l) + 3, 5)));
    CHECK(m5.lambda[l] == doctest::Approx(double(l * (l + 4)) / 4.0));
  }
  auto big = build_model(ModelKind::Sphere, 3, 1.0, 1e8);
  CHECK(std::abs(big.weyl_ratio - 1) < 0.05);
  CHECK(big.volume == doctest::Approx(2 * 3.14159265358979323846 * 3.14159265358979323846));
}

TEST_CASE("ultrastatic: torus multiplicities by brute force") {
  const int A = 400;
  auto m = build_model(ModelKind::Torus, 3, kTwoPi, A);
  std::vector<double> brute(A + 1, 0.0);
  for (int a = -20; a <= 20; ++a)
    for (int b = -20; b <= 20; ++b)
      for (int c = -20; c <= 20; ++c) {
        int s = a * a + b * b + c * c;
        if (s <= A) brute[s] += 1;
      }
  std::size_t j = 0;
  for (int s = 0; s <= A; ++s) {
    if (brute[s] == 0) continue;
    REQUIRE(j < m.lambda.size());
    CHECK(m.lambda[j] == doctest::Approx(double(s)).epsilon(1e-12));
    CHECK(m.mult[j] == brute[s]);
    ++j;
  }
  CHECK(j == m.lambda.size());
  CHECK(m.lambda[0] == 0.0);
  CHECK(m.mult[0] == 1.0);
  auto big = build_model(ModelKind::Torus, 3, kTwoPi, 1e6);
  CHECK(std::abs(big.weyl_ratio - 1) < 0.05);
  CHECK_THROWS_AS(build_model(ModelKind::Torus, 3, kTwoPi, 1e6, 1000), MemoryError);
  CHECK_THROWS_AS(build_model(ModelKind::Torus, 3, kTwoPi, -1), DomainError);
  CHECK_THROWS_AS(parse_model("cube:3:1", 10), ConfigError);
  CHECK(parse_model("sphere:3:1", 10).kind == ModelKind::Sphere);
}

TEST_CASE("ultrastatic: closed-form tau integral against quadrature") {
  SchwartzProfile p;
  for (cplx mu : {cplx(3.0, 0.01), cplx(0.0, 0.1), cplx(40.0, 0.0)}) {
    cplx a = level_tau_integral(p, mu, 2.0), b = level_tau_integral_quad(p, mu, 2.0);
    CHECK(std::abs(a - b) < 1e-8 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("ultrastatic: torus kernel matches the flat-space expansion") {
  SchwartzProfile p;
  // Λ = 10: lattice images of the flat kernel are below 1e−10 relative
  const double Lam = 10.0, eps = 1e-2;
  auto m = build_model(ModelKind::Torus, 3, kTwoPi, 6e5);
  auto k = kernel_diag(m, p, Lam, 0.0, eps);
  cplx pred = predicted_expansion(p, 4, 0.0, eps, 0.0, 0.0, Lam);
  CHECK(std::abs(k.value - pred) < 1e-6 * std::abs(pred));
  CHECK(k.tail <= 0.1 * 1e-6 * std::abs(k.value));
  // tail certificate: a cut 4x lower moves the value by less than its bound
  KernelOptions lo;
  lo.lambda_cut = k.lambda_cut / 4;
  auto k2 = kernel_diag(m, p, Lam, 0.0, eps, lo);
  CHECK(std::abs(k2.value - k.value) <= k2.tail);
  // translation invariance: independent of the side length
  auto m2 = build_model(ModelKind::Torus, 3, 2 * kTwoPi, 6e5);
  auto k3 = kernel_diag(m2, p, Lam, 0.0, eps);
  CHECK(std::abs(k3.value - k.value) <= 1e-6 * std::abs(k.value) + k.tail + k3.tail);
  // ε-regularity
  auto ke = kernel_diag(m, p, Lam, 0.0, eps / 2);
  CHECK(std::abs(ke.value - k.value) < 10 * eps * std::abs(k.value));
  // model truncated too low
  auto small = build_model(ModelKind::Torus, 3, kTwoPi, 1000);
  CHECK_THROWS_AS(kernel_diag(small, p, Lam, 0.0, eps), TailError);
}

TEST_CASE("ultrastatic: sphere kernel carries u_1 = 1") {
  SchwartzProfile p;
  const double eps = 1e-2;
  auto m = build_model(ModelKind::Sphere, 3, 1.0, 1e7);
  std::vector<double> L;
  std::vector<cplx> v;
  for (double lam = 6; lam <= 36; lam += 6) {
    L.push_back(lam);
    v.push_back(kernel_diag(m, p, lam, 0.0, eps).value);
  }
  auto fit = fit_expansion(L, v, 4, 3);
  auto c = predicted_coefficients(p, 4, 0.0, eps, 1.0, 0.0);
  CHECK(std::abs(fit.coef[0] - c[0]) < 1e-6 * std::abs(c[0]));
  CHECK(std::abs(fit.coef[1] - c[1]) < 1e-2 * std::abs(c[1]));
  // a_0 is universal
  CHECK(std::abs(std::abs(fit.coef[0]) - ck_coefficient(p, 4, 0) / (16 * 3.14159265358979323846 * 3.14159265358979323846)) <
        1e-6 * std::abs(c[0]));
}

TEST_CASE("ultrastatic: fit_expansion") {
  SchwartzProfile p;
  std::vector<double> L;
  std::vector<cplx> v, w;
  auto c = predicted_coefficients(p, 4, 0.5, 1e-2, 1.0, 0.3);
  for (double lam = 10; lam <= 60; lam += 10) {
    L.push_back(lam);
    v.push_back(predicted_expansion(p, 4, 0.5, 1e-2, 1.0, 0.3, lam));
  }
  auto f = fit_expansion(L, v, 4, 3);
  for (int j = 0; j < 3; ++j)
    CHECK(std::abs(f.coef[j] - c[j]) * std::pow(60.0, 4 - 2 * j) < 1e-10 * std::abs(v.back()));
  CHECK(f.residual < 1e-12);
  // Λ^{n−5} contamination of relative size 1e−3 at Λ_min
  double s = 1e-3 * std::abs(v[0]);
  for (std::size_t i = 0; i < L.size(); ++i) w.push_back(v[i] + s * (10.0 / L[i]));
  auto g = fit_expansion(L, w, 4, 3);
  CHECK(std::abs(g.coef[0] - c[0]) < 1e-4 * std::abs(c[0]));
  std::vector<double> dup(6, 10.0);
  CHECK_THROWS_AS(fit_expansion(dup, v, 4, 3), ConditioningError);
  CHECK_THROWS_AS(fit_expansion({10, 20, 30}, {v[0], v[1], v[2]}, 4, 3), DomainError);
  CHECK_THROWS_AS(fit_expansion({10, 11, 12, 13, 14, 15}, v, 4, 3), DomainError);
}

TEST_CASE("ultrastatic: mode resolvent") {
  const double h = 1e-2, t0 = -4;
  const int N = 801;
  std::vector<double> u(N), zero(N, 0.0);
  for (int j = 0; j < N; ++j) {
    double x = (t0 + j * h) / 2;
    u[j] = std::abs(x) < 1 ? std::exp(-1 / (1 - x * x)) : 0.0;
  }
  auto r = mode_resolvent_check(1.0, cplx(0, 1), t0, h, u);
  CHECK(r.residual <= 1e-4 * r.scale);
  // the printed normalization misses a factor i
  CHECK(r.residual_literal > 0.5 * r.scale);
  CHECK(r.vmax < 10 * r.scale);
  CHECK(mode_resolvent_check(1.0, cplx(0, 1), t0, h, zero).residual == 0.0);
  CHECK_THROWS_AS(mode_resolvent_check(1.0, cplx(0, 1), t0, h, u, -1), BranchError);
  CHECK_THROWS_AS(mode_resolvent_check(1.0, cplx(0, 1), t0, 0.5, u), GridError);
  std::vector<double> bad(N, 1.0);
  CHECK_THROWS_AS(mode_resolvent_check(1.0, cplx(0, 1), t0, h, bad), GridError);
}

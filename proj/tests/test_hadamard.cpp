#include <cmath>

#include "doctest.h"
#include "lspec/geomkit.hpp"
#include "lspec/hadamard.hpp"

using namespace lspec;

namespace {
// sphere chart: u_k(y) = (ρ/sin ρ)/k!, ρ = |spatial part of y|
double sphere_uk(int k, const Vec& y) {
  double r = y.tail(y.size() - 1).norm();
  return (r > 0 ? r / std::sin(r) : 1.0) / std::tgamma(k + 1.0);
}
}  // namespace

TEST_CASE("hadamard: minkowski is trivial") {
  auto m = make_metric("minkowski");
  NormalChart c(m, Vec::Zero(4));
  HadamardOptions o;
  o.metric_fit_dirs = 60;
  o.u_fit_dirs = 60;
  o.radial_nodes = 8;
  auto s = hadamard_sequence(c, 3, o);
  REQUIRE(s.diag.size() == 4);
  CHECK(s.diag[0] == 1.0);
  for (int k = 1; k <= 3; ++k) CHECK(std::abs(s.diag[k]) < 1e-10);
  Vec y(4);
  y << 0.01, 0.02, -0.03, 0.005;
  CHECK(std::abs(u0_exact(c, y) - 1.0) < 1e-12);
  CHECK(std::abs(h_function(c, y)) < 1e-10);
  CHECK(h_function(c, Vec::Zero(4)) == 0.0);
  CHECK(hadamard_sequence(c, 0, o).diag == std::vector<double>{1.0});
}

TEST_CASE("hadamard: sphere grid against the exact coefficients") {
  auto m = make_metric("ultrastatic-sphere");
  Vec x = default_point(*m);
  NormalChart c(m, x);
  double R = curvature(*m, x).scalar;
  auto s = hadamard_sequence(c, 2);
  CHECK(s.directions.size() == 24);
  CHECK(std::abs(s.diag[1] + R / 6) <= 1e-3 * std::max(1.0, std::abs(R)));
  CHECK(std::abs(s.diag[1] - 1.0) < 1e-6);
  CHECK(std::abs(s.diag[2] - 0.5) < 1e-5);
  double worst = 0;
  for (int k = 0; k <= 2; ++k) {
    for (std::size_t d = 0; d < s.directions.size(); ++d)
      for (std::size_t j = 0; j < s.t.size(); ++j) {
        Vec y = s.directions[d] * s.t[j];
        worst = std::max(worst, std::abs(s.values[k][d][j] - sphere_uk(k, y)));
      }
    CHECK(std::isfinite(s.diag[k]));
  }
  CHECK(worst < 1e-5);
  for (int k = 1; k <= 2; ++k) {
    CHECK(s.residuals[k] <= 1e-3);
    CHECK(s.diag_spread[k] <= 1e-3);
    CHECK(std::abs(s.diag[k] - s.diag_direct[k]) < 1e-6);
  }
}

TEST_CASE("hadamard: expanding metric u_1 = -R/6") {
  auto m = make_metric("expanding");
  Vec x = default_point(*m);
  NormalChart c(m, x);
  double R = curvature(*m, x).scalar;
  auto s = hadamard_sequence(c, 1);
  CHECK(std::abs(s.diag[1] + R / 6) <= 1e-3 * std::max(1.0, std::abs(R)));
  CHECK(s.diag[1] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(s.residuals[1] <= 1e-3);
  CHECK(s.diag_spread[1] <= 1e-3);
}

TEST_CASE("hadamard: u0 and h") {
  auto m = make_metric("expanding");
  Vec x = default_point(*m);
  NormalChart c(m, x);
  auto cv = curvature(*m, x);
  const Mat& E = c.frame().e;
  HadamardOptions o;
  HadamardSolver S(c, 0, o);
  auto dirs = sample_directions(4, 12, 5);
  for (auto& d : dirs) {
    Vec y = 1e-2 * d;
    double ric = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) ric += cv.Ric(a, b) * E(a, k) * E(b, l) * y[k] * y[l];
    CHECK(std::abs(u0_exact(c, y) - (1 + ric / 12)) < 1e-5);
    CHECK(std::abs(S.u0(y.data()) - u0_exact(c, y)) < 1e-8);
    // u0 |g̃|^{1/4} = 1
    double det = std::abs(c.pulled_metric(0.5 * c.radius() * d).determinant());
    CHECK(std::abs(u0_exact(c, 0.5 * c.radius() * d) * std::pow(det, 0.25) - 1) < 1e-8);
    Vec z = 0.6 * c.radius() * d;
    CHECK(std::abs(h_function(c, z) - S.b_dot_eta_y(z.data())) < 1e-6);
    CHECK(std::abs(h_function(c, z) - S.h(z.data())) < 1e-6);
  }
  CHECK(u0_exact(c, Vec::Zero(4)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(u0_exact(c, Vec::Constant(4, c.radius())), DomainError);
  CHECK_THROWS_AS(h_function(c, Vec::Constant(4, c.radius())), DomainError);
}

TEST_CASE("hadamard: option errors") {
  auto m = make_metric("minkowski");
  NormalChart c(m, Vec::Zero(4));
  HadamardOptions o;
  o.radial_nodes = 7;
  CHECK_THROWS_AS(hadamard_sequence(c, 1, o), GridError);
  CHECK_THROWS_AS(hadamard_sequence(c, 4), DomainError);
}

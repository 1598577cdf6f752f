#include <cmath>

#include "doctest.h"
#include "lspec/geomkit.hpp"
#include "lspec/quad.hpp"

using namespace lspec;

namespace {
double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}
}  // namespace

TEST_CASE("curvature: minkowski is flat") {
  auto m = make_metric("minkowski");
  Vec x = Vec::Constant(4, 0.3);
  auto c = curvature(*m, x);
  CHECK(std::abs(c.scalar) < 1e-14);
  CHECK(max_abs(c.riemann) < 1e-14);
}

TEST_CASE("curvature: sphere and expanding agree with FD oracle") {
  for (std::string name : {"ultrastatic-sphere", "expanding"}) {
    auto m = make_metric(name);
    Vec x = default_point(*m);
    auto a = curvature(*m, x);
    auto b = curvature_fd(*m, x);
    CHECK(std::abs(a.scalar - b.scalar) < 1e-5);
    for (std::size_t k = 0; k < a.riemann.size(); ++k)
      CHECK(std::abs(a.riemann[k] - b.riemann[k]) < 1e-5);
    CHECK(a.symmetry_defect() < 1e-8);
  }
  // frozen values: unit S^3 factor gives R = -6, H = 1 expansion gives -12
  CHECK(curvature(*make_metric("ultrastatic-sphere"), default_point(*make_metric("ultrastatic-sphere"))).scalar ==
        doctest::Approx(-6.0).epsilon(1e-12));
  CHECK(curvature(*make_metric("expanding"), Vec::Zero(4)).scalar == doctest::Approx(-12.0).epsilon(1e-12));
}

TEST_CASE("curvature: scalar is the trace of Ricci") {
  auto m = make_metric("expanding");
  Vec x(4);
  x << 0.2, 0.1, -0.3, 0.5;
  auto c = curvature(*m, x);
  Mat gi = m->g(x).inverse();
  double s = 0;
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) s += gi(k, l) * c.Ric(k, l);
  CHECK(std::abs(s - c.scalar) < 1e-12);
}

TEST_CASE("curvature: errors") {
  auto m = make_metric("expanding");
  Vec out = Vec::Constant(4, 5.0);
  CHECK_THROWS_AS(curvature(*m, out), DomainError);
  auto bad = make_analytic("riemannian", 2, Box{Vec::Constant(2, -1), Vec::Constant(2, 1)},
                           [](const auto* x, auto* g) {
                             using T = std::decay_t<decltype(x[0])>;
                             g[0] = T(1.0) + 0.0 * x[0];
                             g[1] = g[2] = T(0.0);
                             g[3] = T(1.0);
                           });
  CHECK_THROWS_AS(curvature(*bad, Vec::Zero(2)), SignatureError);
}

TEST_CASE("table metric derivatives track the analytic jet") {
  auto m = make_metric("expanding");
  Vec lo = Vec::Constant(4, -0.6), sp = Vec::Constant(4, 0.05);
  auto t = tabulate(*m, lo, sp, std::vector<int>(4, 25));
  Vec x(4);
  x << 0.03, 0.01, -0.02, 0.04;
  MetricJet a, b;
  m->jet(x.data(), 2, a);
  t->jet(x.data(), 2, b);
  double scale = std::max(1.0, max_abs(a.dg));
  for (std::size_t k = 0; k < a.dg.size(); ++k) CHECK(std::abs(a.dg[k] - b.dg[k]) < 1e-5 * scale);
  CHECK(std::abs(curvature(*t, x).scalar - curvature(*m, x).scalar) < 1e-3);
}

TEST_CASE("frame is orthonormal and future directed") {
  for (std::string name : {"ultrastatic-sphere", "expanding", "ultrastatic-torus"}) {
    auto m = make_metric(name);
    Vec x = default_point(*m);
    Frame f = make_frame(*m, x);
    Mat G = f.e.transpose() * m->g(x) * f.e;
    CHECK((G - eta(4)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(f.e(0, 0) > 0);
  }
}

TEST_CASE("exp_map: flat, arclength, affine scaling") {
  auto mk = make_metric("minkowski");
  Vec x(4), v(4);
  x << 0.1, 0.2, 0.3, 0.4;
  v << 0.5, -0.2, 0.7, 1.1;
  CHECK((exp_map(*mk, x, v) - (x + v)).norm() < 1e-12);

  // spatial geodesic in the unit S^3 factor: length of a spacelike vector
  auto sp = make_metric("ultrastatic-sphere");
  Vec b = default_point(*sp);
  Mat g = sp->g(b);
  Vec w(4);
  w << 0.0, 0.3, -0.2, 0.4;
  double ell = std::sqrt(-w.dot(g * w));
  // arclength oracle: sample the path and integrate the speed with GL
  auto rule = gauss_legendre(20, 0.0, 1.0);
  auto samples = geodesic(*sp, b, w, rule.x, nullptr);
  double len = 0;
  for (std::size_t k = 0; k < rule.x.size(); ++k) {
    Mat gk = sp->g(samples[k].x);
    len += rule.w[k] * std::sqrt(-samples[k].v.dot(gk * samples[k].v));
  }
  CHECK(std::abs(len - ell) < 1e-8);
  // distance on the round sphere via the embedding in R^4
  auto embed = [](const Vec& p) {
    Eigen::Vector4d e;
    double c1 = std::cos(p[1]), s1 = std::sin(p[1]);
    double c2 = std::cos(p[2]), s2 = std::sin(p[2]);
    e << c1, s1 * c2, s1 * s2 * std::cos(p[3]), s1 * s2 * std::sin(p[3]);
    return e;
  };
  Vec end = exp_map(*sp, b, w);
  double ang = std::acos(std::clamp(embed(b).dot(embed(end)), -1.0, 1.0));
  CHECK(std::abs(ang - ell) < 1e-8);

  // exp(x, t v) is the point at parameter t of the geodesic with velocity v
  double t = 0.6;
  auto mid = geodesic(*sp, b, w, {t}, nullptr).back().x;
  CHECK((exp_map(*sp, b, t * w) - mid).norm() < 1e-9);
}

TEST_CASE("exp_map escape") {
  auto m = make_metric("expanding");
  Vec v = Vec::Zero(4);
  v[1] = 10.0;
  CHECK_THROWS_AS(exp_map(*m, Vec::Zero(4), v), EscapeError);
}

TEST_CASE("normal chart: minkowski and origin") {
  NormalChart c(make_metric("minkowski"), Vec::Zero(4));
  Vec y(4);
  y << 0.1, -0.2, 0.05, 0.3;
  CHECK((c.pulled_metric(y) - eta(4)).cwiseAbs().maxCoeff() < 1e-12);
  NormalChart s(make_metric("ultrastatic-sphere"), default_point(*make_metric("ultrastatic-sphere")));
  CHECK((s.pulled_metric(Vec::Zero(4)) - eta(4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("normal chart: radial identity on 100 points") {
  for (std::string name : {"ultrastatic-sphere", "expanding"}) {
    auto m = make_metric(name);
    NormalChart c(m, default_point(*m));
    auto dirs = sample_directions(4, 100, 17);
    Mat et = eta(4);
    double worst = 0;
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      Vec y = dirs[k] * c.radius() * (0.1 + 0.9 * double(k) / dirs.size());
      Vec lhs = c.pulled_metric(y) * y, rhs = et * y;
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff() / (1 + y.norm()));
    }
    CHECK(worst < 1e-7);
  }
}

TEST_CASE("normal chart: quadratic expansion and Taylor jet") {
  for (std::string name : {"ultrastatic-sphere", "expanding"}) {
    auto m = make_metric(name);
    Vec x = default_point(*m);
    NormalChart c(m, x);
    // curvature in the orthonormal frame
    auto cv = curvature(*m, x);
    const Mat& E = c.frame().e;
    auto Rf = [&](int i, int k, int j, int l) {
      double s = 0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          for (int cc = 0; cc < 4; ++cc)
            for (int d = 0; d < 4; ++d)
              s += cv.R(a, b, cc, d) * E(a, i) * E(b, k) * E(cc, j) * E(d, l);
      return s;
    };
    Vec y(4);
    y << 0.004, -0.006, 0.003, 0.005;
    Mat gt = c.pulled_metric(y);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double q = 0;
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) q += Rf(i, k, j, l) * y[k] * y[l] / 3.0;
        CHECK(std::abs(gt(i, j) - eta(4)(i, j) - q) < 1e-5);
      }
    Taylor2 t = metric_taylor2(c);
    double worst = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            double expect = (Rf(i, k, j, l) + Rf(i, l, j, k)) / 6.0;
            worst = std::max(worst, std::abs(t.at(i, j, k, l) - expect));
          }
    CHECK(worst < 1e-4);
    // trace: η^{ij} T_ijkl = -(1/3) Ric_kl in the frame
    Mat et = eta(4);
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l) {
        double tr = 0, ric = 0;
        for (int i = 0; i < 4; ++i) tr += et(i, i) * t.at(i, i, k, l);
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) ric += cv.Ric(a, b) * E(a, k) * E(b, l);
        CHECK(std::abs(tr + ric / 3.0) < 1e-4);
      }
  }
}

TEST_CASE("normal chart: shooting inverse") {
  auto m = make_metric("ultrastatic-sphere");
  NormalChart c(m, default_point(*m));
  auto dirs = sample_directions(4, 6, 3);
  for (auto& d : dirs) {
    Vec p = c.point(0.4 * c.radius() * d);
    Vec y = c.normal_coords(p);
    CHECK((c.point(y) - p).norm() < 1e-8);
    CHECK((y - 0.4 * c.radius() * d).norm() < 1e-7);
  }
}

TEST_CASE("normal chart: requested radius too large") {
  auto m = make_metric("expanding");
  ChartOptions o;
  o.radius = 50.0;
  CHECK_THROWS_AS(NormalChart(m, Vec::Zero(4), o), RadiusError);
}

#include <cmath>

#include "doctest.h"
#include "lspec/scflow.hpp"

using namespace lspec;

namespace {
double line_distance(const Vec& p, const Vec& a, const Vec& dir) {
  Vec d = dir.normalized(), w = p - a;
  return (w - w.dot(d) * d).norm() / std::max(1.0, w.norm());
}
}  // namespace

TEST_CASE("scflow: straight bicharacteristic in Minkowski") {
  auto m = make_metric("minkowski");
  Vec x = Vec::Zero(4), xi(4);
  xi << 1.0, 0.6, 0.0, 0.8;  // null
  ScPhasePoint p(x, xi);
  CHECK(std::abs(p.fiber_direction().norm() - 1) < 1e-10);
  CHECK(p.rho() == 1.0);
  auto f = hamilton_step(*m, p, +1);
  CHECK(f.cls == FlowClass::ReachedLPlus);
  CHECK(f.closest_plus < 1e-3);
  CHECK(f.max_char_defect < 1e-6);
  // ẋ = −2η^{-1}ξ: the spatial direction is −(0.6, 0, 0.8), time forward is −1
  Vec v(4);
  v << -2.0, 1.2, 0.0, 1.6;
  for (auto& s : f.samples) {
    CHECK(line_distance(s.x, x, v) < 1e-8);
    CHECK(s.x.dot(v) >= -1e-12);
    CHECK(s.rho > 0);
    CHECK(s.rho <= 1);
  }
  auto b = hamilton_step(*m, p, -1);
  CHECK(b.cls == FlowClass::ReachedLMinus);
  CHECK(b.closest_minus < 1e-3);
  CHECK(b.samples.back().x.dot(v) < 0);
  Vec bad(4);
  bad << 1.0, 0.0, 0.0, 0.0;
  CHECK_THROWS_AS(hamilton_step(*m, ScPhasePoint(x, bad), 1), CharacteristicError);
}

TEST_CASE("scflow: scale invariance and time translation") {
  auto m = make_metric("minkowski");
  Vec x(4), xi(4);
  x << 0.3, -0.5, 1.0, 0.2;
  xi << -1.0, 0.0, 0.6, -0.8;
  auto a = hamilton_step(*m, ScPhasePoint(x, xi), 1);
  auto b = hamilton_step(*m, ScPhasePoint(x, 2.0 * xi), 1);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK((a.samples[i].xi - b.samples[i].xi).norm() < 1e-8);
    CHECK((a.samples[i].x - b.samples[i].x).norm() < 1e-8 * std::max(1.0, a.samples[i].x.norm()));
  }
  Vec shift = Vec::Zero(4);
  shift[0] = 1.5;
  auto c = hamilton_step(*m, ScPhasePoint(x + shift, xi), 1);
  CHECK(c.cls == a.cls);
  Vec v = xi;
  v[0] = -v[0];  // ηξ up to sign
  for (auto& s : a.samples) CHECK(line_distance(s.x, x, v) < 1e-8);
  for (auto& s : c.samples) CHECK(line_distance(s.x, x + shift, v) < 1e-8);
  CHECK((c.xi_end - a.xi_end).norm() < 1e-8);
}

TEST_CASE("scflow: Minkowski certificate") {
  auto m = make_metric("minkowski");
  auto r = nontrapping_certificate(*m, 100);
  CHECK(r.pass);
  CHECK(r.classified == 100);
  CHECK(r.minus_to_plus == 100);
  CHECK(r.worst_closest < 1e-3);
  CHECK(r.reversal_swaps);
  for (auto& t : r.trajectories) CHECK(t.char_defect < 1e-6);
  auto z = nontrapping_certificate(*m, 0);
  CHECK(z.pass);
  CHECK(z.trajectories.empty());
}

TEST_CASE("scflow: trapping lens fails the certificate") {
  auto m = make_metric("trapping-lens");
  FlowOptions o;
  o.max_steps = 20000;
  auto r = nontrapping_certificate(*m, 20, 12, 1.5, o);
  CHECK_FALSE(r.pass);
  CHECK(r.exhausted > 0);
  CHECK(r.classified + r.exhausted + r.escaped + r.failed >= 20);
}

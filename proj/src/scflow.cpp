#include "lspec/scflow.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <random>

#include "lspec/parallel.hpp"

namespace lspec {

namespace odeint = boost::numeric::odeint;

ScPhasePoint::ScPhasePoint(const Vec& x_, const Vec& xi_raw) : x(x_) {
  if (x_.size() != xi_raw.size()) throw DomainError("x and xi dimensions differ");
  double nrm = xi_raw.norm();
  if (!(nrm > 0)) throw CharacteristicError("zero covector");
  xi = xi_raw / nrm;
  fiber_scale = 1.0 / std::sqrt(1.0 + nrm * nrm);
}

double ScPhasePoint::rho() const { return 1.0 / std::sqrt(1.0 + x.squaredNorm()); }

std::string to_string(FlowClass c) {
  switch (c) {
    case FlowClass::ReachedLPlus: return "reached_L_plus";
    case FlowClass::ReachedLMinus: return "reached_L_minus";
    case FlowClass::Escaped: return "escaped";
    default: return "budget_exhausted";
  }
}

namespace {
// outside its patch the metric is continued by η (compact perturbation of Minkowski)
Mat sc_metric(const MetricField& m, const double* x) {
  const int n = m.dim();
  if (m.patch().contains(x)) return m.g(Eigen::Map<const Vec>(x, n));
  Mat e = Mat::Identity(n, n) * -1.0;
  e(0, 0) = 1.0;
  return e;
}
}  // namespace

double principal_symbol(const MetricField& m, const Vec& x, const Vec& xi) {
  return -xi.dot(sc_metric(m, x.data()).inverse() * xi);
}

void radial_distances(const Vec& x, const Vec& xi, double& dp, double& dm) {
  const double rho = 1.0 / std::sqrt(1.0 + x.squaredNorm());
  double r = x.norm();
  if (r == 0.0) {
    dp = dm = 1.0;
    return;
  }
  Vec xh = x / r;
  double v = std::abs(xh[0] * xh[0] - xh.tail(xh.size() - 1).squaredNorm());
  Vec ex = xh;
  ex.tail(ex.size() - 1) *= -1.0;  // η x̂
  ex.normalize();
  Vec xn = xi.normalized();
  // L_+: ξ̂ = −ηx̂, L_−: ξ̂ = +ηx̂ (on the light cone at infinity)
  dp = std::max({rho, v, (xn + ex).norm()});
  dm = std::max({rho, v, (xn - ex).norm()});
}

namespace {

using State = std::vector<double>;

struct Rhs {
  const MetricField& m;
  int n;
  double dir;
  void operator()(const State& s, State& ds, double) const {
    MetricJet jet;
    const bool inside = m.patch().contains(s.data());
    if (inside) {
      m.jet(s.data(), 1, jet);
    } else {
      jet.n = n;
      jet.g.assign(n * n, 0.0);
      jet.dg.assign(n * n * n, 0.0);
      for (int i = 0; i < n; ++i) jet.g[i * n + i] = i == 0 ? 1.0 : -1.0;
    }
    Eigen::Map<const Eigen::Matrix<double, -1, -1, Eigen::RowMajor>> G(jet.g.data(), n, n);
    Mat gi = Mat(G).inverse();
    Eigen::Map<const Vec> xi(s.data() + n, n);
    double xn2 = 0.0;
    for (int i = 0; i < n; ++i) xn2 += s[i] * s[i];
    const double f = dir * std::sqrt(1.0 + xn2) / xi.norm();
    Vec gx = gi * xi;
    for (int i = 0; i < n; ++i) ds[i] = -2.0 * f * gx[i];
    // ∂_c(ξ·g^{-1}ξ) = −(g^{-1}ξ)·∂_c g·(g^{-1}ξ)
    for (int c = 0; c < n; ++c) {
      double acc = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) acc += gx[a] * jet.d(c, a, b) * gx[b];
      ds[n + c] = -f * acc;
    }
  }
};

}  // namespace

FlowResult hamilton_step(const MetricField& m, const ScPhasePoint& p, int direction,
                         const FlowOptions& opt) {
  if (direction != 1 && direction != -1) throw DomainError("direction must be +1 or -1");
  const int n = m.dim();
  if (p.x.size() != n) throw DimensionError("phase point dimension does not match the metric");
  const double p0 = principal_symbol(m, p.x, p.xi);
  if (std::abs(p0) >= 1e-8) throw CharacteristicError("phase point is not characteristic");

  FlowResult res;
  State s(2 * n);
  for (int i = 0; i < n; ++i) {
    s[i] = p.x[i];
    s[n + i] = p.xi[i];
  }
  Rhs rhs{m, n, double(direction)};
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(opt.tol, opt.tol);
  std::vector<double> dists;
  auto record = [&](double tau) {
    Eigen::Map<const Vec> x(s.data(), n), xi(s.data() + n, n);
    FlowSample fs;
    fs.tau = tau;
    fs.rho = 1.0 / std::sqrt(1.0 + x.squaredNorm());
    radial_distances(x, xi, fs.dist_plus, fs.dist_minus);
    double d = principal_symbol(m, x, xi);
    res.max_char_defect = std::max(res.max_char_defect, std::abs(d));
    dists.push_back(direction > 0 ? fs.dist_plus : fs.dist_minus);
    if (res.samples.empty()) {
      res.closest_plus = fs.dist_plus;
      res.closest_minus = fs.dist_minus;
    }
    res.closest_plus = std::min(res.closest_plus, fs.dist_plus);
    res.closest_minus = std::min(res.closest_minus, fs.dist_minus);
    if (opt.keep_samples) {
      fs.x = x;
      fs.xi = xi;
    }
    res.samples.push_back(std::move(fs));
    return res.samples.back();
  };
  double tau = 0.0, dt = 1e-2;
  FlowSample last = record(tau);
  auto decreasing_tail = [&]() {
    std::size_t k = dists.size(), start = k - std::max<std::size_t>(2, k / 4);
    for (std::size_t i = start + 1; i < k; ++i)
      if (dists[i] > dists[i - 1] * (1 + 1e-9)) return false;
    return true;
  };
  try {
    while (true) {
      if (tau >= opt.tau_budget || res.steps >= opt.max_steps) {
        res.cls = FlowClass::BudgetExhausted;
        break;
      }
      dt = std::min(dt, opt.tau_budget - tau);
      if (stepper.try_step(rhs, s, tau, dt) != odeint::success) {
        if (dt < 1e-14) throw StepError("step size underflow in Hamilton flow");
        continue;
      }
      ++res.steps;
      Eigen::Map<Vec> xi(s.data() + n, n);
      xi.normalize();
      last = record(tau);
      if (last.dist_plus < opt.capture && dists.size() >= 4 && decreasing_tail() && direction > 0) {
        res.cls = FlowClass::ReachedLPlus;
        break;
      }
      if (last.dist_minus < opt.capture && dists.size() >= 4 && decreasing_tail() && direction < 0) {
        res.cls = FlowClass::ReachedLMinus;
        break;
      }
      if (std::min(last.dist_plus, last.dist_minus) < opt.capture) {
        // captured by the set the direction does not head for
        res.cls = last.dist_plus < last.dist_minus ? FlowClass::ReachedLPlus : FlowClass::ReachedLMinus;
        break;
      }
      if (last.rho < 1e-8) {
        res.cls = FlowClass::Escaped;
        break;
      }
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw StepError(e.what());
  }
  res.tau = tau;
  res.x_end = Eigen::Map<const Vec>(s.data(), n);
  res.xi_end = Eigen::Map<const Vec>(s.data() + n, n);
  return res;
}

ScPhasePoint random_characteristic(const MetricField& m, const Vec& x, std::uint64_t seed) {
  const int n = m.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  Vec z(n - 1);
  for (int i = 0; i < n - 1; ++i) z[i] = N(rng);
  z.normalize();
  bool up = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
  Mat gi = sc_metric(m, x.data()).inverse();
  double a = gi(0, 0), b = 0.0, c = 0.0;
  for (int i = 1; i < n; ++i) {
    b += gi(0, i) * z[i - 1];
    for (int j = 1; j < n; ++j) c += gi(i, j) * z[i - 1] * z[j - 1];
  }
  double disc = b * b - a * c;
  if (!(disc >= 0) || a == 0.0) throw SignatureError("no null covector over this point");
  double x0 = (-b + (up ? 1 : -1) * std::sqrt(disc)) / a;
  Vec xi(n);
  xi[0] = x0;
  xi.tail(n - 1) = z;
  return ScPhasePoint(x, xi);
}

NontrappingReport nontrapping_certificate(const MetricField& m, int count, std::uint64_t seed,
                                          double region, const FlowOptions& opt_in) {
  if (count < 0) throw DomainError("sample count must be >= 0");
  NontrappingReport rep;
  rep.samples = count;
  if (count == 0) return rep;
  const int n = m.dim();
  FlowOptions opt = opt_in;
  opt.keep_samples = false;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-region, region);
  std::vector<Vec> xs(count);
  std::vector<std::uint64_t> seeds(count);
  for (int k = 0; k < count; ++k) {
    xs[k] = Vec(n);
    for (int i = 0; i < n; ++i) xs[k][i] = U(rng);
    seeds[k] = rng();
  }
  rep.trajectories.resize(count);
  parallel_for(count, [&](std::size_t k) {
    TrajectoryRecord& t = rep.trajectories[k];
    try {
      ScPhasePoint p = random_characteristic(m, xs[k], seeds[k]);
      t.x = p.x;
      t.xi = p.xi;
      auto f = hamilton_step(m, p, +1, opt);
      auto b = hamilton_step(m, p, -1, opt);
      t.forward = f.cls;
      t.backward = b.cls;
      t.closest_forward = f.cls == FlowClass::ReachedLMinus ? f.closest_minus : f.closest_plus;
      t.closest_backward = b.cls == FlowClass::ReachedLPlus ? b.closest_plus : b.closest_minus;
      t.char_defect = std::max(f.max_char_defect, b.max_char_defect);
    } catch (const Error& e) {
      t.error = e.what();
    }
  });
  for (auto& t : rep.trajectories) {
    if (!t.error.empty()) {
      ++rep.failed;
      continue;
    }
    bool mp = t.backward == FlowClass::ReachedLMinus && t.forward == FlowClass::ReachedLPlus;
    bool pm = t.backward == FlowClass::ReachedLPlus && t.forward == FlowClass::ReachedLMinus;
    if (mp) ++rep.minus_to_plus;
    if (pm) ++rep.plus_to_minus;
    if (mp || pm) {
      ++rep.classified;
      rep.worst_closest = std::max({rep.worst_closest, t.closest_forward, t.closest_backward});
    } else {
      rep.reversal_swaps = false;
    }
    if (t.forward == FlowClass::Escaped || t.backward == FlowClass::Escaped) ++rep.escaped;
    if (t.forward == FlowClass::BudgetExhausted || t.backward == FlowClass::BudgetExhausted)
      ++rep.exhausted;
  }
  rep.pass = rep.classified == rep.samples;
  return rep;
}

}  // namespace lspec

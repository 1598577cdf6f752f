#include "lspec/contour.hpp"

#include <cmath>
#include <limits>

#include "lspec/parallel.hpp"
#include "lspec/quad.hpp"

namespace lspec {

cplx Segment::point(double t) const {
  return arc ? center + radius * std::polar(1.0, t) : center + t * std::polar(1.0, angle);
}

void validate(const ContourSpec& s) {
  if (s.kind == ContourKind::EtaDelta) {
    if (!(s.theta > kPi / 2 && s.theta < kPi)) throw DomainError("eta_delta needs theta in (pi/2, pi)");
    if (!(s.delta > 0)) throw DomainError("eta_delta needs delta > 0");
  } else {
    if (!(s.theta > 0 && s.theta < kPi / 2)) throw DomainError("gamma contours need theta in (0, pi/2)");
    if (s.kind == ContourKind::GammaEps && !(s.eps > 0)) throw DomainError("gamma_eps needs eps > 0");
  }
}

std::vector<Segment> contour_segments(const ContourSpec& s) {
  validate(s);
  const double inf = std::numeric_limits<double>::infinity(), th = s.theta;
  std::vector<Segment> seg;
  auto ray = [&](cplx c, double ang, double r0, double r1) {
    Segment g;
    g.center = c;
    g.angle = ang;
    g.r0 = r0;
    g.r1 = r1;
    seg.push_back(g);
  };
  auto arc = [&](cplx c, double rad, double w0, double w1) {
    Segment g;
    g.arc = true;
    g.center = c;
    g.radius = rad;
    g.w0 = w0;
    g.w1 = w1;
    seg.push_back(g);
  };
  switch (s.kind) {
    case ContourKind::GammaEps: {
      cplx c(0.0, s.eps);
      double r = 0.5 * s.eps;
      ray(c, kPi - th, inf, r);
      arc(c, r, kPi - th, 2 * kPi + th);
      ray(c, th, r, inf);
      break;
    }
    case ContourKind::Gamma0:
      ray(0.0, kPi - th, inf, 0.0);
      ray(0.0, th, 0.0, inf);
      break;
    case ContourKind::EtaDelta:
      ray(0.0, th, inf, s.delta);
      arc(0.0, s.delta, th, -th);
      ray(0.0, -th, s.delta, inf);
      break;
  }
  if (s.mirrored) {
    std::vector<Segment> m;
    for (auto it = seg.rbegin(); it != seg.rend(); ++it) {
      Segment g = *it;
      g.center = std::conj(g.center);
      if (g.arc) {
        g.w0 = -it->w1;
        g.w1 = -it->w0;
      } else {
        g.angle = -g.angle;
        std::swap(g.r0, g.r1);
      }
      m.push_back(g);
    }
    seg = m;
  }
  return seg;
}

namespace {

constexpr double kRayFloor = 1e-14;  // rays through 0 start here

struct Piece {
  cplx v{};
  double err = 0.0, l1 = 0.0;
};

// ∫ over the ray between radii a < b (outward), in s = log r.
Piece ray_piece(const CFun& f, const Segment& g, double a, double b, double rel) {
  const cplx e = std::polar(1.0, g.angle);
  Piece p;
  double sa = std::log(a), sb = std::log(b);
  int panels = std::max(1, int(std::ceil((sb - sa) / 2.0)));
  for (int k = 0; k < panels; ++k) {
    double lo = sa + (sb - sa) * k / panels, hi = sa + (sb - sa) * (k + 1) / panels;
    auto h = [&](double s) {
      double r = std::exp(s);
      return f(g.center + r * e) * (r * e);
    };
    auto q = gk_adaptive(h, lo, hi, rel, 15);
    p.v += q.value;
    p.err += q.error;
    auto ha = [&](double s) { return std::abs(h(s)); };
    p.l1 += gk_adaptive(ha, lo, hi, 1e-6, 8).value;
  }
  return p;
}

Piece arc_piece(const CFun& f, const Segment& g, double rel) {
  auto h = [&](double w) {
    cplx u = g.radius * std::polar(1.0, w);
    return f(g.center + u) * (kI * u);
  };
  auto q = gk_adaptive(h, std::min(g.w0, g.w1), std::max(g.w0, g.w1), rel, 15);
  Piece p;
  p.v = g.w1 >= g.w0 ? q.value : -q.value;
  p.err = q.error;
  p.l1 = gk_adaptive([&](double w) { return std::abs(h(w)); }, std::min(g.w0, g.w1),
                     std::max(g.w0, g.w1), 1e-6, 8).value;
  return p;
}

}  // namespace

cplx cpow_cut(cplx a, cplx b, double cut) {
  if (a == cplx(0.0, 0.0)) return 0.0;
  double t = std::arg(a);
  while (t > cut) t -= 2 * kPi;
  while (t <= cut - 2 * kPi) t += 2 * kPi;
  return std::exp(b * cplx(std::log(std::abs(a)), t));
}

cplx regulated_power(cplx z, cplx alpha, double eps, int sign) {
  if (sign < 0) return cpow_cut(z - kI * eps, -alpha, kPi / 2);
  return cpow_cut(z + kI * eps, -alpha, 3 * kPi / 2);
}

ContourSpec power_contour(double eps, int sign, double theta) {
  ContourSpec s;
  s.kind = ContourKind::GammaEps;
  s.eps = eps;
  s.theta = theta;
  s.mirrored = sign > 0;
  return s;
}

ContourResult contour_quadrature(const CFun& f, const ContourSpec& spec, double beta, double tol) {
  if (!(beta > 0)) throw DomainError("decay exponent beta must be positive");
  auto segs = contour_segments(spec);
  const double inf = std::numeric_limits<double>::infinity();
  double zmax = spec.zmax > 0 ? spec.zmax : 16.0;
  for (const auto& g : segs) zmax = std::max(zmax, 8.0 * (std::abs(g.center) + g.radius + (g.arc ? 0 : std::min(g.r0, g.r1))));
  const double rel = std::min(1e-10, tol);

  // finite parts: arcs plus rays up to zmax, segments in parallel
  std::vector<Piece> parts(segs.size());
  parallel_for(segs.size(), [&](std::size_t i) {
    const Segment& g = segs[i];
    if (g.arc) {
      parts[i] = arc_piece(f, g, rel);
      return;
    }
    double inner = std::min(g.r0, g.r1);
    Piece p = ray_piece(f, g, std::max(inner, kRayFloor), zmax, rel);
    if (g.r0 == inf) p.v = -p.v;  // incoming
    parts[i] = p;
  });

  ContourResult res;
  for (int iter = 0;; ++iter) {
    Piece tot;
    for (const auto& p : parts) {
      tot.v += p.v;
      tot.err += p.err;
      tot.l1 += p.l1;
    }
    // tail certificate from samples on each infinite ray
    double tail = 0.0;
    for (const auto& g : segs) {
      if (g.arc || (g.r0 != inf && g.r1 != inf)) continue;
      double m[4], rr[4] = {0.5 * zmax, zmax, 2 * zmax, 4 * zmax};
      for (int k = 0; k < 4; ++k) {
        cplx z = g.point(rr[k]);
        m[k] = std::abs(f(z)) * std::pow(std::abs(z), 1 + beta);
      }
      if (m[3] > 4.0 * m[0] + 1e-300 && m[3] > m[2] && m[2] > m[1])
        throw TailError("integrand decays slower than the declared |z|^{-1-beta}");
      double C = std::max(std::max(m[0], m[1]), std::max(m[2], m[3]));
      tail += C * std::pow(zmax, -beta) / beta;
    }
    double scale = std::max(std::abs(tot.v), tot.l1);
    res.value = tot.v;
    res.tail = tail;
    res.error = tot.err + tail;
    res.zmax = zmax;
    res.l1 = tot.l1;
    if (tail <= tol * scale) break;
    if (zmax > 1e15 || iter > 40)
      throw ToleranceError("contour truncation could not meet the tolerance");
    double next = zmax * 16.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const Segment& g = segs[i];
      if (g.arc || (g.r0 != inf && g.r1 != inf)) continue;
      Piece p = ray_piece(f, g, zmax, next, rel);
      if (g.r0 == inf) p.v = -p.v;
      parts[i].v += p.v;
      parts[i].err += p.err;
      parts[i].l1 += p.l1;
    }
    zmax = next;
  }
  if (res.error > std::max(1e3 * tol, 1e-6) * std::max(std::abs(res.value), res.l1))
    throw ToleranceError("contour quadrature error estimate above tolerance");
  return res;
}

cplx pochhammer_factor(cplx alpha, int m) {
  cplx p = 1.0;
  for (int j = 0; j < m; ++j) p *= alpha + double(j);
  return p;
}

IdentityCheck power_identity_check(cplx alpha, int k, double eps, double xi_q, int sign,
                                   double theta) {
  if (!(alpha.real() > 0)) throw DomainError("power identity needs Re alpha > 0");
  if (k < 0) throw DomainError("k must be >= 0");
  if (!(eps > 0)) throw DomainError("eps must be positive");
  const double kf = factorial(k);
  CFun f = [&](cplx z) {
    return regulated_power(z, alpha, eps, sign) * kf * std::pow(xi_q - z, -(k + 1)) / (2 * kPi * kI);
  };
  auto r = contour_quadrature(f, power_contour(eps, sign, theta), alpha.real() + k, 1e-12);
  IdentityCheck c;
  c.lhs = r.value;
  cplx fall = 1.0;  // (-α)(-α-1)...(-α-k+1)
  for (int j = 0; j < k; ++j) fall *= -alpha - double(j);
  double sg = (k % 2 == 0) ? 1.0 : -1.0;
  c.rhs = sg * fall * std::pow(cplx(xi_q, sign * eps), -alpha - double(k));
  c.rel_err = std::abs(c.lhs - c.rhs) / std::abs(c.rhs);
  c.quad_error = r.error / std::abs(c.rhs);
  return c;
}

ContourPower fa_contour_power(cplx alpha, int k, double eps, double mass, int n, int sign,
                              bool verify) {
  if (!(alpha.real() > 0)) throw DomainError("fa_contour_power needs Re alpha > 0");
  if (!(eps > 0)) throw DomainError("eps must be positive");
  if (mass < 0) throw DomainError("mass must be >= 0");
  const cplx z0(-mass * mass, -sign * eps);
  ContourPower out;
  cplx fac = pochhammer_factor(alpha, k) * rgamma_c(alpha + double(k));
  MeroValue F = fa_diag(alpha + double(k) - 1.0, z0, n);
  out.value = F;
  out.value.value = fac * F.value;
  out.value.residue = fac * F.residue;
  if (!verify) return out;
  // F_k(w) may sit on a pole of the diagonal family; its polar part is a
  // polynomial in w and integrates to zero, so the finite part is used.
  double beta = alpha.real() - 0.5 * n + k - 0.25;
  if (!(beta > 0)) throw DomainError("verify mode needs Re alpha > n/2 - k + 1/4");
  CFun f = [&](cplx z) {
    return regulated_power(z, alpha, eps, sign) * fa_diag(double(k), z - mass * mass, n, true).value /
           (2 * kPi * kI);
  };
  auto r = contour_quadrature(f, power_contour(eps, sign), beta, 1e-11);
  out.verified = true;
  out.quadrature = r.value;
  out.gap = std::abs(r.value - out.value.value) / std::abs(out.value.value);
  return out;
}

}  // namespace lspec

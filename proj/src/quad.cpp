#include "lspec/quad.hpp"

#include <stdexcept>

namespace lspec {

namespace {

template <unsigned N>
GLRule rule_on(double a, double b) {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& xs = G::abscissa();
  const auto& ws = G::weights();
  GLRule r;
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  // boost stores the non-negative half; N is even here
  for (std::size_t i = xs.size(); i-- > 0;) {
    r.x.push_back(c - h * xs[i]);
    r.w.push_back(h * ws[i]);
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    r.x.push_back(c + h * xs[i]);
    r.w.push_back(h * ws[i]);
  }
  return r;
}

}  // namespace

GLRule gauss_legendre(int npts, double a, double b) {
  switch (npts) {
    case 8: return rule_on<8>(a, b);
    case 16: return rule_on<16>(a, b);
    case 20: return rule_on<20>(a, b);
    case 30: return rule_on<30>(a, b);
    default: throw std::invalid_argument("gauss_legendre: unsupported order");
  }
}

GLRule composite_gl(int npts, int panels, double a, double b) {
  GLRule out;
  double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    GLRule r = gauss_legendre(npts, a + p * h, a + (p + 1) * h);
    out.x.insert(out.x.end(), r.x.begin(), r.x.end());
    out.w.insert(out.w.end(), r.w.begin(), r.w.end());
  }
  return out;
}

}  // namespace lspec

#pragma once

#include <cstdint>
#include <vector>

#include "lspec/metric.hpp"
#include "lspec/poly.hpp"

namespace lspec {

// Riemann tensor in the sign convention of the normal-coordinate expansion
// g(y) = η + ⅓ R_{ikjl} y^k y^l; Ric_{kl} = R^j_{kjl}; scalar = g^{kl} Ric_{kl}.
struct CurvaturePack {
  int n = 0;
  std::vector<double> riemann;  // [((i*n + k)*n + j)*n + l]
  std::vector<double> ricci;    // [k*n + l]
  double scalar = 0.0;
  double R(int i, int k, int j, int l) const { return riemann[((i * n + k) * n + j) * n + l]; }
  double Ric(int k, int l) const { return ricci[k * n + l]; }
  // max violation of antisymmetry and first Bianchi, relative to max |R|
  double symmetry_defect() const;
};

// Γ^ρ_{μν} at G[(ρ*n + μ)*n + ν]; ∂_λ Γ^ρ_{μν} at dG[((λ*n + ρ)*n + μ)*n + ν]
struct Christoffel {
  int n = 0;
  std::vector<double> G, dG;
};

void christoffel(const MetricJet& jet, Christoffel& out, bool with_derivatives);
void check_signature(const Mat& g);

CurvaturePack curvature(const MetricField& m, const Vec& x);
// Independent oracle: nested 4th-order central differences of eval() only.
CurvaturePack curvature_fd(const MetricField& m, const Vec& x, double h = 1e-3);

struct Frame {
  Vec base;
  Mat e;  // column μ is e_μ in coordinates
};
Frame make_frame(const MetricField& m, const Vec& x);

struct OdeSettings {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
};

struct GeodesicSample {
  double s = 0.0;
  Vec x, v;
  Mat J;  // Jacobi fields (columns), J(0) = 0
};

// Geodesic from (x, v), reported at parameters s_out (ascending, >= 0). If Jd0
// is given, also transports the Jacobi fields with J(0) = 0, J'(0) = Jd0 cols.
std::vector<GeodesicSample> geodesic(const MetricField& m, const Vec& x, const Vec& v,
                                     const std::vector<double>& s_out, const Mat* Jd0,
                                     const OdeSettings& ode = {});

Vec exp_map(const MetricField& m, const Vec& x, const Vec& v, const OdeSettings& ode = {});
// Damped Newton shooting for v with exp(x, v) = p.
Vec exp_inverse(const MetricField& m, const Vec& x, const Vec& p, const OdeSettings& ode = {},
                double tol = 1e-9);

struct ChartOptions {
  double radius = 0.0;  // 0: 0.1 x patch scale, halved until verified
  int max_halvings = 8;
  OdeSettings ode;
};

class NormalChart {
 public:
  NormalChart(MetricPtr metric, const Vec& base, const ChartOptions& opt = {});

  const MetricField& metric() const { return *metric_; }
  MetricPtr metric_ptr() const { return metric_; }
  const Frame& frame() const { return frame_; }
  const Vec& base() const { return frame_.base; }
  double radius() const { return radius_; }
  int dim() const { return metric_->dim(); }
  const OdeSettings& ode() const { return ode_; }

  Vec point(const Vec& y) const;
  Mat pulled_metric(const Vec& y) const;
  double density(const Vec& y) const;  // |g̃(y)|^{1/2}
  // g̃ at t*v for each t (t = 0 gives η exactly)
  std::vector<Mat> ray_metric(const Vec& v, const std::vector<double>& ts) const;
  Vec normal_coords(const Vec& p) const;

 private:
  bool verify(double r) const;
  MetricPtr metric_;
  Frame frame_;
  double radius_ = 0.0;
  OdeSettings ode_;
};

Mat eta(int n);

struct Taylor2 {
  int n = 0;
  std::vector<double> T;  // coefficient of y^k y^l in g̃_ij, symmetric in (k,l)
  double fit_residual = 0.0;
  double at(int i, int j, int k, int l) const { return T[((i * n + j) * n + k) * n + l]; }
};
Taylor2 metric_taylor2(const NormalChart& chart, double stencil_radius = 0.0);

// Deterministic sample directions on the unit sphere of R^n.
std::vector<Vec> sample_directions(int n, int count, std::uint64_t seed);

// Least-squares polynomial model of g̃ - η (upper triangle components, degree
// 2..degree) on the ball of radius a.
PolyFit fit_pulled_metric(const NormalChart& chart, int degree, double a, int ndirs, int nradii,
                          std::uint64_t seed);

}  // namespace lspec

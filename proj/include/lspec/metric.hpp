#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "lspec/dual.hpp"
#include "lspec/errors.hpp"

namespace lspec {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Box {
  Vec lo, hi;
  double scale() const { return (hi - lo).minCoeff(); }
  bool contains(const double* x, double margin = 0.0) const;
};

// g, first and second partials. dg[(c*n + a)*n + b] = ∂_c g_ab,
// ddg[((c*n + d)*n + a)*n + b] = ∂_c ∂_d g_ab.
struct MetricJet {
  int n = 0;
  std::vector<double> g, dg, ddg;
  double at(int a, int b) const { return g[a * n + b]; }
  double d(int c, int a, int b) const { return dg[(c * n + a) * n + b]; }
  double dd(int c, int e, int a, int b) const { return ddg[((c * n + e) * n + a) * n + b]; }
};

// A Lorentzian metric of signature (+,-,...,-) on a coordinate box. The first
// coordinate is the time function.
class MetricField {
 public:
  virtual ~MetricField() = default;
  virtual int dim() const = 0;
  virtual const Box& patch() const = 0;
  virtual std::string name() const = 0;
  virtual void eval(const double* x, double* g) const = 0;
  // order 1 fills g, dg; order 2 also ddg
  virtual void jet(const double* x, int order, MetricJet& out) const = 0;
  // ∂_{idx[0]}...∂_{idx[k-1]} g, k <= deriv_order()
  virtual void partial(const double* x, const std::vector<int>& idx, double* out) const = 0;
  virtual bool analytic() const { return true; }
  // Margin the derivative stencil needs inside the patch.
  virtual double stencil_width() const { return 0.0; }
  int deriv_order() const { return 4; }

  Mat g(const Vec& x) const;
  void check_point(const double* x) const;  // DomainError if off patch
};

using MetricPtr = std::shared_ptr<const MetricField>;

// Metric given by a functor `template<class T> void operator()(const T* x, T* g) const`
// which is differentiated with nested dual numbers.
template <class F>
class AnalyticMetric final : public MetricField {
 public:
  AnalyticMetric(std::string name, int n, Box box, F f)
      : name_(std::move(name)), n_(n), box_(std::move(box)), f_(std::move(f)) {}
  int dim() const override { return n_; }
  const Box& patch() const override { return box_; }
  std::string name() const override { return name_; }
  void eval(const double* x, double* g) const override { f_(x, g); }

  void jet(const double* x, int order, MetricJet& out) const override {
    const int n = n_, nn = n * n;
    out.n = n;
    out.g.assign(nn, 0.0);
    out.dg.assign(n * nn, 0.0);
    if (order >= 2) out.ddg.assign(nn * nn, 0.0);
    if (order < 2) {
      using D = Dual<double>;
      std::vector<D> xd(n), gd(nn);
      for (int c = 0; c < n; ++c) {
        for (int i = 0; i < n; ++i) xd[i] = D(x[i], i == c ? 1.0 : 0.0);
        f_(xd.data(), gd.data());
        for (int k = 0; k < nn; ++k) {
          out.dg[c * nn + k] = gd[k].d;
          if (c == 0) out.g[k] = gd[k].v;
        }
      }
      return;
    }
    using D1 = Dual<double>;
    using D2 = Dual<D1>;
    std::vector<D2> xd(n), gd(nn);
    for (int c = 0; c < n; ++c) {
      for (int e = c; e < n; ++e) {
        for (int i = 0; i < n; ++i)
          xd[i] = D2(D1(x[i], i == e ? 1.0 : 0.0), D1(i == c ? 1.0 : 0.0, 0.0));
        f_(xd.data(), gd.data());
        for (int k = 0; k < nn; ++k) {
          double v = gd[k].d.d;
          out.ddg[(c * n + e) * nn + k] = v;
          out.ddg[(e * n + c) * nn + k] = v;
          if (e == c) out.dg[c * nn + k] = gd[k].d.v;
          if (c == 0 && e == 0) out.g[k] = gd[k].v.v;
        }
      }
    }
  }

  void partial(const double* x, const std::vector<int>& idx, double* out) const override {
    switch (idx.size()) {
      case 0: eval(x, out); return;
      case 1: nested<1>(x, idx, out); return;
      case 2: nested<2>(x, idx, out); return;
      case 3: nested<3>(x, idx, out); return;
      case 4: nested<4>(x, idx, out); return;
      default: throw DomainError("derivative order above 4 requested");
    }
  }

 private:
  template <int L>
  static typename NestedDual<L>::type seed(double v, int i, const std::vector<int>& idx) {
    if constexpr (L == 0) {
      return v;
    } else {
      using Inner = typename NestedDual<L - 1>::type;
      return typename NestedDual<L>::type(seed<L - 1>(v, i, idx),
                                          Inner(idx[L - 1] == i ? 1.0 : 0.0));
    }
  }
  template <int L>
  static double tip(const typename NestedDual<L>::type& a) {
    if constexpr (L == 0) return a;
    else return tip<L - 1>(a.d);
  }
  template <int L>
  void nested(const double* x, const std::vector<int>& idx, double* out) const {
    using T = typename NestedDual<L>::type;
    std::vector<T> xd(n_), gd(n_ * n_);
    for (int i = 0; i < n_; ++i) xd[i] = seed<L>(x[i], i, idx);
    f_(xd.data(), gd.data());
    for (int k = 0; k < n_ * n_; ++k) out[k] = tip<L>(gd[k]);
  }

  std::string name_;
  int n_;
  Box box_;
  F f_;
};

template <class F>
MetricPtr make_analytic(std::string name, int n, Box box, F f) {
  return std::make_shared<AnalyticMetric<F>>(std::move(name), n, std::move(box), std::move(f));
}

// Sampled metric on a regular grid: local degree-5 Lagrange interpolation,
// derivatives by 4th-order central differences with h = 1e-3 * patch scale.
class TableMetric final : public MetricField {
 public:
  TableMetric(int n, Vec lower, Vec spacing, std::vector<int> shape,
              std::vector<double> upper_tri_values);
  int dim() const override { return n_; }
  const Box& patch() const override { return box_; }
  std::string name() const override { return "table"; }
  void eval(const double* x, double* g) const override;
  void jet(const double* x, int order, MetricJet& out) const override;
  void partial(const double* x, const std::vector<int>& idx, double* out) const override;
  bool analytic() const override { return false; }
  double stencil_width() const override { return 2.0 * h_ * 4; }

  static std::shared_ptr<TableMetric> load(const std::string& path);
  void save_binary(const std::string& path) const;
  void save_text(const std::string& path) const;

 private:
  int n_;
  Vec lower_, spacing_;
  std::vector<int> shape_;
  std::vector<double> vals_;  // per node, n(n+1)/2 upper-triangle entries
  Box box_;
  double h_;
};

// Samples `m` on a grid (used to produce table files and in tests).
std::shared_ptr<TableMetric> tabulate(const MetricField& m, const Vec& lower,
                                      const Vec& spacing, const std::vector<int>& shape);

struct MetricSpec {
  std::string name = "minkowski";  // or a file path for tables
  int n = 4;
  double radius = 1.0;  // sphere radius
  double side = 2.0 * 3.14159265358979323846;  // torus side
  double hubble = 1.0;  // expanding rate
  double lens = 5.0;    // trapping-lens strength
};

MetricPtr make_metric(const MetricSpec& spec);
MetricPtr make_metric(const std::string& name, int n = 4);
// Interior reference point used by the CLI and the acceptance suite.
Vec default_point(const MetricField& m);

}  // namespace lspec

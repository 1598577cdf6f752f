#include "lspec/metric.hpp"
#include "lspec/special.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace lspec {

bool Box::contains(const double* x, double margin) const {
  for (int i = 0; i < lo.size(); ++i)
    if (!(x[i] >= lo[i] + margin && x[i] <= hi[i] - margin)) return false;
  return true;
}

Mat MetricField::g(const Vec& x) const {
  const int n = dim();
  Mat out(n, n);
  std::vector<double> buf(n * n);
  eval(x.data(), buf.data());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out(a, b) = buf[a * n + b];
  return out;
}

void MetricField::check_point(const double* x) const {
  if (!patch().contains(x, stencil_width())) {
    std::ostringstream os;
    os << "point outside patch (margin " << stencil_width() << ")";
    throw DomainError(os.str());
  }
}

// ---------------------------------------------------------------- built-ins

namespace {

struct MinkowskiF {
  int n;
  template <class T>
  void operator()(const T*, T* g) const {
    for (int k = 0; k < n * n; ++k) g[k] = T(0.0);
    g[0] = T(1.0);
    for (int i = 1; i < n; ++i) g[i * n + i] = T(-1.0);
  }
};

// dt^2 - r^2 (dχ1^2 + sin^2χ1 (dχ2^2 + sin^2χ2 (...)))
struct SphereF {
  int n;
  double r;
  template <class T>
  void operator()(const T* x, T* g) const {
    using std::sin;
    for (int k = 0; k < n * n; ++k) g[k] = T(0.0);
    g[0] = T(1.0);
    T w = T(r * r);
    for (int i = 1; i < n; ++i) {
      g[i * n + i] = -1.0 * w;
      if (i < n - 1) {
        T s = sin(x[i]);
        w = w * s * s;
      }
    }
  }
};

struct ExpandingF {
  int n;
  double H;
  template <class T>
  void operator()(const T* x, T* g) const {
    using std::exp;
    for (int k = 0; k < n * n; ++k) g[k] = T(0.0);
    g[0] = T(1.0);
    T a2 = exp(2.0 * H * x[0]);
    for (int i = 1; i < n; ++i) g[i * n + i] = -1.0 * a2;
  }
};

// Ultrastatic optical lens dt^2 - N(r)^2 dx^2 with N = 1 + A e^{-r^2} χ(r),
// χ a smooth cutoff equal to 1 for r < 3 and 0 for r > 4. For A = 5 the
// function r N(r) has a local minimum, i.e. a stable circular null orbit.
struct LensF {
  int n;
  double A;
  template <class T>
  static T smoothstep01(const T& s) {
    using std::exp;
    double sv = dual_value(s);
    if (sv <= 0.0) return T(0.0);
    if (sv >= 1.0) return T(1.0);
    T f0 = exp(-1.0 / s), f1 = exp(-1.0 / (1.0 - s));
    return f0 / (f0 + f1);
  }
  template <class T>
  void operator()(const T* x, T* g) const {
    using std::exp;
    for (int k = 0; k < n * n; ++k) g[k] = T(0.0);
    g[0] = T(1.0);
    T r2 = T(0.0);
    for (int i = 1; i < n; ++i) r2 = r2 + x[i] * x[i];
    T s = (r2 - 9.0) / 7.0;  // r^2 from 9 to 16
    T cut = 1.0 - smoothstep01(s);
    T N = 1.0 + A * exp(-1.0 * r2) * cut;
    for (int i = 1; i < n; ++i) g[i * n + i] = -1.0 * N * N;
  }
};

Box make_box(int n, double tlo, double thi, double xlo, double xhi) {
  Box b{Vec(n), Vec(n)};
  b.lo[0] = tlo;
  b.hi[0] = thi;
  for (int i = 1; i < n; ++i) {
    b.lo[i] = xlo;
    b.hi[i] = xhi;
  }
  return b;
}

}  // namespace

MetricPtr make_metric(const MetricSpec& s) {
  const int n = s.n;
  if (n < 2) throw ConfigError("metric dimension must be >= 2");
  if (s.name == "minkowski")
    return make_analytic("minkowski", n, make_box(n, -10, 10, -10, 10), MinkowskiF{n});
  if (s.name == "ultrastatic-torus") {
    if (!(s.side > 0)) throw ConfigError("torus side must be positive");
    return make_analytic("ultrastatic-torus", n, make_box(n, -10, 10, 0.0, s.side),
                         MinkowskiF{n});
  }
  if (s.name == "ultrastatic-sphere") {
    if (!(s.radius > 0)) throw ConfigError("sphere radius must be positive");
    if (n < 3) throw ConfigError("ultrastatic-sphere needs n >= 3");
    Box b = make_box(n, -10, 10, 0.05, kPi - 0.05);
    b.lo[n - 1] = -kPi + 0.05;
    b.hi[n - 1] = kPi - 0.05;
    return make_analytic("ultrastatic-sphere", n, b, SphereF{n, s.radius});
  }
  if (s.name == "expanding")
    return make_analytic("expanding", n, make_box(n, -1, 1, -2, 2), ExpandingF{n, s.hubble});
  if (s.name == "trapping-lens")
    return make_analytic("trapping-lens", n, make_box(n, -1e300, 1e300, -1e300, 1e300),
                         LensF{n, s.lens});
  // anything else is a table file
  std::ifstream probe(s.name, std::ios::binary);
  if (!probe) throw ConfigError("unknown metric '" + s.name + "'");
  return TableMetric::load(s.name);
}

MetricPtr make_metric(const std::string& name, int n) {
  MetricSpec s;
  s.name = name;
  s.n = n;
  return make_metric(s);
}

Vec default_point(const MetricField& m) {
  const int n = m.dim();
  Vec x = Vec::Zero(n);
  const std::string nm = m.name();
  if (nm == "ultrastatic-sphere") {
    for (int i = 1; i < n - 1; ++i) x[i] = 1.2 + 0.2 * (i - 1);
    x[n - 1] = 0.3;
  } else if (nm == "ultrastatic-torus" || nm == "table") {
    x = 0.5 * (m.patch().lo + m.patch().hi);
  }
  return x;
}

// ------------------------------------------------------------------ tables

TableMetric::TableMetric(int n, Vec lower, Vec spacing, std::vector<int> shape,
                         std::vector<double> vals)
    : n_(n), lower_(std::move(lower)), spacing_(std::move(spacing)),
      shape_(std::move(shape)), vals_(std::move(vals)) {
  if (int(shape_.size()) != n || lower_.size() != n || spacing_.size() != n)
    throw ConfigError("table metric: inconsistent header");
  std::size_t nodes = 1;
  for (int s : shape_) {
    if (s < 6) throw ConfigError("table metric: need >= 6 nodes per axis");
    nodes *= std::size_t(s);
  }
  if (vals_.size() != nodes * std::size_t(n * (n + 1) / 2))
    throw ConfigError("table metric: value count does not match shape");
  box_.lo = lower_;
  box_.hi = lower_;
  for (int i = 0; i < n; ++i) box_.hi[i] += spacing_[i] * (shape_[i] - 1);
  h_ = 1e-3 * box_.scale();
}

void TableMetric::eval(const double* x, double* g) const {
  const int n = n_, nc = n * (n + 1) / 2;
  std::vector<int> start(n);
  std::vector<std::array<double, 6>> w(n);
  for (int a = 0; a < n; ++a) {
    double u = (x[a] - lower_[a]) / spacing_[a];
    int i0 = int(std::floor(u)) - 2;
    i0 = std::max(0, std::min(i0, shape_[a] - 6));
    start[a] = i0;
    for (int j = 0; j < 6; ++j) {
      double l = 1.0;
      for (int k = 0; k < 6; ++k)
        if (k != j) l *= (u - (i0 + k)) / double(j - k);
      w[a][j] = l;
    }
  }
  std::vector<double> acc(nc, 0.0);
  std::vector<int> off(n, 0);
  int total = 1;
  for (int a = 0; a < n; ++a) total *= 6;
  for (int c = 0; c < total; ++c) {
    int rem = c;
    double wt = 1.0;
    std::size_t lin = 0;
    for (int a = n - 1; a >= 0; --a) {
      off[a] = rem % 6;
      rem /= 6;
    }
    for (int a = 0; a < n; ++a) {
      wt *= w[a][off[a]];
      lin = lin * shape_[a] + (start[a] + off[a]);
    }
    const double* v = &vals_[lin * nc];
    for (int k = 0; k < nc; ++k) acc[k] += wt * v[k];
  }
  int k = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b, ++k) g[a * n + b] = g[b * n + a] = acc[k];
}

void TableMetric::partial(const double* x, const std::vector<int>& idx, double* out) const {
  const int nn = n_ * n_;
  if (idx.empty()) {
    eval(x, out);
    return;
  }
  if (idx.size() > 4) throw DomainError("derivative order above 4 requested");
  // 4th-order central difference in the first listed direction, recursing
  std::vector<int> rest(idx.begin() + 1, idx.end());
  std::vector<double> xp(x, x + n_), tmp(nn);
  static const double c[4] = {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12};
  static const int s[4] = {-2, -1, 1, 2};
  std::fill(out, out + nn, 0.0);
  for (int q = 0; q < 4; ++q) {
    xp[idx[0]] = x[idx[0]] + s[q] * h_;
    partial(xp.data(), rest, tmp.data());
    for (int k = 0; k < nn; ++k) out[k] += c[q] * tmp[k] / h_;
  }
}

void TableMetric::jet(const double* x, int order, MetricJet& out) const {
  const int n = n_, nn = n * n;
  out.n = n;
  out.g.assign(nn, 0.0);
  out.dg.assign(n * nn, 0.0);
  eval(x, out.g.data());
  for (int c = 0; c < n; ++c) partial(x, {c}, &out.dg[c * nn]);
  if (order >= 2) {
    out.ddg.assign(nn * nn, 0.0);
    for (int c = 0; c < n; ++c)
      for (int e = c; e < n; ++e) {
        partial(x, {c, e}, &out.ddg[(c * n + e) * nn]);
        if (e != c)
          std::copy(&out.ddg[(c * n + e) * nn], &out.ddg[(c * n + e) * nn] + nn,
                    &out.ddg[(e * n + c) * nn]);
      }
  }
}

namespace {
const char kMagic[16] = {'L', 'S', 'P', 'E', 'C', '-', 'M', 'E', 'T', 'R', 'I', 'C', 0, 0, 0, 0};
}

std::shared_ptr<TableMetric> TableMetric::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open metric table " + path);
  char head[16] = {};
  f.read(head, 16);
  if (f.gcount() == 16 && std::memcmp(head, kMagic, 16) == 0) {
    int32_t n;
    f.read(reinterpret_cast<char*>(&n), 4);
    if (!f || n < 2 || n > 8) throw ConfigError("metric table: bad dimension");
    Vec lo(n), sp(n);
    std::vector<int> shape(n);
    f.read(reinterpret_cast<char*>(lo.data()), 8 * n);
    f.read(reinterpret_cast<char*>(sp.data()), 8 * n);
    for (int i = 0; i < n; ++i) {
      int32_t s;
      f.read(reinterpret_cast<char*>(&s), 4);
      shape[i] = s;
    }
    std::size_t count = n * (n + 1) / 2;
    for (int s : shape) count *= std::size_t(std::max(s, 0));
    std::vector<double> v(count);
    f.read(reinterpret_cast<char*>(v.data()), std::streamsize(8 * count));
    if (!f) throw ConfigError("metric table: truncated binary payload");
    return std::make_shared<TableMetric>(n, lo, sp, shape, std::move(v));
  }
  // text form
  f.clear();
  f.seekg(0);
  std::string line, key;
  int n = 0;
  Vec lo, sp;
  std::vector<int> shape;
  std::vector<double> v;
  bool in_values = false;
  while (std::getline(f, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    if (in_values) {
      double d;
      while (is >> d) v.push_back(d);
      continue;
    }
    if (!(is >> key)) continue;
    if (key == "dim") {
      is >> n;
    } else if (key == "lower" || key == "spacing") {
      Vec& t = key == "lower" ? lo : sp;
      t.resize(n);
      for (int i = 0; i < n; ++i) is >> t[i];
    } else if (key == "shape") {
      shape.resize(n);
      for (int i = 0; i < n; ++i) is >> shape[i];
    } else if (key == "values") {
      in_values = true;
    } else {
      throw ConfigError("metric table: unknown key '" + key + "'");
    }
    if (!is && !is.eof()) throw ConfigError("metric table: malformed line '" + line + "'");
  }
  if (n < 2) throw ConfigError("metric table: missing dim");
  return std::make_shared<TableMetric>(n, lo, sp, shape, std::move(v));
}

void TableMetric::save_binary(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  f.write(kMagic, 16);
  int32_t n = n_;
  f.write(reinterpret_cast<const char*>(&n), 4);
  f.write(reinterpret_cast<const char*>(lower_.data()), 8 * n_);
  f.write(reinterpret_cast<const char*>(spacing_.data()), 8 * n_);
  for (int s : shape_) {
    int32_t v = s;
    f.write(reinterpret_cast<const char*>(&v), 4);
  }
  f.write(reinterpret_cast<const char*>(vals_.data()), std::streamsize(8 * vals_.size()));
}

void TableMetric::save_text(const std::string& path) const {
  std::ofstream f(path);
  f.precision(17);
  f << "dim " << n_ << "\nlower";
  for (int i = 0; i < n_; ++i) f << ' ' << lower_[i];
  f << "\nspacing";
  for (int i = 0; i < n_; ++i) f << ' ' << spacing_[i];
  f << "\nshape";
  for (int s : shape_) f << ' ' << s;
  f << "\nvalues\n";
  const int nc = n_ * (n_ + 1) / 2;
  for (std::size_t i = 0; i < vals_.size(); ++i) f << vals_[i] << ((i + 1) % nc ? ' ' : '\n');
}

std::shared_ptr<TableMetric> tabulate(const MetricField& m, const Vec& lower, const Vec& spacing,
                                      const std::vector<int>& shape) {
  const int n = m.dim(), nc = n * (n + 1) / 2;
  std::size_t nodes = 1;
  for (int s : shape) nodes *= std::size_t(s);
  std::vector<double> vals(nodes * nc), g(n * n), x(n);
  for (std::size_t lin = 0; lin < nodes; ++lin) {
    std::size_t rem = lin;
    for (int a = n - 1; a >= 0; --a) {
      x[a] = lower[a] + spacing[a] * double(rem % shape[a]);
      rem /= shape[a];
    }
    m.eval(x.data(), g.data());
    int k = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) vals[lin * nc + k++] = g[a * n + b];
  }
  return std::make_shared<TableMetric>(n, lower, spacing, shape, std::move(vals));
}

}  // namespace lspec

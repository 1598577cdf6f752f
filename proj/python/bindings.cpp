#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lspec/contour.hpp"
#include "lspec/elemfam.hpp"
#include "lspec/geomkit.hpp"
#include "lspec/hadamard.hpp"
#include "lspec/parallel.hpp"
#include "lspec/scflow.hpp"
#include "lspec/specpowers.hpp"
#include "lspec/ultrastatic.hpp"

namespace py = pybind11;
using namespace lspec;

namespace {

MetricPtr metric(const std::string& name, int n, double radius, double side, double hubble, double lens) {
  MetricSpec s;
  s.name = name;
  s.n = n;
  s.radius = radius;
  s.side = side;
  s.hubble = hubble;
  s.lens = lens;
  return make_metric(s);
}

Vec point_or_default(const MetricField& m, const std::optional<Vec>& p) {
  if (!p) return default_point(m);
  if (p->size() != m.dim()) throw DomainError("point has the wrong dimension");
  return *p;
}

py::dict curvature_dict(const CurvaturePack& c) {
  py::dict d;
  d["scalar"] = c.scalar;
  d["ricci"] = Eigen::Map<const Eigen::Matrix<double, -1, -1, Eigen::RowMajor>>(c.ricci.data(), c.n, c.n).eval();
  d["riemann"] = c.riemann;
  d["symmetry_defect"] = c.symmetry_defect();
  return d;
}

PowerDiagonal pdiag(const std::vector<double>& u, int n, double mass, double eps, int sign) {
  PowerDiagonal pd;
  pd.u = u;
  pd.n = n;
  pd.mass = mass;
  pd.eps = eps;
  pd.sign = sign;
  return pd;
}

#define METRIC_ARGS                                                                         \
  py::arg("metric") = "minkowski", py::arg("point") = py::none(), py::arg("n") = 4,         \
  py::arg("radius") = 1.0, py::arg("side") = 2 * kPi, py::arg("hubble") = 1.0, py::arg("lens") = 5.0

}  // namespace

PYBIND11_MODULE(_lspec, m) {
  m.doc() = "Lorentzian spectral geometry: curvature, Hadamard coefficients, complex powers, spectral action";

  auto base = py::register_exception<Error>(m, "LspecError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<PoleError>(m, "PoleError", base.ptr());
  py::register_exception<BranchError>(m, "BranchError", base.ptr());
  py::register_exception<GridError>(m, "GridError", base.ptr());
  py::register_exception<TailError>(m, "TailError", base.ptr());
  py::register_exception<ConditioningError>(m, "ConditioningError", base.ptr());
  py::register_exception<CharacteristicError>(m, "CharacteristicError", base.ptr());

  m.def("set_threads", &set_thread_count, py::arg("n"));
  m.def("threads", &thread_count);

  m.def(
      "curvature",
      [](const std::string& name, std::optional<Vec> p, int n, double r, double s, double h, double l) {
        auto g = metric(name, n, r, s, h, l);
        return curvature_dict(curvature(*g, point_or_default(*g, p)));
      },
      METRIC_ARGS, "Riemann, Ricci and scalar curvature from the metric jet");
  m.def(
      "curvature_fd",
      [](const std::string& name, std::optional<Vec> p, int n, double r, double s, double h, double l) {
        auto g = metric(name, n, r, s, h, l);
        return curvature_dict(curvature_fd(*g, point_or_default(*g, p)));
      },
      METRIC_ARGS, "Finite-difference curvature oracle");
  m.def(
      "default_point",
      [](const std::string& name, int n) { return default_point(*make_metric(name, n)); },
      py::arg("metric"), py::arg("n") = 4);

  m.def(
      "hadamard",
      [](const std::string& name, int order, std::optional<Vec> p, int n, double r, double s, double h,
         double l, int nodes) {
        auto g = metric(name, n, r, s, h, l);
        NormalChart chart(g, point_or_default(*g, p));
        HadamardOptions o;
        o.radial_nodes = nodes;
        auto q = hadamard_sequence(chart, order, o);
        py::dict d;
        d["diag"] = q.diag;
        d["diag_direct"] = q.diag_direct;
        d["diag_spread"] = q.diag_spread;
        d["residuals"] = q.residuals;
        d["t"] = q.t;
        d["values"] = q.values;
        d["chart_radius"] = chart.radius();
        return d;
      },
      py::arg("metric") = "ultrastatic-sphere", py::arg("order") = 2, py::arg("point") = py::none(),
      py::arg("n") = 4, py::arg("radius") = 1.0, py::arg("side") = 2 * kPi, py::arg("hubble") = 1.0,
      py::arg("lens") = 5.0, py::arg("radial_nodes") = 16,
      "Hadamard coefficients u_0..u_order on the diagonal and along rays");

  m.def(
      "euclid_integral", [](cplx a, cplx z, int n) { return euclid_integral(a, z, n).value; }, py::arg("alpha"),
      py::arg("z"), py::arg("n") = 4);
  m.def(
      "fa_diag", [](cplx a, cplx z, int n) { return fa_diag(a, z, n).value; }, py::arg("alpha"), py::arg("z"),
      py::arg("n") = 4);
  m.def(
      "fa_diag_residue", [](cplx a, cplx z, int n) { return fa_diag(a, z, n, true).residue; },
      py::arg("alpha"), py::arg("z"), py::arg("n") = 4);
  m.def("fa_offdiag", &fa_offdiag, py::arg("alpha"), py::arg("z"), py::arg("q"), py::arg("n") = 4,
        py::arg("tol") = 1e-11);

  m.def(
      "power_identity_check",
      [](cplx a, int k, double eps, double q, int sign) {
        auto c = power_identity_check(a, k, eps, q, sign);
        py::dict d;
        d["quadrature"] = c.lhs;
        d["closed_form"] = c.rhs;
        d["rel_err"] = c.rel_err;
        return d;
      },
      py::arg("alpha"), py::arg("k"), py::arg("eps"), py::arg("q"), py::arg("sign") = 1);

  m.def(
      "cpower_diag",
      [](cplx a, const std::vector<double>& u, int n, double mass, double eps, int sign) {
        return cpower_diag(pdiag(u, n, mass, eps, sign), a).value;
      },
      py::arg("alpha"), py::arg("u"), py::arg("n") = 4, py::arg("mass") = 0.0, py::arg("eps") = 1e-2,
      py::arg("sign") = -1, "(P -+ i eps)^(-alpha)(x,x) from the diagonal Hadamard data u");
  m.def(
      "cpower_residue",
      [](double pole, const std::vector<double>& u, int n, double mass, double eps, int sign, bool circle) {
        auto pd = pdiag(u, n, mass, eps, sign);
        return circle ? cpower_residue_circle(pd, pole) : cpower_diag(pd, pole, true).residue;
      },
      py::arg("pole"), py::arg("u"), py::arg("n") = 4, py::arg("mass") = 0.0, py::arg("eps") = 1e-2,
      py::arg("sign") = -1, py::arg("circle") = true);
  m.def(
      "limit_residue",
      [](int mm, const std::vector<double>& u, int n, int sign) {
        return limit_residue(pdiag(u, n, 0.0, 1e-2, sign), mm);
      },
      py::arg("m"), py::arg("u"), py::arg("n") = 4, py::arg("sign") = -1);

  m.def(
      "predicted_coefficients",
      [](const std::string& prof, int n, double mass, double eps, double u1, double u2) {
        return predicted_coefficients(SchwartzProfile::parse(prof), n, mass, eps, u1, u2);
      },
      py::arg("profile") = "bump:1.5:0.5", py::arg("n") = 4, py::arg("mass") = 0.0, py::arg("eps") = 1e-2,
      py::arg("u1") = 0.0, py::arg("u2") = 0.0);
  m.def(
      "mellin_diag",
      [](double L, const std::vector<double>& u, const std::string& prof, int n, double mass, double eps,
         double c) {
        return f_of_operator_diag(pdiag(u, n, mass, eps, 1), SchwartzProfile::parse(prof), L,
                                  c > 0 ? c : 0.5 * n + 0.5)
            .value;
      },
      py::arg("Lambda"), py::arg("u") = std::vector<double>{1.0}, py::arg("profile") = "bump:1.5:0.5",
      py::arg("n") = 4, py::arg("mass") = 0.0, py::arg("eps") = 1e-2, py::arg("c") = 0.0,
      "f((P + i eps)/Lambda^2)(x,x) by the Mellin route");

  m.def(
      "ultrastatic_kernel",
      [](const std::string& model, const std::vector<double>& Ls, const std::string& prof, double mass,
         double eps, double tol) {
        auto p = SchwartzProfile::parse(prof);
        auto probe = parse_model(model, 16.0);
        KernelOptions ko;
        ko.tol = tol;
        double lm = 0;
        for (double L : Ls) lm = std::max(lm, required_lambda_max(probe, p, L, mass, eps, ko));
        auto md = build_model(probe.kind, probe.d, probe.param, lm * 1.001);
        std::vector<cplx> v;
        std::vector<double> tail;
        for (double L : Ls) {
          auto k = kernel_diag(md, p, L, mass, eps, ko);
          v.push_back(k.value);
          tail.push_back(k.tail);
        }
        py::dict d;
        d["values"] = v;
        d["tails"] = tail;
        d["lambda_max"] = md.lambda_max;
        return d;
      },
      py::arg("model"), py::arg("Lambda"), py::arg("profile") = "bump:1.5:0.5", py::arg("mass") = 0.0,
      py::arg("eps") = 1e-2, py::arg("tol") = 1e-6, "Exact spectral kernel f((P + i eps)/Lambda^2)(x,x) on R x Y");
  m.def(
      "fit_expansion",
      [](const std::vector<double>& L, const std::vector<cplx>& v, int n, int terms) {
        auto f = fit_expansion(L, v, n, terms);
        py::dict d;
        d["coef"] = f.coef;
        d["residual"] = f.residual;
        d["condition"] = f.condition;
        return d;
      },
      py::arg("Lambda"), py::arg("values"), py::arg("n") = 4, py::arg("terms") = 3);

  m.def(
      "nontrapping_certificate",
      [](const std::string& name, int count, std::uint64_t seed, double region, int n, double lens,
         long max_steps) {
        auto g = metric(name, n, 1.0, 2 * kPi, 1.0, lens);
        FlowOptions o;
        o.max_steps = max_steps;
        o.keep_samples = false;
        auto r = nontrapping_certificate(*g, count, seed, region, o);
        py::dict d;
        d["samples"] = r.samples;
        d["classified"] = r.classified;
        d["minus_to_plus"] = r.minus_to_plus;
        d["plus_to_minus"] = r.plus_to_minus;
        d["escaped"] = r.escaped;
        d["exhausted"] = r.exhausted;
        d["worst_closest"] = r.worst_closest;
        d["reversal_swaps"] = r.reversal_swaps;
        d["pass"] = r.pass;
        return d;
      },
      py::arg("metric") = "minkowski", py::arg("samples") = 100, py::arg("seed") = 12, py::arg("region") = 2.0,
      py::arg("n") = 4, py::arg("lens") = 5.0, py::arg("max_steps") = 100000);
}

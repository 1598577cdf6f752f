#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lspec/specpowers.hpp"

namespace lspec {

enum class ModelKind { Torus, Sphere };

// Spectrum of -Δ on a flat torus (side L) or round sphere (radius r) of
// dimension d. Levels are sorted, λ_0 = 0 with multiplicity 1.
struct SpectralModel {
  ModelKind kind = ModelKind::Sphere;
  int d = 3;
  double param = 1.0;  // L or r
  double volume = 0.0;
  double lambda_max = 0.0;
  std::vector<double> lambda, mult;
  double weyl_ratio = 0.0;  // N(λ_max) / Weyl(λ_max)

  int n() const { return d + 1; }
  // κ with torus levels κ·a, a ∈ ℕ
  double lattice_step() const;
  double weyl_count(double lam) const;
  std::string describe() const;
};

SpectralModel build_model(ModelKind kind, int d, double param, double lambda_max,
                          std::size_t cap = std::size_t(1) << 25);
// "sphere:d:r" or "torus:d:L"
SpectralModel parse_model(const std::string& spec, double lambda_max);

// (1/2π)∫ f((−τ² + μ)/Λ²) dτ for one level, by the closed-form τ-integral.
cplx level_tau_integral(const SchwartzProfile& p, cplx mu, double Lambda);
// Same quantity by adaptive τ-quadrature of the profile (oracle).
cplx level_tau_integral_quad(const SchwartzProfile& p, cplx mu, double Lambda, double tol = 1e-10);

struct KernelResult {
  cplx value{};
  double tail = 0.0;        // certified bound on the omitted levels
  double lambda_cut = 0.0;  // levels λ <= lambda_cut are summed exactly
  double tail_constant = 0.0;
  int nodes = 0;
};

struct KernelOptions {
  double tol = 1e-6;  // relative target; the tail must be below 0.1·tol
  int decay_power = 8;
  double lambda_cut = 0.0;  // 0: smallest certified cut
};

// f((P + iε)/Λ²)(x,x) = (1/2π)∫ Σ_j mult_j/vol f((−τ² + λ_j + m² + iε)/Λ²) dτ
KernelResult kernel_diag(const SpectralModel& model, const SchwartzProfile& p, double Lambda,
                         double mass, double eps, const KernelOptions& opt = {});
// λ_max a model needs for kernel_diag at this Λ
double required_lambda_max(const SpectralModel& model, const SchwartzProfile& p, double Lambda,
                           double mass, double eps, const KernelOptions& opt = {});

struct FitReport {
  std::vector<cplx> coef;  // Λ^n, Λ^{n−2}, Λ^{n−4}
  double residual = 0.0;   // relative rms
  double condition = 0.0;  // of the column-scaled design matrix
};

FitReport fit_expansion(const std::vector<double>& Lambda, const std::vector<cplx>& values, int n,
                        int terms);

struct ResolventCheck {
  double residual = 0.0;        // max |(∂² + λ − z)v − u|, normalized kernel
  double residual_literal = 0.0;  // same with −½ e^{−i|t−s|k}/k as printed
  double scale = 0.0;           // max |u|
  double vmax = 0.0;            // max |v|
};

// Uniform grid t_0 + j h; u must vanish near both ends. branch = +1 takes the
// decaying root (Im k < 0 in e^{−i|t−s|k}); branch = −1 is rejected.
ResolventCheck mode_resolvent_check(double lambda, cplx z, double t0, double h,
                                    const std::vector<double>& u, int branch = 1);

}  // namespace lspec

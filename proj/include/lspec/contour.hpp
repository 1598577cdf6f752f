#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lspec/elemfam.hpp"
#include "lspec/special.hpp"

namespace lspec {

enum class ContourKind { GammaEps, Gamma0, EtaDelta };

// gamma_eps: iε + [ray e^{i(π-θ)}(∞ → ε/2), arc (ε/2)e^{iω}, ω: π-θ → 2π+θ
// through the bottom, ray e^{iθ}(ε/2 → ∞)]. gamma_0 is the same without the
// shift and the arc. eta_delta: ray e^{iθ}(∞ → δ), arc δe^{iω}, ω: θ → -θ,
// ray e^{-iθ}(δ → ∞), with θ in (π/2, π).
// `mirrored` takes the complex conjugate path traversed in the opposite
// direction (it lives in the lower half plane).
struct ContourSpec {
  ContourKind kind = ContourKind::GammaEps;
  double eps = 1.0;
  double theta = kPi / 4;
  double delta = 1.0;     // eta_delta only
  double zmax = 0.0;      // initial truncation radius, 0: automatic
  bool mirrored = false;
};

struct Segment {
  bool arc = false;
  cplx center{};
  // ray: z = center + r e^{i angle}, r from r0 to r1 (r = inf allowed)
  double angle = 0.0, r0 = 0.0, r1 = 0.0;
  // arc: z = center + radius e^{iω}, ω from w0 to w1
  double radius = 0.0, w0 = 0.0, w1 = 0.0;
  cplx point(double t) const;  // t = r for rays, ω for arcs
};

std::vector<Segment> contour_segments(const ContourSpec& spec);
void validate(const ContourSpec& spec);

struct ContourResult {
  cplx value{};
  double error = 0.0;  // quadrature estimate + tail bound
  double tail = 0.0;
  double zmax = 0.0;
  double l1 = 0.0;     // ∫|f||dz|
};

using CFun = std::function<cplx(cplx)>;

// |f(z)| <= C|z|^{-1-beta} is declared by the caller for |z| >= zmax/2.
ContourResult contour_quadrature(const CFun& f, const ContourSpec& spec, double beta,
                                 double tol = 1e-12);

// a^b with arg(a) taken in (cut - 2π, cut].
cplx cpow_cut(cplx a, cplx b, double cut);

// (z ∓ iε)^{-α}: sign = -1 gives (z - iε)^{-α} with the cut pointing up,
// sign = +1 gives (z + iε)^{-α} with the cut pointing down.
cplx regulated_power(cplx z, cplx alpha, double eps, int sign);

// Contour matching `sign`: γ_ε for sign = -1, its mirror for sign = +1.
ContourSpec power_contour(double eps, int sign, double theta = kPi / 4);

struct IdentityCheck {
  cplx lhs{}, rhs{};
  double rel_err = 0.0;
  double quad_error = 0.0;
};

// (1/2πi)∫ (z±iε)^{-α} k!(Q-z)^{-k-1} dz against (-1)^k(-α)...(-α-k+1)(Q±iε)^{-α-k}
IdentityCheck power_identity_check(cplx alpha, int k, double eps, double xi_q, int sign = +1,
                                   double theta = kPi / 4);

// (-1)^m Γ(1-α)/Γ(1-α-m) = α(α+1)...(α+m-1)
cplx pochhammer_factor(cplx alpha, int m);

struct ContourPower {
  MeroValue value;        // (α)_k/Γ(α+k) · F_{α+k-1}(-m² ∓ iε)
  bool verified = false;
  cplx quadrature{};      // left side by contour quadrature (verify mode)
  double gap = 0.0;       // relative
};

ContourPower fa_contour_power(cplx alpha, int k, double eps, double mass, int n, int sign = -1,
                              bool verify = false);

}  // namespace lspec

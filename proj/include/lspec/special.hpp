#pragma once

#include <complex>
#include <vector>

namespace lspec {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline const cplx kI{0.0, 1.0};

// log Gamma on the whole plane minus the poles; the imaginary part is only
// defined modulo 2π, which is all exp() needs.
cplx lgamma_c(cplx z);
cplx gamma_c(cplx z);
// 1/Γ(z), entire; exact zero at non-positive integers.
cplx rgamma_c(cplx z);

// Nearest integer to z if |z - k| < tol, with k <= kmax.
bool near_nonpositive_int(cplx z, double tol, int* k);

double digamma_int(int k);  // ψ(k), k >= 1

// Principal branch power a^b with log on C \ (-inf, 0].
inline cplx cpow(cplx a, cplx b) {
  if (a == cplx(0.0, 0.0)) return 0.0;
  return std::exp(b * std::log(a));
}

double factorial(int k);

// Residue of g by the trapezoid rule on a circle |α - a0| = r with m nodes.
template <class F>
cplx circle_residue(F&& g, cplx a0, double r = 1e-3, int m = 64) {
  cplx acc = 0.0;
  for (int j = 0; j < m; ++j) {
    cplx w = std::polar(1.0, 2.0 * kPi * (j + 0.5) / m);
    acc += g(a0 + r * w) * (r * w);
  }
  return acc / double(m);
}

}  // namespace lspec

#include "lspec/special.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <cmath>

namespace lspec {

namespace {

// Lanczos g = 7, n = 9 (Numerical Recipes / Godfrey coefficients).
constexpr double kG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

cplx lgamma_right(cplx z) {
  // valid for Re z >= 0.5
  z -= 1.0;
  cplx x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + double(i));
  cplx t = z + kG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// log sin(πz), stable for large |Im z|
cplx log_sin_pi(cplx z) {
  double y = z.imag();
  if (std::abs(y) < 5.0) return std::log(std::sin(kPi * z));
  if (y > 0) {
    // sin(πz) = (i/2) e^{-iπz} (1 - e^{2iπz})
    return std::log(kI / 2.0) - kI * kPi * z +
           std::log(1.0 - std::exp(2.0 * kI * kPi * z));
  }
  return std::log(-kI / 2.0) + kI * kPi * z +
         std::log(1.0 - std::exp(-2.0 * kI * kPi * z));
}

}  // namespace

cplx lgamma_c(cplx z) {
  if (z.real() >= 0.5) return lgamma_right(z);
  return std::log(kPi) - log_sin_pi(z) - lgamma_right(1.0 - z);
}

cplx gamma_c(cplx z) {
  int k;
  if (near_nonpositive_int(z, 0.0, &k))
    return {std::numeric_limits<double>::infinity(), 0.0};
  if (z.imag() == 0.0 && z.real() > 0 && z.real() < 170)
    return std::tgamma(z.real());
  return std::exp(lgamma_c(z));
}

cplx rgamma_c(cplx z) {
  int k;
  if (near_nonpositive_int(z, 0.0, &k)) return 0.0;
  if (z.imag() == 0.0 && z.real() > 0 && z.real() < 170)
    return 1.0 / std::tgamma(z.real());
  if (z.real() < 0.5) {
    // 1/Γ(z) = sin(πz) Γ(1-z) / π keeps the zeros exact-ish
    if (std::abs(z.imag()) < 5.0)
      return std::sin(kPi * z) * std::exp(lgamma_right(1.0 - z)) / kPi;
  }
  return std::exp(-lgamma_c(z));
}

bool near_nonpositive_int(cplx z, double tol, int* k) {
  double r = std::round(z.real());
  if (r > 0.0) return false;
  if (std::abs(z - cplx(r, 0.0)) <= tol) {
    if (k) *k = int(r);
    return true;
  }
  return false;
}

double digamma_int(int k) { return boost::math::digamma(double(k)); }

double factorial(int k) { return std::tgamma(k + 1.0); }

}  // namespace lspec

#pragma once

#include <cmath>

namespace lspec {

// Forward-mode dual number; nest Dual<Dual<double>> for mixed partials.
template <class T>
struct Dual {
  T v{}, d{};
  Dual() = default;
  Dual(double x) : v(x), d(0.0) {}  // NOLINT: implicit constant lift
  Dual(T x, T dx) : v(x), d(dx) {}
};

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T>
Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T inv = T(1.0) / b.v;
  return {a.v * inv, (a.d - a.v * inv * b.d) * inv};
}
template <class T> Dual<T> operator+(const Dual<T>& a, double b) { return {a.v + b, a.d}; }
template <class T> Dual<T> operator+(double b, const Dual<T>& a) { return {a.v + b, a.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a, double b) { return {a.v - b, a.d}; }
template <class T> Dual<T> operator-(double b, const Dual<T>& a) { return {b - a.v, -a.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, double b) { return {a.v * b, a.d * b}; }
template <class T> Dual<T> operator*(double b, const Dual<T>& a) { return {a.v * b, a.d * b}; }
template <class T> Dual<T> operator/(const Dual<T>& a, double b) { return {a.v / b, a.d / b}; }
template <class T> Dual<T> operator/(double b, const Dual<T>& a) { return Dual<T>(b) / a; }
template <class T> Dual<T>& operator+=(Dual<T>& a, const Dual<T>& b) { return a = a + b; }
template <class T> Dual<T>& operator-=(Dual<T>& a, const Dual<T>& b) { return a = a - b; }
template <class T> Dual<T>& operator*=(Dual<T>& a, const Dual<T>& b) { return a = a * b; }

template <class T>
Dual<T> sin(const Dual<T>& a) { using std::sin; using std::cos; return {sin(a.v), cos(a.v) * a.d}; }
template <class T>
Dual<T> cos(const Dual<T>& a) { using std::sin; using std::cos; return {cos(a.v), -sin(a.v) * a.d}; }
template <class T>
Dual<T> exp(const Dual<T>& a) { using std::exp; T e = exp(a.v); return {e, e * a.d}; }
template <class T>
Dual<T> log(const Dual<T>& a) { using std::log; return {log(a.v), a.d / a.v}; }
template <class T>
Dual<T> sqrt(const Dual<T>& a) { using std::sqrt; T s = sqrt(a.v); return {s, a.d / (2.0 * s)}; }
template <class T>
Dual<T> tanh(const Dual<T>& a) {
  using std::tanh;
  T t = tanh(a.v);
  return {t, (1.0 - t * t) * a.d};
}

template <int L>
struct NestedDual { using type = Dual<typename NestedDual<L - 1>::type>; };
template <>
struct NestedDual<0> { using type = double; };

inline double dual_value(double x) { return x; }
template <class T>
double dual_value(const Dual<T>& x) { return dual_value(x.v); }

}  // namespace lspec

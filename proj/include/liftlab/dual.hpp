#pragma once

// Forward-mode dual numbers. Nesting Dual<Dual<double>> gives exact second
// derivatives; deeper nesting is used where curvature itself is differentiated.

#include <cmath>
#include <type_traits>

namespace liftlab {

template <class T>
struct Dual {
  T v{};  // value
  T d{};  // directional derivative

  constexpr Dual() = default;
  constexpr Dual(double c) : v(c), d(0.0) {}  // NOLINT: implicit lift of constants
  constexpr Dual(T value, T deriv) : v(value), d(deriv) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    T q = a.v / b.v;
    return {q, (a.d - q * b.d) / b.v};
  }
  friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
};

template <class T> struct is_dual : std::false_type {};
template <class T> struct is_dual<Dual<T>> : std::true_type {};
template <class T> inline constexpr bool is_dual_v = is_dual<T>::value;

/// Innermost double value of a (possibly nested) dual.
inline double primal(double x) { return x; }
template <class T> double primal(const Dual<T>& x) { return primal(x.v); }

/// Seeded variable: value x, unit derivative.
template <class T> Dual<T> make_variable(T x) { return {x, T(1.0)}; }

using std::cos;
using std::cosh;
using std::exp;
using std::log;
using std::sin;
using std::sinh;
using std::sqrt;
using std::tan;

template <class T> Dual<T> sin(const Dual<T>& a) { return {sin(a.v), cos(a.v) * a.d}; }
template <class T> Dual<T> cos(const Dual<T>& a) { return {cos(a.v), -(sin(a.v) * a.d)}; }
template <class T> Dual<T> tan(const Dual<T>& a) {
  T t = tan(a.v);
  return {t, (T(1.0) + t * t) * a.d};
}
template <class T> Dual<T> exp(const Dual<T>& a) {
  T e = exp(a.v);
  return {e, e * a.d};
}
template <class T> Dual<T> log(const Dual<T>& a) { return {log(a.v), a.d / a.v}; }
template <class T> Dual<T> sinh(const Dual<T>& a) { return {sinh(a.v), cosh(a.v) * a.d}; }
template <class T> Dual<T> cosh(const Dual<T>& a) { return {cosh(a.v), sinh(a.v) * a.d}; }
template <class T> Dual<T> sqrt(const Dual<T>& a) {
  T s = sqrt(a.v);
  return {s, a.d / (T(2.0) * s)};
}

/// x^c for a constant exponent c; well defined at x = 0 for integer c >= 0.
inline double pow_const(double x, double c) { return std::pow(x, c); }
template <class T> Dual<T> pow_const(const Dual<T>& a, double c) {
  if (c == 0.0) return Dual<T>(1.0);
  return {pow_const(a.v, c), T(c) * pow_const(a.v, c - 1.0) * a.d};
}

}  // namespace liftlab

#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <type_traits>

#include <Eigen/Core>

namespace tubefocal {

// ---------------------------------------------------------------------------
// Jet3: value of a univariate function together with its first three
// derivatives.  Arithmetic propagates derivatives exactly (Leibniz rule,
// Faa di Bruno).  The component scalar may itself be a Jet3, which extends
// the reach: Jet3<Jet3<double>> seeded once per variable carries either a
// univariate jet through order six or a bivariate jet with all partials
// through order (3,3).
// ---------------------------------------------------------------------------

template <class S>
struct Jet3 {
  S f{};   // value
  S d1{};  // first derivative
  S d2{};  // second derivative
  S d3{};  // third derivative

  constexpr Jet3() = default;
  constexpr Jet3(const S& value) : f(value) {}
  constexpr Jet3(const S& f_, const S& d1_, const S& d2_, const S& d3_)
      : f(f_), d1(d1_), d2(d2_), d3(d3_) {}

  // promote a plain double through any nesting depth
  constexpr Jet3(double value)
    requires(!std::same_as<S, double>)
      : f(value) {}

  Jet3& operator+=(const Jet3& o) { return *this = *this + o; }
  Jet3& operator-=(const Jet3& o) { return *this = *this - o; }
  Jet3& operator*=(const Jet3& o) { return *this = *this * o; }
  Jet3& operator/=(const Jet3& o) { return *this = *this / o; }

  friend Jet3 operator+(const Jet3& a, const Jet3& b) {
    return {a.f + b.f, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
  }
  friend Jet3 operator-(const Jet3& a, const Jet3& b) {
    return {a.f - b.f, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
  }
  friend Jet3 operator-(const Jet3& a) { return {-a.f, -a.d1, -a.d2, -a.d3}; }
  friend Jet3 operator+(const Jet3& a) { return a; }

  // d^k(ab) by the general Leibniz rule with binomial weights
  friend Jet3 operator*(const Jet3& a, const Jet3& b) {
    return {a.f * b.f,
            a.d1 * b.f + a.f * b.d1,
            a.d2 * b.f + S(2) * a.d1 * b.d1 + a.f * b.d2,
            a.d3 * b.f + S(3) * a.d2 * b.d1 + S(3) * a.d1 * b.d2 + a.f * b.d3};
  }

  friend Jet3 operator/(const Jet3& a, const Jet3& b) { return a * reciprocal(b); }

  friend bool operator==(const Jet3& a, const Jet3& b) {
    return a.f == b.f && a.d1 == b.d1 && a.d2 == b.d2 && a.d3 == b.d3;
  }

  friend std::ostream& operator<<(std::ostream& os, const Jet3& a) {
    return os << "[" << a.f << ", " << a.d1 << ", " << a.d2 << ", " << a.d3 << "]";
  }
};

using Jet3d = Jet3<double>;
using Jet3dd = Jet3<Jet3d>;

template <class S>
using Vec3 = Eigen::Matrix<S, 3, 1>;

// value of the function at the expansion point, through any nesting depth
inline double primal(double x) { return x; }
template <class S>
double primal(const Jet3<S>& a) {
  return primal(a.f);
}

// plain value vector of a (possibly jet-valued) vector
template <class S>
Eigen::Matrix<double, 3, 1> primal3(const Vec3<S>& v) {
  return Eigen::Matrix<double, 3, 1>(primal(v.x()), primal(v.y()), primal(v.z()));
}

inline bool all_finite(double x) { return std::isfinite(x); }
template <class S>
bool all_finite(const Jet3<S>& a) {
  return all_finite(a.f) && all_finite(a.d1) && all_finite(a.d2) && all_finite(a.d3);
}

// seed for the independent variable; the derivative slot is marked with 1
template <class S>
Jet3<S> jet_var(const S& u) {
  return {u, S(1), S(0), S(0)};
}

// bivariate seeds: outer slot differentiates in u, inner slot in v
inline Jet3dd bivar_u(double u) { return jet_var(Jet3d(u)); }
inline Jet3dd bivar_v(double v) { return Jet3dd(jet_var(v)); }

// univariate jet through order six: component (i,j) holds f^(i+j)
inline Jet3dd deep_var(double u) { return jet_var(jet_var(u)); }

// h = g(a) given the derivatives of g evaluated at the value of a
template <class S>
Jet3<S> compose(const S& g0, const S& g1, const S& g2, const S& g3, const Jet3<S>& a) {
  return {g0,
          g1 * a.d1,
          g2 * a.d1 * a.d1 + g1 * a.d2,
          g3 * a.d1 * a.d1 * a.d1 + S(3) * g2 * a.d1 * a.d2 + g1 * a.d3};
}

using std::cos;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;
using std::tan;

template <class S>
Jet3<S> reciprocal(const Jet3<S>& b) {
  const S inv = S(1) / b.f;
  const S inv2 = inv * inv;
  return compose(inv, -inv2, S(2) * inv2 * inv, S(-6) * inv2 * inv2, b);
}

template <class S>
Jet3<S> sin(const Jet3<S>& a) {
  const S s = sin(a.f), c = cos(a.f);
  return compose(s, c, -s, -c, a);
}

template <class S>
Jet3<S> cos(const Jet3<S>& a) {
  const S s = sin(a.f), c = cos(a.f);
  return compose(c, -s, -c, s, a);
}

template <class S>
Jet3<S> tan(const Jet3<S>& a) {
  // tan' = 1 + tan^2, tan'' = 2 tan (1 + tan^2), tan''' = 2 (1 + tan^2)(1 + 3 tan^2)
  const S t = tan(a.f);
  const S sec2 = S(1) + t * t;
  return compose(t, sec2, S(2) * t * sec2, S(2) * sec2 * (S(1) + S(3) * t * t), a);
}

template <class S>
Jet3<S> log(const Jet3<S>& a) {
  const S inv = S(1) / a.f;
  const S inv2 = inv * inv;
  return compose(log(a.f), inv, -inv2, S(2) * inv2 * inv, a);
}

template <class S>
Jet3<S> sqrt(const Jet3<S>& a) {
  const S r = sqrt(a.f);
  const S ir = S(1) / r;
  const S ir3 = ir * ir * ir;
  return compose(r, S(0.5) * ir, S(-0.25) * ir3, S(0.375) * ir3 * ir * ir, a);
}

inline double pow_scalar(double x, double p) { return std::pow(x, p); }
template <class S>
Jet3<S> pow_scalar(const Jet3<S>& a, double p);

// a^p for a constant exponent p; the domain is vetted by the caller
template <class S>
Jet3<S> pow_scalar(const Jet3<S>& a, double p) {
  if (p == 0.0) return Jet3<S>(S(1));
  const S g0 = pow_scalar(a.f, p);
  const S g1 = S(p) * pow_scalar(a.f, p - 1);
  const S g2 = S(p * (p - 1)) * pow_scalar(a.f, p - 2);
  const S g3 = S(p * (p - 1) * (p - 2)) * pow_scalar(a.f, p - 3);
  return compose(g0, g1, g2, g3, a);
}

template <class S>
Jet3<S> pow(const Jet3<S>& a, double p) {
  return pow_scalar(a, p);
}

// F(u0 + delta) for a nilpotent jet delta, given d^k F(u0) for k = 0..n-1.
// Horner evaluation of the Taylor polynomial; exact once the order of delta
// exceeds the nesting depth.
template <class S>
S taylor_apply(std::span<const double> derivs, const S& delta) {
  if (derivs.empty()) return S(0);
  double fact = 1.0;
  for (size_t k = 1; k < derivs.size(); ++k) fact *= double(k);
  auto n = static_cast<int>(derivs.size());
  S acc(derivs[n - 1] / fact);
  for (int k = n - 2; k >= 0; --k) {
    fact /= (k + 1);
    acc = acc * delta + S(derivs[k] / fact);
  }
  return acc;
}

// dot/cross/norm helpers kept free-standing so they instantiate for any jet depth
template <class S>
S dot3(const Vec3<S>& a, const Vec3<S>& b) {
  return a.x() * b.x() + a.y() * b.y() + a.z() * b.z();
}

template <class S>
Vec3<S> cross3(const Vec3<S>& a, const Vec3<S>& b) {
  return Vec3<S>(a.y() * b.z() - a.z() * b.y(),
                 a.z() * b.x() - a.x() * b.z(),
                 a.x() * b.y() - a.y() * b.x());
}

template <class S>
S norm3(const Vec3<S>& v) {
  return sqrt(dot3(v, v));
}

template <class S>
S det3(const Vec3<S>& a, const Vec3<S>& b, const Vec3<S>& c) {
  return dot3(a, cross3(b, c));
}

}  // namespace tubefocal

namespace Eigen {

template <class T>
struct NumTraits<tubefocal::Jet3<T>> {
  using Real = tubefocal::Jet3<T>;
  using NonInteger = tubefocal::Jet3<T>;
  using Nested = tubefocal::Jet3<T>;
  using Literal = tubefocal::Jet3<T>;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    ReadCost = 4 * NumTraits<double>::ReadCost,
    AddCost = 4 * NumTraits<double>::AddCost,
    MulCost = 16 * NumTraits<double>::MulCost,
    RequireInitialization = 1,
  };

  static Real epsilon() { return Real(NumTraits<double>::epsilon()); }
  static Real dummy_precision() { return Real(NumTraits<double>::dummy_precision()); }
  static Real highest() { return Real(NumTraits<double>::highest()); }
  static Real lowest() { return Real(NumTraits<double>::lowest()); }
  static int digits10() { return NumTraits<double>::digits10(); }
};

}  // namespace Eigen

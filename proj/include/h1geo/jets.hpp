#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "errors.hpp"

// Forward-mode truncated Taylor data.  Jet2 carries value plus first and
// second partials in two parameters (u, v); CurveJet2 the same in one curve
// parameter t; Jet1 and Dual1 are the first-order truncations used for
// quantities whose second derivatives are not available from an order-2
// immersion (extracting a partial from a Jet2 loses one order).

namespace h1geo {

struct Jet2 {
  double v = 0, du = 0, dv = 0, duu = 0, duv = 0, dvv = 0;
};

inline Jet2 jet_const(double c) { return {c, 0, 0, 0, 0, 0}; }
inline Jet2 jet_u(double u) { return {u, 1, 0, 0, 0, 0}; }
inline Jet2 jet_v(double v) { return {v, 0, 1, 0, 0, 0}; }

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.v + b.v, a.du + b.du, a.dv + b.dv, a.duu + b.duu, a.duv + b.duv, a.dvv + b.dvv};
}
inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.v - b.v, a.du - b.du, a.dv - b.dv, a.duu - b.duu, a.duv - b.duv, a.dvv - b.dvv};
}
inline Jet2 operator-(const Jet2& a) { return {-a.v, -a.du, -a.dv, -a.duu, -a.duv, -a.dvv}; }
inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.v * b.v,
          a.du * b.v + a.v * b.du,
          a.dv * b.v + a.v * b.dv,
          a.duu * b.v + 2.0 * a.du * b.du + a.v * b.duu,
          a.duv * b.v + a.du * b.dv + a.dv * b.du + a.v * b.duv,
          a.dvv * b.v + 2.0 * a.dv * b.dv + a.v * b.dvv};
}
inline Jet2 operator*(double s, const Jet2& a) {
  return {s * a.v, s * a.du, s * a.dv, s * a.duu, s * a.duv, s * a.dvv};
}
inline Jet2 operator+(const Jet2& a, double c) { return {a.v + c, a.du, a.dv, a.duu, a.duv, a.dvv}; }
inline Jet2 operator+(double c, const Jet2& a) { return a + c; }
inline Jet2 operator-(const Jet2& a, double c) { return a + (-c); }
inline Jet2 operator-(double c, const Jet2& a) { return (-a) + c; }

// Division solves a = q * b order by order.
inline Jet2 operator/(const Jet2& a, const Jet2& b) {
  if (b.v == 0.0) throw DivisionByZero("jet division by zero value");
  Jet2 q;
  q.v = a.v / b.v;
  q.du = (a.du - q.v * b.du) / b.v;
  q.dv = (a.dv - q.v * b.dv) / b.v;
  q.duu = (a.duu - 2.0 * q.du * b.du - q.v * b.duu) / b.v;
  q.duv = (a.duv - q.du * b.dv - q.dv * b.du - q.v * b.duv) / b.v;
  q.dvv = (a.dvv - 2.0 * q.dv * b.dv - q.v * b.dvv) / b.v;
  return q;
}

// Chain rule for a scalar function with given first/second derivative at a.v.
inline Jet2 jet_chain(const Jet2& a, double f, double fp, double fpp) {
  return {f,
          fp * a.du,
          fp * a.dv,
          fpp * a.du * a.du + fp * a.duu,
          fpp * a.du * a.dv + fp * a.duv,
          fpp * a.dv * a.dv + fp * a.dvv};
}

inline Jet2 sin(const Jet2& a) { return jet_chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
inline Jet2 cos(const Jet2& a) { return jet_chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
inline Jet2 sqrt(const Jet2& a) {
  if (a.v <= 0.0) throw DomainError("jet sqrt of non-positive value");
  double r = std::sqrt(a.v);
  return jet_chain(a, r, 0.5 / r, -0.25 / (r * a.v));
}

// First-order jet in (u, v).
struct Jet1 {
  double v = 0, du = 0, dv = 0;
};

inline Jet1 operator+(const Jet1& a, const Jet1& b) { return {a.v + b.v, a.du + b.du, a.dv + b.dv}; }
inline Jet1 operator-(const Jet1& a, const Jet1& b) { return {a.v - b.v, a.du - b.du, a.dv - b.dv}; }
inline Jet1 operator-(const Jet1& a) { return {-a.v, -a.du, -a.dv}; }
inline Jet1 operator*(const Jet1& a, const Jet1& b) {
  return {a.v * b.v, a.du * b.v + a.v * b.du, a.dv * b.v + a.v * b.dv};
}
inline Jet1 operator*(double s, const Jet1& a) { return {s * a.v, s * a.du, s * a.dv}; }
inline Jet1 operator/(const Jet1& a, const Jet1& b) {
  if (b.v == 0.0) throw DivisionByZero("jet division by zero value");
  double q = a.v / b.v;
  return {q, (a.du - q * b.du) / b.v, (a.dv - q * b.dv) / b.v};
}
inline Jet1 sqrt(const Jet1& a) {
  if (a.v <= 0.0) throw DomainError("jet sqrt of non-positive value");
  double r = std::sqrt(a.v);
  return {r, 0.5 * a.du / r, 0.5 * a.dv / r};
}

// Truncations of a Jet2: the value jet and the two shifted (derivative) jets.
// A shifted jet is only first-order data, which is why the derived surface
// fields built from them are Jet1, not Jet2.
inline Jet1 value_jet(const Jet2& a) { return {a.v, a.du, a.dv}; }
inline Jet1 shift_u(const Jet2& a) { return {a.du, a.duu, a.duv}; }
inline Jet1 shift_v(const Jet2& a) { return {a.dv, a.duv, a.dvv}; }

// Order-2 jet along a curve parameter.
struct CurveJet2 {
  double v = 0, dt = 0, dtt = 0;
};

inline CurveJet2 curve_const(double c) { return {c, 0, 0}; }
inline CurveJet2 curve_t(double t) { return {t, 1, 0}; }

inline CurveJet2 operator+(const CurveJet2& a, const CurveJet2& b) {
  return {a.v + b.v, a.dt + b.dt, a.dtt + b.dtt};
}
inline CurveJet2 operator-(const CurveJet2& a, const CurveJet2& b) {
  return {a.v - b.v, a.dt - b.dt, a.dtt - b.dtt};
}
inline CurveJet2 operator-(const CurveJet2& a) { return {-a.v, -a.dt, -a.dtt}; }
inline CurveJet2 operator*(const CurveJet2& a, const CurveJet2& b) {
  return {a.v * b.v, a.dt * b.v + a.v * b.dt, a.dtt * b.v + 2.0 * a.dt * b.dt + a.v * b.dtt};
}
inline CurveJet2 operator*(double s, const CurveJet2& a) { return {s * a.v, s * a.dt, s * a.dtt}; }
inline CurveJet2 operator+(const CurveJet2& a, double c) { return {a.v + c, a.dt, a.dtt}; }
inline CurveJet2 operator/(const CurveJet2& a, const CurveJet2& b) {
  if (b.v == 0.0) throw DivisionByZero("jet division by zero value");
  CurveJet2 q;
  q.v = a.v / b.v;
  q.dt = (a.dt - q.v * b.dt) / b.v;
  q.dtt = (a.dtt - 2.0 * q.dt * b.dt - q.v * b.dtt) / b.v;
  return q;
}
inline CurveJet2 curve_chain(const CurveJet2& a, double f, double fp, double fpp) {
  return {f, fp * a.dt, fpp * a.dt * a.dt + fp * a.dtt};
}
inline CurveJet2 sin(const CurveJet2& a) {
  return curve_chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v));
}
inline CurveJet2 cos(const CurveJet2& a) {
  return curve_chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v));
}
inline CurveJet2 sqrt(const CurveJet2& a) {
  if (a.v <= 0.0) throw DomainError("jet sqrt of non-positive value");
  double r = std::sqrt(a.v);
  return curve_chain(a, r, 0.5 / r, -0.25 / (r * a.v));
}

// First-order dual number in a single parameter.
struct Dual1 {
  double v = 0, d = 0;
};

inline Dual1 operator+(const Dual1& a, const Dual1& b) { return {a.v + b.v, a.d + b.d}; }
inline Dual1 operator-(const Dual1& a, const Dual1& b) { return {a.v - b.v, a.d - b.d}; }
inline Dual1 operator-(const Dual1& a) { return {-a.v, -a.d}; }
inline Dual1 operator*(const Dual1& a, const Dual1& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline Dual1 operator*(double s, const Dual1& a) { return {s * a.v, s * a.d}; }
inline Dual1 operator+(const Dual1& a, double c) { return {a.v + c, a.d}; }
inline Dual1 operator/(const Dual1& a, const Dual1& b) {
  if (b.v == 0.0) throw DivisionByZero("jet division by zero value");
  double q = a.v / b.v;
  return {q, (a.d - q * b.d) / b.v};
}
inline Dual1 sin(const Dual1& a) { return {std::sin(a.v), std::cos(a.v) * a.d}; }
inline Dual1 cos(const Dual1& a) { return {std::cos(a.v), -std::sin(a.v) * a.d}; }
inline Dual1 sqrt(const Dual1& a) {
  if (a.v <= 0.0) throw DomainError("jet sqrt of non-positive value");
  double r = std::sqrt(a.v);
  return {r, 0.5 * a.d / r};
}
inline Dual1 atan2(const Dual1& s, const Dual1& c) {
  double n = c.v * c.v + s.v * s.v;
  if (n == 0.0) throw DomainError("atan2 of zero pair");
  return {std::atan2(s.v, c.v), (c.v * s.d - s.v * c.d) / n};
}

// Angle jet from a (sin, cos) jet pair.  The value comes from the
// two-argument arctangent; every derivative comes from the branch-free form
// d(theta) = (c ds - s dc) / (c^2 + s^2), so the result is smooth across the
// +-pi cut.  Second derivatives are assembled from the first-order jets of
// the numerator and denominator.
inline Jet2 jet_atan2(const Jet2& s, const Jet2& c) {
  Jet1 sv = value_jet(s), cv = value_jet(c);
  Jet1 n = cv * cv + sv * sv;
  if (n.v == 0.0) throw DomainError("atan2 of zero pair");
  Jet1 tu = (cv * shift_u(s) - sv * shift_u(c)) / n;  // jet of d(theta)/du
  Jet1 tv = (cv * shift_v(s) - sv * shift_v(c)) / n;  // jet of d(theta)/dv
  Jet2 r;
  r.v = std::atan2(s.v, c.v);
  r.du = tu.v;
  r.dv = tv.v;
  r.duu = tu.du;
  r.duv = tu.dv;  // equals tv.du analytically
  r.dvv = tv.dv;
  return r;
}

inline CurveJet2 curve_atan2(const CurveJet2& s, const CurveJet2& c) {
  Dual1 sv{s.v, s.dt}, cv{c.v, c.dt};
  Dual1 n = cv * cv + sv * sv;
  if (n.v == 0.0) throw DomainError("atan2 of zero pair");
  Dual1 su{s.dt, s.dtt}, cu{c.dt, c.dtt};
  Dual1 td = (cv * su - sv * cu) / n;
  return {std::atan2(s.v, c.v), td.v, td.d};
}

// Central-difference partials of a scalar map, used as the independent
// derivative oracle in tests and cross-check commands.  Nine-point stencil,
// O(h^2) accurate.
struct FdPartials {
  double du = 0, dv = 0, duu = 0, duv = 0, dvv = 0;
  std::array<double, 9> stencil{};  // row-major over (u-h, u, u+h) x (v-h, v, v+h)
};

inline double fd_default_step(double u, double v) {
  return 1e-4 * std::max({1.0, std::abs(u), std::abs(v)});
}

// Step for central first differences.  The default step is sized so the
// second-derivative entries of the 9-point stencil survive roundoff; pure
// gradient checks balance truncation against roundoff near cbrt(eps) instead.
inline double fd_gradient_step(double u, double v) {
  return 1e-5 * std::max({1.0, std::abs(u), std::abs(v)});
}

inline FdPartials fd_partials(const std::function<double(double, double)>& f,
                              double u, double v, double h = 0.0) {
  if (h == 0.0) h = fd_default_step(u, v);
  FdPartials r;
  double f00 = f(u - h, v - h), f01 = f(u - h, v), f02 = f(u - h, v + h);
  double f10 = f(u, v - h), f11 = f(u, v), f12 = f(u, v + h);
  double f20 = f(u + h, v - h), f21 = f(u + h, v), f22 = f(u + h, v + h);
  r.stencil = {f00, f01, f02, f10, f11, f12, f20, f21, f22};
  r.du = (f21 - f01) / (2.0 * h);
  r.dv = (f12 - f10) / (2.0 * h);
  r.duu = (f21 - 2.0 * f11 + f01) / (h * h);
  r.dvv = (f12 - 2.0 * f11 + f10) / (h * h);
  r.duv = (f22 - f20 - f02 + f00) / (4.0 * h * h);
  return r;
}

}  // namespace h1geo

#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "errors.hpp"
#include "heisenberg.hpp"
#include "jets.hpp"
#include "quadrature.hpp"
#include "surface.hpp"

// Curves on a patch that are transverse to the horizontal distribution:
// e^0(gamma') != 0 along the curve.  The unit tangent is normalized by
// |f^2(gamma')| and the metric normal is N = eps f1 with eps = -sign of
// f^2(gamma'), which orients {T, f1} positively against the (f1, f2) frame
// and gives eps f^2(T) < 0.

namespace h1geo {

struct BoundaryCurve {
  const SurfacePatch* patch = nullptr;
  std::function<std::pair<CurveJet2, CurveJet2>(double)> map;  // t -> (u(t), v(t))
  double t0 = 0, t1 = 0;
};

inline BoundaryCurve param_segment(const SurfacePatch& patch, Vertex2 a, Vertex2 b) {
  return {&patch,
          [a, b](double t) {
            CurveJet2 u{a.u + t * (b.u - a.u), b.u - a.u, 0.0};
            CurveJet2 v{a.v + t * (b.v - a.v), b.v - a.v, 0.0};
            return std::make_pair(u, v);
          },
          0.0, 1.0};
}

// Coordinate line v = const traversed in u (or the transpose).
inline BoundaryCurve param_line_u(const SurfacePatch& patch, double u0, double u1, double v) {
  return param_segment(patch, {u0, v}, {u1, v});
}
inline BoundaryCurve param_line_v(const SurfacePatch& patch, double v0, double v1, double u) {
  return param_segment(patch, {u, v0}, {u, v1});
}

inline BoundaryCurve reversed(const BoundaryCurve& c) {
  auto map = c.map;
  double t0 = c.t0, t1 = c.t1;
  return {c.patch,
          [map, t0, t1](double t) {
            auto [u, v] = map(t0 + t1 - t);
            return std::make_pair(CurveJet2{u.v, -u.dt, u.dtt}, CurveJet2{v.v, -v.dt, v.dtt});
          },
          t0, t1};
}

namespace detail {

// First-order data of the frame along the curve at parameter t.
struct CurveFrame {
  FrameEval fe;
  CurveJet2 u, v;
  Dual1 F1, F2;     // f^1(gamma'), f^2(gamma') with their t-derivatives
  Dual1 b0, b1, b2; // frame coefficients of gamma'
  double dalpha_g = 0;  // dalpha(gamma')
  double margin = 0;    // |e^0(gamma')| / |gamma'|
};

inline Dual1 compose(const Jet1& g, const CurveJet2& u, const CurveJet2& v) {
  return {g.v, g.du * u.dt + g.dv * v.dt};
}

// d/dt of u'(t) * g(u(t), v(t)) + v'(t) * h(u(t), v(t)).
inline Dual1 pair_field(const Jet1& g, const Jet1& h, const CurveJet2& u, const CurveJet2& v) {
  Dual1 G = compose(g, u, v), H = compose(h, u, v);
  return Dual1{u.dt, u.dtt} * G + Dual1{v.dt, v.dtt} * H;
}

inline CurveFrame curve_frame(const BoundaryCurve& c, double t) {
  auto [u, v] = c.map(t);
  CurveFrame r{evaluate_frame_ext(*c.patch, u.v, v.v), u, v, {}, {}, {}, {}, {}, 0, 0};
  const FrameJets& J = r.fe.jets;
  r.b0 = pair_field(J.a0u, J.a0v, u, v);
  r.b1 = pair_field(J.a1u, J.a1v, u, v);
  r.b2 = pair_field(J.a2u, J.a2v, u, v);
  r.F1 = pair_field(J.f1du, J.f1dv, u, v);
  r.F2 = r.b0;
  const FramePacket& fp = r.fe.packet;
  r.dalpha_g = u.dt * fp.dalpha_u + v.dt * fp.dalpha_v;
  double n = std::sqrt(r.b0.v * r.b0.v + r.b1.v * r.b1.v + r.b2.v * r.b2.v);
  r.margin = std::abs(r.b0.v) / n;
  if (r.margin < 1e-9) throw NonTransverse(t, r.margin);
  return r;
}

}  // namespace detail

inline double transversality_margin(const BoundaryCurve& c, double t) {
  auto [u, v] = c.map(t);
  FrameEval fe = evaluate_frame_ext(*c.patch, u.v, v.v);
  const FrameJets& J = fe.jets;
  double b0 = u.dt * J.a0u.v + v.dt * J.a0v.v;
  double b1 = u.dt * J.a1u.v + v.dt * J.a1v.v;
  double b2 = u.dt * J.a2u.v + v.dt * J.a2v.v;
  return std::abs(b0) / std::sqrt(b0 * b0 + b1 * b1 + b2 * b2);
}

struct UnitTangent {
  SurfaceTangent T;
  double eps = 0;
};

inline UnitTangent unit_tangent(const BoundaryCurve& c, double t) {
  detail::CurveFrame r = detail::curve_frame(c, t);
  double a = std::abs(r.F2.v);
  UnitTangent out{{r.F1.v / a, r.F2.v / a}, r.F2.v > 0 ? -1.0 : 1.0};
  if (out.eps * out.T.c2 >= 0.0)
    throw GeometryError("unit tangent orientation check failed");
  return out;
}

// Curvature of a transverse curve:
// k = (eps / f^2(gamma')) (d/dt [f^1(gamma')/f^2(gamma')] + A dalpha(gamma')).
inline double curve_curvature(const BoundaryCurve& c, double t) {
  detail::CurveFrame r = detail::curve_frame(c, t);
  Dual1 ratio = r.F1 / r.F2;
  double eps = r.F2.v > 0 ? -1.0 : 1.0;
  return (eps / r.F2.v) * (ratio.d + r.fe.packet.A * r.dalpha_g);
}

// Same quantity through the projected connection: k = eps f^1(nabla_T T).
// Independent route used to cross-check the formula above.
inline double curve_curvature_via_connection(const BoundaryCurve& c, double t) {
  detail::CurveFrame r = detail::curve_frame(c, t);
  const FramePacket& fp = r.fe.packet;
  double eps = r.F2.v > 0 ? -1.0 : 1.0;
  Dual1 a = (r.F2.v > 0 ? 1.0 : -1.0) * r.F2;  // |f^2(gamma')|
  Dual1 T0 = r.b0 / a, T1 = r.b1 / a, T2 = r.b2 / a;
  FrameVector amb{T0.d, T1.d, T2.d};  // ambient derivative along gamma'
  FrameVector proj = amb - detail::eta_star_apply(fp, amb) * fp.eta;
  double f1_of = -fp.sin_alpha * proj.a1 + fp.cos_alpha * proj.a2;
  return eps * f1_of / a.v;
}

// Corner area of an exterior angle between transverse vectors:
// ca(v, w) = dV(eta, v, w) / (e^0(v) e^0(w)).
inline double corner_area(const FramePacket& fp, const SurfaceTangent& vin,
                          const SurfaceTangent& vout) {
  if (vin.c2 == 0.0 || vout.c2 == 0.0)
    throw NonTransverse(0.0, 0.0);
  FrameVector a = to_frame_vector(fp, vin), b = to_frame_vector(fp, vout);
  return volume_form(fp.eta, a, b) / (a.a0 * b.a0);
}

struct Corner {
  SurfaceTangent incoming, outgoing;
  double ca = 0;
};

// Integral of k against the boundary measure |f^2(gamma')| dt.
inline QuadratureReport line_integral_k(const BoundaryCurve& c, double tol_panel = 1e-12,
                                        int max_depth = 24) {
  auto f = [&](double t) {
    detail::CurveFrame r = detail::curve_frame(c, t);
    Dual1 ratio = r.F1 / r.F2;
    double eps = r.F2.v > 0 ? -1.0 : 1.0;
    double k = (eps / r.F2.v) * (ratio.d + r.fe.packet.A * r.dalpha_g);
    return k * std::abs(r.F2.v);
  };
  return adaptive_1d(f, c.t0, c.t1, tol_panel, max_depth);
}

// Line integral of the connection form A dalpha; needs no transversality.
inline QuadratureReport line_integral_A_dalpha(const BoundaryCurve& c,
                                               double tol_panel = 1e-12,
                                               int max_depth = 24) {
  auto f = [&](double t) {
    auto [u, v] = c.map(t);
    FramePacket fp = evaluate_frame(*c.patch, u.v, v.v);
    return fp.A * (u.dt * fp.dalpha_u + v.dt * fp.dalpha_v);
  };
  return adaptive_1d(f, c.t0, c.t1, tol_panel, max_depth);
}

}  // namespace h1geo

#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "errors.hpp"
#include "heisenberg.hpp"
#include "jets.hpp"
#include "quadrature.hpp"

// Frame geometry of a non-characteristic surface patch.  At every point the
// tangent plane meets the horizontal distribution D in a line; f1 is the unit
// field spanning it, eta = -J f1 the horizontal normal, written
// eta = cos(alpha) e1 + sin(alpha) e2.  A = -eta*(e0) completes the adapted
// coframe (eta*, f^1, f^2 = e^0) dual to (eta, f1, f2 = e0 + A eta) and the
// curvature is K = dA ^ dalpha (f1, f2).

namespace h1geo {

struct SurfacePatch {
  std::function<std::array<Jet2, 3>(double, double)> eval;  // order-2 immersion jets
  Rect domain;
  double period_u = 0, period_v = 0;  // 0 marks an aperiodic direction
  int sigma = 1;                      // orientation sign applied to f1
  double anchor_sign = 0;             // set by make_patch; +-1 once initialized
};

// Tangent vector c1 f1 + c2 f2 in the adapted surface frame.
struct SurfaceTangent {
  double c1 = 0, c2 = 0;
};

// Constant-coefficient combination of the coordinate fields du, dv.
struct ParamVector {
  double pu = 0, pv = 0;
};

struct FramePacket {
  Point p;
  FrameVector du_f, dv_f;    // coordinate tangents in the left-invariant frame
  FrameVector f1, eta, f2;
  double cos_alpha = 0, sin_alpha = 0;
  double A = 0;
  // Rows of P express (du, dv) in (f1, f2): row u = (f^1(du), f^2(du)), etc.
  std::array<double, 4> P{};
  double det_P = 0, cond_P = 0;
  double dalpha_f1 = 0, dalpha_f2 = 0;  // dalpha on the adapted frame
  double dA_f1 = 0, dA_f2 = 0;
  double dalpha_u = 0, dalpha_v = 0;    // the same forms on the coordinate basis
  double dA_u = 0, dA_v = 0;
  double K = 0;
  double margin = 0;
};

// First-order jets of the frame fields, kept alongside the packet for
// consumers that differentiate along curves.
struct FrameJets {
  Jet1 a0u, a1u, a2u;  // frame coefficients of du as fields of (u, v)
  Jet1 a0v, a1v, a2v;
  Jet1 cosA, sinA, A;
  Jet1 f1du, f1dv;     // f^1(du), f^1(dv); f^2(du) = a0u, f^2(dv) = a0v
};

struct FrameEval {
  FramePacket packet;
  FrameJets jets;
};

namespace detail {

struct RawTangents {
  Jet1 a0u, a1u, a2u, a0v, a1v, a2v;
  Point p;
  double margin;
};

inline RawTangents raw_tangents(const SurfacePatch& patch, double u, double v) {
  std::array<Jet2, 3> X = patch.eval(u, v);
  const Jet2 &x = X[0], &y = X[1], &z = X[2];
  double cx = y.du * z.dv - z.du * y.dv;
  double cy = z.du * x.dv - x.du * z.dv;
  double cz = x.du * y.dv - y.du * x.dv;
  double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
  double nu_c = std::sqrt(x.du * x.du + y.du * y.du + z.du * z.du);
  double nv_c = std::sqrt(x.dv * x.dv + y.dv * y.dv + z.dv * z.dv);
  if (cross <= 1e-12 * nu_c * nv_c) throw DegenerateImmersion(u, v);

  RawTangents r;
  r.p = {x.v, y.v, z.v};
  Jet1 xj = value_jet(x), yj = value_jet(y);
  r.a1u = shift_u(x);
  r.a2u = shift_u(y);
  r.a0u = shift_u(z) + 0.5 * (yj * shift_u(x) - xj * shift_u(y));
  r.a1v = shift_v(x);
  r.a2v = shift_v(y);
  r.a0v = shift_v(z) + 0.5 * (yj * shift_v(x) - xj * shift_v(y));

  auto n3 = [](const Jet1& a, const Jet1& b, const Jet1& c) {
    return std::sqrt(a.v * a.v + b.v * b.v + c.v * c.v);
  };
  double nu = n3(r.a0u, r.a1u, r.a2u), nv = n3(r.a0v, r.a1v, r.a2v);
  r.margin = std::max(std::abs(r.a0u.v), std::abs(r.a0v.v)) / (nu + nv);
  return r;
}

}  // namespace detail

// Fixes the sign of f1 at the anchor point (domain center).  The raw
// characteristic field w = e^0(dv) du - e^0(du) dv is continuous across the
// patch; the anchor rule orients it once against the reference vector
// du - (e^0(du)/e^0(X0)) X0 built from the more transverse coordinate tangent
// X0.  A degenerate reference (X0 = du) counts as a tie and resolves to +1.
inline SurfacePatch make_patch(std::function<std::array<Jet2, 3>(double, double)> eval,
                               Rect domain, int sigma = 1, double period_u = 0,
                               double period_v = 0) {
  SurfacePatch patch{std::move(eval), domain, period_u, period_v, sigma, 0.0};
  double uc = 0.5 * (domain.u0 + domain.u1), vc = 0.5 * (domain.v0 + domain.v1);
  detail::RawTangents r = detail::raw_tangents(patch, uc, vc);
  if (r.margin < 1e-9) throw CharacteristicPoint(uc, vc, r.margin);
  double w1 = r.a0v.v * r.a1u.v - r.a0u.v * r.a1v.v;
  double w2 = r.a0v.v * r.a2u.v - r.a0u.v * r.a2v.v;
  double s = 1.0;
  if (std::abs(r.a0v.v) > std::abs(r.a0u.v)) {
    double c = r.a0u.v / r.a0v.v;
    double ref1 = r.a1u.v - c * r.a1v.v, ref2 = r.a2u.v - c * r.a2v.v;
    double dot = w1 * ref1 + w2 * ref2;
    if (dot < 0.0) s = -1.0;
  }
  patch.anchor_sign = s;
  return patch;
}

inline FrameEval evaluate_frame_ext(const SurfacePatch& patch, double u, double v) {
  if (patch.anchor_sign == 0.0)
    throw GeometryError("surface patch not initialized through make_patch");
  detail::RawTangents r = detail::raw_tangents(patch, u, v);
  if (r.margin < 1e-9) throw CharacteristicPoint(u, v, r.margin);

  FrameJets J;
  J.a0u = r.a0u; J.a1u = r.a1u; J.a2u = r.a2u;
  J.a0v = r.a0v; J.a1v = r.a1v; J.a2v = r.a2v;

  // Characteristic direction w = e^0(dv) du - e^0(du) dv, normalized in D.
  Jet1 w1 = r.a0v * r.a1u - r.a0u * r.a1v;
  Jet1 w2 = r.a0v * r.a2u - r.a0u * r.a2v;
  Jet1 n = sqrt(w1 * w1 + w2 * w2);
  double sgn = patch.sigma * patch.anchor_sign;
  J.sinA = -sgn * (w1 / n);  // f1 = -sin(alpha) e1 + cos(alpha) e2
  J.cosA = sgn * (w2 / n);

  // A = <eta, X_h> / e^0(X) for the more transverse coordinate tangent X;
  // the other tangent must give the same value whenever it is usable.
  auto a_from = [&](const Jet1& a0, const Jet1& a1, const Jet1& a2) {
    return (J.cosA * a1 + J.sinA * a2) / a0;
  };
  bool use_u = std::abs(r.a0u.v) >= std::abs(r.a0v.v);
  J.A = use_u ? a_from(r.a0u, r.a1u, r.a2u) : a_from(r.a0v, r.a1v, r.a2v);
  {
    const Jet1& other = use_u ? r.a0v : r.a0u;
    double nrm = use_u ? std::sqrt(r.a0v.v * r.a0v.v + r.a1v.v * r.a1v.v + r.a2v.v * r.a2v.v)
                       : std::sqrt(r.a0u.v * r.a0u.v + r.a1u.v * r.a1u.v + r.a2u.v * r.a2u.v);
    if (std::abs(other.v) > 1e-4 * nrm) {
      Jet1 A2 = use_u ? a_from(r.a0v, r.a1v, r.a2v) : a_from(r.a0u, r.a1u, r.a2u);
      if (std::abs(J.A.v - A2.v) > 1e-10 * std::max(1.0, std::abs(J.A.v)))
        throw GeometryError("A disagrees between coordinate tangents");
    }
  }

  J.f1du = (-1.0 * J.sinA) * r.a1u + J.cosA * r.a2u;
  J.f1dv = (-1.0 * J.sinA) * r.a1v + J.cosA * r.a2v;

  FramePacket P;
  P.p = r.p;
  P.margin = r.margin;
  P.du_f = {r.a0u.v, r.a1u.v, r.a2u.v};
  P.dv_f = {r.a0v.v, r.a1v.v, r.a2v.v};
  P.cos_alpha = J.cosA.v;
  P.sin_alpha = J.sinA.v;
  P.A = J.A.v;
  P.f1 = {0.0, -P.sin_alpha, P.cos_alpha};
  P.eta = {0.0, P.cos_alpha, P.sin_alpha};
  P.f2 = {1.0, P.A * P.cos_alpha, P.A * P.sin_alpha};

  P.P = {J.f1du.v, r.a0u.v, J.f1dv.v, r.a0v.v};
  P.det_P = P.P[0] * P.P[3] - P.P[1] * P.P[2];
  double fro = std::sqrt(P.P[0] * P.P[0] + P.P[1] * P.P[1] + P.P[2] * P.P[2] + P.P[3] * P.P[3]);
  P.cond_P = fro * fro / std::abs(P.det_P) * 0.5;  // ~ ||P|| ||P^-1|| up to a factor

  // dalpha = cos(alpha) d(sin alpha) - sin(alpha) d(cos alpha); exact because
  // (cos alpha, sin alpha) is normalized.
  P.dalpha_u = J.cosA.v * J.sinA.du - J.sinA.v * J.cosA.du;
  P.dalpha_v = J.cosA.v * J.sinA.dv - J.sinA.v * J.cosA.dv;
  P.dA_u = J.A.du;
  P.dA_v = J.A.dv;

  // One-forms on (f1, f2): invert P against the coordinate-basis values.
  auto on_frame = [&](double wu, double wv, double& w_f1, double& w_f2) {
    w_f1 = (P.P[3] * wu - P.P[1] * wv) / P.det_P;
    w_f2 = (-P.P[2] * wu + P.P[0] * wv) / P.det_P;
  };
  on_frame(P.dalpha_u, P.dalpha_v, P.dalpha_f1, P.dalpha_f2);
  on_frame(P.dA_u, P.dA_v, P.dA_f1, P.dA_f2);

  P.K = P.dA_f1 * P.dalpha_f2 - P.dA_f2 * P.dalpha_f1;
  return {P, J};
}

inline FramePacket evaluate_frame(const SurfacePatch& patch, double u, double v) {
  return evaluate_frame_ext(patch, u, v).packet;
}

// Adapted coframe as covectors on the ambient frame.
inline FrameCovector eta_star(const FramePacket& fp) {
  return {-fp.A, fp.cos_alpha, fp.sin_alpha};
}
inline FrameCovector f_one(const FramePacket& fp) {
  return {0.0, -fp.sin_alpha, fp.cos_alpha};
}
inline FrameCovector f_two(const FramePacket&) { return {1.0, 0.0, 0.0}; }

inline FrameVector to_frame_vector(const FramePacket& fp, const SurfaceTangent& t) {
  return t.c1 * fp.f1 + t.c2 * fp.f2;
}
// Valid for tangent vectors (eta* component zero).
inline SurfaceTangent to_surface_tangent(const FramePacket& fp, const FrameVector& w) {
  return {-fp.sin_alpha * w.a1 + fp.cos_alpha * w.a2, w.a0};
}

inline double dalpha(const FramePacket& fp, const SurfaceTangent& t) {
  return fp.dalpha_f1 * t.c1 + fp.dalpha_f2 * t.c2;
}
inline double dA(const FramePacket& fp, const SurfaceTangent& t) {
  return fp.dA_f1 * t.c1 + fp.dA_f2 * t.c2;
}

// Gauss map into the cylinder x^2 + y^2 = 1.
inline Point gauss_map(const FramePacket& fp) {
  return {fp.cos_alpha, fp.sin_alpha, -fp.A};
}

// Second fundamental form V = -dalpha (x) f^1 + dA (x) f^2.
inline double second_fundamental_form(const FramePacket& fp, const SurfaceTangent& X,
                                      const SurfaceTangent& Y) {
  return -dalpha(fp, X) * Y.c1 + dA(fp, X) * Y.c2;
}

// Curvature tensor of the projected connection:
// R(X, Y) Z = (dA ^ dalpha)(X, Y) f^2(Z) f1.
inline SurfaceTangent curvature_tensor(const FramePacket& fp, const SurfaceTangent& X,
                                       const SurfaceTangent& Y, const SurfaceTangent& Z) {
  double wedge = dA(fp, X) * dalpha(fp, Y) - dA(fp, Y) * dalpha(fp, X);
  return {wedge * Z.c2, 0.0};
}

// Torsion of the projected connection: T = A f^1 ^ f^2 (x) f2.
inline SurfaceTangent torsion_eval(const FramePacket& fp, const SurfaceTangent& X,
                                   const SurfaceTangent& Y) {
  return {0.0, fp.A * (X.c1 * Y.c2 - X.c2 * Y.c1)};
}

namespace detail {

inline double eta_star_apply(const FramePacket& fp, const FrameVector& w) {
  return fp.cos_alpha * w.a1 + fp.sin_alpha * w.a2 - fp.A * w.a0;
}

// Projected covariant derivative of the constant-coefficient coordinate field
// Y along the coordinate direction X, as a surface tangent.
inline SurfaceTangent nabla_param(const FrameEval& fe, const ParamVector& X,
                                  const ParamVector& Y) {
  const FrameJets& J = fe.jets;
  auto deriv = [&](const Jet1& bu, const Jet1& bv) {
    // X applied to the frame-coefficient field of Y.
    double du = Y.pu * bu.du + Y.pv * bv.du;
    double dv = Y.pu * bu.dv + Y.pv * bv.dv;
    return X.pu * du + X.pv * dv;
  };
  FrameVector amb{deriv(J.a0u, J.a0v), deriv(J.a1u, J.a1v), deriv(J.a2u, J.a2v)};
  FrameVector proj = amb - eta_star_apply(fe.packet, amb) * fe.packet.eta;
  return to_surface_tangent(fe.packet, proj);
}

}  // namespace detail

struct GaussCodazzi {
  SurfaceTangent gauss_res;  // should vanish
  double codazzi_res = 0;    // should vanish
};

// Residuals of the Gauss and Codazzi equations at (u, v) for constant
// coordinate-field combinations X, Y, Z.  The directional derivatives
// X(V(Y, Z)) need second derivatives of alpha and A, which an order-2
// immersion jet cannot supply; they are taken by central differences of the
// jet-computed coefficient field instead.
inline GaussCodazzi gauss_codazzi_residuals(const SurfacePatch& patch, double u, double v,
                                            const ParamVector& X, const ParamVector& Y,
                                            const ParamVector& Z) {
  FrameEval fe = evaluate_frame_ext(patch, u, v);
  const FramePacket& fp = fe.packet;

  auto st = [&](const FramePacket& p, const ParamVector& W) {
    return SurfaceTangent{W.pu * p.P[0] + W.pv * p.P[2], W.pu * p.P[1] + W.pv * p.P[3]};
  };
  auto v_param = [&](const FramePacket& p, const ParamVector& W1, const ParamVector& W2) {
    double da = W1.pu * p.dalpha_u + W1.pv * p.dalpha_v;
    double dq = W1.pu * p.dA_u + W1.pv * p.dA_v;
    SurfaceTangent t2 = st(p, W2);
    return -da * t2.c1 + dq * t2.c2;
  };

  SurfaceTangent Xt = st(fp, X), Yt = st(fp, Y), Zt = st(fp, Z);

  double wedge = dA(fp, Xt) * dalpha(fp, Yt) - dA(fp, Yt) * dalpha(fp, Xt);
  double rhs = -dalpha(fp, Xt) * second_fundamental_form(fp, Yt, Zt) +
               dalpha(fp, Yt) * second_fundamental_form(fp, Xt, Zt);
  GaussCodazzi out;
  out.gauss_res = {wedge * Zt.c2 - rhs, 0.0};

  double h = fd_gradient_step(u, v);
  auto dir = [&](const ParamVector& W, const ParamVector& P1, const ParamVector& P2) {
    auto q = [&](double uu, double vv) {
      return v_param(evaluate_frame(patch, uu, vv), P1, P2);
    };
    double qu = (q(u + h, v) - q(u - h, v)) / (2.0 * h);
    double qv = (q(u, v + h) - q(u, v - h)) / (2.0 * h);
    return W.pu * qu + W.pv * qv;
  };

  auto v_tan = [&](const SurfaceTangent& W1, const SurfaceTangent& W2) {
    return second_fundamental_form(fp, W1, W2);
  };
  SurfaceTangent nXY = detail::nabla_param(fe, X, Y), nXZ = detail::nabla_param(fe, X, Z);
  SurfaceTangent nYX = detail::nabla_param(fe, Y, X), nYZ = detail::nabla_param(fe, Y, Z);
  double covX = dir(X, Y, Z) - v_tan(nXY, Zt) - v_tan(Yt, nXZ);
  double covY = dir(Y, X, Z) - v_tan(nYX, Zt) - v_tan(Xt, nYZ);
  out.codazzi_res = covX - covY + v_tan(torsion_eval(fp, Xt, Yt), Zt);
  return out;
}

// Vector (or covector: the rule is the same componentwise derivative) field
// along a curve, given by frame coefficients as jets in the curve parameter.
struct FrameFieldJet {
  CurveJet2 a0, a1, a2;
};

// Adapted ambient connection: the derivative acts on frame coefficients.
inline FrameVector ambient_derivative(const FrameFieldJet& f) {
  return {f.a0.dt, f.a1.dt, f.a2.dt};
}

// Signed density of the Gauss map pullback (f~^1 ^ f~^2)(g_* du, g_* dv)
// against du dv, where (f~1, f~2) is the adapted frame of the cylinder
// x^2 + y^2 = 1.  Equals -dalpha ^ dA (du, dv) analytically.
inline double gauss_pushforward_density(const FrameEval& fe) {
  const FrameJets& J = fe.jets;
  double cx = J.cosA.v, sy = J.sinA.v;
  auto ftilde = [&](double wx, double wy, double wz, double& f1c, double& f2c) {
    double w0 = wz + 0.5 * (sy * wx - cx * wy);
    f1c = -sy * wx + cx * wy;
    f2c = w0;
  };
  double gu1, gu2, gv1, gv2;
  ftilde(J.cosA.du, J.sinA.du, -J.A.du, gu1, gu2);
  ftilde(J.cosA.dv, J.sinA.dv, -J.A.dv, gv1, gv2);
  return gu1 * gv2 - gu2 * gv1;
}

}  // namespace h1geo

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace h1geo {

// 8-point Gauss-Legendre rule on [-1, 1] (exact through degree 15).
inline constexpr std::array<double, 8> kGlNode = {
    -0.96028985649753623168, -0.79666647741362673959, -0.52553240991632898582,
    -0.18343464249564980494, 0.18343464249564980494, 0.52553240991632898582,
    0.79666647741362673959, 0.96028985649753623168};
inline constexpr std::array<double, 8> kGlWeight = {
    0.10122853629037625915, 0.22238103445337447054, 0.31370664587788728734,
    0.36268378337836198297, 0.36268378337836198297, 0.31370664587788728734,
    0.22238103445337447054, 0.10122853629037625915};

struct QuadratureReport {
  double value = 0;
  double error_estimate = 0;
  std::int64_t nodes_used = 0;
  int refinement_depth = 0;
  bool depth_capped = false;  // a panel hit the depth cap in non-strict mode
};

using Integrand1 = std::function<double(double)>;
using Integrand2 = std::function<double(double, double)>;

inline double gl8_segment(const Integrand1& f, double a, double b,
                          QuadratureReport& rep) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0;
  for (int i = 0; i < 8; ++i) s += kGlWeight[i] * f(mid + half * kGlNode[i]);
  rep.nodes_used += 8;
  return s * half;
}

namespace detail {

inline void adapt_1d(const Integrand1& f, double a, double b, double coarse,
                     double tol_panel, int depth, int max_depth, bool strict,
                     QuadratureReport& rep) {
  double mid = 0.5 * (a + b);
  double left = gl8_segment(f, a, mid, rep);
  double right = gl8_segment(f, mid, b, rep);
  double diff = std::abs(coarse - (left + right));
  rep.refinement_depth = std::max(rep.refinement_depth, depth);
  if (diff < tol_panel) {
    rep.value += left + right;
    rep.error_estimate += diff;
    return;
  }
  if (depth >= max_depth) {
    if (strict) throw NonConvergence("1d quadrature depth cap reached");
    rep.value += left + right;
    rep.error_estimate += diff;
    rep.depth_capped = true;
    return;
  }
  adapt_1d(f, a, mid, left, 0.5 * tol_panel, depth + 1, max_depth, strict, rep);
  adapt_1d(f, mid, b, right, 0.5 * tol_panel, depth + 1, max_depth, strict, rep);
}

}  // namespace detail

inline QuadratureReport adaptive_1d(const Integrand1& f, double a, double b,
                                    double tol_panel = 1e-12, int max_depth = 24,
                                    bool strict = true) {
  QuadratureReport rep;
  double coarse = gl8_segment(f, a, b, rep);
  detail::adapt_1d(f, a, b, coarse, tol_panel, 1, max_depth, strict, rep);
  return rep;
}

// Parameter-space domains.
struct Rect {
  double u0 = 0, u1 = 0, v0 = 0, v1 = 0;
};
struct Vertex2 {
  double u = 0, v = 0;
};
struct Polygon {
  std::vector<Vertex2> vertices;  // counterclockwise
};
struct Disk {
  double cu = 0, cv = 0, r = 0;
};
using Domain = std::variant<Rect, Polygon, Disk>;

inline double signed_area(const Polygon& p) {
  double a = 0;
  for (std::size_t i = 0; i < p.vertices.size(); ++i) {
    const auto& q = p.vertices[i];
    const auto& r = p.vertices[(i + 1) % p.vertices.size()];
    a += q.u * r.v - r.u * q.v;
  }
  return 0.5 * a;
}

inline double gl8x8_rect(const Integrand2& f, const Rect& r, QuadratureReport& rep) {
  double mu = 0.5 * (r.u0 + r.u1), hu = 0.5 * (r.u1 - r.u0);
  double mv = 0.5 * (r.v0 + r.v1), hv = 0.5 * (r.v1 - r.v0);
  double s = 0;
  for (int i = 0; i < 8; ++i) {
    double u = mu + hu * kGlNode[i];
    double row = 0;
    for (int j = 0; j < 8; ++j) row += kGlWeight[j] * f(u, mv + hv * kGlNode[j]);
    s += kGlWeight[i] * row;
  }
  rep.nodes_used += 64;
  return s * hu * hv;
}

struct Triangle {
  Vertex2 a, b, c;  // counterclockwise
};

// Duffy transform: the reference square (s, t) in [0,1]^2 maps to the
// triangle via p = a + s (b - a) + s t (c - b), with Jacobian 2 |T| s.
inline double duffy8x8_tri(const Integrand2& f, const Triangle& t,
                           QuadratureReport& rep) {
  double two_area = (t.b.u - t.a.u) * (t.c.v - t.a.v) - (t.c.u - t.a.u) * (t.b.v - t.a.v);
  double s = 0;
  for (int i = 0; i < 8; ++i) {
    double si = 0.5 + 0.5 * kGlNode[i];
    double row = 0;
    for (int j = 0; j < 8; ++j) {
      double tj = 0.5 + 0.5 * kGlNode[j];
      double u = t.a.u + si * (t.b.u - t.a.u) + si * tj * (t.c.u - t.b.u);
      double v = t.a.v + si * (t.b.v - t.a.v) + si * tj * (t.c.v - t.b.v);
      row += kGlWeight[j] * f(u, v);
    }
    s += kGlWeight[i] * row * si;
  }
  rep.nodes_used += 64;
  return s * two_area * 0.25;  // 0.25 = square-to-[0,1]^2 scale factors
}

namespace detail {

// Dyadic rectangle subdivision: a panel is accepted when the coarse value and
// the sum over its four children differ by less than the per-panel tolerance.
// Children are visited in a fixed SW, SE, NW, NE order so the accumulation is
// deterministic.
inline void adapt_rect(const Integrand2& f, const Rect& r, double coarse,
                       double tol_panel, int depth, int max_depth, bool strict,
                       QuadratureReport& rep) {
  double mu = 0.5 * (r.u0 + r.u1), mv = 0.5 * (r.v0 + r.v1);
  std::array<Rect, 4> kids = {Rect{r.u0, mu, r.v0, mv}, Rect{mu, r.u1, r.v0, mv},
                              Rect{r.u0, mu, mv, r.v1}, Rect{mu, r.u1, mv, r.v1}};
  std::array<double, 4> vals;
  double fine = 0;
  for (int i = 0; i < 4; ++i) fine += vals[i] = gl8x8_rect(f, kids[i], rep);
  double diff = std::abs(coarse - fine);
  rep.refinement_depth = std::max(rep.refinement_depth, depth);
  if (diff < tol_panel) {
    rep.value += fine;
    rep.error_estimate += diff;
    return;
  }
  if (depth >= max_depth) {
    if (strict) throw NonConvergence("2d quadrature depth cap reached");
    rep.value += fine;
    rep.error_estimate += diff;
    rep.depth_capped = true;
    return;
  }
  for (int i = 0; i < 4; ++i)
    adapt_rect(f, kids[i], vals[i], 0.25 * tol_panel, depth + 1, max_depth, strict, rep);
}

inline void adapt_tri(const Integrand2& f, const Triangle& t, double coarse,
                      double tol_panel, int depth, int max_depth, bool strict,
                      QuadratureReport& rep) {
  Vertex2 ab{0.5 * (t.a.u + t.b.u), 0.5 * (t.a.v + t.b.v)};
  Vertex2 bc{0.5 * (t.b.u + t.c.u), 0.5 * (t.b.v + t.c.v)};
  Vertex2 ca{0.5 * (t.c.u + t.a.u), 0.5 * (t.c.v + t.a.v)};
  std::array<Triangle, 4> kids = {Triangle{t.a, ab, ca}, Triangle{ab, t.b, bc},
                                  Triangle{ca, bc, t.c}, Triangle{ab, bc, ca}};
  std::array<double, 4> vals;
  double fine = 0;
  for (int i = 0; i < 4; ++i) fine += vals[i] = duffy8x8_tri(f, kids[i], rep);
  double diff = std::abs(coarse - fine);
  rep.refinement_depth = std::max(rep.refinement_depth, depth);
  if (diff < tol_panel) {
    rep.value += fine;
    rep.error_estimate += diff;
    return;
  }
  if (depth >= max_depth) {
    if (strict) throw NonConvergence("triangle quadrature depth cap reached");
    rep.value += fine;
    rep.error_estimate += diff;
    rep.depth_capped = true;
    return;
  }
  for (int i = 0; i < 4; ++i)
    adapt_tri(f, kids[i], vals[i], 0.25 * tol_panel, depth + 1, max_depth, strict, rep);
}

}  // namespace detail

inline QuadratureReport adaptive_rect(const Integrand2& f, const Rect& r,
                                      double tol_panel = 1e-10, int max_depth = 12,
                                      bool strict = true) {
  QuadratureReport rep;
  double coarse = gl8x8_rect(f, r, rep);
  detail::adapt_rect(f, r, coarse, tol_panel, 1, max_depth, strict, rep);
  return rep;
}

// Polygons are fan-triangulated from the first vertex; each triangle is
// integrated through the Duffy map with adaptive midpoint subdivision.
inline QuadratureReport adaptive_polygon(const Integrand2& f, const Polygon& p,
                                         double tol_panel = 1e-10, int max_depth = 12,
                                         bool strict = true) {
  QuadratureReport rep;
  for (std::size_t i = 1; i + 1 < p.vertices.size(); ++i) {
    Triangle t{p.vertices[0], p.vertices[i], p.vertices[i + 1]};
    QuadratureReport sub;
    double coarse = duffy8x8_tri(f, t, sub);
    detail::adapt_tri(f, t, coarse, tol_panel, 1, max_depth, strict, sub);
    rep.value += sub.value;
    rep.error_estimate += sub.error_estimate;
    rep.nodes_used += sub.nodes_used;
    rep.refinement_depth = std::max(rep.refinement_depth, sub.refinement_depth);
    rep.depth_capped = rep.depth_capped || sub.depth_capped;
  }
  return rep;
}

// Disks integrate in polar coordinates; the map is smooth and the radial
// Jacobian keeps the tensor rule spectrally accurate.
inline QuadratureReport adaptive_disk(const Integrand2& f, const Disk& d,
                                      double tol_panel = 1e-10, int max_depth = 12,
                                      bool strict = true) {
  auto polar = [&](double th, double r) {
    return f(d.cu + r * std::cos(th), d.cv + r * std::sin(th)) * r;
  };
  return adaptive_rect(polar, Rect{0.0, 2.0 * std::acos(-1.0), 0.0, d.r}, tol_panel,
                       max_depth, strict);
}

inline QuadratureReport integrate_domain(const Integrand2& f, const Domain& dom,
                                         double tol_panel = 1e-10, int max_depth = 12,
                                         bool strict = true) {
  if (const Rect* r = std::get_if<Rect>(&dom))
    return adaptive_rect(f, *r, tol_panel, max_depth, strict);
  if (const Polygon* p = std::get_if<Polygon>(&dom))
    return adaptive_polygon(f, *p, tol_panel, max_depth, strict);
  return adaptive_disk(f, std::get<Disk>(dom), tol_panel, max_depth, strict);
}

}  // namespace h1geo

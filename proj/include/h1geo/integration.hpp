#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "curve.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "surface.hpp"

namespace h1geo {

// A region of a patch bounded by transverse arcs.  The boundary is a list of
// loops, each a cyclic chain of curves; the interior is described separately
// as a parameter-space domain for quadrature.  orientation = +1 means every
// loop keeps the interior on its left in the parameter plane.
struct Region {
  const SurfacePatch* patch = nullptr;
  std::vector<std::vector<BoundaryCurve>> loops;
  Domain domain;
  int orientation = 1;
};

namespace detail {

inline bool param_close(const SurfacePatch& p, Vertex2 a, Vertex2 b, double tol = 1e-12) {
  double du = a.u - b.u, dv = a.v - b.v;
  if (p.period_u > 0) du = std::remainder(du, p.period_u);
  if (p.period_v > 0) dv = std::remainder(dv, p.period_v);
  return std::abs(du) <= tol && std::abs(dv) <= tol;
}

inline Vertex2 curve_point(const BoundaryCurve& c, double t) {
  auto [u, v] = c.map(t);
  return {u.v, v.v};
}

}  // namespace detail

// Checks that every loop closes up (endpoints agree modulo patch periods).
inline void check_loops_closed(const Region& r) {
  for (const auto& loop : r.loops) {
    for (std::size_t j = 0; j < loop.size(); ++j) {
      const BoundaryCurve& a = loop[j];
      const BoundaryCurve& b = loop[(j + 1) % loop.size()];
      if (!detail::param_close(*r.patch, detail::curve_point(a, a.t1),
                               detail::curve_point(b, b.t0)))
        throw BadParams("region boundary does not close up");
    }
  }
}

struct MarginSample {
  double margin = 1e300;
  double t = 0;  // curve parameter where the minimum was seen
};

// Minimum transversality margin over sampled boundary points.  Sampling uses
// endpoint-inclusive uniform nodes so edge midpoints are hit exactly.
inline MarginSample min_boundary_margin(const Region& r, int samples_per_curve = 64) {
  MarginSample m;
  for (const auto& loop : r.loops)
    for (const auto& c : loop)
      for (int i = 0; i <= samples_per_curve; ++i) {
        double t = c.t0 + (c.t1 - c.t0) * i / samples_per_curve;
        double g = transversality_margin(c, t);
        if (g < m.margin) {
          m.margin = g;
          m.t = t;
        }
      }
  return m;
}

inline double boundary_margin(const Region& r, int samples_per_curve = 64) {
  return min_boundary_margin(r, samples_per_curve).margin;
}

inline Region rect_region(const SurfacePatch& patch, Rect r) {
  Region reg{&patch, {}, r, 1};
  reg.loops.push_back({param_segment(patch, {r.u0, r.v0}, {r.u1, r.v0}),
                       param_segment(patch, {r.u1, r.v0}, {r.u1, r.v1}),
                       param_segment(patch, {r.u1, r.v1}, {r.u0, r.v1}),
                       param_segment(patch, {r.u0, r.v1}, {r.u0, r.v0})});
  check_loops_closed(reg);
  return reg;
}

inline Region polygon_region(const SurfacePatch& patch, const Polygon& poly) {
  if (poly.vertices.size() < 3 || signed_area(poly) <= 0.0)
    throw BadParams("polygon region needs at least 3 counterclockwise vertices");
  Region reg{&patch, {{}}, poly, 1};
  for (std::size_t i = 0; i < poly.vertices.size(); ++i)
    reg.loops[0].push_back(param_segment(patch, poly.vertices[i],
                                         poly.vertices[(i + 1) % poly.vertices.size()]));
  check_loops_closed(reg);
  return reg;
}

// Band around a periodic-u patch: boundary is two closed coordinate circles,
// the lower traversed with increasing u, the upper with decreasing u.
inline Region band_region(const SurfacePatch& patch, Rect r) {
  if (patch.period_u <= 0) throw BadParams("band region needs a u-periodic patch");
  if (std::abs((r.u1 - r.u0) - patch.period_u) > 1e-12)
    throw BadParams("band region must span one full u-period");
  Region reg{&patch, {}, r, 1};
  reg.loops.push_back({param_line_u(patch, r.u0, r.u1, r.v0)});
  reg.loops.push_back({param_line_u(patch, r.u1, r.u0, r.v1)});
  check_loops_closed(reg);
  return reg;
}

inline Region disk_region(const SurfacePatch& patch, double cu, double cv, double radius) {
  if (radius <= 0.0) throw BadParams("disk region needs a positive radius");
  Region reg{&patch, {}, Disk{cu, cv, radius}, 1};
  double two_pi = 2.0 * std::acos(-1.0);
  reg.loops.push_back({BoundaryCurve{&patch,
                                     [cu, cv, radius](double t) {
                                       CurveJet2 tj = curve_t(t);
                                       return std::make_pair(radius * cos(tj) + cu,
                                                             radius * sin(tj) + cv);
                                     },
                                     0.0, two_pi}});
  return reg;
}

inline Region reversed(const Region& r) {
  Region out{r.patch, {}, r.domain, -r.orientation};
  for (auto loop = r.loops.rbegin(); loop != r.loops.rend(); ++loop) {
    std::vector<BoundaryCurve> rl;
    for (auto c = loop->rbegin(); c != loop->rend(); ++c) rl.push_back(reversed(*c));
    out.loops.push_back(std::move(rl));
  }
  return out;
}

// Integral of f against the area form: integrates f * (f^1 ^ f^2)(du, dv)
// over the parameter domain.  The density (f^1 ^ f^2)(du, dv) = det P is
// signed; regions where f1 opposes the raw characteristic field carry a
// negative density.
inline QuadratureReport surface_integral(const Region& reg,
                                         const std::function<double(const FramePacket&)>& f,
                                         double tol_panel = 1e-10, int max_depth = 12,
                                         bool strict = true) {
  auto g = [&](double u, double v) {
    FramePacket fp = evaluate_frame(*reg.patch, u, v);
    return f(fp) * fp.det_P;
  };
  return integrate_domain(g, reg.domain, tol_panel, max_depth, strict);
}

struct GaussBonnetReport {
  double curve_integral = 0;
  double corner_sum = 0;
  double curvature_integral = 0;
  double residual = 0;
  double curve_error = 0;
  double curvature_error = 0;
  std::int64_t nodes_used = 0;
  int refinement_depth = 0;
  std::vector<Corner> corners;
};

// Gauss-Bonnet parts for a region: integral of k over the boundary, exterior
// corner areas at the curve junctions, and the integral of K over the
// interior; the three must sum to zero.  Corner areas take the incoming
// velocity first: ca_j = f^1(in)/f^2(in) - f^1(out)/f^2(out) at the shared
// vertex, the order produced by the boundary telescoping.
inline GaussBonnetReport gauss_bonnet_residual(const Region& reg, double tol_panel = 1e-10,
                                               int max_depth = 12, bool strict = true) {
  GaussBonnetReport rep;
  for (const auto& loop : reg.loops) {
    for (std::size_t j = 0; j < loop.size(); ++j) {
      QuadratureReport k = line_integral_k(loop[j]);
      rep.curve_integral += k.value;
      rep.curve_error += k.error_estimate;
      rep.nodes_used += k.nodes_used;

      const BoundaryCurve& next = loop[(j + 1) % loop.size()];
      detail::CurveFrame in = detail::curve_frame(loop[j], loop[j].t1);
      detail::CurveFrame out = detail::curve_frame(next, next.t0);
      Corner corner{{in.F1.v, in.F2.v}, {out.F1.v, out.F2.v}, 0.0};
      corner.ca = corner_area(in.fe.packet, corner.incoming, corner.outgoing);
      rep.corner_sum += corner.ca;
      rep.corners.push_back(corner);
    }
  }
  QuadratureReport ki = surface_integral(
      reg, [](const FramePacket& fp) { return fp.K; }, tol_panel, max_depth, strict);
  rep.curvature_integral = reg.orientation * ki.value;
  rep.curvature_error = ki.error_estimate;
  rep.nodes_used += ki.nodes_used;
  rep.refinement_depth = ki.refinement_depth;
  rep.residual = rep.curve_integral + rep.corner_sum + rep.curvature_integral;
  return rep;
}

// Boundary integral of A dalpha.  By Stokes this equals the (oriented)
// integral of K over the region; an independent route to the same number.
inline QuadratureReport stokes_boundary_integral(const Region& reg) {
  QuadratureReport rep;
  for (const auto& loop : reg.loops)
    for (const auto& c : loop) {
      QuadratureReport q = line_integral_A_dalpha(c);
      rep.value += q.value;
      rep.error_estimate += q.error_estimate;
      rep.nodes_used += q.nodes_used;
      rep.refinement_depth = std::max(rep.refinement_depth, q.refinement_depth);
    }
  return rep;
}

struct GaussMapArea {
  double signed_area = 0;   // integral of -dalpha ^ dA over the region
  double direct_area = 0;   // unsigned area of the image, with multiplicity
  double signed_error = 0, direct_error = 0;
  std::int64_t nodes_used = 0;
};

inline GaussMapArea gauss_map_area(const Region& reg, double tol_panel = 1e-10,
                                   int max_depth = 12) {
  GaussMapArea out;
  auto signed_density = [&](double u, double v) {
    FramePacket fp = evaluate_frame(*reg.patch, u, v);
    return fp.dalpha_v * fp.dA_u - fp.dalpha_u * fp.dA_v;  // -dalpha ^ dA (du, dv)
  };
  auto direct_density = [&](double u, double v) {
    return std::abs(gauss_pushforward_density(evaluate_frame_ext(*reg.patch, u, v)));
  };
  QuadratureReport s = integrate_domain(signed_density, reg.domain, tol_panel, max_depth);
  QuadratureReport d = integrate_domain(direct_density, reg.domain, tol_panel, max_depth);
  out.signed_area = s.value;
  out.direct_area = d.value;
  out.signed_error = s.error_estimate;
  out.direct_error = d.error_estimate;
  out.nodes_used = s.nodes_used + d.nodes_used;
  return out;
}

struct LimitEstimate {
  std::vector<double> radii;
  std::vector<double> ratios;   // Gauss map area / surface area per disk
  std::vector<double> errors;   // |ratio - K(center)|
  double K_center = 0;
  double slope = 0;             // log-log fit of error against radius
  double final_error = 0;
};

// Shrinking-disk estimator of K as the limit of Gauss-map area over surface
// area.  Both integrals are signed, so the quotient converges to K from
// either orientation of the density.
inline LimitEstimate curvature_limit_estimate(const SurfacePatch& patch, double u,
                                              double v, std::vector<double> radii) {
  if (radii.empty()) throw BadParams("limit estimate needs at least one radius");
  LimitEstimate out;
  out.radii = radii;
  out.K_center = evaluate_frame(patch, u, v).K;
  for (double r : radii) {
    if (r <= 0.0) throw BadParams("limit estimate radii must be positive");
    Region d = disk_region(patch, u, v, r);
    QuadratureReport num = surface_integral(
        d, [](const FramePacket& fp) { return fp.K; });
    QuadratureReport den = surface_integral(
        d, [](const FramePacket&) { return 1.0; });
    double ratio = num.value / den.value;
    out.ratios.push_back(ratio);
    out.errors.push_back(std::abs(ratio - out.K_center));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = static_cast<int>(radii.size());
  for (int i = 0; i < n; ++i) {
    double x = std::log(radii[i]);
    double y = std::log(std::max(out.errors[i], 1e-16));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  out.final_error = out.errors.back();
  return out;
}

// A closed surface presented as parameter patches that tile it; closure is
// part of the construction data (the tiling's edge identifications), not
// something the integrator can infer.
struct ClosedSurface {
  std::string name;
  std::vector<SurfacePatch> patches;
  bool closed = false;
};

struct TotalCurvature {
  double total = 0;
  std::vector<double> per_patch;
  std::vector<double> per_patch_stokes;  // boundary integral of A dalpha per patch
  double min_margin = 1e300;
  std::int64_t nodes_used = 0;
};

inline TotalCurvature total_curvature_closed(const ClosedSurface& s,
                                             double tol_panel = 1e-10, int max_depth = 12) {
  if (!s.closed || s.patches.empty())
    throw BadParams("total curvature needs a closed tiled surface");
  TotalCurvature out;
  for (const SurfacePatch& p : s.patches) {
    Region reg = rect_region(p, p.domain);
    QuadratureReport q = surface_integral(
        reg, [](const FramePacket& fp) { return fp.K; }, tol_panel, max_depth);
    QuadratureReport b = stokes_boundary_integral(reg);
    out.per_patch.push_back(q.value);
    out.per_patch_stokes.push_back(b.value);
    out.total += q.value;
    out.nodes_used += q.nodes_used + b.nodes_used;
    for (int i = 0; i <= 32; ++i)
      for (int j = 0; j <= 32; ++j) {
        double u = p.domain.u0 + (p.domain.u1 - p.domain.u0) * i / 32.0;
        double v = p.domain.v0 + (p.domain.v1 - p.domain.v0) * j / 32.0;
        out.min_margin = std::min(out.min_margin, evaluate_frame(p, u, v).margin);
      }
  }
  return out;
}

}  // namespace h1geo

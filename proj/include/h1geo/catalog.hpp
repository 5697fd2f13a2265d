#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "curve.hpp"
#include "errors.hpp"
#include "integration.hpp"
#include "jets.hpp"
#include "surface.hpp"

// Built-in analytic surfaces and regions with hand-derived frame data.  The
// closed forms below were re-derived from the frame definitions and are
// cross-checked against evaluate_frame every time an entry is constructed,
// so they are safe to use as independent fixtures.
//
// Derivations (sigma = +1, anchor rule as in make_patch):
//   vertical_plane   (u,v) -> (u, 0, v):
//       e0(du) = 0, e0(dv) = 1; f1 = e1, eta = -e2, alpha = -pi/2,
//       A = 0, det P = 1, K = 0.
//   vertical_cylinder(r)  (th,v) -> (r cos th, r sin th, v):
//       e0(dth) = -r^2/2, e0(dv) = 1; f1 = -sin th e1 + cos th e2,
//       alpha = th, A = 0, det P = r, K = 0.
//   graph_xy(v_min)  (u,v) -> (u, v, uv/2):
//       e0(du) = v, e0(dv) = 0; for v > 0: f1 = -e2, eta = -e1,
//       alpha = pi, A = -1/v, det P = v, K = 0.  The locus v = 0 is
//       characteristic.  A cannot vanish on any graph over the xy-plane:
//       e0 is never tangent to one, so A = -eta*(e0) has no zero.
//   torus_revolution(R,rho)  (phi,th) -> (s cos phi, s sin phi, rho sin th),
//       s = R + rho cos th:
//       e0(dphi) = -s^2/2, e0(dth) = rho cos th,
//       Q = sqrt(cos^2 th + (s/2)^2 sin^2 th),
//       alpha = phi + atan2((s/2) sin th, cos th), A = -sin th / Q,
//       det P = rho s Q, K = -(dA/dth) / (rho s Q).

namespace h1geo {

using ParamMap = std::map<std::string, double>;

// Closed-form frame values as functions of the surface parameters; a missing
// entry (null function) means no closed form is recorded.
struct ClosedForms {
  std::function<double(double, double)> cos_alpha, sin_alpha, A, K, det_P;
};

struct CatalogEntry {
  std::string name;
  std::string summary;
  std::vector<std::pair<std::string, double>> params;  // names with defaults
  std::string characteristic_locus;
  std::vector<std::string> regions;  // suggested make_region names
};

inline const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"vertical_plane",
       "plane y = 0 through the center; alpha = -pi/2, A = 0, K = 0, det P = 1",
       {},
       "empty",
       {"disk"}},
      {"vertical_cylinder",
       "cylinder x^2 + y^2 = r^2; alpha = theta, A = 0, K = 0, det P = r",
       {{"r", 1.0}},
       "empty",
       {"cylinder_band"}},
      {"graph_xy",
       "graph z = uv/2 on v in [v_min, v_min + 2]; for v > 0: alpha = pi, "
       "A = -1/v, K = 0, det P = v",
       {{"v_min", 0.5}},
       "the line v = 0",
       {"disk"}},
      {"torus_revolution",
       "torus of revolution around the z-axis, tube radius rho, ring radius R; "
       "A = -sin(theta)/Q with Q = sqrt(cos^2 th + ((R + rho cos th)/2)^2 sin^2 th)",
       {{"R", 2.0}, {"rho", 0.5}},
       "empty at the default parameters (asserted by margin sampling)",
       {"torus_quad", "disk"}},
      {"perturbed_torus",
       "torus of revolution with tube radius rho (1 + eps cos(k phi)); no "
       "closed forms recorded, validated by margin sampling",
       {{"R", 2.0}, {"rho", 0.5}, {"eps", 0.1}, {"k", 3.0}},
       "empty at the default parameters (asserted by margin sampling)",
       {"disk"}},
  };
  return entries;
}

namespace detail {

inline const CatalogEntry& find_entry(const std::string& name) {
  for (const CatalogEntry& e : catalog_entries())
    if (e.name == name) return e;
  throw UnknownEntry("unknown catalog entry: " + name);
}

inline ParamMap resolve_params(const CatalogEntry& e, const ParamMap& given) {
  ParamMap out;
  for (const auto& [k, d] : e.params) out[k] = d;
  for (const auto& [k, v] : given) {
    if (!out.count(k))
      throw BadParams("unknown parameter '" + k + "' for entry " + e.name);
    out[k] = v;
  }
  return out;
}

// Uniform double in [0, 1) straight from the generator, bit-reproducible.
inline double unit_double(std::uint64_t word) { return (word >> 11) * 0x1.0p-53; }

}  // namespace detail

inline double torus_alpha(double R, double rho, double phi, double theta) {
  double s = R + rho * std::cos(theta);
  return phi + std::atan2(0.5 * s * std::sin(theta), std::cos(theta));
}

inline double torus_A(double R, double rho, double theta) {
  double s = R + rho * std::cos(theta);
  double c = std::cos(theta), sn = std::sin(theta);
  double Q = std::sqrt(c * c + 0.25 * s * s * sn * sn);
  return -sn / Q;
}

inline double torus_det_P(double R, double rho, double theta) {
  double s = R + rho * std::cos(theta);
  double c = std::cos(theta), sn = std::sin(theta);
  double Q = std::sqrt(c * c + 0.25 * s * s * sn * sn);
  return rho * s * Q;
}

inline double torus_K(double R, double rho, double theta) {
  Dual1 th{theta, 1.0};
  Dual1 s = rho * cos(th) + R;
  Dual1 c = cos(th), sn = sin(th);
  Dual1 Q = sqrt(c * c + 0.25 * (s * s) * (sn * sn));
  Dual1 A = -(sn / Q);
  return -A.d / (rho * s.v * Q.v);
}

inline ClosedForms known_values(const std::string& name, const ParamMap& given = {}) {
  const CatalogEntry& e = detail::find_entry(name);
  ParamMap p = detail::resolve_params(e, given);
  ClosedForms f;
  if (name == "vertical_plane") {
    f.cos_alpha = [](double, double) { return 0.0; };
    f.sin_alpha = [](double, double) { return -1.0; };
    f.A = [](double, double) { return 0.0; };
    f.K = [](double, double) { return 0.0; };
    f.det_P = [](double, double) { return 1.0; };
  } else if (name == "vertical_cylinder") {
    double r = p.at("r");
    f.cos_alpha = [](double u, double) { return std::cos(u); };
    f.sin_alpha = [](double u, double) { return std::sin(u); };
    f.A = [](double, double) { return 0.0; };
    f.K = [](double, double) { return 0.0; };
    f.det_P = [r](double, double) { return r; };
  } else if (name == "graph_xy") {
    f.cos_alpha = [](double, double) { return -1.0; };
    f.sin_alpha = [](double, double) { return 0.0; };
    f.A = [](double, double v) { return -1.0 / v; };
    f.K = [](double, double) { return 0.0; };
    f.det_P = [](double, double v) { return v; };
  } else if (name == "torus_revolution") {
    double R = p.at("R"), rho = p.at("rho");
    f.cos_alpha = [R, rho](double u, double v) { return std::cos(torus_alpha(R, rho, u, v)); };
    f.sin_alpha = [R, rho](double u, double v) { return std::sin(torus_alpha(R, rho, u, v)); };
    f.A = [R, rho](double, double v) { return torus_A(R, rho, v); };
    f.K = [R, rho](double, double v) { return torus_K(R, rho, v); };
    f.det_P = [R, rho](double, double v) { return torus_det_P(R, rho, v); };
  }
  return f;  // perturbed_torus records no closed forms
}

// Minimum frame margin over an endpoint-inclusive n x n parameter grid.
// Throws CharacteristicPoint if any node is characteristic.
inline double sampled_min_margin(const SurfacePatch& patch, int n = 100) {
  double m = 1e300;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double u = patch.domain.u0 + (patch.domain.u1 - patch.domain.u0) * i / (n - 1.0);
      double v = patch.domain.v0 + (patch.domain.v1 - patch.domain.v0) * j / (n - 1.0);
      m = std::min(m, evaluate_frame(patch, u, v).margin);
    }
  return m;
}

namespace detail {

inline void cross_check_entry(const SurfacePatch& patch, const ClosedForms& f,
                              const std::string& name, int n = 100, double tol = 1e-10) {
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  for (int i = 0; i < n; ++i) {
    double fu = unit_double(rng()), fv = unit_double(rng());
    double u = patch.domain.u0 + (patch.domain.u1 - patch.domain.u0) * (0.02 + 0.96 * fu);
    double v = patch.domain.v0 + (patch.domain.v1 - patch.domain.v0) * (0.02 + 0.96 * fv);
    FramePacket fp = evaluate_frame(patch, u, v);
    auto check = [&](const std::function<double(double, double)>& g, double got,
                     const char* what) {
      if (!g) return;
      if (std::abs(got - g(u, v)) > tol * std::max(1.0, std::abs(got)))
        throw GeometryError("catalog entry " + name + ": closed form for " + what +
                            " disagrees with evaluate_frame");
    };
    check(f.cos_alpha, fp.cos_alpha, "cos_alpha");
    check(f.sin_alpha, fp.sin_alpha, "sin_alpha");
    check(f.A, fp.A, "A");
    check(f.K, fp.K, "K");
    check(f.det_P, fp.det_P, "det_P");
  }
}

}  // namespace detail

inline SurfacePatch make_surface(const std::string& name, const ParamMap& given = {}) {
  const CatalogEntry& e = detail::find_entry(name);
  ParamMap p = detail::resolve_params(e, given);
  double two_pi = 2.0 * std::acos(-1.0);
  SurfacePatch patch;
  bool validate_forms = true;
  bool sample_margin = false;

  if (name == "vertical_plane") {
    patch = make_patch(
        [](double u, double v) {
          return std::array<Jet2, 3>{jet_u(u), jet_const(0.0), jet_v(v)};
        },
        Rect{-1.0, 1.0, -1.0, 1.0});
  } else if (name == "vertical_cylinder") {
    double r = p.at("r");
    if (r <= 0.0) throw BadParams("vertical_cylinder: r must be positive");
    patch = make_patch(
        [r](double u, double v) {
          Jet2 th = jet_u(u);
          return std::array<Jet2, 3>{r * cos(th), r * sin(th), jet_v(v)};
        },
        Rect{0.0, two_pi, 0.0, 1.0}, 1, two_pi, 0.0);
  } else if (name == "graph_xy") {
    double v_min = p.at("v_min");
    patch = make_patch(
        [](double u, double v) {
          Jet2 ju = jet_u(u), jv = jet_v(v);
          return std::array<Jet2, 3>{ju, jv, 0.5 * (ju * jv)};
        },
        Rect{-1.0, 1.0, v_min, v_min + 2.0});
    validate_forms = v_min > 0.0;  // below that the domain meets the locus v = 0
  } else if (name == "torus_revolution") {
    double R = p.at("R"), rho = p.at("rho");
    if (rho <= 0.0 || rho >= R)
      throw BadParams("torus_revolution: need 0 < rho < R");
    patch = make_patch(
        [R, rho](double u, double v) {
          Jet2 phi = jet_u(u), th = jet_v(v);
          Jet2 s = rho * cos(th) + R;
          return std::array<Jet2, 3>{s * cos(phi), s * sin(phi), rho * sin(th)};
        },
        Rect{0.0, two_pi, 0.0, two_pi}, 1, two_pi, two_pi);
    sample_margin = true;
  } else if (name == "perturbed_torus") {
    double R = p.at("R"), rho = p.at("rho"), eps = p.at("eps"), k = p.at("k");
    if (rho <= 0.0) throw BadParams("perturbed_torus: rho must be positive");
    if (std::abs(eps) >= 1.0) throw BadParams("perturbed_torus: need |eps| < 1");
    if (rho * (1.0 + std::abs(eps)) >= R)
      throw BadParams("perturbed_torus: need rho (1 + |eps|) < R");
    if (k < 0.0 || k != std::floor(k))
      throw BadParams("perturbed_torus: k must be a nonnegative integer");
    patch = make_patch(
        [R, rho, eps, k](double u, double v) {
          Jet2 phi = jet_u(u), th = jet_v(v);
          Jet2 r = rho * (eps * cos(k * phi) + 1.0);
          Jet2 s = r * cos(th) + R;
          return std::array<Jet2, 3>{s * cos(phi), s * sin(phi), r * sin(th)};
        },
        Rect{0.0, two_pi, 0.0, two_pi}, 1, two_pi, two_pi);
    sample_margin = true;
  }

  if (validate_forms) detail::cross_check_entry(patch, known_values(name, given), name);
  // 100 x 100 sweep; evaluate_frame throws if any sampled node degenerates.
  if (sample_margin) sampled_min_margin(patch, 100);
  return patch;
}

// Named regions.  Boundary transversality is validated by sampling for the
// regions meant for Gauss-Bonnet runs; disks are quadrature domains for the
// shrinking-disk estimator and their boundary circles are not required to be
// transverse.
inline Region make_region(const std::string& name, const SurfacePatch& patch,
                          const ParamMap& given = {}) {
  auto get = [&](const char* key, double dflt) {
    auto it = given.find(key);
    return it == given.end() ? dflt : it->second;
  };
  static const std::map<std::string, std::vector<std::string>> allowed = {
      {"cylinder_band", {"v0", "v1"}},
      {"torus_quad", {"u0", "u1", "v0", "v1"}},
      {"disk", {"u", "v", "r"}},
  };
  auto names = allowed.find(name);
  if (names == allowed.end()) throw UnknownEntry("unknown region: " + name);
  for (const auto& [k, v] : given) {
    (void)v;
    bool ok = false;
    for (const auto& a : names->second) ok = ok || a == k;
    if (!ok) throw BadParams("unknown parameter '" + k + "' for region " + name);
  }

  Region reg;
  bool validate = true;
  if (name == "cylinder_band") {
    double v0 = get("v0", 0.0), v1 = get("v1", 1.0);
    if (v1 <= v0) throw BadParams("cylinder_band: zero-area region");
    reg = band_region(patch, Rect{patch.domain.u0, patch.domain.u0 + patch.period_u, v0, v1});
  } else if (name == "torus_quad") {
    double u0 = get("u0", 0.2), u1 = get("u1", 1.0);
    double v0 = get("v0", 0.3), v1 = get("v1", 1.1);
    if (u1 <= u0 || v1 <= v0) throw BadParams("torus_quad: zero-area region");
    reg = rect_region(patch, Rect{u0, u1, v0, v1});
  } else if (name == "disk") {
    reg = disk_region(patch, get("u", 3.0), get("v", 1.0), get("r", 0.1));
    validate = false;
  } else {
    throw UnknownEntry("unknown region: " + name);
  }

  if (validate) {
    MarginSample m = min_boundary_margin(reg);
    if (m.margin < 1e-6) throw NonTransverse(m.t, m.margin);
  }
  return reg;
}

// Closed-surface tilings.  The torus is covered by tiles_u x tiles_v
// parameter rectangles; neighboring tiles share edges exactly (parameter
// identification modulo the 2 pi periods), which is what makes the per-tile
// boundary terms cancel.
inline ClosedSurface make_closed_surface(const std::string& name, const ParamMap& given = {},
                                         int tiles_u = 2, int tiles_v = 2) {
  if (name != "torus_revolution" && name != "perturbed_torus")
    throw BadParams("make_closed_surface: entry " + name + " is not a closed surface");
  if (tiles_u < 1 || tiles_v < 1) throw BadParams("make_closed_surface: bad tile counts");
  SurfacePatch base = make_surface(name, given);
  ClosedSurface s;
  s.name = name;
  s.closed = true;
  for (int i = 0; i < tiles_u; ++i)
    for (int j = 0; j < tiles_v; ++j) {
      Rect r{base.domain.u0 + (base.domain.u1 - base.domain.u0) * i / tiles_u,
             base.domain.u0 + (base.domain.u1 - base.domain.u0) * (i + 1) / tiles_u,
             base.domain.v0 + (base.domain.v1 - base.domain.v0) * j / tiles_v,
             base.domain.v0 + (base.domain.v1 - base.domain.v0) * (j + 1) / tiles_v};
      s.patches.push_back(make_patch(base.eval, r, base.sigma, base.period_u, base.period_v));
    }
  return s;
}

}  // namespace h1geo

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "catalog.hpp"
#include "curve.hpp"
#include "errors.hpp"
#include "integration.hpp"
#include "surface.hpp"

// Batch front end.  Every command reads one JSON config document, writes one
// report (CSV for grids, JSON for verifications) and exits with:
//   0 pass, 1 tolerance failure, 2 config error, 3 construction error,
//   4 geometric precondition violation.
// Reports are deterministic: fixed traversal order, fixed float formatting.

namespace h1geo {

namespace cli_detail {

using nlohmann::json;

struct CommandResult {
  std::string text;
  int exit_code = 0;
};

inline json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  return j;
}

inline void allow_fields(const json& j, const std::vector<std::string>& allowed,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError("unknown config field '" + it.key() + "' in " + where);
  }
}

inline const json& need(const json& j, const char* field) {
  if (!j.contains(field))
    throw ConfigError(std::string("config field '") + field + "' is missing");
  return j.at(field);
}

inline std::string need_str(const json& j, const char* field) {
  const json& f = need(j, field);
  if (!f.is_string())
    throw ConfigError(std::string("config field '") + field + "' must be a string");
  return f.get<std::string>();
}

inline double need_num(const json& j, const char* field) {
  const json& f = need(j, field);
  if (!f.is_number())
    throw ConfigError(std::string("config field '") + field + "' must be a number");
  return f.get<double>();
}

inline int need_dim(const json& j, const char* field, int lo) {
  double x = need_num(j, field);
  if (x != std::floor(x) || x < lo)
    throw ConfigError(std::string("config field '") + field + "' must be an integer >= " +
                      std::to_string(lo));
  return static_cast<int>(x);
}

inline double opt_pos(const json& j, const char* field, double dflt) {
  if (!j.contains(field)) return dflt;
  double x = need_num(j, field);
  if (x <= 0.0)
    throw ConfigError(std::string("config field '") + field + "' must be positive");
  return x;
}

inline ParamMap params_of(const json& j, const std::string& where) {
  ParamMap out;
  if (!j.is_object()) throw ConfigError("config field 'params' in " + where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number())
      throw ConfigError("config field '" + it.key() + "' in " + where + " must be a number");
    out[it.key()] = it.value().get<double>();
  }
  return out;
}

struct SurfaceSpec {
  std::string name;
  ParamMap params;
};

inline SurfaceSpec surface_spec(const json& cfg) {
  const json& s = need(cfg, "surface");
  if (!s.is_object()) throw ConfigError("config field 'surface' must be an object");
  allow_fields(s, {"name", "params"}, "surface");
  SurfaceSpec spec;
  spec.name = need_str(s, "name");
  if (s.contains("params")) spec.params = params_of(s.at("params"), "surface");
  return spec;
}

struct QuadSpec {
  double tol_panel = 1e-10;
  int max_depth = 12;
};

inline QuadSpec quad_spec(const json& cfg) {
  QuadSpec q;
  if (!cfg.contains("quadrature")) return q;
  const json& j = cfg.at("quadrature");
  if (!j.is_object()) throw ConfigError("config field 'quadrature' must be an object");
  allow_fields(j, {"tol_panel", "max_depth"}, "quadrature");
  q.tol_panel = opt_pos(j, "tol_panel", q.tol_panel);
  if (j.contains("max_depth")) q.max_depth = need_dim(j, "max_depth", 1);
  return q;
}

inline std::string fmt17(double x) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", x);
  return b;
}

inline json params_json(const ParamMap& p) {
  json j = json::object();
  for (const auto& [k, v] : p) j[k] = v;
  return j;
}

inline std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

// ---- frame: grid CSV ----

inline CommandResult cmd_frame(const json& cfg) {
  allow_fields(cfg, {"surface", "grid"}, "config");
  SurfaceSpec spec = surface_spec(cfg);
  const json& g = need(cfg, "grid");
  if (!g.is_object()) throw ConfigError("config field 'grid' must be an object");
  allow_fields(g, {"nu", "nv"}, "grid");
  int nu = need_dim(g, "nu", 2), nv = need_dim(g, "nv", 2);

  SurfacePatch patch = make_surface(spec.name, spec.params);
  std::ostringstream out;
  out << "u,v,x,y,z,cos_alpha,sin_alpha,A,K,margin\n";
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      double u = patch.domain.u0 + (patch.domain.u1 - patch.domain.u0) * i / (nu - 1.0);
      double v = patch.domain.v0 + (patch.domain.v1 - patch.domain.v0) * j / (nv - 1.0);
      detail::RawTangents raw = detail::raw_tangents(patch, u, v);
      out << fmt17(u) << ',' << fmt17(v) << ',' << fmt17(raw.p.x) << ',' << fmt17(raw.p.y)
          << ',' << fmt17(raw.p.z) << ',';
      if (raw.margin < 1e-9) {
        out << ",,,," << fmt17(raw.margin) << '\n';  // characteristic node, frame undefined
      } else {
        FramePacket fp = evaluate_frame(patch, u, v);
        out << fmt17(fp.cos_alpha) << ',' << fmt17(fp.sin_alpha) << ',' << fmt17(fp.A) << ','
            << fmt17(fp.K) << ',' << fmt17(fp.margin) << '\n';
      }
    }
  return {out.str(), 0};
}

// ---- gauss-bonnet ----

inline Region region_from(const json& cfg, const SurfacePatch& patch) {
  const json& r = need(cfg, "region");
  if (!r.is_object()) throw ConfigError("config field 'region' must be an object");
  allow_fields(r, {"name", "params"}, "region");
  std::string name = need_str(r, "name");
  ParamMap p;
  if (r.contains("params")) p = params_of(r.at("params"), "region");
  return make_region(name, patch, p);
}

inline CommandResult cmd_gauss_bonnet(const json& cfg) {
  allow_fields(cfg, {"surface", "region", "tolerance", "quadrature"}, "config");
  SurfaceSpec spec = surface_spec(cfg);
  double tol = opt_pos(cfg, "tolerance", 1e-6);
  QuadSpec q = quad_spec(cfg);

  SurfacePatch patch = make_surface(spec.name, spec.params);
  Region reg = region_from(cfg, patch);
  GaussBonnetReport rep = gauss_bonnet_residual(reg, q.tol_panel, q.max_depth);

  json out;
  out["command"] = "gauss-bonnet";
  out["surface"] = {{"name", spec.name}, {"params", params_json(spec.params)}};
  out["curve_integral"] = rep.curve_integral;
  out["corner_sum"] = rep.corner_sum;
  out["curvature_integral"] = rep.curvature_integral;
  out["residual"] = rep.residual;
  json corners = json::array();
  for (const Corner& c : rep.corners) corners.push_back(c.ca);
  out["corner_areas"] = corners;
  out["error_estimate"] = rep.curve_error + rep.curvature_error;
  out["nodes"] = rep.nodes_used;
  out["refinement_depth"] = rep.refinement_depth;
  out["tolerance"] = tol;
  bool pass = std::abs(rep.residual) <= tol;
  out["pass"] = pass;
  return {dump_report(out), pass ? 0 : 1};
}

// ---- gauss-map ----

inline CommandResult cmd_gauss_map(const json& cfg) {
  allow_fields(cfg, {"surface", "region", "tolerance", "quadrature"}, "config");
  SurfaceSpec spec = surface_spec(cfg);
  double tol = opt_pos(cfg, "tolerance", 1e-6);
  QuadSpec q = quad_spec(cfg);

  SurfacePatch patch = make_surface(spec.name, spec.params);
  Region reg = region_from(cfg, patch);
  GaussMapArea area = gauss_map_area(reg, q.tol_panel, q.max_depth);
  QuadratureReport k_route = surface_integral(
      reg, [](const FramePacket& fp) { return fp.K; }, q.tol_panel, q.max_depth);

  json out;
  out["command"] = "gauss-map";
  out["surface"] = {{"name", spec.name}, {"params", params_json(spec.params)}};
  out["signed_area"] = area.signed_area;
  out["direct_area"] = area.direct_area;
  out["curvature_route"] = k_route.value;  // integral of K dS, equal analytically
  out["abs_signed_minus_direct"] = std::abs(std::abs(area.signed_area) - area.direct_area);
  out["error_estimate"] = area.signed_error + area.direct_error;
  out["nodes"] = area.nodes_used + k_route.nodes_used;
  out["tolerance"] = tol;
  bool pass = std::abs(std::abs(area.signed_area) - area.direct_area) <= tol;
  out["pass"] = pass;
  return {dump_report(out), pass ? 0 : 1};
}

// ---- limit-check ----

inline CommandResult cmd_limit_check(const json& cfg) {
  allow_fields(cfg, {"surface", "point", "radii", "slope_min", "tolerance"}, "config");
  SurfaceSpec spec = surface_spec(cfg);
  const json& pt = need(cfg, "point");
  if (!pt.is_object()) throw ConfigError("config field 'point' must be an object");
  allow_fields(pt, {"u", "v"}, "point");
  double u = need_num(pt, "u"), v = need_num(pt, "v");

  std::vector<double> radii;
  if (cfg.contains("radii")) {
    const json& r = cfg.at("radii");
    if (!r.is_array() || r.size() < 2)
      throw ConfigError("config field 'radii' must be an array of at least 2 numbers");
    for (const json& x : r) {
      if (!x.is_number() || x.get<double>() <= 0.0)
        throw ConfigError("config field 'radii' must contain positive numbers");
      radii.push_back(x.get<double>());
    }
    for (std::size_t i = 1; i < radii.size(); ++i)
      if (radii[i] >= radii[i - 1])
        throw ConfigError("config field 'radii' must be strictly decreasing");
  } else {
    for (int i = 0; i < 5; ++i) radii.push_back(std::pow(10.0, -1.0 - 0.5 * i));
  }
  double slope_min = cfg.contains("slope_min") ? need_num(cfg, "slope_min") : 0.9;
  double tol = opt_pos(cfg, "tolerance", 1e-3);

  SurfacePatch patch = make_surface(spec.name, spec.params);
  LimitEstimate est = curvature_limit_estimate(patch, u, v, radii);

  json out;
  out["command"] = "limit-check";
  out["surface"] = {{"name", spec.name}, {"params", params_json(spec.params)}};
  out["point"] = {{"u", u}, {"v", v}};
  out["K_center"] = est.K_center;
  out["radii"] = est.radii;
  out["ratios"] = est.ratios;
  out["errors"] = est.errors;
  out["slope"] = est.slope;
  out["final_error"] = est.final_error;
  out["slope_min"] = slope_min;
  out["tolerance"] = tol;
  bool pass = est.slope >= slope_min &&
              est.final_error <= tol * std::max(1.0, std::abs(est.K_center));
  out["pass"] = pass;
  return {dump_report(out), pass ? 0 : 1};
}

// ---- structure-check ----

struct ResidualStat {
  double max = 0, sum = 0;
  long n = 0;
  void add(double x) {
    max = std::max(max, std::abs(x));
    sum += std::abs(x);
    ++n;
  }
  double mean() const { return n ? sum / n : 0.0; }
};

inline CommandResult cmd_structure_check(const json& cfg) {
  allow_fields(cfg, {"surface", "grid", "tolerances"}, "config");
  SurfaceSpec spec = surface_spec(cfg);
  const json& g = need(cfg, "grid");
  if (!g.is_object()) throw ConfigError("config field 'grid' must be an object");
  allow_fields(g, {"nu", "nv"}, "grid");
  int nu = need_dim(g, "nu", 2), nv = need_dim(g, "nv", 2);

  double tol_structure = 1e-8, tol_antisym = 1e-8, tol_torsion = 1e-9;
  double tol_gauss = 1e-7, tol_codazzi = 1e-7, tol_jet_fd = 1e-6;
  if (cfg.contains("tolerances")) {
    const json& t = cfg.at("tolerances");
    if (!t.is_object()) throw ConfigError("config field 'tolerances' must be an object");
    allow_fields(t, {"structure", "antisymmetry", "torsion", "gauss", "codazzi", "jet_fd"},
                 "tolerances");
    tol_structure = opt_pos(t, "structure", tol_structure);
    tol_antisym = opt_pos(t, "antisymmetry", tol_antisym);
    tol_torsion = opt_pos(t, "torsion", tol_torsion);
    tol_gauss = opt_pos(t, "gauss", tol_gauss);
    tol_codazzi = opt_pos(t, "codazzi", tol_codazzi);
    tol_jet_fd = opt_pos(t, "jet_fd", tol_jet_fd);
  }

  SurfacePatch patch = make_surface(spec.name, spec.params);
  ResidualStat structure, antisym, torsion, gauss, codazzi, jet_fd;
  ParamVector Xu{1, 0}, Yv{0, 1};
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      double u = patch.domain.u0 + (patch.domain.u1 - patch.domain.u0) * i / (nu - 1.0);
      double v = patch.domain.v0 + (patch.domain.v1 - patch.domain.v0) * j / (nv - 1.0);
      FrameEval fe = evaluate_frame_ext(patch, u, v);
      const FramePacket& fp = fe.packet;

      structure.add(fp.dalpha_f2 + fp.dA_f1 + fp.A * fp.A);

      SurfaceTangent f1t{1, 0}, f2t{0, 1};
      double defect = second_fundamental_form(fp, f1t, f2t) -
                      second_fundamental_form(fp, f2t, f1t);
      antisym.add(defect + fp.A * fp.A);

      SurfaceTangent ut = to_surface_tangent(fp, fp.du_f);
      SurfaceTangent vt = to_surface_tangent(fp, fp.dv_f);
      SurfaceTangent lhs_a = detail::nabla_param(fe, Xu, Yv);
      SurfaceTangent lhs_b = detail::nabla_param(fe, Yv, Xu);
      SurfaceTangent rhs = torsion_eval(fp, ut, vt);
      torsion.add(lhs_a.c1 - lhs_b.c1 - rhs.c1);
      torsion.add(lhs_a.c2 - lhs_b.c2 - rhs.c2);

      GaussCodazzi gc = gauss_codazzi_residuals(patch, u, v, Xu, Yv, Xu);
      gauss.add(gc.gauss_res.c1);
      gauss.add(gc.gauss_res.c2);
      codazzi.add(gc.codazzi_res);

      const FrameJets& J = fe.jets;
      auto field = [&](int which) {
        return [&patch, which](double uu, double vv) {
          FramePacket q = evaluate_frame(patch, uu, vv);
          return which == 0 ? q.cos_alpha : which == 1 ? q.sin_alpha : q.A;
        };
      };
      const Jet1* jets[3] = {&J.cosA, &J.sinA, &J.A};
      for (int wq = 0; wq < 3; ++wq) {
        FdPartials fd = fd_partials(field(wq), u, v, fd_gradient_step(u, v));
        jet_fd.add((jets[wq]->du - fd.du) / std::max(0.01, std::abs(jets[wq]->du)));
        jet_fd.add((jets[wq]->dv - fd.dv) / std::max(0.01, std::abs(jets[wq]->dv)));
      }
    }

  json out;
  out["command"] = "structure-check";
  out["surface"] = {{"name", spec.name}, {"params", params_json(spec.params)}};
  out["grid"] = {{"nu", nu}, {"nv", nv}};
  auto table = [](const ResidualStat& s, double tol) {
    return json{{"max", s.max}, {"mean", s.mean()}, {"tolerance", tol}, {"pass", s.max <= tol}};
  };
  out["structure_identity"] = table(structure, tol_structure);
  out["antisymmetry_defect"] = table(antisym, tol_antisym);
  out["torsion_identity"] = table(torsion, tol_torsion);
  out["gauss_residual"] = table(gauss, tol_gauss);
  out["codazzi_residual"] = table(codazzi, tol_codazzi);
  out["jet_vs_fd"] = table(jet_fd, tol_jet_fd);
  bool pass = structure.max <= tol_structure && antisym.max <= tol_antisym &&
              torsion.max <= tol_torsion && gauss.max <= tol_gauss &&
              codazzi.max <= tol_codazzi && jet_fd.max <= tol_jet_fd;
  out["pass"] = pass;
  return {dump_report(out), pass ? 0 : 1};
}

// ---- total-curvature ----

inline CommandResult cmd_total_curvature(const json& cfg) {
  allow_fields(cfg, {"surface", "tiles", "tolerance", "stokes_tolerance", "quadrature"},
               "config");
  SurfaceSpec spec = surface_spec(cfg);
  int tiles_u = 2, tiles_v = 2;
  if (cfg.contains("tiles")) {
    const json& t = cfg.at("tiles");
    if (!t.is_object()) throw ConfigError("config field 'tiles' must be an object");
    allow_fields(t, {"nu", "nv"}, "tiles");
    tiles_u = need_dim(t, "nu", 1);
    tiles_v = need_dim(t, "nv", 1);
  }
  double tol = opt_pos(cfg, "tolerance", 1e-7);
  double stokes_tol = opt_pos(cfg, "stokes_tolerance", 1e-8);
  QuadSpec q = quad_spec(cfg);

  ClosedSurface s = make_closed_surface(spec.name, spec.params, tiles_u, tiles_v);
  TotalCurvature tc = total_curvature_closed(s, q.tol_panel, q.max_depth);

  double stokes_delta = 0;
  for (std::size_t i = 0; i < tc.per_patch.size(); ++i)
    stokes_delta = std::max(stokes_delta,
                            std::abs(tc.per_patch[i] - tc.per_patch_stokes[i]));
  json out;
  out["command"] = "total-curvature";
  out["surface"] = {{"name", spec.name}, {"params", params_json(spec.params)}};
  out["tiles"] = {{"nu", tiles_u}, {"nv", tiles_v}};
  out["total"] = tc.total;
  out["per_patch"] = tc.per_patch;
  out["per_patch_stokes"] = tc.per_patch_stokes;
  out["stokes_delta_max"] = stokes_delta;
  out["min_margin"] = tc.min_margin;
  out["nodes"] = tc.nodes_used;
  out["tolerance"] = tol;
  out["stokes_tolerance"] = stokes_tol;
  bool pass = std::abs(tc.total) <= tol && stokes_delta <= stokes_tol;
  out["pass"] = pass;
  return {dump_report(out), pass ? 0 : 1};
}

// ---- catalog ----

inline CommandResult cmd_catalog() {
  json out = json::array();
  for (const CatalogEntry& e : catalog_entries()) {
    json p = json::object();
    for (const auto& [k, d] : e.params) p[k] = d;
    out.push_back({{"name", e.name},
                   {"summary", e.summary},
                   {"params", p},
                   {"characteristic_locus", e.characteristic_locus},
                   {"regions", e.regions}});
  }
  return {dump_report(out), 0};
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"surface invariants of the first Heisenberg group", "h1geo"};
  app.require_subcommand(1);

  struct Cmd {
    const char* name;
    const char* desc;
    bool config_required;
  };
  const Cmd cmds[] = {
      {"frame", "evaluate the adapted frame on a parameter grid (CSV)", true},
      {"gauss-bonnet", "verify that boundary, corner and curvature terms cancel", true},
      {"gauss-map", "signed and unsigned Gauss-map image areas", true},
      {"limit-check", "shrinking-disk curvature estimator against K", true},
      {"structure-check", "frame structure and compatibility residuals on a grid", true},
      {"total-curvature", "integrate K over a closed tiled surface", true},
      {"catalog", "list built-in surfaces and regions", false},
  };
  std::string config_path, out_path;
  for (const Cmd& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.desc);
    auto* opt = sub->add_option("--config", config_path, "path to JSON config");
    if (c.config_required) opt->required();
    sub->add_option("--out", out_path, "write the report here instead of stdout");
  }

  std::vector<const char*> argv;
  argv.push_back("h1geo");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  std::string command = app.get_subcommands().at(0)->get_name();
  cli_detail::CommandResult result;
  try {
    if (command == "catalog") {
      result = cli_detail::cmd_catalog();
    } else {
      cli_detail::json cfg = cli_detail::load_config(config_path);
      if (command == "frame")
        result = cli_detail::cmd_frame(cfg);
      else if (command == "gauss-bonnet")
        result = cli_detail::cmd_gauss_bonnet(cfg);
      else if (command == "gauss-map")
        result = cli_detail::cmd_gauss_map(cfg);
      else if (command == "limit-check")
        result = cli_detail::cmd_limit_check(cfg);
      else if (command == "structure-check")
        result = cli_detail::cmd_structure_check(cfg);
      else
        result = cli_detail::cmd_total_curvature(cfg);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const UnknownEntry& e) {
    err << "construction error: " << e.what() << '\n';
    return 3;
  } catch (const BadParams& e) {
    err << "construction error: " << e.what() << '\n';
    return 3;
  } catch (const GeometryError& e) {
    err << "geometric precondition violation: " << e.what() << '\n';
    return 4;
  }

  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      err << "config error: cannot open output file: " << out_path << '\n';
      return 2;
    }
    f << result.text;
  } else {
    out << result.text;
  }
  return result.exit_code;
}

}  // namespace h1geo

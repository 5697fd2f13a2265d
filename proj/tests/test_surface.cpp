#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <random>

#include <h1geo/surface.hpp>

using namespace h1geo;

namespace {

constexpr double kPi = 3.14159265358979323846;

double unit(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }
double span(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit(rng);
}

SurfacePatch plane_patch() {
  return make_patch(
      [](double u, double v) {
        return std::array<Jet2, 3>{jet_u(u), jet_const(0.0), jet_v(v)};
      },
      Rect{-1, 1, -1, 1});
}

SurfacePatch cylinder_patch(double r) {
  return make_patch(
      [r](double u, double v) {
        return std::array<Jet2, 3>{r * cos(jet_u(u)), r * sin(jet_u(u)), jet_v(v)};
      },
      Rect{0, 2 * kPi, 0, 1}, 1, 2 * kPi, 0);
}

SurfacePatch graph_patch() {
  return make_patch(
      [](double u, double v) {
        return std::array<Jet2, 3>{jet_u(u), jet_v(v), 0.5 * (jet_u(u) * jet_v(v))};
      },
      Rect{-1, 1, 0.5, 2.5});
}

SurfacePatch torus_patch(double R, double rho, int sigma = 1) {
  return make_patch(
      [R, rho](double u, double v) {
        Jet2 s = rho * cos(jet_v(v)) + R;
        return std::array<Jet2, 3>{s * cos(jet_u(u)), s * sin(jet_u(u)),
                                   rho * sin(jet_v(v))};
      },
      Rect{0, 2 * kPi, 0, 2 * kPi}, sigma, 2 * kPi, 2 * kPi);
}

// Reference values for the torus of revolution, derived by hand from the
// characteristic direction of (s cos u, s sin u, rho sin v), s = R + rho cos v.
struct TorusForms {
  double cos_alpha, sin_alpha, A, det_P, K;
};

TorusForms torus_forms(double R, double rho, double u, double v) {
  Dual1 th{v, 1.0};
  Dual1 s = rho * cos(th) + R;
  Dual1 Q = sqrt(cos(th) * cos(th) + 0.25 * (s * s) * (sin(th) * sin(th)));
  Dual1 A = -(sin(th) / Q);
  double psi = std::atan2(0.5 * s.v * std::sin(v), std::cos(v));
  TorusForms f;
  f.cos_alpha = std::cos(u + psi);
  f.sin_alpha = std::sin(u + psi);
  f.A = A.v;
  f.det_P = rho * s.v * Q.v;
  f.K = -A.d / (rho * s.v * Q.v);
  return f;
}

}  // namespace

TEST_CASE("vertical plane carries a horizontal characteristic line field") {
  SurfacePatch p = plane_patch();
  std::mt19937_64 rng(51);
  for (int i = 0; i < 200; ++i) {
    double u = span(rng, -1, 1), v = span(rng, -1, 1);
    FramePacket fp = evaluate_frame(p, u, v);
    REQUIRE(fp.cos_alpha == Catch::Approx(0.0).margin(1e-13));
    REQUIRE(fp.sin_alpha == Catch::Approx(-1.0).margin(1e-13));
    REQUIRE(fp.A == Catch::Approx(0.0).margin(1e-13));
    REQUIRE(fp.det_P == Catch::Approx(1.0).margin(1e-13));
    REQUIRE(fp.K == Catch::Approx(0.0).margin(1e-13));
    REQUIRE(fp.p.x == Catch::Approx(u).margin(1e-15));
    REQUIRE(fp.p.z == Catch::Approx(v).margin(1e-15));
  }
}

TEST_CASE("vertical cylinder frame matches its closed form") {
  for (double r : {0.6, 1.0, 1.9}) {
    SurfacePatch p = cylinder_patch(r);
    std::mt19937_64 rng(52);
    for (int i = 0; i < 200; ++i) {
      double th = span(rng, 0, 2 * kPi), v = span(rng, 0, 1);
      FramePacket fp = evaluate_frame(p, th, v);
      REQUIRE(fp.cos_alpha == Catch::Approx(std::cos(th)).margin(1e-13));
      REQUIRE(fp.sin_alpha == Catch::Approx(std::sin(th)).margin(1e-13));
      REQUIRE(fp.A == Catch::Approx(0.0).margin(1e-13));
      REQUIRE(fp.det_P == Catch::Approx(r).margin(1e-13));
      REQUIRE(fp.K == Catch::Approx(0.0).margin(1e-13));
      REQUIRE(fp.dalpha_f1 == Catch::Approx(1.0 / r).margin(1e-13));
      REQUIRE(fp.dalpha_f2 == Catch::Approx(0.0).margin(1e-13));
    }
  }
}

TEST_CASE("product graph has A = -1/v away from its characteristic line") {
  SurfacePatch p = graph_patch();
  std::mt19937_64 rng(53);
  for (int i = 0; i < 200; ++i) {
    double u = span(rng, -1, 1), v = span(rng, 0.5, 2.5);
    FramePacket fp = evaluate_frame(p, u, v);
    REQUIRE(fp.cos_alpha == Catch::Approx(-1.0).margin(1e-13));
    REQUIRE(fp.sin_alpha == Catch::Approx(0.0).margin(1e-13));
    REQUIRE(fp.A == Catch::Approx(-1.0 / v).margin(1e-13));
    REQUIRE(fp.det_P == Catch::Approx(v).margin(1e-13));
    REQUIRE(fp.K == Catch::Approx(0.0).margin(1e-13));
    REQUIRE(fp.dA_f1 == Catch::Approx(-1.0 / (v * v)).margin(1e-13));
  }
}

TEST_CASE("torus of revolution frame matches its closed form") {
  double R = 2.0, rho = 0.5;
  SurfacePatch p = torus_patch(R, rho);
  std::mt19937_64 rng(54);
  for (int i = 0; i < 400; ++i) {
    double u = span(rng, 0, 2 * kPi), v = span(rng, 0, 2 * kPi);
    FramePacket fp = evaluate_frame(p, u, v);
    TorusForms tf = torus_forms(R, rho, u, v);
    REQUIRE(fp.cos_alpha == Catch::Approx(tf.cos_alpha).margin(1e-10));
    REQUIRE(fp.sin_alpha == Catch::Approx(tf.sin_alpha).margin(1e-10));
    REQUIRE(fp.A == Catch::Approx(tf.A).margin(1e-10));
    REQUIRE(fp.det_P == Catch::Approx(tf.det_P).margin(1e-10));
    REQUIRE(fp.K == Catch::Approx(tf.K).margin(1e-10));
  }
  // Spot value: at v = pi/2 the curvature is 1/(2 R) independently of rho.
  FramePacket top = evaluate_frame(p, 1.234, 0.5 * kPi);
  REQUIRE(top.K == Catch::Approx(0.25).margin(1e-12));
}

TEST_CASE("frame packets satisfy internal consistency relations") {
  double R = 2.0, rho = 0.5;
  std::array<SurfacePatch, 4> patches = {plane_patch(), cylinder_patch(1.3),
                                         graph_patch(), torus_patch(R, rho)};
  std::array<Rect, 4> boxes = {Rect{-1, 1, -1, 1}, Rect{0, 2 * kPi, 0, 1},
                               Rect{-1, 1, 0.5, 2.5}, Rect{0, 2 * kPi, 0, 2 * kPi}};
  std::mt19937_64 rng(55);
  for (int s = 0; s < 4; ++s) {
    for (int i = 0; i < 100; ++i) {
      double u = span(rng, boxes[s].u0, boxes[s].u1);
      double v = span(rng, boxes[s].v0, boxes[s].v1);
      FramePacket fp = evaluate_frame(patches[s], u, v);

      // f1 and eta are unit horizontal, orthogonal, with eta = -J f1.
      REQUIRE(norm(fp.f1) == Catch::Approx(1.0).margin(1e-12));
      REQUIRE(norm(fp.eta) == Catch::Approx(1.0).margin(1e-12));
      REQUIRE(scalar_product(fp.f1, fp.eta) == Catch::Approx(0.0).margin(1e-12));
      FrameVector mjf = -j_rotate(fp.f1);
      REQUIRE(fp.eta.a1 == Catch::Approx(mjf.a1).margin(1e-14));
      REQUIRE(fp.eta.a2 == Catch::Approx(mjf.a2).margin(1e-14));

      // The coordinate tangents decompose through the transition matrix.
      for (int c = 0; c < 3; ++c) {
        auto comp = [&](const FrameVector& w) {
          return c == 0 ? w.a0 : (c == 1 ? w.a1 : w.a2);
        };
        REQUIRE(comp(fp.du_f) ==
                Catch::Approx(fp.P[0] * comp(fp.f1) + fp.P[1] * comp(fp.f2)).margin(1e-11));
        REQUIRE(comp(fp.dv_f) ==
                Catch::Approx(fp.P[2] * comp(fp.f1) + fp.P[3] * comp(fp.f2)).margin(1e-11));
      }

      // Coframe duality against the adapted frame.
      REQUIRE(pairing(f_one(fp), fp.f1) == Catch::Approx(1.0).margin(1e-12));
      REQUIRE(pairing(f_one(fp), fp.f2) == Catch::Approx(0.0).margin(1e-12));
      REQUIRE(pairing(f_one(fp), fp.eta) == Catch::Approx(0.0).margin(1e-12));
      REQUIRE(pairing(f_two(fp), fp.f2) == Catch::Approx(1.0).margin(1e-12));
      REQUIRE(pairing(f_two(fp), fp.f1) == Catch::Approx(0.0).margin(1e-12));
      REQUIRE(pairing(eta_star(fp), fp.eta) == Catch::Approx(1.0).margin(1e-12));
      REQUIRE(pairing(eta_star(fp), fp.f1) == Catch::Approx(0.0).margin(1e-12));
      REQUIRE(pairing(eta_star(fp), fp.f2) == Catch::Approx(0.0).margin(1e-12));

      // Tangent conversion round trip.
      SurfaceTangent t{span(rng, -2, 2), span(rng, -2, 2)};
      SurfaceTangent back = to_surface_tangent(fp, to_frame_vector(fp, t));
      REQUIRE(back.c1 == Catch::Approx(t.c1).margin(1e-12));
      REQUIRE(back.c2 == Catch::Approx(t.c2).margin(1e-12));

      // One-forms transform consistently between the two bases.
      SurfaceTangent ut{fp.P[0], fp.P[1]}, vt{fp.P[2], fp.P[3]};
      REQUIRE(dalpha(fp, ut) == Catch::Approx(fp.dalpha_u).margin(1e-11));
      REQUIRE(dalpha(fp, vt) == Catch::Approx(fp.dalpha_v).margin(1e-11));
      REQUIRE(dA(fp, ut) == Catch::Approx(fp.dA_u).margin(1e-11));
      REQUIRE(dA(fp, vt) == Catch::Approx(fp.dA_v).margin(1e-11));
    }
  }
}

TEST_CASE("structure identity holds on all reference surfaces") {
  std::array<SurfacePatch, 4> patches = {plane_patch(), cylinder_patch(0.8),
                                         graph_patch(), torus_patch(2.0, 0.5)};
  std::array<Rect, 4> boxes = {Rect{-1, 1, -1, 1}, Rect{0, 2 * kPi, 0, 1},
                               Rect{-1, 1, 0.5, 2.5}, Rect{0, 2 * kPi, 0, 2 * kPi}};
  std::mt19937_64 rng(56);
  for (int s = 0; s < 4; ++s) {
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
      double u = span(rng, boxes[s].u0, boxes[s].u1);
      double v = span(rng, boxes[s].v0, boxes[s].v1);
      FramePacket fp = evaluate_frame(patches[s], u, v);
      worst = std::max(worst, std::abs(fp.dalpha_f2 + fp.dA_f1 + fp.A * fp.A));
    }
    REQUIRE(worst <= 1e-8);
  }
}

TEST_CASE("jet derivatives of the frame fields match finite differences") {
  SurfacePatch p = torus_patch(2.0, 0.5);
  auto field = [&](int which) {
    return [&, which](double u, double v) {
      FrameJets J = evaluate_frame_ext(p, u, v).jets;
      return which == 0 ? J.cosA.v : (which == 1 ? J.sinA.v : J.A.v);
    };
  };
  std::mt19937_64 rng(57);
  for (int i = 0; i < 60; ++i) {
    double u = span(rng, 0, 2 * kPi), v = span(rng, 0, 2 * kPi);
    FrameJets J = evaluate_frame_ext(p, u, v).jets;
    const Jet1* jets[3] = {&J.cosA, &J.sinA, &J.A};
    for (int w = 0; w < 3; ++w) {
      FdPartials fd = fd_partials(field(w), u, v, fd_gradient_step(u, v));
      double ddu = std::abs(jets[w]->du - fd.du) / std::max(0.01, std::abs(jets[w]->du));
      double ddv = std::abs(jets[w]->dv - fd.dv) / std::max(0.01, std::abs(jets[w]->dv));
      REQUIRE(ddu <= 1e-6);
      REQUIRE(ddv <= 1e-6);
    }
  }
}

TEST_CASE("orientation reversal flips the frame covariantly") {
  double R = 2.0, rho = 0.5;
  SurfacePatch plus = torus_patch(R, rho, 1);
  SurfacePatch minus = torus_patch(R, rho, -1);
  std::mt19937_64 rng(58);
  for (int i = 0; i < 200; ++i) {
    double u = span(rng, 0, 2 * kPi), v = span(rng, 0, 2 * kPi);
    FramePacket a = evaluate_frame(plus, u, v);
    FramePacket b = evaluate_frame(minus, u, v);
    REQUIRE(b.cos_alpha == Catch::Approx(-a.cos_alpha).margin(1e-12));
    REQUIRE(b.sin_alpha == Catch::Approx(-a.sin_alpha).margin(1e-12));
    REQUIRE(b.A == Catch::Approx(-a.A).margin(1e-11));
    REQUIRE(b.det_P == Catch::Approx(-a.det_P).margin(1e-10));
    REQUIRE(b.K == Catch::Approx(a.K).margin(1e-10));  // K is orientation invariant
  }
}

TEST_CASE("frame fields vary continuously around the periodic directions") {
  SurfacePatch p = torus_patch(2.0, 0.5);
  const int n = 1000;
  double step = 2 * kPi / n;
  FramePacket prev = evaluate_frame(p, 0.0, 1.0);
  for (int i = 1; i <= n; ++i) {
    FramePacket cur = evaluate_frame(p, i * step, 1.0);
    REQUIRE(std::abs(cur.cos_alpha - prev.cos_alpha) < 0.02);
    REQUIRE(std::abs(cur.sin_alpha - prev.sin_alpha) < 0.02);
    REQUIRE(std::abs(cur.A - prev.A) < 0.02);
    prev = cur;
  }
  // Full loop closes up.
  FramePacket start = evaluate_frame(p, 0.0, 1.0);
  REQUIRE(prev.cos_alpha == Catch::Approx(start.cos_alpha).margin(1e-10));
  REQUIRE(prev.sin_alpha == Catch::Approx(start.sin_alpha).margin(1e-10));
}

TEST_CASE("second fundamental form, curvature tensor and torsion are consistent") {
  SurfacePatch p = torus_patch(2.0, 0.5);
  std::mt19937_64 rng(59);
  for (int i = 0; i < 100; ++i) {
    double u = span(rng, 0, 2 * kPi), v = span(rng, 0, 2 * kPi);
    FrameEval fe = evaluate_frame_ext(p, u, v);
    const FramePacket& fp = fe.packet;
    SurfaceTangent X{span(rng, -2, 2), span(rng, -2, 2)};
    SurfaceTangent Y{span(rng, -2, 2), span(rng, -2, 2)};
    SurfaceTangent Z{span(rng, -2, 2), span(rng, -2, 2)};
    double wedge = X.c1 * Y.c2 - X.c2 * Y.c1;

    // Antisymmetric part of V is -A^2 times the area form.
    double anti = second_fundamental_form(fp, X, Y) - second_fundamental_form(fp, Y, X);
    REQUIRE(anti == Catch::Approx(-fp.A * fp.A * wedge).margin(1e-9));

    // R(X, Y) Z = K (f^1 ^ f^2)(X, Y) f^2(Z) f1.
    SurfaceTangent R = curvature_tensor(fp, X, Y, Z);
    REQUIRE(R.c1 == Catch::Approx(fp.K * wedge * Z.c2).margin(1e-9));
    REQUIRE(R.c2 == 0.0);

    // Torsion of the projected connection on commuting coordinate fields.
    SurfaceTangent nuv = detail::nabla_param(fe, ParamVector{1, 0}, ParamVector{0, 1});
    SurfaceTangent nvu = detail::nabla_param(fe, ParamVector{0, 1}, ParamVector{1, 0});
    SurfaceTangent ut{fp.P[0], fp.P[1]}, vt{fp.P[2], fp.P[3]};
    SurfaceTangent tor = torsion_eval(fp, ut, vt);
    REQUIRE(nuv.c1 - nvu.c1 == Catch::Approx(tor.c1).margin(1e-9));
    REQUIRE(nuv.c2 - nvu.c2 == Catch::Approx(tor.c2).margin(1e-9));
  }
}

TEST_CASE("gauss and codazzi residuals vanish on the torus") {
  SurfacePatch p = torus_patch(2.0, 0.5);
  std::mt19937_64 rng(60);
  for (int i = 0; i < 100; ++i) {
    double u = span(rng, 0, 2 * kPi), v = span(rng, 0, 2 * kPi);
    GaussCodazzi gc = gauss_codazzi_residuals(p, u, v, ParamVector{1, 0},
                                              ParamVector{0, 1}, ParamVector{1, 0});
    REQUIRE(std::abs(gc.gauss_res.c1) <= 1e-7);
    REQUIRE(std::abs(gc.gauss_res.c2) <= 1e-7);
    REQUIRE(std::abs(gc.codazzi_res) <= 1e-7);
  }
}

TEST_CASE("gauss map and its pullback density") {
  SurfacePatch p = torus_patch(2.0, 0.5);
  std::mt19937_64 rng(61);
  for (int i = 0; i < 200; ++i) {
    double u = span(rng, 0, 2 * kPi), v = span(rng, 0, 2 * kPi);
    FrameEval fe = evaluate_frame_ext(p, u, v);
    Point g = gauss_map(fe.packet);
    REQUIRE(g.x * g.x + g.y * g.y == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(g.z == Catch::Approx(-fe.packet.A).margin(1e-14));
    double direct = gauss_pushforward_density(fe);
    double via_forms = fe.packet.dalpha_v * fe.packet.dA_u -
                       fe.packet.dalpha_u * fe.packet.dA_v;
    REQUIRE(direct == Catch::Approx(via_forms).margin(1e-10));
  }
}

TEST_CASE("degenerate and characteristic inputs are rejected") {
  // Rank-deficient parametrization: dv vanishes identically.
  auto bad = [](double u, double) {
    return std::array<Jet2, 3>{jet_u(u), 2.0 * jet_u(u), jet_const(0.0)};
  };
  REQUIRE_THROWS_AS(make_patch(bad, Rect{-1, 1, -1, 1}), DegenerateImmersion);

  // Graph anchored on its characteristic line cannot be oriented.
  auto graph = [](double u, double v) {
    return std::array<Jet2, 3>{jet_u(u), jet_v(v), 0.5 * (jet_u(u) * jet_v(v))};
  };
  REQUIRE_THROWS_AS(make_patch(graph, Rect{-1, 1, -1, 1}), CharacteristicPoint);

  // Anchored off the line, evaluation still refuses points on it.
  SurfacePatch ok = make_patch(graph, Rect{-1, 1, -0.5, 2.5});
  REQUIRE_THROWS_AS(evaluate_frame(ok, 0.3, 0.0), CharacteristicPoint);
  try {
    evaluate_frame(ok, 0.3, 0.0);
  } catch (const CharacteristicPoint& e) {
    REQUIRE(e.u == Catch::Approx(0.3));
    REQUIRE(e.v == Catch::Approx(0.0));
    REQUIRE(e.margin <= 1e-9);
  }

  // A patch that skipped make_patch is unusable.
  SurfacePatch raw;
  raw.eval = graph;
  raw.domain = Rect{-1, 1, 0.5, 2.5};
  REQUIRE_THROWS_AS(evaluate_frame(raw, 0.0, 1.0), GeometryError);
}

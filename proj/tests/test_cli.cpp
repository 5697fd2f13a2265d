#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include <h1geo/cli_app.hpp>

using namespace h1geo;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = 0;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const fs::path& work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("h1geo_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_config(const std::string& name, const std::string& text) {
  fs::path p = work_dir() / name;
  std::ofstream f(p, std::ios::binary);
  f << text;
  return p.string();
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("catalog command lists the built-in surfaces deterministically") {
  CliRun a = run({"catalog"});
  REQUIRE(a.code == 0);
  auto parsed = nlohmann::json::parse(a.out);
  REQUIRE(parsed.is_array());
  REQUIRE(parsed.size() == 5);
  REQUIRE(parsed[0]["name"] == "vertical_plane");
  // Emitted JSON is in round-trip normal form.
  REQUIRE(parsed.dump(2) + "\n" == a.out);
  CliRun b = run({"catalog"});
  REQUIRE(b.out == a.out);
}

TEST_CASE("frame command emits a fixed-format CSV grid") {
  std::string cfg = write_config("frame_cyl.json", R"({
    "surface": {"name": "vertical_cylinder", "params": {"r": 1.0}},
    "grid": {"nu": 8, "nv": 2}
  })");
  CliRun a = run({"frame", "--config", cfg});
  REQUIRE(a.code == 0);
  REQUIRE(count_lines(a.out) == 17);
  REQUIRE(a.out.substr(0, a.out.find('\n')) ==
          "u,v,x,y,z,cos_alpha,sin_alpha,A,K,margin");
  // Every data row carries ten fields; K is identically zero on the cylinder.
  std::istringstream rows(a.out);
  std::string line;
  std::getline(rows, line);
  while (std::getline(rows, line)) {
    REQUIRE(std::count(line.begin(), line.end(), ',') == 9);
    auto last = line.rfind(',');
    auto prev = line.rfind(',', last - 1);
    REQUIRE(std::stod(line.substr(prev + 1, last - prev - 1)) == 0.0);
  }
  CliRun b = run({"frame", "--config", cfg});
  REQUIRE(b.out == a.out);
}

TEST_CASE("frame command flags characteristic nodes instead of failing") {
  std::string cfg = write_config("frame_graph.json", R"({
    "surface": {"name": "graph_xy", "params": {"v_min": -0.5}},
    "grid": {"nu": 3, "nv": 5}
  })");
  CliRun a = run({"frame", "--config", cfg});
  REQUIRE(a.code == 0);
  int flagged = 0;
  std::istringstream rows(a.out);
  std::string line;
  while (std::getline(rows, line))
    if (line.find(",,,,") != std::string::npos) ++flagged;
  REQUIRE(flagged == 3);  // the grid line v = 0, one row per u node
}

TEST_CASE("gauss-bonnet command reports parts and verdict") {
  std::string band = write_config("gb_band.json", R"({
    "surface": {"name": "vertical_cylinder"},
    "region": {"name": "cylinder_band"},
    "tolerance": 1e-10
  })");
  CliRun a = run({"gauss-bonnet", "--config", band});
  REQUIRE(a.code == 0);
  auto ja = nlohmann::json::parse(a.out);
  REQUIRE(ja["pass"] == true);
  REQUIRE(std::abs(ja["residual"].get<double>()) <= 1e-10);
  REQUIRE(ja.dump(2) + "\n" == a.out);

  std::string quad = write_config("gb_quad.json", R"({
    "surface": {"name": "torus_revolution"},
    "region": {"name": "torus_quad"}
  })");
  CliRun b = run({"gauss-bonnet", "--config", quad});
  REQUIRE(b.code == 0);
  auto jb = nlohmann::json::parse(b.out);
  REQUIRE(jb["corner_areas"].size() == 4);
  REQUIRE(std::abs(jb["residual"].get<double>()) <= 1e-6);
  REQUIRE(std::abs(jb["curve_integral"].get<double>()) >= 1e-3);

  std::string strict = write_config("gb_strict.json", R"({
    "surface": {"name": "torus_revolution"},
    "region": {"name": "torus_quad"},
    "tolerance": 1e-20
  })");
  CliRun c = run({"gauss-bonnet", "--config", strict});
  REQUIRE(c.code == 1);
  REQUIRE(nlohmann::json::parse(c.out)["pass"] == false);
}

TEST_CASE("gauss-map command confirms the area routes") {
  std::string cfg = write_config("gm_quad.json", R"({
    "surface": {"name": "torus_revolution"},
    "region": {"name": "torus_quad"}
  })");
  CliRun a = run({"gauss-map", "--config", cfg});
  REQUIRE(a.code == 0);
  auto j = nlohmann::json::parse(a.out);
  REQUIRE(j["pass"] == true);
  double s = j["signed_area"].get<double>();
  double k = j["curvature_route"].get<double>();
  REQUIRE(s == Catch::Approx(k).margin(1e-8));
}

TEST_CASE("limit-check command estimates K through shrinking disks") {
  std::string cfg = write_config("limit.json", R"({
    "surface": {"name": "torus_revolution"},
    "point": {"u": 2.0, "v": 1.2},
    "radii": [0.05, 0.02, 0.008]
  })");
  CliRun a = run({"limit-check", "--config", cfg});
  REQUIRE(a.code == 0);
  auto j = nlohmann::json::parse(a.out);
  REQUIRE(j["pass"] == true);
  REQUIRE(j["slope"].get<double>() >= 0.9);

  std::string bad = write_config("limit_bad.json", R"({
    "surface": {"name": "torus_revolution"},
    "point": {"u": 2.0, "v": 1.2},
    "radii": [0.008, 0.02]
  })");
  CliRun b = run({"limit-check", "--config", bad});
  REQUIRE(b.code == 2);
  REQUIRE(b.err.find("radii") != std::string::npos);
}

TEST_CASE("structure-check command verifies the frame equations on a grid") {
  std::string plane = write_config("sc_plane.json", R"({
    "surface": {"name": "vertical_plane"},
    "grid": {"nu": 8, "nv": 8}
  })");
  CliRun a = run({"structure-check", "--config", plane});
  REQUIRE(a.code == 0);
  auto j = nlohmann::json::parse(a.out);
  REQUIRE(j["pass"] == true);
  REQUIRE(j["structure_identity"]["pass"] == true);
  REQUIRE(j["jet_vs_fd"]["pass"] == true);

  std::string torus = write_config("sc_torus.json", R"({
    "surface": {"name": "torus_revolution"},
    "grid": {"nu": 12, "nv": 12}
  })");
  CliRun b = run({"structure-check", "--config", torus});
  REQUIRE(b.code == 0);
  REQUIRE(nlohmann::json::parse(b.out)["pass"] == true);

  // A grid node on the characteristic line is a geometric precondition
  // failure, reported with the offending location.
  std::string graph = write_config("sc_graph.json", R"({
    "surface": {"name": "graph_xy", "params": {"v_min": -0.5}},
    "grid": {"nu": 3, "nv": 5}
  })");
  CliRun c = run({"structure-check", "--config", graph});
  REQUIRE(c.code == 4);
  REQUIRE(c.err.find("characteristic point") != std::string::npos);
}

TEST_CASE("total-curvature command integrates to zero over closed tilings") {
  std::string cfg = write_config("tc_torus.json", R"({
    "surface": {"name": "torus_revolution"},
    "tiles": {"nu": 1, "nv": 2}
  })");
  CliRun a = run({"total-curvature", "--config", cfg});
  REQUIRE(a.code == 0);
  auto j = nlohmann::json::parse(a.out);
  REQUIRE(j["pass"] == true);
  REQUIRE(std::abs(j["total"].get<double>()) <= 1e-7);
  REQUIRE(j["per_patch"].size() == 2);
}

TEST_CASE("configuration errors name the offending field and exit 2") {
  std::string bad_json = write_config("broken.json", "{nope");
  REQUIRE(run({"frame", "--config", bad_json}).code == 2);

  REQUIRE(run({"frame", "--config", (work_dir() / "absent.json").string()}).code == 2);

  std::string no_surface = write_config("c1.json", R"({"grid": {"nu": 4, "nv": 4}})");
  CliRun a = run({"frame", "--config", no_surface});
  REQUIRE(a.code == 2);
  REQUIRE(a.err.find("surface") != std::string::npos);

  std::string small_grid = write_config("c2.json", R"({
    "surface": {"name": "vertical_plane"}, "grid": {"nu": 1, "nv": 4}
  })");
  CliRun b = run({"frame", "--config", small_grid});
  REQUIRE(b.code == 2);
  REQUIRE(b.err.find("nu") != std::string::npos);

  std::string neg_tol = write_config("c3.json", R"({
    "surface": {"name": "torus_revolution"},
    "region": {"name": "torus_quad"},
    "tolerance": -1.0
  })");
  CliRun c = run({"gauss-bonnet", "--config", neg_tol});
  REQUIRE(c.code == 2);
  REQUIRE(c.err.find("tolerance") != std::string::npos);

  std::string extra = write_config("c4.json", R"({
    "surface": {"name": "vertical_plane"}, "grid": {"nu": 4, "nv": 4}, "extra": 1
  })");
  CliRun d = run({"frame", "--config", extra});
  REQUIRE(d.code == 2);
  REQUIRE(d.err.find("extra") != std::string::npos);

  std::string str_param = write_config("c5.json", R"({
    "surface": {"name": "vertical_cylinder", "params": {"r": "one"}},
    "grid": {"nu": 4, "nv": 4}
  })");
  REQUIRE(run({"frame", "--config", str_param}).code == 2);
}

TEST_CASE("construction errors exit 3, geometric preconditions exit 4") {
  std::string unknown = write_config("u1.json", R"({
    "surface": {"name": "moebius"}, "grid": {"nu": 4, "nv": 4}
  })");
  CliRun a = run({"frame", "--config", unknown});
  REQUIRE(a.code == 3);
  REQUIRE(a.err.find("moebius") != std::string::npos);

  std::string bad_r = write_config("u2.json", R"({
    "surface": {"name": "vertical_cylinder", "params": {"r": -1.0}},
    "grid": {"nu": 4, "nv": 4}
  })");
  REQUIRE(run({"frame", "--config", bad_r}).code == 3);

  std::string bad_region = write_config("u3.json", R"({
    "surface": {"name": "torus_revolution"}, "region": {"name": "blob"}
  })");
  REQUIRE(run({"gauss-bonnet", "--config", bad_region}).code == 3);

  std::string crossing = write_config("u4.json", R"({
    "surface": {"name": "torus_revolution"},
    "region": {"name": "torus_quad",
               "params": {"v0": 1.3707963267948966, "v1": 1.7707963267948966}}
  })");
  CliRun d = run({"gauss-bonnet", "--config", crossing});
  REQUIRE(d.code == 4);
  REQUIRE(d.err.find("not transverse") != std::string::npos);
}

TEST_CASE("argument parsing failures exit 2") {
  REQUIRE(run({}).code == 2);
  REQUIRE(run({"not-a-command"}).code == 2);
  REQUIRE(run({"frame"}).code == 2);  // --config is required
}

TEST_CASE("reports can be written to a file instead of stdout") {
  std::string cfg = write_config("out_test.json", R"({
    "surface": {"name": "vertical_plane"}, "grid": {"nu": 4, "nv": 4}
  })");
  std::string out_path = (work_dir() / "frame_out.csv").string();
  CliRun a = run({"frame", "--config", cfg, "--out", out_path});
  REQUIRE(a.code == 0);
  REQUIRE(a.out.empty());
  CliRun b = run({"frame", "--config", cfg});
  REQUIRE(read_file(out_path) == b.out);
}

TEST_CASE("the installed binary honors the exit code contract") {
  std::string exe = H1GEO_CLI_PATH;
  auto shell = [&](const std::string& cmd) {
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
  };
  std::string catalog_file = (work_dir() / "catalog_sub.json").string();
  REQUIRE(shell(exe + " catalog > " + catalog_file + " 2>/dev/null") == 0);
  REQUIRE(read_file(catalog_file) == run({"catalog"}).out);

  std::string unknown = write_config("sub_unknown.json", R"({
    "surface": {"name": "moebius"}, "grid": {"nu": 4, "nv": 4}
  })");
  REQUIRE(shell(exe + " frame --config " + unknown + " >/dev/null 2>&1") == 3);

  std::string broken = write_config("sub_broken.json", "{nope");
  REQUIRE(shell(exe + " frame --config " + broken + " >/dev/null 2>&1") == 2);

  std::string strict = write_config("sub_strict.json", R"({
    "surface": {"name": "torus_revolution"},
    "region": {"name": "torus_quad"},
    "tolerance": 1e-20
  })");
  REQUIRE(shell(exe + " gauss-bonnet --config " + strict + " >/dev/null 2>&1") == 1);

  std::string graph = write_config("sub_graph.json", R"({
    "surface": {"name": "graph_xy", "params": {"v_min": -0.5}},
    "grid": {"nu": 3, "nv": 5}
  })");
  REQUIRE(shell(exe + " structure-check --config " + graph + " >/dev/null 2>&1") == 4);
}

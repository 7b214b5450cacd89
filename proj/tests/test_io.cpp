#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <numbers>
#include <string>

#include <json.hpp>

#include "threebody/errors.hpp"
#include "threebody/io.hpp"

using namespace threebody;
using nlohmann::json;

TEST_CASE("fnv1a64 known vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
  CHECK(hash_hex("") == "cbf29ce484222325");
  CHECK(hash_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("fmt17 round-trips doubles exactly") {
  const double samples[] = {0.0,
                            1.0,
                            -1.0,
                            std::numbers::pi,
                            0.1,
                            1.0 / 3.0,
                            -2.5e-17,
                            1e300,
                            -1e-300,
                            5e-324,
                            std::numeric_limits<double>::max(),
                            std::numeric_limits<double>::min(),
                            -0.66283399843049874};
  for (double x : samples) {
    const std::string s = fmt17(x);
    const double back = std::strtod(s.c_str(), nullptr);
    CHECK(back == x);
  }
}

TEST_CASE("atomic file writes") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "threebody_io_test";
  fs::create_directories(dir);
  const std::string path = (dir / "payload.txt").string();
  const std::string body = "line one\nline two\n";
  write_text_atomic(path, body);
  CHECK(read_file(path) == body);
  CHECK_FALSE(fs::exists(path + ".tmp"));
  write_text_atomic(path, "replaced");
  CHECK(read_file(path) == "replaced");
  CHECK_THROWS_AS(read_file((dir / "no_such_file").string()), IoError);
  CHECK_THROWS_AS(write_text_atomic((dir / "missing_dir" / "x.txt").string(), "y"), IoError);
  fs::remove_all(dir);
}

namespace {
Trajectory sample_full() {
  Trajectory traj;
  traj.reduced = false;
  traj.times = {0.0, 0.125, 0.3333333333333333};
  for (int k = 0; k < 3; ++k) {
    PhaseState s;
    for (int i = 0; i < 3; ++i) {
      s.q[i] = Complex{0.1 * k + i, -0.7 + 0.01 * i * k};
      s.v[i] = Complex{std::sin(1.0 + i + k), std::cos(2.0 * i - k)};
    }
    traj.states.push_back(s);
    SampleDiagnostics d;
    d.H = -2.5 + 1e-13 * k;
    d.J = 0.25 * k;
    d.P = Complex{1e-16 * k, -3.0};
    d.I = 2.0 + k / 7.0;
    traj.diagnostics.push_back(d);
  }
  traj.termination = Termination::Collision;
  traj.termination_detail = "bodies 1 and 2 within radius";
  return traj;
}

Trajectory sample_reduced() {
  Trajectory traj;
  traj.reduced = true;
  traj.times = {0.0, 1.0 / 3.0};
  for (int k = 0; k < 2; ++k) {
    ReducedState s;
    s.w = ShapeVector{0.1 + k, -0.2, 1.5 - 0.3 * k};
    s.wdot = ShapeVector{std::exp(-k - 0.5), 0.0, -1.0 / (k + 3.0)};
    traj.rstates.push_back(s);
    traj.diagnostics.push_back({-0.28, 0.0, Complex{0, 0}, 2.0 * s.w.norm()});
  }
  return traj;
}
}  // namespace

TEST_CASE("csv trajectory round trip") {
  const Trajectory traj = sample_full();
  const std::string csv = csv_trajectory(traj);
  CHECK(csv.substr(0, csv.find('\n')) == "t,x1,y1,x2,y2,x3,y3,H,J,Px,Py,I");
  const Trajectory back = trajectory_from_csv(csv);
  REQUIRE(back.size() == traj.size());
  CHECK_FALSE(back.reduced);
  CHECK(back.termination == Termination::TimeReached);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    CHECK(back.times[k] == traj.times[k]);
    for (int i = 0; i < 3; ++i) {
      CHECK(back.states[k].q[i] == traj.states[k].q[i]);
      CHECK(back.states[k].v[i] == Complex{0.0, 0.0});
    }
    CHECK(back.diagnostics[k].H == traj.diagnostics[k].H);
    CHECK(back.diagnostics[k].J == traj.diagnostics[k].J);
    CHECK(back.diagnostics[k].P == traj.diagnostics[k].P);
    CHECK(back.diagnostics[k].I == traj.diagnostics[k].I);
  }

  const Trajectory rtraj = sample_reduced();
  const std::string rcsv = csv_trajectory(rtraj);
  CHECK(rcsv.substr(0, rcsv.find('\n')) == "t,w1,w2,w3,H,J,Px,Py,I");
  const Trajectory rback = trajectory_from_csv(rcsv);
  REQUIRE(rback.size() == rtraj.size());
  CHECK(rback.reduced);
  for (std::size_t k = 0; k < rtraj.size(); ++k) {
    CHECK(rback.rstates[k].w == rtraj.rstates[k].w);
    CHECK(rback.rstates[k].wdot == Eigen::Vector3d::Zero());
  }

  CHECK_THROWS_AS(trajectory_from_csv("t,x1\n0,1\n"), IoError);
  CHECK_THROWS_AS(trajectory_from_csv(csv.substr(0, csv.rfind(',')) + "\n"), IoError);
}

TEST_CASE("json trajectory round trip is bit exact") {
  for (const Trajectory& traj : {sample_full(), sample_reduced()}) {
    const std::string text = json_trajectory(traj);
    const Trajectory back = trajectory_from_json(text);
    REQUIRE(back.size() == traj.size());
    CHECK(back.reduced == traj.reduced);
    CHECK(back.termination == traj.termination);
    CHECK(back.termination_detail == traj.termination_detail);
    for (std::size_t k = 0; k < traj.size(); ++k) {
      CHECK(back.times[k] == traj.times[k]);
      if (traj.reduced) {
        CHECK(back.rstates[k].w == traj.rstates[k].w);
        CHECK(back.rstates[k].wdot == traj.rstates[k].wdot);
      } else {
        for (int i = 0; i < 3; ++i) {
          CHECK(back.states[k].q[i] == traj.states[k].q[i]);
          CHECK(back.states[k].v[i] == traj.states[k].v[i]);
        }
      }
      CHECK(back.diagnostics[k].H == traj.diagnostics[k].H);
      CHECK(back.diagnostics[k].J == traj.diagnostics[k].J);
      CHECK(back.diagnostics[k].P == traj.diagnostics[k].P);
      CHECK(back.diagnostics[k].I == traj.diagnostics[k].I);
    }
    // Serializing the parsed copy reproduces the text verbatim.
    CHECK(json_trajectory(back) == text);
  }
  CHECK_THROWS_AS(trajectory_from_json("{\"format\":\"something-else\"}"), IoError);
  CHECK_THROWS_AS(trajectory_from_json("not json"), IoError);
}

TEST_CASE("trajectory json carries the manifest when given") {
  RunConfig rc = RunConfig::from_text("preset = lagrange-circular\nout = run.json\n");
  Manifest man;
  man.tool_version = kToolVersion;
  man.config_hash = rc.config_hash();
  man.canonical_config = rc.canonical_text();
  man.subcommand = "simulate";
  man.outputs = {"run.json"};
  const std::string text = json_trajectory(sample_full(), &man);
  const json j = json::parse(text);
  REQUIRE(j.contains("manifest"));
  CHECK(j["manifest"]["tool_version"] == kToolVersion);
  CHECK(j["manifest"]["config_hash"] == rc.config_hash());
  CHECK(j["manifest"]["subcommand"] == "simulate");
  CHECK(j["manifest"]["outputs"][0] == "run.json");

  const json m = json::parse(json_manifest(man));
  CHECK(m["tool_version"] == kToolVersion);
  CHECK(m["config_hash"] == rc.config_hash());
  CHECK(m["canonical_config"] == rc.canonical_text());
}

TEST_CASE("discrete path round trip") {
  DiscretePath p;
  p.T = 2.75;
  p.nodes.resize(3, 5);
  for (int k = 0; k < 5; ++k)
    p.nodes.col(k) = ShapeVector{std::sin(k + 0.1), std::cos(2.0 * k), 0.5 + k / 9.0};
  const std::string text = json_discrete_path(p);
  CHECK(json::parse(text)["format"] == "threebody-path");
  const DiscretePath back = discrete_path_from_json(text);
  CHECK(back.T == p.T);
  REQUIRE(back.segments() == p.segments());
  CHECK((back.nodes - p.nodes).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("syzygy serialization") {
  SyzygyReport rep;
  SyzygyEvent a;
  a.t = 1.25;
  a.w = ShapeVector{0.5, -0.25, 0.0};
  a.middle = 3;
  SyzygyEvent b = a;
  b.t = 2.5;
  b.middle = 1;
  b.grazing = true;
  rep.events = {a, b};
  CHECK(rep.count() == 1);

  const std::string csv = csv_syzygies(rep.events);
  CHECK(csv.substr(0, csv.find('\n')) == "t,w1,w2,w3,middle,grazing,collision_graze");
  CHECK(csv.find(",3,0,0\n") != std::string::npos);
  CHECK(csv.find(",1,1,0\n") != std::string::npos);

  const json j = json::parse(json_syzygies(rep));
  CHECK(j["format"] == "threebody-syzygies");
  CHECK(j["count"] == 1);
  CHECK(j["word"] == "3");
  CHECK(j["identically_collinear"] == false);
  REQUIRE(j["events"].size() == 2);
  CHECK(j["events"][1]["grazing"] == true);
}

TEST_CASE("run config parsing") {
  const std::string text =
      "# comment line\n"
      "masses = 1 2 3\n"
      "q = 0 0 -1 0 1 0\n"
      "v = 0 0.1 0 -0.2 0 0.1\n"
      "T = 4.5\n"
      "method = rk4\n"
      "fixed_step = 0.001\n"
      "abs_tol = 1e-9\n"
      "rel_tol = 1e-9   # trailing comment\n"
      "max_step = 0.5\n"
      "min_step = 1e-13\n"
      "collision_radius = 1e-8\n"
      "escape_factor = 1e5\n"
      "sample_dt = 0.25\n"
      "seed = 42\n"
      "eight_N = 128\n"
      "arc_T = 0.9\n"
      "grad_tol = 1e-9\n"
      "shoot_tol = 1e-8\n"
      "kepler_r = 1 0\n"
      "kepler_v = 0 1.2\n"
      "kepler_c = 2\n"
      "format = json\n"
      "out = runs/my run.json\n";
  const RunConfig rc = RunConfig::from_text(text);
  CHECK(rc.masses == Eigen::Vector3d(1, 2, 3));
  REQUIRE(rc.full.has_value());
  CHECK(rc.full->q[1] == Complex{-1.0, 0.0});
  CHECK(rc.full->v[1] == Complex{0.0, -0.2});
  CHECK_FALSE(rc.reduced.has_value());
  CHECK(rc.T == 4.5);
  CHECK(rc.integrator.method == Method::RK4Fixed);
  CHECK(rc.integrator.sample_dt == 0.25);
  CHECK(rc.seed == 42);
  CHECK(rc.eight_N == 128);
  CHECK(rc.kepler_v == Eigen::Vector2d(0, 1.2));
  CHECK(rc.format == "json");
  CHECK(rc.out == "runs/my run.json");
  CHECK(rc.mass_distribution().M == 6.0);
  CHECK(rc.effective_T(10.0) == 4.5);

  const RunConfig red = RunConfig::from_text("w = 0 0 1.5\nwdot = 0.1 0 0\nout = r.csv\n");
  REQUIRE(red.reduced.has_value());
  CHECK(red.reduced->w == ShapeVector(0, 0, 1.5));
  CHECK(red.reduced->wdot == ShapeVector(0.1, 0, 0));
  CHECK_FALSE(red.full.has_value());
  CHECK(red.effective_T(10.0) == 10.0);
}

TEST_CASE("run config rejects bad input") {
  CHECK_THROWS_AS(RunConfig::from_text("bogus_key = 1\n"), ArgumentError);
  CHECK_THROWS_AS(RunConfig::from_text("masses = 1 2\n"), ArgumentError);
  CHECK_THROWS_AS(RunConfig::from_text("masses = 1 0 1\n").mass_distribution(),
                  ArgumentError);
  CHECK_THROWS_AS(RunConfig::from_text("q = 0 0 1 0 0 1\nw = 1 0 0\n"), ArgumentError);
  CHECK_THROWS_AS(RunConfig::from_text("v = 0 0 0 0 0 0\n"), ArgumentError);
  CHECK_THROWS_AS(RunConfig::from_text("wdot = 0 0 0\n"), ArgumentError);
  CHECK_THROWS_AS(RunConfig::from_text("T = 0\n"), ArgumentError);
  CHECK_THROWS_AS(RunConfig::from_text("T = -1\n"), ArgumentError);
  CHECK_THROWS_AS(RunConfig::from_text("method = euler\n"), ArgumentError);
  CHECK_THROWS_AS(RunConfig::from_text("format = yaml\n"), ArgumentError);
  CHECK_THROWS_AS(RunConfig::from_text("preset = no-such-preset\n"), ArgumentError);
  CHECK_THROWS_AS(RunConfig::from_text("abs_tol = 0\n"), ArgumentError);
  CHECK_THROWS_AS(RunConfig::from_text("seed = -3\n"), ArgumentError);
  try {
    RunConfig::from_text("masses = 1 1 1\nnope = 2\n");
    FAIL("expected ArgumentError");
  } catch (const ArgumentError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("nope") != std::string::npos);
  }
}

TEST_CASE("preset expansion and overrides") {
  const RunConfig rc = RunConfig::from_text("preset = lagrange-circular\n");
  CHECK(rc.masses == Eigen::Vector3d(1, 1, 1));
  REQUIRE(rc.full.has_value());
  CHECK(std::abs(rc.full->q[0]) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rc.preset_T == doctest::Approx(2.0 * std::numbers::pi * std::pow(3.0, 0.25))
                           .epsilon(1e-15));
  CHECK(rc.effective_T(99.0) == rc.preset_T);

  const RunConfig over =
      RunConfig::from_text("preset = free-fall-345\nmasses = 2 2 2\nT = 1\n");
  CHECK(over.masses == Eigen::Vector3d(2, 2, 2));
  REQUIRE(over.full.has_value());
  CHECK(over.effective_T(99.0) == 1.0);

  const RunConfig swap = RunConfig::from_text("preset = lagrange-circular\nw = 0 0 1\n");
  REQUIRE(swap.reduced.has_value());
  CHECK_FALSE(swap.full.has_value());
}

TEST_CASE("canonical text and config hash") {
  const std::string a =
      "masses = 1 2 3\n"
      "T = 2\n"
      "q = 0 0 -1 0 1 0\n"
      "seed = 7\n";
  const std::string b =
      "seed = 7\n"
      "q = 0 0 -1 0 1 0\n"
      "masses = 1 2 3\n"
      "T = 2\n";
  const RunConfig ra = RunConfig::from_text(a);
  const RunConfig rb = RunConfig::from_text(b);
  CHECK(ra.canonical_text() == rb.canonical_text());
  CHECK(ra.config_hash() == rb.config_hash());
  CHECK(ra.config_hash().size() == 16);

  const RunConfig rc = RunConfig::from_text("masses = 1 2 3\nT = 2.0000001\nq = 0 0 -1 0 1 0\nseed = 7\n");
  CHECK(rc.config_hash() != ra.config_hash());

  // The canonical text itself parses back to the same canonical text, once
  // the placeholder lines the parser does not accept are stripped.
  std::string canon = ra.canonical_text();
  std::string cleaned;
  size_t pos = 0;
  while (pos < canon.size()) {
    size_t end = canon.find('\n', pos);
    const std::string line = canon.substr(pos, end - pos);
    if (line != "preset = -" && line != "state = -" && line != "out = -" &&
        line.rfind("preset_T", 0) != 0)
      cleaned += line + "\n";
    pos = end + 1;
  }
  const RunConfig again = RunConfig::from_text(cleaned);
  CHECK(again.canonical_text() == canon);
}

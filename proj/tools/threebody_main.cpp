#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "threebody/core_model.hpp"
#include "threebody/errors.hpp"
#include "threebody/figure_eight.hpp"
#include "threebody/integrator.hpp"
#include "threebody/io.hpp"
#include "threebody/presets.hpp"
#include "threebody/reduced_dynamics.hpp"
#include "threebody/shape_geometry.hpp"
#include "threebody/shape_projection.hpp"
#include "threebody/solutions.hpp"
#include "threebody/syzygy.hpp"

namespace {

using nlohmann::json;
using namespace threebody;

struct Opts {
  std::string config;
  std::vector<std::string> sets;
  std::string preset;
  std::string out;
  std::string format;
  std::string in;
  double T = 0.0;
};

void add_common(CLI::App* sub, Opts& opt) {
  sub->add_option("--config", opt.config, "key = value config file");
  sub->add_option("--set", opt.sets, "extra config line, e.g. --set T=10 (repeatable)");
  sub->add_option("--preset", opt.preset,
                  "initial-condition preset (lagrange-circular, euler-homothetic, "
                  "free-fall-345, figure-eight)");
  sub->add_option("--out", opt.out, "output base path; files get suffixes appended");
  sub->add_option("--format", opt.format, "trajectory format: csv or json");
  sub->add_option("-T,--duration", opt.T, "integration time");
}

RunConfig build_config(const Opts& opt) {
  std::string text;
  if (!opt.config.empty()) {
    text += read_file(opt.config);
    text += "\n";
  }
  for (const std::string& s : opt.sets) {
    text += s;
    text += "\n";
  }
  if (!opt.preset.empty()) text += "preset = " + opt.preset + "\n";
  if (opt.T > 0.0) text += "T = " + fmt17(opt.T) + "\n";
  if (!opt.format.empty()) text += "format = " + opt.format + "\n";
  if (!opt.out.empty()) text += "out = " + opt.out + "\n";
  RunConfig rc = RunConfig::from_text(text);
  if (rc.out.empty())
    throw ArgumentError("an output base path is required: set out = ... or pass --out");
  return rc;
}

Manifest make_manifest(const RunConfig& rc, const std::string& sub,
                       std::vector<std::string> outputs) {
  Manifest man;
  man.tool_version = kToolVersion;
  man.config_hash = rc.config_hash();
  man.canonical_config = rc.canonical_text();
  man.subcommand = sub;
  man.outputs = std::move(outputs);
  return man;
}

PhaseState full_initial(const RunConfig& rc, const char* sub) {
  if (rc.full) return *rc.full;
  throw ArgumentError(std::string(sub) + " needs a full-space initial state: give a preset or q");
}

ReducedState reduced_initial(const RunConfig& rc) {
  if (rc.reduced) return *rc.reduced;
  if (rc.full) return project_state(*rc.full, rc.mass_distribution());
  throw ArgumentError("reduce needs an initial state: give w, q, or a preset");
}

Trajectory load_trajectory(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0)
    return trajectory_from_json(text);
  return trajectory_from_csv(text);
}

std::string traj_suffix(const RunConfig& rc) { return rc.format == "json" ? ".json" : ".csv"; }

void write_trajectory(const Trajectory& tr, const RunConfig& rc, const std::string& sub) {
  const std::string path = rc.out + traj_suffix(rc);
  const Manifest man = make_manifest(rc, sub, {path, rc.out + ".manifest.json"});
  if (rc.format == "json")
    write_text_atomic(path, json_trajectory(tr, &man));
  else
    write_text_atomic(path, csv_trajectory(tr));
  write_text_atomic(rc.out + ".manifest.json", json_manifest(man));
  std::cout << "samples: " << tr.size() << "  termination: " << termination_name(tr.termination)
            << "\nwrote " << path << "\n";
}

int cmd_simulate(const RunConfig& rc) {
  const PhaseState s0 = full_initial(rc, "simulate");
  const Trajectory tr = integrate(s0, rc.mass_distribution(), rc.effective_T(10.0), rc.integrator);
  write_trajectory(tr, rc, "simulate");
  return 0;
}

int cmd_reduce(const RunConfig& rc) {
  const ReducedState r0 = reduced_initial(rc);
  const Trajectory tr =
      integrate_reduced(r0, rc.mass_distribution(), rc.effective_T(10.0), rc.integrator);
  write_trajectory(tr, rc, "reduce");
  return 0;
}

int cmd_project(const RunConfig& rc, const std::string& in) {
  if (in.empty()) throw ArgumentError("project needs --in with a full-space trajectory file");
  const Trajectory src = load_trajectory(in);
  if (src.reduced) throw ArgumentError("project expects a full-space trajectory, got a reduced one");
  const MassDistribution mm = rc.mass_distribution();
  Trajectory out;
  out.reduced = true;
  out.times = src.times;
  out.diagnostics = src.diagnostics;
  out.termination = src.termination;
  out.termination_detail = src.termination_detail;
  out.rstates.reserve(src.states.size());
  for (const PhaseState& s : src.states) out.rstates.push_back(project_state(s, mm));
  write_trajectory(out, rc, "project");
  return 0;
}

int cmd_compare(const RunConfig& rc) {
  const PhaseState s0 = full_initial(rc, "compare");
  const MassDistribution mm = rc.mass_distribution();
  const double T = rc.effective_T(10.0);
  IntegratorConfig cfg = rc.integrator;
  if (cfg.sample_dt <= 0.0) cfg.sample_dt = T / 2048.0;
  const Trajectory full = integrate(s0, mm, T, cfg);
  const Trajectory red = integrate_reduced(project_state(s0, mm), mm, T, cfg);
  const std::size_t n = std::min(full.size(), red.size());

  std::string csv = "t,dev,min_sep\n";
  double max_dev = 0.0, at_t = 0.0, min_sep_all = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const ShapeVector w_full = project(full.states[k].q, mm);
    const double dev = (w_full - red.rstates[k].w).norm();
    const double sep = pairwise_separations(full.states[k].q).minCoeff();
    csv += fmt17(full.times[k]);
    csv += ",";
    csv += fmt17(dev);
    csv += ",";
    csv += fmt17(sep);
    csv += "\n";
    if (dev > max_dev) {
      max_dev = dev;
      at_t = full.times[k];
    }
    min_sep_all = std::min(min_sep_all, sep);
  }

  const std::string csv_path = rc.out + ".csv";
  const std::string sum_path = rc.out + ".json";
  const Manifest man =
      make_manifest(rc, "compare", {csv_path, sum_path, rc.out + ".manifest.json"});
  json j;
  j["format"] = "threebody-compare";
  j["samples"] = n;
  j["max_dev"] = max_dev;
  j["max_dev_t"] = at_t;
  j["min_sep"] = min_sep_all;
  j["full_termination"] = termination_name(full.termination);
  j["reduced_termination"] = termination_name(red.termination);
  j["manifest"] = json::parse(json_manifest(man));
  write_text_atomic(csv_path, csv);
  write_text_atomic(sum_path, j.dump(1) + "\n");
  write_text_atomic(rc.out + ".manifest.json", json_manifest(man));
  std::cout << "samples: " << n << "  max deviation: " << fmt17(max_dev) << " at t = " << at_t
            << "\nwrote " << csv_path << "\n";
  return 0;
}

Trajectory source_trajectory(const RunConfig& rc, const std::string& in, double default_T) {
  if (!in.empty()) return load_trajectory(in);
  const MassDistribution mm = rc.mass_distribution();
  if (rc.reduced) return integrate_reduced(*rc.reduced, mm, rc.effective_T(default_T), rc.integrator);
  if (rc.full) return integrate(*rc.full, mm, rc.effective_T(default_T), rc.integrator);
  throw ArgumentError("need --in with a trajectory file, or an initial state (preset, q, or w)");
}

int cmd_syzygies(const RunConfig& rc, const std::string& in) {
  const Trajectory tr = source_trajectory(rc, in, 20.0);
  const SyzygyReport rep = detect_syzygies(tr, rc.mass_distribution());
  const std::string ev_path = rc.out + ".events.csv";
  const std::string js_path = rc.out + ".syzygies.json";
  const Manifest man =
      make_manifest(rc, "syzygies", {ev_path, js_path, rc.out + ".manifest.json"});
  write_text_atomic(ev_path, csv_syzygies(rep.events));
  write_text_atomic(js_path, json_syzygies(rep, &man));
  write_text_atomic(rc.out + ".manifest.json", json_manifest(man));
  std::cout << "syzygies: " << rep.count() << "  word: " << syzygy_sequence(rep.events);
  if (rep.identically_collinear) std::cout << "  (identically collinear)";
  std::cout << "\nwrote " << js_path << "\n";
  return 0;
}

int cmd_central_configs(const RunConfig& rc) {
  const MassDistribution mm = rc.mass_distribution();
  const auto ccs = five_central_configurations(mm);
  json list = json::array();
  std::cout << "kind            multiplier          residual\n";
  for (const CentralConfiguration& cc : ccs) {
    const double res = central_configuration_residual(cc.q0, mm);
    const ShapeVector w = project(cc.q0, mm);
    json e;
    e["kind"] = central_config_kind_name(cc.kind);
    e["q"] = {std::real(cc.q0[0]), std::imag(cc.q0[0]), std::real(cc.q0[1]),
              std::imag(cc.q0[1]), std::real(cc.q0[2]), std::imag(cc.q0[2])};
    e["multiplier"] = cc.multiplier;
    e["residual"] = res;
    e["shape"] = {w[0], w[1], w[2]};
    const ShapeVector wh = w.normalized();
    e["shape_unit"] = {wh[0], wh[1], wh[2]};
    list.push_back(std::move(e));
    std::printf("%-14s  %18.12g  %10.3g\n", central_config_kind_name(cc.kind), cc.multiplier,
                res);
  }
  const std::string path = rc.out + ".json";
  const Manifest man = make_manifest(rc, "central-configs", {path, rc.out + ".manifest.json"});
  json j;
  j["format"] = "threebody-central-configs";
  j["masses"] = {rc.masses[0], rc.masses[1], rc.masses[2]};
  j["configs"] = std::move(list);
  j["manifest"] = json::parse(json_manifest(man));
  write_text_atomic(path, j.dump(1) + "\n");
  write_text_atomic(rc.out + ".manifest.json", json_manifest(man));
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_kepler(const RunConfig& rc) {
  const double c = rc.kepler_c > 0.0 ? rc.kepler_c : rc.masses[0] + rc.masses[1];
  const KeplerOrbit orb = kepler_orbit(Complex{rc.kepler_r[0], rc.kepler_r[1]},
                                       Complex{rc.kepler_v[0], rc.kepler_v[1]}, c);
  double T = rc.T;
  if (T <= 0.0) T = orb.bounded() ? kepler_period(orb) : 10.0;
  const double dt = rc.integrator.sample_dt > 0.0 ? rc.integrator.sample_dt : T / 1000.0;
  std::string csv = "t,x,y,vx,vy\n";
  std::string termination = "time_reached";
  for (double t = 0.0; t <= T * (1.0 + 1e-12); t += dt) {
    KeplerSample s;
    try {
      s = kepler_state(orb, t);
    } catch (const CollisionError&) {
      termination = "collision";
      break;
    }
    csv += fmt17(t);
    for (double x : {std::real(s.lambda), std::imag(s.lambda), std::real(s.lambdadot),
                     std::imag(s.lambdadot)}) {
      csv += ",";
      csv += fmt17(x);
    }
    csv += "\n";
  }
  const std::string csv_path = rc.out + ".csv";
  const std::string js_path = rc.out + ".json";
  const Manifest man =
      make_manifest(rc, "kepler", {csv_path, js_path, rc.out + ".manifest.json"});
  json j;
  j["format"] = "threebody-kepler";
  j["c"] = orb.c;
  j["energy"] = orb.energy;
  j["angular_momentum"] = orb.angular_momentum;
  j["eccentricity"] = orb.eccentricity;
  j["bounded"] = orb.bounded();
  j["degenerate"] = orb.degenerate();
  if (orb.bounded()) {
    j["semi_major_axis"] = orb.semi_major_axis;
    j["period"] = kepler_period(orb);
  }
  if (orb.degenerate() && std::isfinite(orb.collision_time()))
    j["collision_time"] = orb.collision_time();
  j["termination"] = termination;
  j["manifest"] = json::parse(json_manifest(man));
  write_text_atomic(csv_path, csv);
  write_text_atomic(js_path, j.dump(1) + "\n");
  write_text_atomic(rc.out + ".manifest.json", json_manifest(man));
  std::cout << "energy: " << fmt17(orb.energy) << "  eccentricity: " << fmt17(orb.eccentricity)
            << "\nwrote " << csv_path << "\n";
  return 0;
}

int cmd_find_eight(const RunConfig& rc) {
  const MassDistribution mm = rc.mass_distribution();
  EightOptions eo;
  eo.N = rc.eight_N;
  eo.T = rc.arc_T;
  eo.grad_tol = rc.grad_tol;
  eo.shoot_tol = rc.shoot_tol;
  eo.seed = rc.seed;
  const FigureEight fe = find_figure_eight(mm, eo);

  IntegratorConfig cfg = rc.integrator;
  const Trajectory orbit = integrate(fe.orbit.state, mm, fe.orbit.period, cfg);
  const SyzygyReport rep = detect_syzygies(orbit, mm);

  const std::string arc_path = rc.out + ".arc.json";
  const std::string curve_path = rc.out + ".curve.json";
  const std::string orbit_path = rc.out + ".orbit" + traj_suffix(rc);
  const std::string sum_path = rc.out + ".eight.json";
  const Manifest man = make_manifest(
      rc, "find-eight", {arc_path, curve_path, orbit_path, sum_path, rc.out + ".manifest.json"});

  write_text_atomic(arc_path, json_discrete_path(fe.arc.path, &man));
  write_text_atomic(curve_path, json_discrete_path(fe.curve.path, &man));
  if (rc.format == "json")
    write_text_atomic(orbit_path, json_trajectory(orbit, &man));
  else
    write_text_atomic(orbit_path, csv_trajectory(orbit));

  json j;
  j["format"] = "threebody-eight";
  j["q"] = {std::real(fe.orbit.state.q[0]), std::imag(fe.orbit.state.q[0]),
            std::real(fe.orbit.state.q[1]), std::imag(fe.orbit.state.q[1]),
            std::real(fe.orbit.state.q[2]), std::imag(fe.orbit.state.q[2])};
  j["v"] = {std::real(fe.orbit.state.v[0]), std::imag(fe.orbit.state.v[0]),
            std::real(fe.orbit.state.v[1]), std::imag(fe.orbit.state.v[1]),
            std::real(fe.orbit.state.v[2]), std::imag(fe.orbit.state.v[2])};
  j["period"] = fe.orbit.period;
  j["shoot_residual"] = fe.orbit.residual;
  j["shoot_iterations"] = fe.orbit.iterations;
  j["action"] = fe.arc.action;
  j["arc_grad_norm"] = fe.arc.grad_norm;
  j["closure_error"] = fe.curve.closure_error;
  j["stationarity"] = fe.curve.stationarity;
  j["syzygy_word"] = syzygy_sequence(rep.events);
  j["syzygy_count"] = rep.count();
  j["manifest"] = json::parse(json_manifest(man));
  write_text_atomic(sum_path, j.dump(1) + "\n");
  write_text_atomic(rc.out + ".manifest.json", json_manifest(man));

  std::cout << "period = " << fmt17(fe.orbit.period) << "\n";
  std::cout << "q =";
  for (int i = 0; i < 3; ++i)
    std::cout << " " << fmt17(std::real(fe.orbit.state.q[i])) << " "
              << fmt17(std::imag(fe.orbit.state.q[i]));
  std::cout << "\nv =";
  for (int i = 0; i < 3; ++i)
    std::cout << " " << fmt17(std::real(fe.orbit.state.v[i])) << " "
              << fmt17(std::imag(fe.orbit.state.v[i]));
  std::cout << "\naction = " << fmt17(fe.arc.action)
            << "  closure = " << fmt17(fe.curve.closure_error)
            << "  residual = " << fmt17(fe.orbit.residual)
            << "\nsyzygy word: " << syzygy_sequence(rep.events) << "\nwrote " << sum_path << "\n";
  return 0;
}

int cmd_emit_sphere(const RunConfig& rc, const std::string& in) {
  const Trajectory tr = source_trajectory(rc, in, 20.0);
  const MassDistribution mm = rc.mass_distribution();
  std::string csv = "t,wh1,wh2,wh3\n";
  json pts = json::array(), ts = json::array();
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const ShapeVector w = tr.reduced ? tr.rstates[k].w : project(tr.states[k].q, mm);
    const double n = w.norm();
    if (n <= 0.0) continue;
    const ShapeVector wh = w / n;
    csv += fmt17(tr.times[k]);
    for (int i = 0; i < 3; ++i) {
      csv += ",";
      csv += fmt17(wh[i]);
    }
    csv += "\n";
    ts.push_back(tr.times[k]);
    pts.push_back({wh[0], wh[1], wh[2]});
  }
  const SpecialPoints sp = special_points(mm);
  const auto v3 = [](const ShapeVector& v) { return json{v[0], v[1], v[2]}; };
  json spj;
  spj["lagrange_plus"] = v3(sp.lagrange_plus);
  spj["lagrange_minus"] = v3(sp.lagrange_minus);
  spj["euler"] = {v3(sp.euler[0]), v3(sp.euler[1]), v3(sp.euler[2])};
  spj["binary"] = {v3(sp.binary[0]), v3(sp.binary[1]), v3(sp.binary[2])};
  spj["isosceles_normals"] = {v3(sp.isosc_plane_normals[0]), v3(sp.isosc_plane_normals[1]),
                              v3(sp.isosc_plane_normals[2])};

  const std::string csv_path = rc.out + ".sphere.csv";
  const std::string js_path = rc.out + ".sphere.json";
  const Manifest man =
      make_manifest(rc, "emit-sphere", {csv_path, js_path, rc.out + ".manifest.json"});
  json j;
  j["format"] = "threebody-sphere";
  j["t"] = std::move(ts);
  j["points"] = std::move(pts);
  j["special_points"] = std::move(spj);
  j["manifest"] = json::parse(json_manifest(man));
  write_text_atomic(csv_path, csv);
  write_text_atomic(js_path, j.dump(1) + "\n");
  write_text_atomic(rc.out + ".manifest.json", json_manifest(man));
  std::cout << "points: " << j["points"].size() << "\nwrote " << js_path << "\n";
  return 0;
}

void emit_error(const char* type, const std::string& message) {
  json j;
  j["error"]["type"] = type;
  j["error"]["message"] = message;
  std::cerr << j.dump() << "\n";
}

int guarded(const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const ArgumentError& e) {
    emit_error("argument", e.what());
    return 2;
  } catch (const UnsupportedError& e) {
    emit_error("unsupported", e.what());
    return 2;
  } catch (const CollisionError& e) {
    emit_error("collision", e.what());
    return 3;
  } catch (const SingularityError& e) {
    emit_error("singularity", e.what());
    return 3;
  } catch (const ConvergenceError& e) {
    emit_error("convergence", e.what());
    return 3;
  } catch (const IoError& e) {
    emit_error("io", e.what());
    return 4;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planar three-body dynamics and the shape-sphere reduction"};
  app.require_subcommand(1);
  Opts opt;

  CLI::App* simulate = app.add_subcommand("simulate", "integrate the full planar flow");
  add_common(simulate, opt);
  CLI::App* project_sub =
      app.add_subcommand("project", "map a full trajectory to shape coordinates");
  add_common(project_sub, opt);
  project_sub->add_option("--in", opt.in, "input trajectory file (.json or .csv)");
  CLI::App* reduce = app.add_subcommand("reduce", "integrate the reduced shape flow");
  add_common(reduce, opt);
  CLI::App* compare =
      app.add_subcommand("compare", "full-vs-reduced shape deviation along one run");
  add_common(compare, opt);
  CLI::App* syzygies = app.add_subcommand("syzygies", "detect collinear instants and the word");
  add_common(syzygies, opt);
  syzygies->add_option("--in", opt.in, "input trajectory file (.json or .csv)");
  CLI::App* central =
      app.add_subcommand("central-configs", "the five central configurations for given masses");
  add_common(central, opt);
  CLI::App* kepler = app.add_subcommand("kepler", "two-body propagation");
  add_common(kepler, opt);
  CLI::App* eight =
      app.add_subcommand("find-eight", "construct the figure-eight choreography from scratch");
  add_common(eight, opt);
  CLI::App* sphere =
      app.add_subcommand("emit-sphere", "unit-sphere shape curve plus special points");
  add_common(sphere, opt);
  sphere->add_option("--in", opt.in, "input trajectory file (.json or .csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  return guarded([&]() -> int {
    const RunConfig rc = build_config(opt);
    if (name == "simulate") return cmd_simulate(rc);
    if (name == "project") return cmd_project(rc, opt.in);
    if (name == "reduce") return cmd_reduce(rc);
    if (name == "compare") return cmd_compare(rc);
    if (name == "syzygies") return cmd_syzygies(rc, opt.in);
    if (name == "central-configs") return cmd_central_configs(rc);
    if (name == "kepler") return cmd_kepler(rc);
    if (name == "find-eight") return cmd_find_eight(rc);
    if (name == "emit-sphere") return cmd_emit_sphere(rc, opt.in);
    throw ArgumentError("unknown subcommand " + name);
  });
}

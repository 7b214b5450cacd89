#include "threebody/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "threebody/errors.hpp"
#include "threebody/presets.hpp"

namespace threebody {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::string_view s) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(s)));
  return buf;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path);
  std::ostringstream os;
  os << f.rdbuf();
  if (f.bad()) throw IoError("read failed: " + path);
  return os.str();
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp);
    f << content;
    f.flush();
    if (!f) throw IoError("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename " + tmp + " -> " + path + ": " + ec.message());
}

namespace {

Termination termination_from_name(const std::string& s) {
  for (Termination t : {Termination::TimeReached, Termination::Collision, Termination::Escape,
                        Termination::StepUnderflow, Termination::Singularity})
    if (s == termination_name(t)) return t;
  throw IoError("unknown termination '" + s + "'");
}

json manifest_object(const Manifest& man) {
  json j;
  j["tool_version"] = man.tool_version;
  j["config_hash"] = man.config_hash;
  j["subcommand"] = man.subcommand;
  j["outputs"] = man.outputs;
  j["canonical_config"] = man.canonical_config;
  return j;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_char(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ArgumentError(where + ": '" + s + "' is not a number");
  }
  if (pos != s.size()) throw ArgumentError(where + ": '" + s + "' is not a number");
  return x;
}

}  // namespace

std::string json_manifest(const Manifest& man) { return manifest_object(man).dump(1) + "\n"; }

RunConfig RunConfig::from_text(const std::string& text) {
  RunConfig rc;
  std::optional<Eigen::Matrix<double, 6, 1>> qv, vv;
  std::optional<Eigen::Vector3d> wv, wdv, mass_override;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ArgumentError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string rest = trim(line.substr(eq + 1));
    const std::vector<std::string> vals = split_ws(rest);
    auto need = [&](std::size_t n) {
      if (vals.size() != n)
        throw ArgumentError(where + ": key '" + key + "' expects " + std::to_string(n) +
                            " value(s)");
    };
    auto d1 = [&]() {
      need(1);
      return parse_double(vals[0], where);
    };
    auto dn = [&](int n) {
      need(static_cast<std::size_t>(n));
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) x[i] = parse_double(vals[i], where);
      return x;
    };

    if (key == "preset") {
      need(1);
      rc.preset = vals[0];
    } else if (key == "masses") {
      mass_override = Eigen::Vector3d(dn(3));
    } else if (key == "q") {
      qv = Eigen::Matrix<double, 6, 1>(dn(6));
    } else if (key == "v") {
      vv = Eigen::Matrix<double, 6, 1>(dn(6));
    } else if (key == "w") {
      wv = Eigen::Vector3d(dn(3));
    } else if (key == "wdot") {
      wdv = Eigen::Vector3d(dn(3));
    } else if (key == "T") {
      rc.T = d1();
      if (!(rc.T > 0.0)) throw ArgumentError(where + ": T must be positive");
    } else if (key == "method") {
      need(1);
      if (vals[0] == "dopri54")
        rc.integrator.method = Method::Dopri54;
      else if (vals[0] == "rk4")
        rc.integrator.method = Method::RK4Fixed;
      else
        throw ArgumentError(where + ": method must be dopri54 or rk4");
    } else if (key == "abs_tol") {
      rc.integrator.abs_tol = d1();
    } else if (key == "rel_tol") {
      rc.integrator.rel_tol = d1();
    } else if (key == "max_step") {
      rc.integrator.max_step = d1();
    } else if (key == "min_step") {
      rc.integrator.min_step = d1();
    } else if (key == "fixed_step") {
      rc.integrator.fixed_step = d1();
    } else if (key == "collision_radius") {
      rc.integrator.collision_radius = d1();
    } else if (key == "escape_factor") {
      rc.integrator.escape_factor = d1();
    } else if (key == "sample_dt") {
      rc.integrator.sample_dt = d1();
    } else if (key == "seed") {
      need(1);
      if (vals[0].find_first_not_of("0123456789") != std::string::npos)
        throw ArgumentError(where + ": seed must be a nonnegative integer");
      try {
        rc.seed = std::stoull(vals[0]);
      } catch (const std::exception&) {
        throw ArgumentError(where + ": seed must be a nonnegative integer");
      }
    } else if (key == "eight_N") {
      rc.eight_N = static_cast<int>(d1());
    } else if (key == "arc_T") {
      rc.arc_T = d1();
    } else if (key == "grad_tol") {
      rc.grad_tol = d1();
    } else if (key == "shoot_tol") {
      rc.shoot_tol = d1();
    } else if (key == "kepler_r") {
      rc.kepler_r = Eigen::Vector2d(dn(2));
    } else if (key == "kepler_v") {
      rc.kepler_v = Eigen::Vector2d(dn(2));
    } else if (key == "kepler_c") {
      rc.kepler_c = d1();
    } else if (key == "format") {
      need(1);
      if (vals[0] != "csv" && vals[0] != "json")
        throw ArgumentError(where + ": format must be csv or json");
      rc.format = vals[0];
    } else if (key == "out") {
      if (rest.empty()) throw ArgumentError(where + ": out needs a path");
      rc.out = rest;
    } else {
      throw ArgumentError(where + ": unknown config key '" + key + "'");
    }
  }

  if (!rc.preset.empty()) {
    const Preset& p = preset_by_name(rc.preset);
    rc.masses = p.masses;
    rc.full = p.state;
    rc.preset_T = p.default_T;
  }
  if (mass_override) rc.masses = *mass_override;
  if (qv && wv) throw ArgumentError("config: give q or w, not both");
  if (vv && !qv) throw ArgumentError("config: v needs q");
  if (wdv && !wv) throw ArgumentError("config: wdot needs w");
  if (qv) {
    PhaseState s;
    for (int i = 0; i < 3; ++i) {
      s.q[i] = Complex{(*qv)[2 * i], (*qv)[2 * i + 1]};
      s.v[i] = vv ? Complex{(*vv)[2 * i], (*vv)[2 * i + 1]} : Complex{0.0, 0.0};
    }
    rc.full = s;
    rc.reduced.reset();
  }
  if (wv) {
    rc.reduced = ReducedState{*wv, wdv ? *wdv : Eigen::Vector3d::Zero()};
    rc.full.reset();
  }
  rc.integrator.validate();
  return rc;
}

RunConfig RunConfig::from_file(const std::string& path) {
  return from_text(read_file(path));
}

MassDistribution RunConfig::mass_distribution() const {
  return MassDistribution::make(masses[0], masses[1], masses[2]);
}

double RunConfig::effective_T(double fallback) const {
  if (T > 0.0) return T;
  if (preset_T > 0.0) return preset_T;
  return fallback;
}

std::string RunConfig::canonical_text() const {
  std::ostringstream os;
  os << "preset = " << (preset.empty() ? "-" : preset) << "\n";
  os << "masses = " << fmt17(masses[0]) << " " << fmt17(masses[1]) << " " << fmt17(masses[2])
     << "\n";
  if (full) {
    os << "q =";
    for (int i = 0; i < 3; ++i)
      os << " " << fmt17(std::real(full->q[i])) << " " << fmt17(std::imag(full->q[i]));
    os << "\nv =";
    for (int i = 0; i < 3; ++i)
      os << " " << fmt17(std::real(full->v[i])) << " " << fmt17(std::imag(full->v[i]));
    os << "\n";
  } else if (reduced) {
    os << "w = " << fmt17(reduced->w[0]) << " " << fmt17(reduced->w[1]) << " "
       << fmt17(reduced->w[2]) << "\n";
    os << "wdot = " << fmt17(reduced->wdot[0]) << " " << fmt17(reduced->wdot[1]) << " "
       << fmt17(reduced->wdot[2]) << "\n";
  } else {
    os << "state = -\n";
  }
  os << "T = " << fmt17(T) << "\n";
  os << "preset_T = " << fmt17(preset_T) << "\n";
  os << "method = " << (integrator.method == Method::Dopri54 ? "dopri54" : "rk4") << "\n";
  os << "abs_tol = " << fmt17(integrator.abs_tol) << "\n";
  os << "rel_tol = " << fmt17(integrator.rel_tol) << "\n";
  os << "max_step = " << fmt17(integrator.max_step) << "\n";
  os << "min_step = " << fmt17(integrator.min_step) << "\n";
  os << "fixed_step = " << fmt17(integrator.fixed_step) << "\n";
  os << "collision_radius = " << fmt17(integrator.collision_radius) << "\n";
  os << "escape_factor = " << fmt17(integrator.escape_factor) << "\n";
  os << "sample_dt = " << fmt17(integrator.sample_dt) << "\n";
  os << "seed = " << seed << "\n";
  os << "eight_N = " << eight_N << "\n";
  os << "arc_T = " << fmt17(arc_T) << "\n";
  os << "grad_tol = " << fmt17(grad_tol) << "\n";
  os << "shoot_tol = " << fmt17(shoot_tol) << "\n";
  os << "kepler_r = " << fmt17(kepler_r[0]) << " " << fmt17(kepler_r[1]) << "\n";
  os << "kepler_v = " << fmt17(kepler_v[0]) << " " << fmt17(kepler_v[1]) << "\n";
  os << "kepler_c = " << fmt17(kepler_c) << "\n";
  os << "format = " << format << "\n";
  os << "out = " << (out.empty() ? "-" : out) << "\n";
  return os.str();
}

std::string RunConfig::config_hash() const { return hash_hex(canonical_text()); }

namespace {
constexpr const char* kFullHeader = "t,x1,y1,x2,y2,x3,y3,H,J,Px,Py,I";
constexpr const char* kReducedHeader = "t,w1,w2,w3,H,J,Px,Py,I";
}  // namespace

std::string csv_trajectory(const Trajectory& traj) {
  std::string s = traj.reduced ? kReducedHeader : kFullHeader;
  s += "\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    s += fmt17(traj.times[k]);
    if (traj.reduced) {
      const ShapeVector& w = traj.rstates[k].w;
      for (int i = 0; i < 3; ++i) {
        s += ",";
        s += fmt17(w[i]);
      }
    } else {
      const Config& q = traj.states[k].q;
      for (int i = 0; i < 3; ++i) {
        s += ",";
        s += fmt17(std::real(q[i]));
        s += ",";
        s += fmt17(std::imag(q[i]));
      }
    }
    const SampleDiagnostics& d = traj.diagnostics[k];
    for (double x : {d.H, d.J, std::real(d.P), std::imag(d.P), d.I}) {
      s += ",";
      s += fmt17(x);
    }
    s += "\n";
  }
  return s;
}

Trajectory trajectory_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header)) throw IoError("csv: empty input");
  header = trim(header);
  Trajectory t;
  if (header == kFullHeader)
    t.reduced = false;
  else if (header == kReducedHeader)
    t.reduced = true;
  else
    throw IoError("csv: unrecognized header '" + header + "'");
  const std::size_t ncol = t.reduced ? 9 : 12;
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_char(line, ',');
    if (cells.size() != ncol)
      throw IoError("csv line " + std::to_string(lineno) + ": expected " +
                    std::to_string(ncol) + " cells, got " + std::to_string(cells.size()));
    std::vector<double> x(ncol);
    try {
      for (std::size_t i = 0; i < ncol; ++i)
        x[i] = parse_double(cells[i], "csv line " + std::to_string(lineno));
    } catch (const ArgumentError& e) {
      throw IoError(e.what());
    }
    t.times.push_back(x[0]);
    std::size_t at = 1;
    if (t.reduced) {
      ReducedState rs;
      rs.w = ShapeVector(x[1], x[2], x[3]);
      rs.wdot.setZero();
      t.rstates.push_back(rs);
      at = 4;
    } else {
      PhaseState s;
      for (int i = 0; i < 3; ++i) {
        s.q[i] = Complex{x[1 + 2 * i], x[2 + 2 * i]};
        s.v[i] = Complex{0.0, 0.0};
      }
      t.states.push_back(s);
      at = 7;
    }
    SampleDiagnostics d;
    d.H = x[at];
    d.J = x[at + 1];
    d.P = Complex{x[at + 2], x[at + 3]};
    d.I = x[at + 4];
    t.diagnostics.push_back(d);
  }
  t.termination = Termination::TimeReached;
  return t;
}

std::string json_trajectory(const Trajectory& traj, const Manifest* man) {
  json j;
  j["format"] = "threebody-trajectory";
  j["reduced"] = traj.reduced;
  j["termination"] = termination_name(traj.termination);
  j["termination_detail"] = traj.termination_detail;
  j["times"] = traj.times;
  if (traj.reduced) {
    json w = json::array(), wd = json::array();
    for (const ReducedState& rs : traj.rstates) {
      w.push_back({rs.w[0], rs.w[1], rs.w[2]});
      wd.push_back({rs.wdot[0], rs.wdot[1], rs.wdot[2]});
    }
    j["w"] = std::move(w);
    j["wdot"] = std::move(wd);
  } else {
    json q = json::array(), v = json::array();
    for (const PhaseState& s : traj.states) {
      q.push_back({std::real(s.q[0]), std::imag(s.q[0]), std::real(s.q[1]), std::imag(s.q[1]),
                   std::real(s.q[2]), std::imag(s.q[2])});
      v.push_back({std::real(s.v[0]), std::imag(s.v[0]), std::real(s.v[1]), std::imag(s.v[1]),
                   std::real(s.v[2]), std::imag(s.v[2])});
    }
    j["q"] = std::move(q);
    j["v"] = std::move(v);
  }
  json H = json::array(), J = json::array(), Px = json::array(), Py = json::array(),
       I = json::array();
  for (const SampleDiagnostics& d : traj.diagnostics) {
    H.push_back(d.H);
    J.push_back(d.J);
    Px.push_back(std::real(d.P));
    Py.push_back(std::imag(d.P));
    I.push_back(d.I);
  }
  j["H"] = std::move(H);
  j["J"] = std::move(J);
  j["Px"] = std::move(Px);
  j["Py"] = std::move(Py);
  j["I"] = std::move(I);
  if (man) j["manifest"] = manifest_object(*man);
  return j.dump(1) + "\n";
}

Trajectory trajectory_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw IoError(std::string("json parse: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "threebody-trajectory")
      throw IoError("json: not a trajectory file");
    Trajectory t;
    t.reduced = j.at("reduced").get<bool>();
    t.termination = termination_from_name(j.at("termination").get<std::string>());
    t.termination_detail = j.at("termination_detail").get<std::string>();
    t.times = j.at("times").get<std::vector<double>>();
    const std::size_t n = t.times.size();
    if (t.reduced) {
      const json& w = j.at("w");
      const json& wd = j.at("wdot");
      if (w.size() != n || wd.size() != n) throw IoError("json: state array size mismatch");
      for (std::size_t k = 0; k < n; ++k) {
        ReducedState rs;
        for (int i = 0; i < 3; ++i) {
          rs.w[i] = w[k].at(i).get<double>();
          rs.wdot[i] = wd[k].at(i).get<double>();
        }
        t.rstates.push_back(rs);
      }
    } else {
      const json& q = j.at("q");
      const json& v = j.at("v");
      if (q.size() != n || v.size() != n) throw IoError("json: state array size mismatch");
      for (std::size_t k = 0; k < n; ++k) {
        PhaseState s;
        for (int i = 0; i < 3; ++i) {
          s.q[i] = Complex{q[k].at(2 * i).get<double>(), q[k].at(2 * i + 1).get<double>()};
          s.v[i] = Complex{v[k].at(2 * i).get<double>(), v[k].at(2 * i + 1).get<double>()};
        }
        t.states.push_back(s);
      }
    }
    const auto darr = [&](const char* key) {
      const std::vector<double> x = j.at(key).get<std::vector<double>>();
      if (x.size() != n) throw IoError("json: diagnostics size mismatch");
      return x;
    };
    const auto H = darr("H"), J = darr("J"), Px = darr("Px"), Py = darr("Py"), I = darr("I");
    for (std::size_t k = 0; k < n; ++k)
      t.diagnostics.push_back({H[k], J[k], Complex{Px[k], Py[k]}, I[k]});
    return t;
  } catch (const json::exception& e) {
    throw IoError(std::string("json: ") + e.what());
  }
}

std::string json_discrete_path(const DiscretePath& path, const Manifest* man) {
  json j;
  j["format"] = "threebody-path";
  j["T"] = path.T;
  json nodes = json::array();
  for (int k = 0; k < path.nodes.cols(); ++k)
    nodes.push_back({path.nodes(0, k), path.nodes(1, k), path.nodes(2, k)});
  j["nodes"] = std::move(nodes);
  if (man) j["manifest"] = manifest_object(*man);
  return j.dump(1) + "\n";
}

DiscretePath discrete_path_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw IoError(std::string("json parse: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "threebody-path")
      throw IoError("json: not a path file");
    DiscretePath p;
    p.T = j.at("T").get<double>();
    const json& nodes = j.at("nodes");
    p.nodes.resize(3, static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t k = 0; k < nodes.size(); ++k)
      for (int i = 0; i < 3; ++i) p.nodes(i, static_cast<Eigen::Index>(k)) = nodes[k].at(i).get<double>();
    return p;
  } catch (const json::exception& e) {
    throw IoError(std::string("json: ") + e.what());
  }
}

std::string csv_syzygies(const std::vector<SyzygyEvent>& events) {
  std::string s = "t,w1,w2,w3,middle,grazing,collision_graze\n";
  for (const SyzygyEvent& e : events) {
    s += fmt17(e.t);
    for (int i = 0; i < 3; ++i) {
      s += ",";
      s += fmt17(e.w[i]);
    }
    s += "," + std::to_string(e.middle);
    s += e.grazing ? ",1" : ",0";
    s += e.collision_graze ? ",1" : ",0";
    s += "\n";
  }
  return s;
}

std::string json_syzygies(const SyzygyReport& report, const Manifest* man) {
  json j;
  j["format"] = "threebody-syzygies";
  j["identically_collinear"] = report.identically_collinear;
  j["count"] = report.count();
  j["word"] = syzygy_sequence(report.events);
  json ev = json::array();
  for (const SyzygyEvent& e : report.events) {
    json je;
    je["t"] = e.t;
    je["w"] = {e.w[0], e.w[1], e.w[2]};
    je["middle"] = e.middle;
    je["grazing"] = e.grazing;
    je["collision_graze"] = e.collision_graze;
    ev.push_back(std::move(je));
  }
  j["events"] = std::move(ev);
  if (man) j["manifest"] = manifest_object(*man);
  return j.dump(1) + "\n";
}

}  // namespace threebody

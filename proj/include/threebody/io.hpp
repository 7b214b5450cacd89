#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "threebody/syzygy.hpp"
#include "threebody/types.hpp"

namespace threebody {

inline constexpr const char* kToolVersion = "0.1.0";

std::uint64_t fnv1a64(std::string_view s);
std::string hash_hex(std::string_view s);  ///< 16 hex digits of fnv1a64

std::string fmt17(double x);  ///< %.17g, lossless double round trip

/// Whole-file helpers. Writes go to "<path>.tmp" then rename, so a crashed
/// run never leaves a half-written file behind. Both throw IoError with the
/// path in the message.
std::string read_file(const std::string& path);
void write_text_atomic(const std::string& path, const std::string& content);

struct Manifest {
  std::string tool_version;
  std::string config_hash;
  std::string canonical_config;
  std::string subcommand;
  std::vector<std::string> outputs;
};

std::string json_manifest(const Manifest& man);

/// Parsed key = value run configuration. Unknown keys are rejected. A preset
/// expands to its documented masses and state; explicit masses/q/v/w/wdot
/// keys override the expansion.
struct RunConfig {
  std::string preset;
  Eigen::Vector3d masses = Eigen::Vector3d::Ones();
  std::optional<PhaseState> full;
  std::optional<ReducedState> reduced;
  double T = 0.0;  ///< 0 = unset; effective_T applies preset default or fallback
  double preset_T = 0.0;
  IntegratorConfig integrator;
  std::uint64_t seed = 0;
  int eight_N = 512;
  double arc_T = 1.0;
  double grad_tol = 1e-10;
  double shoot_tol = 1e-10;
  Eigen::Vector2d kepler_r{1.0, 0.0};
  Eigen::Vector2d kepler_v{0.0, 1.0};
  double kepler_c = 0.0;  ///< 0 = use m1 + m2
  std::string format = "csv";
  std::string out;

  static RunConfig from_text(const std::string& text);
  static RunConfig from_file(const std::string& path);

  MassDistribution mass_distribution() const;
  double effective_T(double fallback) const;

  /// The effective configuration in a fixed key order with 17-digit numbers;
  /// what the config hash is taken over and what the manifest embeds.
  std::string canonical_text() const;
  std::string config_hash() const;
};

/// CSV schema: header row, then one sample per row.
/// full:    t,x1,y1,x2,y2,x3,y3,H,J,Px,Py,I
/// reduced: t,w1,w2,w3,H,J,Px,Py,I
/// Velocities are not part of the CSV schema; the JSON format carries them.
std::string csv_trajectory(const Trajectory& traj);

/// Reads the schema above back. Velocities come back zero and the
/// termination is TimeReached; CSV is the plotting format, not an archival
/// one. Throws IoError on malformed content.
Trajectory trajectory_from_csv(const std::string& text);

/// Full-fidelity JSON: times, states including velocities, diagnostics,
/// termination, plus the manifest when given. Round-trips bit-exact.
std::string json_trajectory(const Trajectory& traj, const Manifest* man = nullptr);
Trajectory trajectory_from_json(const std::string& text);

std::string json_discrete_path(const DiscretePath& path, const Manifest* man = nullptr);
DiscretePath discrete_path_from_json(const std::string& text);

std::string csv_syzygies(const std::vector<SyzygyEvent>& events);
std::string json_syzygies(const SyzygyReport& report, const Manifest* man = nullptr);

}  // namespace threebody

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "threebody/core_model.hpp"
#include "threebody/integrator.hpp"
#include "threebody/io.hpp"
#include "threebody/presets.hpp"
#include "threebody/reduced_dynamics.hpp"
#include "threebody/shape_projection.hpp"
#include "threebody/solutions.hpp"
#include "threebody/syzygy.hpp"
#include "test_support.hpp"

using namespace threebody;

namespace {
const MassDistribution kEqual = MassDistribution::make(1.0, 1.0, 1.0);
}

TEST_CASE("no false syzygies on the rigid equilateral rotation") {
  const LagrangeCircular lc = lagrange_circular_orbit(kEqual);
  IntegratorConfig cfg;
  const Trajectory traj = integrate(lc.initial_state(), kEqual, lc.period, cfg);
  const SyzygyReport rep = detect_syzygies(traj, kEqual);
  CHECK(rep.count() == 0);
  CHECK(rep.events.empty());
  CHECK_FALSE(rep.identically_collinear);
}

TEST_CASE("collinear free fall is identically collinear") {
  const Config q{Complex{0, 0}, Complex{-1, 0}, Complex{1, 0}};
  IntegratorConfig cfg;
  const Trajectory traj = integrate({q, Config::Zero()}, kEqual, 10.0, cfg);
  const SyzygyReport rep = detect_syzygies(traj, kEqual);
  CHECK(rep.identically_collinear);
  CHECK(rep.count() == 0);
  CHECK(syzygy_sequence(rep.events).empty());
}

TEST_CASE("isosceles free fall passes through a type 3 syzygy first") {
  // Bodies 1 and 2 level on the x axis, body 3 above their midpoint. The
  // reflection symmetry is preserved, so the first collinear instant is body
  // 3 crossing the line of 1 and 2.
  const Config q{Complex{-1, 0}, Complex{1, 0}, Complex{0, 1}};
  IntegratorConfig cfg;
  const Trajectory traj = integrate({q, Config::Zero()}, kEqual, 3.0, cfg);
  const SyzygyReport rep = detect_syzygies(traj, kEqual);
  REQUIRE(rep.count() >= 1);
  const SyzygyEvent& first = rep.events.front();
  CHECK_FALSE(first.grazing);
  CHECK(first.middle == 3);
  CHECK(std::abs(first.w[2]) < 1e-8 * first.w.norm());
  // At the crossing, body 3 sits between 1 and 2.
  const PhaseState s = state_at(traj, first.t);
  CHECK(std::real(std::conj(s.q[0] - s.q[2]) * (s.q[1] - s.q[2])) < 0.0);
}

TEST_CASE("free fall events are collinear with a verified middle body") {
  const Config q{Complex{-1.0, -4.0 / 3.0}, Complex{2.0, -4.0 / 3.0},
                 Complex{-1.0, 8.0 / 3.0}};
  IntegratorConfig cfg;
  const Trajectory traj = integrate({q, Config::Zero()}, kEqual, 10.0, cfg);
  const SyzygyReport rep = detect_syzygies(traj, kEqual);
  REQUIRE(rep.count() >= 1);
  std::string word;
  for (const SyzygyEvent& e : rep.events) {
    if (e.grazing || e.collision_graze) continue;
    word.push_back(static_cast<char>('0' + e.middle));
    CHECK(std::abs(e.w[2]) < 1e-8 * e.w.norm());
    const PhaseState s = state_at(traj, e.t);
    const int m = e.middle - 1;
    const int i = (m + 1) % 3, j = (m + 2) % 3;
    // Betweenness of the middle body on the collinear configuration.
    CHECK(std::real(std::conj(s.q[i] - s.q[m]) * (s.q[j] - s.q[m])) < 0.0);
    // Degenerate triangle: the outer separation is the sum of the other two.
    const Eigen::Vector3d r = pairwise_separations(s.q);
    const double outer = std::abs(s.q[i] - s.q[j]);
    const double sum = r[pair_index(pair_of(i, m))] + r[pair_index(pair_of(m, j))];
    CHECK(std::abs(outer - sum) < 1e-8 * outer);
  }
  CHECK(syzygy_sequence(rep.events) == word);
  CHECK(static_cast<int>(word.size()) == rep.count());
}

TEST_CASE("full and reduced detection agree on the first event") {
  const Config q{Complex{-1, 0}, Complex{1, 0}, Complex{0, 1}};
  const PhaseState s0{q, Config::Zero()};
  IntegratorConfig cfg;
  cfg.abs_tol = 1e-12;
  cfg.rel_tol = 1e-12;
  const Trajectory full = integrate(s0, kEqual, 3.0, cfg);
  const Trajectory red = integrate_reduced(project_state(s0, kEqual), kEqual, 3.0, cfg);
  const SyzygyReport rf = detect_syzygies(full, kEqual);
  const SyzygyReport rr = detect_syzygies(red, kEqual);
  REQUIRE(rf.count() >= 1);
  REQUIRE(rr.count() >= 1);
  CHECK(rf.events.front().middle == rr.events.front().middle);
  CHECK(std::abs(rf.events.front().t - rr.events.front().t) < 1e-6);
}

TEST_CASE("crossings on a binary ray are excluded as collision grazes") {
  // Hand-built reduced trajectory: w = (-1, 0, w3) with w3 crossing zero, so
  // the collinear instant is exactly the 1-2 collision shape.
  Trajectory traj;
  traj.reduced = true;
  traj.times = {0.0, 1.0};
  traj.rstates = {{ShapeVector{-1, 0, -5e-4}, Eigen::Vector3d{0, 0, 1e-3}},
                  {ShapeVector{-1, 0, 5e-4}, Eigen::Vector3d{0, 0, 1e-3}}};
  traj.diagnostics.resize(2);
  DenseSegment seg;
  seg.t0 = 0.0;
  seg.h = 1.0;
  // Interpolant basis r0 + theta (r1 + (1 - theta)(r2 + theta r3)); linear
  // motion needs only the first two coefficients, the rest stay zero.
  Eigen::VectorXd c0(6), c1(6);
  c0 << -1.0, 0.0, -5e-4, 0.0, 0.0, 1e-3;
  c1 << 0.0, 0.0, 1e-3, 0.0, 0.0, 0.0;
  seg.r = {c0, c1, Eigen::VectorXd::Zero(6), Eigen::VectorXd::Zero(6)};
  traj.dense = {seg};
  const SyzygyReport rep = detect_syzygies(traj, kEqual);
  REQUIRE(rep.events.size() == 1);
  CHECK(rep.events.front().collision_graze);
  CHECK(rep.events.front().middle == 0);
  CHECK(rep.count() == 0);
  CHECK(syzygy_sequence(rep.events).empty());
}

TEST_CASE("sampled detection matches dense detection after a round trip") {
  // A deserialized trajectory has no dense segments, so detection has to
  // work from the samples alone. One figure-eight period gives six clean
  // transversal crossings to compare against.
  const Preset& eight = preset_by_name("figure-eight");
  IntegratorConfig cfg;
  const Trajectory traj = integrate(eight.state, kEqual, eight.default_T, cfg);

  const SyzygyReport dense = detect_syzygies(traj, kEqual);
  REQUIRE(dense.count() == 6);
  REQUIRE(syzygy_sequence(dense.events) == "132132");

  // JSON keeps velocities; the fallback interpolates with Hermite cubics.
  const Trajectory from_json = trajectory_from_json(json_trajectory(traj));
  REQUIRE(from_json.dense.empty());
  const SyzygyReport hermite = detect_syzygies(from_json, kEqual);
  REQUIRE(hermite.count() == 6);
  CHECK(syzygy_sequence(hermite.events) == "132132");
  for (int k = 0; k < 6; ++k)
    CHECK(std::abs(hermite.events[k].t - dense.events[k].t) < 1e-7);

  // CSV drops velocities; linear interpolation is coarser but must still
  // find every crossing.
  const Trajectory from_csv = trajectory_from_csv(csv_trajectory(traj));
  const SyzygyReport linear = detect_syzygies(from_csv, kEqual);
  REQUIRE(linear.count() == 6);
  CHECK(syzygy_sequence(linear.events) == "132132");
  for (int k = 0; k < 6; ++k)
    CHECK(std::abs(linear.events[k].t - dense.events[k].t) < 1e-4);
}

TEST_CASE("sampled detection needs at least two samples") {
  Trajectory traj;
  traj.reduced = true;
  traj.times = {0.0};
  traj.rstates = {ReducedState{ShapeVector{0.0, 0.0, 1.0}, ShapeVector::Zero()}};
  const Observable w3 = [](double, const Eigen::VectorXd& y) { return y[2]; };
  CHECK(detect_events_sampled(traj, w3).empty());
}

TEST_CASE("hypothesis check") {
  const Config q{Complex{-1, 0}, Complex{1, 0}, Complex{0, 1}};
  const TheoremHypotheses free_fall = hypothesis_check({q, Config::Zero()}, kEqual);
  CHECK(free_fall.negative_energy);
  CHECK(free_fall.zero_angular_momentum);
  CHECK(free_fall.applies);

  const LagrangeCircular lc = lagrange_circular_orbit(kEqual);
  const TheoremHypotheses rotating = hypothesis_check(lc.initial_state(), kEqual);
  CHECK(rotating.negative_energy);
  CHECK_FALSE(rotating.zero_angular_momentum);
  CHECK_FALSE(rotating.applies);

  Config v = Config::Zero();
  v[2] = Complex{0, 5};
  const TheoremHypotheses fast = hypothesis_check({q, v}, kEqual);
  CHECK_FALSE(fast.negative_energy);
}

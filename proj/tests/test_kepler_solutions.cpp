#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "threebody/core_model.hpp"
#include "threebody/errors.hpp"
#include "threebody/shape_geometry.hpp"
#include "threebody/shape_projection.hpp"
#include "threebody/solutions.hpp"
#include "test_support.hpp"

using namespace threebody;
using tb_test::Rng;

namespace {
const MassDistribution kEqual = MassDistribution::make(1.0, 1.0, 1.0);
const double kPi = std::numbers::pi;

double orbit_energy(const KeplerSample& s, double c) {
  return 0.5 * std::norm(s.lambdadot) - c / std::abs(s.lambda);
}

double orbit_momentum(const KeplerSample& s) {
  return std::imag(std::conj(s.lambda) * s.lambdadot);
}
}  // namespace

TEST_CASE("circular kepler orbit") {
  const KeplerOrbit orb = kepler_orbit({1, 0}, {0, 1}, 1.0);
  CHECK(orb.energy == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(orb.angular_momentum == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(orb.eccentricity < 1e-13);
  CHECK(orb.semi_major_axis == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(kepler_period(orb) == doctest::Approx(2 * kPi).epsilon(1e-13));
  for (double t : {0.3, 1.7, 4.0, 2 * kPi}) {
    const KeplerSample s = kepler_state(orb, t);
    CHECK(std::abs(s.lambda - Complex{std::cos(t), std::sin(t)}) < 1e-12);
    CHECK(std::abs(s.lambdadot - Complex{-std::sin(t), std::cos(t)}) < 1e-12);
  }
}

TEST_CASE("elliptic orbit elements and closure") {
  const KeplerOrbit orb = kepler_orbit({1, 0}, {0, 1.2}, 1.0);
  CHECK(orb.energy == doctest::Approx(-0.28).epsilon(1e-14));
  CHECK(orb.eccentricity == doctest::Approx(0.44).epsilon(1e-13));
  CHECK(orb.semi_major_axis == doctest::Approx(25.0 / 14.0).epsilon(1e-13));
  CHECK(std::abs(orb.orientation) < 1e-12);
  const double P = kepler_period(orb);
  CHECK(P == doctest::Approx(2 * kPi * std::pow(25.0 / 14.0, 1.5)).epsilon(1e-13));
  for (int k = 1; k <= 8; ++k) {
    const KeplerSample s = kepler_state(orb, P * k / 8.0);
    CHECK(orbit_energy(s, 1.0) == doctest::Approx(orb.energy).epsilon(1e-12));
    CHECK(orbit_momentum(s) == doctest::Approx(orb.angular_momentum).epsilon(1e-12));
  }
  const KeplerSample back = kepler_state(orb, P);
  CHECK(std::abs(back.lambda - Complex{1, 0}) < 1e-10);
  CHECK(std::abs(back.lambdadot - Complex{0, 1.2}) < 1e-10);
}

TEST_CASE("hyperbolic and parabolic propagation") {
  SUBCASE("hyperbolic") {
    const KeplerOrbit orb = kepler_orbit({1, 0}, {0, 1.5}, 1.0);
    CHECK(orb.energy == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(orb.eccentricity == doctest::Approx(1.25).epsilon(1e-13));
    CHECK_FALSE(orb.bounded());
    double last_r = 1.0;
    for (double t : {1.0, 3.0, 9.0, 27.0}) {
      const KeplerSample s = kepler_state(orb, t);
      CHECK(orbit_energy(s, 1.0) == doctest::Approx(orb.energy).epsilon(1e-11));
      CHECK(orbit_momentum(s) == doctest::Approx(orb.angular_momentum).epsilon(1e-11));
      CHECK(std::abs(s.lambda) > last_r);
      last_r = std::abs(s.lambda);
    }
  }
  SUBCASE("parabolic") {
    const KeplerOrbit orb = kepler_orbit({1, 0}, {0, std::sqrt(2.0)}, 1.0);
    CHECK(std::abs(orb.energy) < 1e-14);
    CHECK(orb.eccentricity == doctest::Approx(1.0).epsilon(1e-12));
    for (double t : {0.5, 2.0, 10.0}) {
      const KeplerSample s = kepler_state(orb, t);
      CHECK(std::abs(orbit_energy(s, 1.0)) < 1e-11);
      CHECK(orbit_momentum(s) == doctest::Approx(orb.angular_momentum).epsilon(1e-11));
    }
  }
}

TEST_CASE("rectilinear orbits and collision times") {
  SUBCASE("fall from rest") {
    const KeplerOrbit orb = kepler_orbit({1, 0}, {0, 0}, 1.0);
    CHECK(orb.degenerate());
    CHECK(orb.energy == doctest::Approx(-1.0).epsilon(1e-14));
    // Fall time from rest at r0 = 1 with c = 1.
    const double tc = kPi / (2.0 * std::sqrt(2.0));
    CHECK(orb.collision_time() == doctest::Approx(tc).epsilon(1e-10));
    const KeplerSample s = kepler_state(orb, 0.8 * tc);
    CHECK(std::abs(std::imag(s.lambda)) < 1e-12);
    CHECK(std::real(s.lambda) > 0.0);
    CHECK(std::real(s.lambda) < 1.0);
    CHECK(orbit_energy(s, 1.0) == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK_THROWS_AS(kepler_state(orb, 1.01 * tc), CollisionError);
  }
  SUBCASE("thrown outward, bounded") {
    const KeplerOrbit orb = kepler_orbit({1, 0}, {0.5, 0}, 1.0);
    CHECK(orb.degenerate());
    CHECK(orb.bounded());
    const double tc = orb.collision_time();
    CHECK(std::isfinite(tc));
    CHECK(tc > 0.0);
    // Rises first, collides after coming back down.
    const KeplerSample up = kepler_state(orb, 0.1);
    CHECK(std::real(up.lambda) > 1.0);
    CHECK_THROWS_AS(kepler_state(orb, tc * 1.001), CollisionError);
  }
  SUBCASE("thrown outward, unbounded, never collides") {
    const KeplerOrbit orb = kepler_orbit({1, 0}, {2.0, 0}, 1.0);
    CHECK(orb.degenerate());
    CHECK_FALSE(orb.bounded());
    CHECK(std::isinf(orb.collision_time()));
    const KeplerSample s = kepler_state(orb, 50.0);
    CHECK(std::real(s.lambda) > 50.0);
  }
  CHECK_THROWS_AS(kepler_orbit({0, 0}, {1, 0}, 1.0), ArgumentError);
}

TEST_CASE("kepler_solve matches the sampled state") {
  const Complex l0{0.8, 0.3}, v0{-0.2, 1.1};
  for (double t : {0.4, 2.2}) {
    const KeplerSample s = kepler_state(kepler_orbit(l0, v0, 1.3), t);
    CHECK(std::abs(kepler_solve(l0, v0, 1.3, t) - s.lambda) < 1e-13);
  }
}

TEST_CASE("lagrange configurations are central for any masses") {
  Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const MassDistribution mm = rng.masses();
    for (bool pos : {true, false}) {
      const CentralConfiguration cc = lagrange_config(mm, pos);
      CHECK(central_configuration_residual(cc.q0, mm) < 1e-12);
      CHECK(moment_of_inertia(cc.q0, mm) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(center_of_mass(cc.q0, mm)) < 1e-12);
      CHECK(cc.multiplier == doctest::Approx(potential_U(cc.q0, mm)).epsilon(1e-12));
      // Equilateral.
      const Eigen::Vector3d r = pairwise_separations(cc.q0);
      CHECK(r.maxCoeff() - r.minCoeff() < 1e-12);
      const SignedAreaCheck chk = signed_area_check(cc.q0, mm);
      CHECK((chk.w3 > 0) == pos);
    }
  }
}

TEST_CASE("euler configurations for three mass triples") {
  const double triples[3][3] = {{1, 1, 1}, {1, 2, 3}, {2, 1, 1}};
  for (const double* t : triples) {
    const MassDistribution mm = MassDistribution::make(t[0], t[1], t[2]);
    const auto eulers = find_euler_configs(mm);
    for (int k = 0; k < 3; ++k) {
      const CentralConfiguration& cc = eulers[k];
      CHECK(central_configuration_residual(cc.q0, mm) < 1e-12);
      CHECK(moment_of_inertia(cc.q0, mm) == doctest::Approx(1.0).epsilon(1e-12));
      // Collinear with body k strictly between the other two.
      const ShapeVector w = project(cc.q0, mm);
      CHECK(std::abs(w[2]) < 1e-12 * w.norm());
      const int i = (k + 1) % 3, j = (k + 2) % 3;
      const Complex di = cc.q0[i] - cc.q0[k];
      const Complex dj = cc.q0[j] - cc.q0[k];
      CHECK(std::real(std::conj(di) * dj) < 0.0);
    }
  }
}

TEST_CASE("equal mass euler shapes are antipodal to the binary rays") {
  const auto eulers = find_euler_configs(kEqual);
  for (int k = 0; k < 3; ++k) {
    const ShapeVector wh = project(eulers[k].q0, kEqual).normalized();
    const Pair outer = pair_of((k + 1) % 3, (k + 2) % 3);
    const ShapeVector b = binary_ray(outer, kEqual).direction;
    CHECK((wh + b).norm() < 1e-10);
  }
}

TEST_CASE("five central configurations are ordered and central") {
  const MassDistribution mm = MassDistribution::make(1.0, 2.0, 3.0);
  const auto five = five_central_configurations(mm);
  CHECK(five[0].kind == CentralConfigKind::Euler1);
  CHECK(five[1].kind == CentralConfigKind::Euler2);
  CHECK(five[2].kind == CentralConfigKind::Euler3);
  CHECK(five[3].kind == CentralConfigKind::LagrangePlus);
  CHECK(five[4].kind == CentralConfigKind::LagrangeMinus);
  for (const auto& cc : five) CHECK(central_configuration_residual(cc.q0, mm) < 1e-12);
}

TEST_CASE("homographic motion solves the full equations") {
  const MassDistribution mm = MassDistribution::make(1.0, 2.0, 3.0);
  const CentralConfiguration cc = lagrange_config(mm, true);
  const KeplerOrbit circ = kepler_orbit({1, 0}, {0, std::sqrt(cc.multiplier)}, cc.multiplier);
  CHECK(circ.eccentricity < 1e-12);
  const double h = 1e-5;
  for (double t : {0.0, 0.37, 1.4}) {
    const PhaseState s = homographic_solution(cc, circ, t);
    const PhaseState sp = homographic_solution(cc, circ, t + h);
    const PhaseState sm = homographic_solution(cc, circ, t - h);
    const Config a = accelerations(s.q, mm);
    for (int i = 0; i < 3; ++i) {
      const Complex fd = (sp.q[i] - 2.0 * s.q[i] + sm.q[i]) / (h * h);
      CHECK(std::abs(fd - a[i]) < 1e-5 * (1.0 + std::abs(a[i])));
      // Rigid rotation keeps every radius.
      CHECK(std::abs(std::abs(s.q[i]) - std::abs(cc.q0[i])) < 1e-12);
    }
  }
  const KeplerOrbit wrong = kepler_orbit({1, 0}, {0, 1}, cc.multiplier * 2.0);
  CHECK_THROWS_AS(homographic_solution(cc, wrong, 0.1), ArgumentError);
}

TEST_CASE("lagrange circular orbit closed form") {
  SUBCASE("equal masses sit on the unit circle") {
    const LagrangeCircular lc = lagrange_circular_orbit(kEqual);
    CHECK(lc.omega == doctest::Approx(std::pow(3.0, -0.25)).epsilon(1e-13));
    CHECK(lc.period == doctest::Approx(2 * kPi * std::pow(3.0, 0.25)).epsilon(1e-13));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(std::abs(lc.q0[i]) - 1.0) < 1e-12);
    const PhaseState s0 = lc.initial_state();
    CHECK(angular_momentum(s0, kEqual) ==
          doctest::Approx(3.0 * lc.omega).epsilon(1e-12));
    CHECK(std::abs(linear_momentum(s0, kEqual)) < 1e-12);
  }
  SUBCASE("newton residual for unequal masses") {
    const MassDistribution mm = MassDistribution::make(0.7, 1.9, 2.4);
    const LagrangeCircular lc = lagrange_circular_orbit(mm);
    const double h = 1e-5;
    for (double t : {0.2, 1.1}) {
      const PhaseState s = lc.state(t);
      const Config a = accelerations(s.q, mm);
      const PhaseState sp = lc.state(t + h), sm = lc.state(t - h);
      for (int i = 0; i < 3; ++i) {
        const Complex fd = (sp.q[i] - 2.0 * s.q[i] + sm.q[i]) / (h * h);
        CHECK(std::abs(fd - a[i]) < 1e-5 * (1.0 + std::abs(a[i])));
      }
    }
  }
}

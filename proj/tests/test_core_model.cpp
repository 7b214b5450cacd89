#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "threebody/core_model.hpp"
#include "threebody/errors.hpp"
#include "threebody/integrator.hpp"
#include "test_support.hpp"

using namespace threebody;
using tb_test::Rng;

namespace {
const MassDistribution kEqual = MassDistribution::make(1.0, 1.0, 1.0);
const double kSqrt2 = std::sqrt(2.0);
}  // namespace

TEST_CASE("mass distribution derived constants") {
  const MassDistribution mm = MassDistribution::make(1.0, 2.0, 3.0);
  CHECK(mm.M == doctest::Approx(6.0).epsilon(1e-15));
  // 1/mu1^2 = 1/1 + 1/2, 1/mu2^2 = 1/3 + 1/3
  CHECK(mm.mu1 == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
  CHECK(mm.mu2 == doctest::Approx(std::sqrt(3.0 / 2.0)).epsilon(1e-15));
  CHECK(mm.mu(Pair::P12) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(mm.mu(Pair::P23) == doctest::Approx(6.0 / 5.0).epsilon(1e-15));
  CHECK(mm.mu(Pair::P31) == doctest::Approx(3.0 / 4.0).epsilon(1e-15));
  for (Pair p : {Pair::P12, Pair::P23, Pair::P31}) {
    const int i = pair_first(p), j = pair_second(p);
    CHECK(mm.c(p) ==
          doctest::Approx(mm.m[i] * mm.m[j] * std::sqrt(mm.mu(p))).epsilon(1e-15));
  }
  CHECK(kEqual.is_equal());
  CHECK_FALSE(mm.is_equal());
  CHECK_THROWS_AS(MassDistribution::make(1.0, 0.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(MassDistribution::make(-1.0, 1.0, 1.0), ArgumentError);
}

TEST_CASE("mass inner product is hermitian and positive") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const MassDistribution mm = rng.masses();
    const Config a = rng.velocities(), b = rng.velocities();
    const Complex ab = mass_inner(a, b, mm);
    const Complex ba = mass_inner(b, a, mm);
    CHECK(std::abs(ab - std::conj(ba)) < 1e-12);
    const Complex aa = mass_inner(a, a, mm);
    CHECK(std::abs(std::imag(aa)) < 1e-14);
    CHECK(std::real(aa) >= 0.0);
  }
}

TEST_CASE("separations and potential on the rest line") {
  const Config q{Complex{0, 0}, Complex{-1, 0}, Complex{1, 0}};
  const Eigen::Vector3d r = pairwise_separations(q);
  CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-15));  // r12
  CHECK(r[1] == doctest::Approx(2.0).epsilon(1e-15));  // r23
  CHECK(r[2] == doctest::Approx(1.0).epsilon(1e-15));  // r31
  CHECK(potential_U(q, kEqual) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(potential_V(q, kEqual) == doctest::Approx(-2.5).epsilon(1e-15));
  const PhaseState rest{q, Config::Zero()};
  CHECK(total_energy(rest, kEqual) == doctest::Approx(-2.5).epsilon(1e-15));
  CHECK(moment_of_inertia(q, kEqual) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("acceleration anchors") {
  SUBCASE("equal masses on the line") {
    const Config q{Complex{0, 0}, Complex{-1, 0}, Complex{1, 0}};
    const Config a = accelerations(q, kEqual);
    CHECK(std::abs(a[0] - Complex{0.0, 0.0}) < 1e-15);
    CHECK(std::abs(a[1] - Complex{1.25, 0.0}) < 1e-15);
    CHECK(std::abs(a[2] - Complex{-1.25, 0.0}) < 1e-15);
  }
  SUBCASE("masses (1,2,3) on a right corner") {
    const MassDistribution mm = MassDistribution::make(1.0, 2.0, 3.0);
    const Config q{Complex{0, 0}, Complex{1, 0}, Complex{0, 1}};
    const Config a = accelerations(q, mm);
    const Complex a1{2.0, 3.0};
    const Complex a2{-1.0 - 3.0 / (2.0 * kSqrt2), 3.0 / (2.0 * kSqrt2)};
    const Complex a3{1.0 / kSqrt2, -1.0 - 1.0 / kSqrt2};
    CHECK(std::abs(a[0] - a1) < 1e-14);
    CHECK(std::abs(a[1] - a2) < 1e-14);
    CHECK(std::abs(a[2] - a3) < 1e-14);
  }
}

TEST_CASE("accelerations equal the negative mass gradient of V") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const MassDistribution mm = rng.masses();
    const Config q = rng.config();
    const Config a = accelerations(q, mm);
    const Config g = grad_V(q, mm);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(a[i] + g[i]) < 1e-12);
  }
}

TEST_CASE("grad_V against finite differences of V") {
  Rng rng(37);
  const double h = 1e-6;
  for (int trial = 0; trial < 10; ++trial) {
    const MassDistribution mm = rng.masses();
    const Config q = rng.config();
    const Config g = grad_V(q, mm);
    for (int i = 0; i < 3; ++i) {
      for (int comp = 0; comp < 2; ++comp) {
        const Complex dz = comp == 0 ? Complex{h, 0} : Complex{0, h};
        Config qp = q, qm = q;
        qp[i] += dz;
        qm[i] -= dz;
        const double fd = (potential_V(qp, mm) - potential_V(qm, mm)) / (2 * h);
        // grad_V is the mass-metric gradient: dV/dx_i = m_i * component.
        const double gi = comp == 0 ? std::real(g[i]) : std::imag(g[i]);
        CHECK(std::abs(mm.m[i] * gi - fd) < 1e-6 * (1.0 + std::abs(fd)));
      }
    }
  }
}

TEST_CASE("translation invariance and rotation equivariance of the forces") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const MassDistribution mm = rng.masses();
    const Config q = rng.config();
    const Complex shift = rng.point();
    const double theta = rng.uniform(0.0, 6.28);
    const Complex rot{std::cos(theta), std::sin(theta)};
    Config q_shift = q, q_rot = q;
    for (int i = 0; i < 3; ++i) {
      q_shift[i] += shift;
      q_rot[i] *= rot;
    }
    const Config a = accelerations(q, mm);
    const Config a_shift = accelerations(q_shift, mm);
    const Config a_rot = accelerations(q_rot, mm);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(a_shift[i] - a[i]) < 1e-12);
      CHECK(std::abs(a_rot[i] - rot * a[i]) < 1e-12);
    }
  }
}

TEST_CASE("momentum, center of mass, angular momentum anchors") {
  const MassDistribution mm = MassDistribution::make(1.0, 2.0, 3.0);
  const Config q{Complex{1, 0}, Complex{0, 1}, Complex{-1, 0}};
  const Config v{Complex{0, 1}, Complex{1, 0}, Complex{1, 1}};
  const PhaseState s{q, v};
  CHECK(std::abs(linear_momentum(s, mm) - Complex{5.0, 4.0}) < 1e-15);
  CHECK(std::abs(center_of_mass(q, mm) - Complex{-1.0 / 3.0, 1.0 / 3.0}) < 1e-15);
  // J = sum m Im(conj(q) v) = 1*1 + 2*(-1) + 3*(-1) = -4
  CHECK(angular_momentum(s, mm) == doctest::Approx(-4.0).epsilon(1e-14));
  CHECK(moment_of_inertia(q, mm) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(moment_of_inertia_cm(q, mm) == doctest::Approx(14.0 / 3.0).epsilon(1e-14));
  const Config centered = center_config(q, mm);
  CHECK(std::abs(center_of_mass(centered, mm)) < 1e-15);
  CHECK(moment_of_inertia(centered, mm) ==
        doctest::Approx(moment_of_inertia_cm(q, mm)).epsilon(1e-14));
  CHECK(length_scale(q, mm) == doctest::Approx(std::sqrt(14.0 / 18.0)).epsilon(1e-14));
}

TEST_CASE("kinetic energy") {
  const MassDistribution mm = MassDistribution::make(1.0, 2.0, 3.0);
  const Config v{Complex{1, 0}, Complex{0, 1}, Complex{-1, 0}};
  CHECK(kinetic_energy(v, mm) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(kinetic_energy(Config::Zero(), mm) == 0.0);
}

TEST_CASE("collisions are reported with the offending pair") {
  const Config q{Complex{0, 0}, Complex{0, 0}, Complex{1, 0}};
  try {
    potential_V(q, kEqual);
    FAIL("expected CollisionError");
  } catch (const CollisionError& e) {
    CHECK(e.i == 1);
    CHECK(e.j == 2);
  }
  CHECK_THROWS_AS(accelerations(q, kEqual), CollisionError);
}

TEST_CASE("inertia second derivative matches 4H + 2U") {
  SUBCASE("rest line anchor") {
    const Config q{Complex{0, 0}, Complex{-1, 0}, Complex{1, 0}};
    const PhaseState s{q, Config::Zero()};
    CHECK(inertia_second_derivative(s, kEqual) == doctest::Approx(-5.0).epsilon(1e-14));
  }
  SUBCASE("random states") {
    Rng rng(53);
    for (int trial = 0; trial < 10; ++trial) {
      const MassDistribution mm = rng.masses();
      const PhaseState s{rng.config(), rng.velocities()};
      const double idd = inertia_second_derivative(s, mm);
      const double H = total_energy(s, mm);
      const double U = potential_U(s.q, mm);
      CHECK(std::abs(idd - (4.0 * H + 2.0 * U)) < 1e-11 * (1.0 + std::abs(idd)));
    }
  }
}

TEST_CASE("lagrange jacobi residual along an integrated free fall") {
  const Config q{Complex{0, 0}, Complex{-1, 0}, Complex{1, 0}};
  const PhaseState s{q, Config::Zero()};
  IntegratorConfig cfg;
  cfg.sample_dt = 1e-3;
  const Trajectory traj = integrate(s, kEqual, 0.5, cfg);
  CHECK(traj.termination == Termination::TimeReached);
  CHECK(lagrange_jacobi_residual(traj, kEqual) < 1e-4);
}

TEST_CASE("pair helpers") {
  CHECK(pair_of(0, 1) == Pair::P12);
  CHECK(pair_of(1, 0) == Pair::P12);
  CHECK(pair_of(1, 2) == Pair::P23);
  CHECK(pair_of(2, 0) == Pair::P31);
  CHECK(pair_first(Pair::P23) == 1);
  CHECK(pair_second(Pair::P31) == 0);
}

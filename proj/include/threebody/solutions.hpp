#pragma once

#include <array>

#include "threebody/types.hpp"

namespace threebody {

/// Two-body problem lambdadd = -c lambda / |lambda|^3 in the plane.
struct KeplerOrbit {
  double c = 1.0;             ///< attraction constant
  Complex lambda0{1.0, 0.0};
  Complex lambdadot0{0.0, 0.0};
  double energy = 0.0;        ///< |lambdadot|^2/2 - c/|lambda|
  double angular_momentum = 0.0;  ///< lambda ^ lambdadot
  double semi_major_axis = 0.0;   ///< negative energy only, a = -c/(2E)
  double eccentricity = 0.0;
  double orientation = 0.0;   ///< argument of the Laplace vector (pericenter direction)

  bool bounded() const { return energy < 0.0; }
  bool degenerate() const;  ///< zero angular momentum (collision line)
  /// Time from t = 0 to the collision of a degenerate inward orbit;
  /// +infinity when no collision lies ahead.
  double collision_time() const;
};

/// Classify an initial condition. Throws ArgumentError when lambda0 = 0.
KeplerOrbit kepler_orbit(Complex lambda0, Complex lambdadot0, double c);

struct KeplerSample {
  Complex lambda;
  Complex lambdadot;
};

/// Propagate by universal-variable f and g series, covering elliptic,
/// parabolic, hyperbolic and rectilinear motion uniformly. Anomaly root is
/// solved to 1e-13. Throws CollisionError past the collision time of a
/// degenerate orbit.
KeplerSample kepler_state(const KeplerOrbit& orbit, double t);

/// Position only.
Complex kepler_solve(Complex lambda0, Complex lambdadot0, double c, double t);

/// Period of a bounded orbit, 2 pi sqrt(a^3 / c).
double kepler_period(const KeplerOrbit& orbit);

enum class CentralConfigKind { Euler1, Euler2, Euler3, LagrangePlus, LagrangeMinus };
const char* central_config_kind_name(CentralConfigKind k);

/// Critical point of V restricted to the I = 1 sphere: (c/2) grad I = grad V.
struct CentralConfiguration {
  Config q0;           ///< centered, normalized to I = 1
  double multiplier;   ///< c = -V(q0)/I(q0) = U(q0)
  CentralConfigKind kind;
};

/// Mass-metric norm of grad V - (c/2) grad I at q0 with c = -V/I.
double central_configuration_residual(const Config& q0, const MassDistribution& mm);

/// The three collinear critical points, one per choice of middle body, found
/// by bracketed bisection on the ordering's position ratio and polished to
/// residual < 1e-12. Euler-k has body k between the other two.
std::array<CentralConfiguration, 3> find_euler_configs(const MassDistribution& mm);

/// The equilateral critical point with positive (Plus) or negative (Minus)
/// orientation; central for every mass triple.
CentralConfiguration lagrange_config(const MassDistribution& mm, bool positive_orientation);

/// All five, ordered Euler1, Euler2, Euler3, LagrangePlus, LagrangeMinus.
std::array<CentralConfiguration, 5> five_central_configurations(const MassDistribution& mm);

/// Homographic motion q(t) = lambda(t) q0. The Kepler attraction constant
/// must equal the configuration's multiplier (checked, ArgumentError).
PhaseState homographic_solution(const CentralConfiguration& cc, const KeplerOrbit& orbit,
                                double t);

/// The rigidly rotating equilateral solution, scaled to side length sqrt(3)
/// (equal masses then sit on the unit circle and omega = 3^(-1/4)). Angular
/// speed satisfies omega^2 = U(q0)/I(q0).
struct LagrangeCircular {
  MassDistribution mm;
  Config q0;                 ///< centered equilateral, side sqrt(3)
  double omega = 0.0;
  double period = 0.0;
  PhaseState initial_state() const;
  PhaseState state(double t) const;
};

LagrangeCircular lagrange_circular_orbit(const MassDistribution& mm);

}  // namespace threebody

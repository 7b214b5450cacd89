#pragma once

#include "threebody/types.hpp"

namespace threebody {

/// Translation reduction. Invariant under q -> q + c(1,1,1).
JacobiCoordinates jacobi_from_config(const Config& q, const MassDistribution& mm);

/// The same linear map applied to velocities.
JacobiCoordinates jacobi_velocity(const Config& v, const MassDistribution& mm);

/// Inverse of the Jacobi map onto centered configurations. Linear, so it also
/// turns Jacobi velocities into configuration velocities of zero total momentum.
Config config_from_jacobi(const JacobiCoordinates& Z, const MassDistribution& mm);

/// Rotation quotient: w1 = (|Z1|^2 - |Z2|^2)/2, w2 = Re(Z1 conj Z2),
/// w3 = Im(Z1 conj Z2). ||w|| = (|Z1|^2 + |Z2|^2)/2.
ShapeVector hopf_map(const JacobiCoordinates& Z);

/// Full quotient map, hopf_map after jacobi_from_config. Rigid-motion
/// invariant; w3 = 0 exactly on collinear configurations; pi(lambda q) =
/// lambda^2 pi(q).
ShapeVector project(const Config& q, const MassDistribution& mm);

struct SignedAreaCheck {
  double area;   ///< signed triangle area, (1/2) (q2-q1) ^ (q3-q1)
  double w3;
  double ratio;  ///< w3 / (2 mu1 mu2 area); NaN when area = 0
};

/// w3 against the signed area; the proportionality constant is 2 mu1 mu2.
SignedAreaCheck signed_area_check(const Config& q, const MassDistribution& mm);

/// Differential of the Hopf map at Z as a real 3x4 matrix acting on
/// (Re Z1, Im Z1, Re Z2, Im Z2). Rows are mutually orthogonal with squared
/// norm |Z1|^2 + |Z2|^2.
Eigen::Matrix<double, 3, 4> hopf_differential(const JacobiCoordinates& Z);

/// wdot = D pi (q) qdot through the Jacobi chain rule.
Eigen::Vector3d pushforward_velocity(const PhaseState& s, const MassDistribution& mm);

/// Both halves of the reduction at once.
ReducedState project_state(const PhaseState& s, const MassDistribution& mm);

/// Gauge-fixed section of pi: a centered configuration with project(result) = w.
/// Gauge: Z1 real >= 0; on the ray where Z1 = 0, Z2 real >= 0 instead.
Config reconstruct_config(const ShapeVector& w, const MassDistribution& mm);

/// The unique horizontal (J = P = 0) phase state over the gauge-fixed lift of
/// w whose shape velocity is wdot. Throws SingularityError at the cone point.
PhaseState horizontal_lift(const ReducedState& rs, const MassDistribution& mm);

/// Horizontal velocity over an arbitrary given lift q of w (q must be centered
/// and project to w); used when the configuration gauge is chosen elsewhere.
Config horizontal_velocity(const Config& q, const Eigen::Vector3d& wdot,
                           const MassDistribution& mm);

}  // namespace threebody

#pragma once

#include "threebody/types.hpp"

namespace threebody {

/// Orthogonal split of the kinetic energy. The state is centered internally,
/// so the parts always sum to kinetic_energy exactly (to rounding).
struct SaariParts {
  double K_trans;  ///< |P|^2 / (2M)
  double K_rot;    ///< J^2 / (2I), about the center of mass
  double K_shape;  ///< ||wdot||^2 / (2I)
  double sum() const { return K_trans + K_rot + K_shape; }
};

/// Throws SingularityError at triple collision (I = 0).
SaariParts saari_decomposition(const PhaseState& s, const MassDistribution& mm);

/// L = ||wdot||^2 / (4||w||) + U_shape(w); the kinetic term is K_shape
/// written with I = 2||w||.
double shape_lagrangian(const ReducedState& rs, const MassDistribution& mm);

/// Reduced energy E = K_shape - U_shape, conserved by the reduced flow and
/// equal to H of any horizontal lift.
double reduced_energy(const ReducedState& rs, const MassDistribution& mm);

/// Euler-Lagrange flow of the shape Lagrangian in closed form: with
/// rho = ||w||, rhodot = what . wdot,
///   wdd = (rhodot/rho) wdot - (||wdot||^2 / (2 rho)) what + 2 rho grad U_shape(w).
Eigen::Vector3d reduced_accelerations(const ReducedState& rs, const MassDistribution& mm);

/// Integrate the reduced flow. Terminates with a singularity reason on
/// approach to a binary ray or the cone point, and with escape when ||w||
/// exceeds escape_factor times its initial value.
Trajectory integrate_reduced(const ReducedState& rs, const MassDistribution& mm, double T,
                             const IntegratorConfig& cfg);

/// Same flow with the potential switched off: geodesics of the shape metric.
Trajectory integrate_shape_geodesic(const ReducedState& rs, double T,
                                    const IntegratorConfig& cfg);

struct HorizontalityCheck {
  Complex P;
  double J;
  bool is_horizontal;
};

/// Reports whether the state sits in the horizontal subspace (|P| and |J|
/// under the tolerance), the hypothesis of the reduction.
HorizontalityCheck momentum_orthogonality_check(const PhaseState& s,
                                                const MassDistribution& mm,
                                                double tol = 1e-10);

}  // namespace threebody

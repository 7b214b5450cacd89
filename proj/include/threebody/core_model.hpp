#pragma once

#include "threebody/types.hpp"

namespace threebody {

/// Wedge product of two points of the plane: z ^ w = x_z y_w - y_z x_w.
inline double wedge(Complex z, Complex w) { return std::imag(std::conj(z) * w); }

/// Mass Hermitian inner product <v, w> = sum_i m_i conj(v_i) w_i.
Complex mass_inner(const Config& v, const Config& w, const MassDistribution& mm);

/// Pairwise distances (r12, r23, r31). Zero entries are legal here; the
/// energy and force routines are the ones that refuse collisions.
Eigen::Vector3d pairwise_separations(const Config& q);

/// Newtonian potential, the signed (negative) quantity: V = -sum m_i m_j / r_ij.
/// Throws CollisionError naming the offending pair when a separation is below
/// the collision threshold (1e-12 of the configuration's length scale).
double potential_V(const Config& q, const MassDistribution& mm);

/// U = -V > 0, the convention used by the shape-space formulas.
double potential_U(const Config& q, const MassDistribution& mm);

double kinetic_energy(const Config& v, const MassDistribution& mm);
double total_energy(const PhaseState& s, const MassDistribution& mm);

/// Accelerations a_i = sum_{j != i} m_j (q_j - q_i) / r_ij^3, equal to the
/// negative mass-metric gradient of V. Throws CollisionError on collision.
Config accelerations(const Config& q, const MassDistribution& mm);

/// Mass-metric gradient of V: component j is (1/m_j)(dV/dx_j + i dV/dy_j).
Config grad_V(const Config& q, const MassDistribution& mm);

Complex linear_momentum(const PhaseState& s, const MassDistribution& mm);
Complex center_of_mass(const Config& q, const MassDistribution& mm);

/// Angular momentum J = sum m_i q_i ^ qdot_i = Im <q, qdot>.
double angular_momentum(const PhaseState& s, const MassDistribution& mm);

/// Moment of inertia I = sum m_i |q_i|^2 about the origin.
double moment_of_inertia(const Config& q, const MassDistribution& mm);

/// I about the center of mass: I - M |q_cm|^2, translation invariant.
double moment_of_inertia_cm(const Config& q, const MassDistribution& mm);

/// Length scale sqrt(I_cm / M) of a configuration; zero only at triple collision.
double length_scale(const Config& q, const MassDistribution& mm);

/// q shifted so its center of mass is at the origin.
Config center_config(const Config& q, const MassDistribution& mm);

/// Exact second time derivative of I along the flow: 2<qdot,qdot> + 2 Re<q, a>.
/// By the Lagrange-Jacobi identity this equals 4H + 2U.
double inertia_second_derivative(const PhaseState& s, const MassDistribution& mm);

/// Max over interior samples of |Idd - (4H + 2U)| where Idd comes from second
/// finite differences of I(t) on the (possibly nonuniform) trajectory grid.
/// Throws ArgumentError for trajectories with fewer than three samples.
double lagrange_jacobi_residual(const Trajectory& traj, const MassDistribution& mm);

}  // namespace threebody

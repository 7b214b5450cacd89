#pragma once

#include <cstdint>
#include <optional>

#include "threebody/types.hpp"

namespace threebody {

struct ActionEval {
  double value = 0.0;
  Eigen::Matrix3Xd gradient;  ///< column j = dA/dw_j, endpoint columns included
};

/// Midpoint-rule discretization of the shape action integral of K + U over a
/// uniform-in-time node sequence. The gradient is exact for the discrete
/// functional. with_potential = false drops U and leaves the geodesic (pure
/// kinetic) functional.
///
/// Interior nodes on the cone point (always) or on a binary ray (when the
/// potential is on) are rejected with SingularityError naming the node, as is
/// any segment midpoint the potential cannot be evaluated at. Endpoints may
/// sit on rays; only midpoints enter the quadrature.
ActionEval discrete_action(const DiscretePath& path, const MassDistribution& mm,
                           bool with_potential = true);

struct MinimizeOptions {
  double grad_tol = 1e-10;     ///< target norm of the reduced gradient
  int max_iterations = 40000;  ///< cap across all descent rounds
  std::uint64_t seed = 0;      ///< deterministic perturbation of the built-in guess
  bool with_potential = true;
  /// Warm start with matching segment count; endpoints are projected onto the
  /// boundary sets. When absent a great-circle-like guess is built.
  std::optional<DiscretePath> initial;
};

struct MinimizeResult {
  DiscretePath path;
  double action = 0.0;
  double grad_norm = 0.0;  ///< reduced gradient norm at the returned path
  int iterations = 0;
  /// Descent strayed toward a binary ray and was restarted through a
  /// log-barrier continuation (the barrier is off in the final polish).
  bool barrier_restart = false;
};

/// Minimizes the discrete action over the interior nodes plus whatever
/// endpoint freedom bc leaves: a point endpoint is pinned, a ray endpoint
/// keeps its direction with free size, a plane endpoint moves in the plane.
/// Quasi-Newton descent with backtracking, finished by a sparse Newton polish
/// of the same discrete functional. Throws ConvergenceError with diagnostics
/// when the gradient target cannot be met. Requires N >= 16.
MinimizeResult minimize_arc(const BoundaryCondition& bc, double T, int N,
                            const MassDistribution& mm, const MinimizeOptions& opts = {});

/// Doubles the segment count by inserting segment midpoints; warm-start
/// companion of minimize_arc for refinement studies.
DiscretePath refine_path(const DiscretePath& path);

/// Max over interior nodes of the relative defect of the reduced
/// Euler-Lagrange equations: second time differences of the nodes against
/// reduced accelerations at central-difference velocities. Converged
/// minimizers drive this to the quadrature order O(dt^2).
double el_residual(const DiscretePath& path, const MassDistribution& mm,
                   bool with_potential = true);

}  // namespace threebody

#pragma once

#include <cstdint>

#include "threebody/action_minimizer.hpp"
#include "threebody/types.hpp"

namespace threebody {

struct ClosedCurve {
  DiscretePath path;           ///< 12 N segments spanning 12 T; last node repeats the first
  double closure_error = 0.0;  ///< gap between first and last node
  /// Max norm over nodes of the periodic discrete action gradient of the
  /// assembled curve. Junction stationarity follows from the arc's boundary
  /// transversality, so a converged arc keeps this at its own gradient level;
  /// this is the validity measure of the extension.
  double stationarity = 0.0;
};

/// Assembles the closed twelve-arc curve from one converged arc running from
/// the collinear ray (body 1 between the others) to the isosceles-about-body-2
/// plane, by alternately reflecting across isosceles planes and half-twisting
/// about collinear axes. Throws UnsupportedError for unequal masses,
/// ArgumentError when the arc endpoints are off the expected sets, and
/// ConvergenceError when the assembled curve is not stationary.
ClosedCurve extend_by_symmetry(const DiscretePath& arc, const MassDistribution& mm);

/// Full-space trajectory over one period: the horizontal (J = 0) lift of the
/// curve's initial point and velocity integrated under the full Newton flow.
Trajectory reconstruct_planar_orbit(const ClosedCurve& curve, const MassDistribution& mm);

struct ShootingResult {
  PhaseState state;
  double period = 0.0;
  double residual = 0.0;  ///< max-norm period-return defect of the returned state
  int iterations = 0;
};

/// Polishes an Euler-crossing state of the eight into a numerically periodic
/// orbit. The collinear scale is frozen and the crossing symmetry is enforced
/// (outer bodies share one velocity, the middle body carries minus twice it,
/// so P = J = 0 exactly); Gauss-Newton then drives the period-return defect
/// over (outer velocity, period). Equal masses only.
ShootingResult refine_by_shooting(const PhaseState& guess, double period_guess,
                                  const MassDistribution& mm, double tol = 1e-10);

struct EightOptions {
  int N = 512;      ///< segments per arc at the finest level
  double T = 1.0;   ///< duration per arc; the orbit period comes out near 12 T
  double grad_tol = 1e-10;
  double shoot_tol = 1e-10;
  std::uint64_t seed = 0;
};

struct FigureEight {
  MinimizeResult arc;
  ClosedCurve curve;
  ShootingResult orbit;
};

/// End-to-end construction of the figure-eight choreography: coarse-to-fine
/// arc minimization, symmetry extension, horizontal lift, shooting refinement.
FigureEight find_figure_eight(const MassDistribution& mm, const EightOptions& opts = {});

}  // namespace threebody

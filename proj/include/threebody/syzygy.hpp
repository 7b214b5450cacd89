#pragma once

#include <string>
#include <vector>

#include "threebody/types.hpp"

namespace threebody {

struct SyzygyEvent {
  double t = 0.0;
  ShapeVector w = ShapeVector::Zero();
  /// 1, 2, or 3: the body between the other two (the one not in the longest
  /// pair at the collinear instant).
  int middle = 0;
  bool grazing = false;          ///< tangential zero of w3, not a crossing
  bool collision_graze = false;  ///< within tolerance of a binary collision ray
};

struct SyzygyReport {
  std::vector<SyzygyEvent> events;
  /// w3 vanishes along the whole trajectory (an Euler-type collinear motion);
  /// no events are reported in that case.
  bool identically_collinear = false;

  /// Crossings only: grazing and collision-graze events excluded.
  int count() const;
};

/// Finds every zero of w3 along a full (projected on the fly) or reduced
/// trajectory, refined on the dense output, typed by the middle body.
SyzygyReport detect_syzygies(const Trajectory& traj, const MassDistribution& mm);

/// Concatenated middle-body digits of the counted events, in time order.
/// No cancellation or reduction is applied.
std::string syzygy_sequence(const std::vector<SyzygyEvent>& events);

struct TheoremHypotheses {
  double H = 0.0;
  double J = 0.0;
  bool negative_energy = false;
  bool zero_angular_momentum = false;
  bool applies = false;
};

/// Whether the syzygy theorem's hypotheses (H < 0, J = 0 within tol) hold
/// for an initial state.
TheoremHypotheses hypothesis_check(const PhaseState& s, const MassDistribution& mm,
                                   double j_tol = 1e-10);

}  // namespace threebody

#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "threebody/types.hpp"

namespace threebody {

/// Right-hand side of a first-order system: dy = f(t, y). May throw
/// CollisionError or SingularityError; the step is then rejected and retried
/// smaller, terminating the run if the step size underflows.
using OdeFn = std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Probe called on every accepted sample. A non-empty result stops the run
/// with the given reason.
using StopFn = std::function<std::optional<std::pair<Termination, std::string>>(
    double, const Eigen::VectorXd&)>;

/// Generic integration result, before any domain interpretation.
struct RawTrajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> ys;
  std::vector<DenseSegment> dense;
  Termination termination = Termination::TimeReached;
  std::string termination_detail;
};

/// Drive f from (t0, y0) over a duration of T > 0 with the configured method.
/// Dopri54 controls the local error per step against abs_tol/rel_tol and
/// records a 5th-order interpolant per accepted step; RK4Fixed marches with
/// fixed_step and records cubic Hermite interpolants.
RawTrajectory integrate_ode(const OdeFn& f, const Eigen::VectorXd& y0, double t0, double T,
                            const IntegratorConfig& cfg, const StopFn& stop = {});

Eigen::VectorXd pack_state(const PhaseState& s);
PhaseState unpack_state(const Eigen::VectorXd& y);
Eigen::VectorXd pack_reduced(const ReducedState& rs);
ReducedState unpack_reduced(const Eigen::VectorXd& y);

/// Integrate the full three-body flow. Terminates early with a collision
/// reason when a separation falls under cfg.collision_radius (default:
/// 1e-9 of the initial length scale) or when the step size underflows during
/// a close approach; with an escape reason when I_cm exceeds
/// cfg.escape_factor times its initial value.
Trajectory integrate(const PhaseState& initial, const MassDistribution& mm, double T,
                     const IntegratorConfig& cfg);

/// Dense-output evaluation at any time inside the integrated span.
Eigen::VectorXd eval_dense(const Trajectory& traj, double t);
PhaseState state_at(const Trajectory& traj, double t);
ReducedState reduced_at(const Trajectory& traj, double t);

struct Event {
  double t;
  Eigen::VectorXd y;
  bool grazing = false;  ///< tangential zero, no sign change
};

using Observable = std::function<double(double, const Eigen::VectorXd&)>;

/// All zeros of the observable along the trajectory's dense output. Sign
/// changes are refined by bisection to 1e-10 of the span; tangential zeros
/// are located by scanning each step's interpolant and flagged as grazing.
/// Results do not depend on the output sampling density.
std::vector<Event> detect_events(const Trajectory& traj, const Observable& obs);

/// Event detection for trajectories without dense output (deserialized
/// runs). Interpolates between samples, cubic Hermite when the samples carry
/// velocities and linear otherwise, and scans the interpolant the same way
/// detect_events scans the dense one. Transversal crossings are reliable up
/// to the interpolation error; grazing zeros strictly between samples are
/// found only if the interpolant itself dips to zero.
std::vector<Event> detect_events_sampled(const Trajectory& traj, const Observable& obs);

struct DriftReport {
  double dH = 0.0;
  double dJ = 0.0;
  double dP = 0.0;
};

/// Max absolute deviation of the recorded conserved quantities from their
/// initial values. Zero-length trajectories report zero drift.
DriftReport drift_report(const Trajectory& traj);

}  // namespace threebody

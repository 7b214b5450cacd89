#include "threebody/reduced_dynamics.hpp"

#include <cmath>

#include "threebody/core_model.hpp"
#include "threebody/errors.hpp"
#include "threebody/integrator.hpp"
#include "threebody/shape_geometry.hpp"
#include "threebody/shape_projection.hpp"

namespace threebody {

SaariParts saari_decomposition(const PhaseState& s, const MassDistribution& mm) {
  const Complex P = linear_momentum(s, mm);
  PhaseState rel;
  rel.q = center_config(s.q, mm);
  rel.v = s.v - Config::Constant(P / mm.M);
  const double I = moment_of_inertia(rel.q, mm);
  if (I <= 0.0) throw SingularityError("Saari decomposition undefined at triple collision");
  const double J = angular_momentum(rel, mm);
  const Eigen::Vector3d wdot = pushforward_velocity(rel, mm);
  SaariParts parts;
  parts.K_trans = 0.5 * std::norm(P) / mm.M;
  parts.K_rot = 0.5 * J * J / I;
  parts.K_shape = 0.5 * wdot.squaredNorm() / I;
  return parts;
}

double shape_lagrangian(const ReducedState& rs, const MassDistribution& mm) {
  const double rho = rs.w.norm();
  if (rho <= 0.0) throw SingularityError("shape Lagrangian undefined at the cone point");
  return rs.wdot.squaredNorm() / (4.0 * rho) + shape_potential(rs.w, mm);
}

double reduced_energy(const ReducedState& rs, const MassDistribution& mm) {
  const double rho = rs.w.norm();
  if (rho <= 0.0) throw SingularityError("reduced energy undefined at the cone point");
  return rs.wdot.squaredNorm() / (4.0 * rho) - shape_potential(rs.w, mm);
}

Eigen::Vector3d reduced_accelerations(const ReducedState& rs, const MassDistribution& mm) {
  const double rho = rs.w.norm();
  if (rho <= 0.0) throw SingularityError("reduced flow undefined at the cone point");
  const ShapeVector what = rs.w / rho;
  const double rhodot = what.dot(rs.wdot);
  return (rhodot / rho) * rs.wdot - (rs.wdot.squaredNorm() / (2.0 * rho)) * what +
         2.0 * rho * shape_potential_gradient(rs.w, mm);
}

namespace {

Trajectory run_reduced(const ReducedState& rs, double T, const IntegratorConfig& cfg,
                       const OdeFn& f, const MassDistribution* mm_for_diag,
                       const StopFn& stop) {
  RawTrajectory raw = integrate_ode(f, pack_reduced(rs), 0.0, T, cfg, stop);
  Trajectory traj;
  traj.reduced = true;
  traj.times = std::move(raw.times);
  traj.dense = std::move(raw.dense);
  traj.termination = raw.termination;
  traj.termination_detail = std::move(raw.termination_detail);
  traj.rstates.reserve(raw.ys.size());
  traj.diagnostics.reserve(raw.ys.size());
  for (const auto& y : raw.ys) {
    const ReducedState r = unpack_reduced(y);
    traj.rstates.push_back(r);
    SampleDiagnostics d;
    const double rho = r.w.norm();
    d.I = 2.0 * rho;
    d.H = mm_for_diag ? reduced_energy(r, *mm_for_diag)
                      : (rho > 0.0 ? r.wdot.squaredNorm() / (4.0 * rho) : 0.0);
    traj.diagnostics.push_back(d);
  }
  return traj;
}

}  // namespace

Trajectory integrate_reduced(const ReducedState& rs, const MassDistribution& mm, double T,
                             const IntegratorConfig& cfg) {
  const double rho0 = rs.w.norm();
  if (rho0 <= 0.0) throw SingularityError("reduced flow undefined at the cone point");
  shape_potential(rs.w, mm);  // rejects starts on a binary ray

  OdeFn f = [&mm](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    const ReducedState r = unpack_reduced(y);
    dy.resize(6);
    dy.head<3>() = r.wdot;
    dy.tail<3>() = reduced_accelerations(r, mm);
  };

  // Near-ray and cone-point guards mirror the full system's collision radius:
  // d_ij and sqrt(2 rho) are shape-metric lengths, comparable with
  // sqrt(mu) r_ij of the full picture.
  const double dscale = std::sqrt(rho0);
  StopFn stop = [&mm, rho0, dscale, &cfg](double, const Eigen::VectorXd& y)
      -> std::optional<std::pair<Termination, std::string>> {
    const ReducedState r = unpack_reduced(y);
    const double rho = r.w.norm();
    if (rho < 1e-18 * rho0)
      return std::make_pair(Termination::Singularity, "reached the cone point");
    for (Pair p : {Pair::P12, Pair::P23, Pair::P31}) {
      if (distance_to_binary_ray(r.w, p, mm) < 1e-9 * dscale)
        return std::make_pair(Termination::Singularity,
                              std::string("approached binary ray ") + pair_name(p));
    }
    if (rho > cfg.escape_factor * rho0)
      return std::make_pair(Termination::Escape, "shape size exceeded escape factor");
    return std::nullopt;
  };

  Trajectory traj = run_reduced(rs, T, cfg, f, &mm, stop);
  if (traj.termination == Termination::StepUnderflow && !traj.rstates.empty()) {
    const ReducedState& last = traj.rstates.back();
    Eigen::Vector3d d;
    for (Pair p : {Pair::P12, Pair::P23, Pair::P31})
      d[pair_index(p)] = distance_to_binary_ray(last.w, p, mm);
    if (d.minCoeff() < 1e-5 * dscale || last.w.norm() < 1e-10 * rho0) {
      traj.termination = Termination::Singularity;
      traj.termination_detail += " during singular approach";
    }
  }
  return traj;
}

Trajectory integrate_shape_geodesic(const ReducedState& rs, double T,
                                    const IntegratorConfig& cfg) {
  const double rho0 = rs.w.norm();
  if (rho0 <= 0.0) throw SingularityError("geodesic flow undefined at the cone point");

  OdeFn f = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    const ReducedState r = unpack_reduced(y);
    const double rho = r.w.norm();
    if (rho <= 0.0) throw SingularityError("geodesic reached the cone point");
    const ShapeVector what = r.w / rho;
    const double rhodot = what.dot(r.wdot);
    dy.resize(6);
    dy.head<3>() = r.wdot;
    dy.tail<3>() = (rhodot / rho) * r.wdot - (r.wdot.squaredNorm() / (2.0 * rho)) * what;
  };

  StopFn stop = [rho0](double, const Eigen::VectorXd& y)
      -> std::optional<std::pair<Termination, std::string>> {
    if (y.head<3>().norm() < 1e-12 * rho0)
      return std::make_pair(Termination::Singularity, "reached the cone point");
    return std::nullopt;
  };

  return run_reduced(rs, T, cfg, f, nullptr, stop);
}

HorizontalityCheck momentum_orthogonality_check(const PhaseState& s,
                                                const MassDistribution& mm, double tol) {
  HorizontalityCheck c;
  c.P = linear_momentum(s, mm);
  c.J = angular_momentum(s, mm);
  c.is_horizontal = std::abs(c.P) <= tol && std::abs(c.J) <= tol;
  return c;
}

}  // namespace threebody

#include "threebody/figure_eight.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "threebody/core_model.hpp"
#include "threebody/errors.hpp"
#include "threebody/integrator.hpp"
#include "threebody/shape_geometry.hpp"
#include "threebody/shape_projection.hpp"

namespace threebody {

namespace {

IntegratorConfig tight_config() {
  IntegratorConfig cfg;
  cfg.abs_tol = 1e-12;
  cfg.rel_tol = 1e-12;
  return cfg;
}

// Symmetric Euler-crossing state of the eight in the construction gauge:
// body 1 at the origin of the collinear x axis, outer bodies at -a and a
// sharing velocity u, the middle body at -2u. P and J vanish identically.
PhaseState crossing_state(double a, Complex u) {
  PhaseState s;
  s.q << Complex{0.0, 0.0}, Complex{-a, 0.0}, Complex{a, 0.0};
  s.v << -2.0 * u, u, u;
  return s;
}

}  // namespace

ClosedCurve extend_by_symmetry(const DiscretePath& arc, const MassDistribution& mm) {
  if (!mm.is_equal())
    throw UnsupportedError("the twelve-arc construction needs equal masses");
  const int N = arc.segments();
  if (N < 2) throw ArgumentError("arc needs at least two segments");
  if (!(arc.T > 0.0)) throw ArgumentError("arc duration must be positive");

  const SpecialPoints sp = special_points(mm);
  const ShapeVector e1 = sp.euler[0];
  const ShapeVector n2 = sp.isosc_plane_normals[1];
  const ShapeVector w0 = arc.nodes.col(0);
  const ShapeVector wN = arc.nodes.col(N);
  if ((w0 - w0.dot(e1) * e1).norm() > 1e-8 * w0.norm() || w0.dot(e1) <= 0.0)
    throw ArgumentError("arc does not start on the collinear (body 1 middle) ray");
  if (std::abs(wN.dot(n2)) > 1e-8 * wN.norm())
    throw ArgumentError("arc does not end on the isosceles-about-body-2 plane");

  const EqualMassSymmetries sym = equal_mass_symmetries(mm);
  const std::array<Eigen::Matrix3d, 6> junction = {
      sym.reflection[1], sym.half_twist[2], sym.reflection[0],
      sym.half_twist[1], sym.reflection[2], sym.half_twist[0]};

  ClosedCurve out;
  out.path.T = 12.0 * arc.T;
  out.path.nodes.resize(3, 12 * N + 1);
  out.path.nodes.leftCols(N + 1) = arc.nodes;
  Eigen::Matrix3Xd prev = arc.nodes;
  for (int k = 1; k < 12; ++k) {
    const Eigen::Matrix3d& S = junction[(k - 1) % 6];
    Eigen::Matrix3Xd next(3, N + 1);
    next.col(0) = out.path.nodes.col(k * N);  // shared junction node
    for (int j = 1; j <= N; ++j) next.col(j) = S * prev.col(N - j);
    out.path.nodes.middleCols(k * N, N + 1) = next;
    prev = std::move(next);
  }

  out.closure_error = (out.path.nodes.col(12 * N) - out.path.nodes.col(0)).norm();

  // Periodic stationarity: the open-chain gradient already matches the
  // periodic one at interior nodes; the seam combines the two half-gradients
  // (the last node coincides with the first).
  const ActionEval ae = discrete_action(out.path, mm, true);
  double worst = (ae.gradient.col(0) + ae.gradient.col(12 * N)).norm();
  for (int j = 1; j < 12 * N; ++j) worst = std::max(worst, ae.gradient.col(j).norm());
  out.stationarity = worst;
  if (!(out.stationarity <= 1e-8)) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "assembled curve is not stationary (max node gradient " << std::scientific
        << out.stationarity << "); the arc is not converged";
    throw ConvergenceError(msg.str());
  }
  return out;
}

Trajectory reconstruct_planar_orbit(const ClosedCurve& curve, const MassDistribution& mm) {
  const int M = curve.path.segments();
  if (M < 3) throw ArgumentError("closed curve has too few segments");
  const double dt = curve.path.dt();
  const ShapeVector w0 = curve.path.nodes.col(0);
  // cyclic central difference; the final node duplicates the first
  const Eigen::Vector3d wdot0 =
      (curve.path.nodes.col(1) - curve.path.nodes.col(M - 1)) / (2.0 * dt);
  const PhaseState s0 = horizontal_lift({w0, wdot0}, mm);
  return integrate(s0, mm, curve.path.T, tight_config());
}

ShootingResult refine_by_shooting(const PhaseState& guess, double period_guess,
                                  const MassDistribution& mm, double tol) {
  if (!mm.is_equal()) throw UnsupportedError("shooting gauge assumes equal masses");
  if (!(period_guess > 0.0)) throw ArgumentError("period guess must be positive");
  if (!(tol > 0.0)) throw ArgumentError("shooting tolerance must be positive");

  // Normalize the input into the gauge: center, rotate the collinear axis
  // onto x, symmetrize the outer velocities.
  const Complex cm = center_of_mass(guess.q, mm);
  Config q = guess.q;
  for (int i = 0; i < 3; ++i) q[i] -= cm;
  const Complex axis = q[2] - q[0];
  if (std::abs(axis) <= 0.0) throw ArgumentError("degenerate crossing state");
  const Complex rot = std::conj(axis / std::abs(axis));
  Config v = guess.v;
  for (int i = 0; i < 3; ++i) {
    q[i] *= rot;
    v[i] *= rot;
  }
  const double a = 0.5 * (std::abs(q[1]) + std::abs(q[2]));
  if (std::abs(q[0]) > 0.05 * a || std::abs(q[1] + a) > 0.05 * a ||
      std::abs(q[2] - a) > 0.05 * a)
    throw ArgumentError(
        "state is not an Euler crossing with body 1 between the others");
  Complex u = 0.5 * (v[1] + v[2]);

  const IntegratorConfig cfg = tight_config();
  auto residual = [&](const Eigen::Vector3d& th) {
    const PhaseState s0 = crossing_state(a, Complex{th[0], th[1]});
    const Trajectory traj = integrate(s0, mm, th[2], cfg);
    if (traj.termination != Termination::TimeReached)
      throw ConvergenceError(std::string("shooting orbit ended early: ") +
                             traj.termination_detail);
    return Eigen::VectorXd(pack_state(traj.states.back()) - pack_state(s0));
  };

  Eigen::Vector3d th(std::real(u), std::imag(u), period_guess);
  Eigen::VectorXd r = residual(th);
  const double scale = std::max(1.0, a);
  double lambda = 0.0;
  ShootingResult out;
  int it = 0;
  for (; it < 40; ++it) {
    if (r.lpNorm<Eigen::Infinity>() <= tol * scale) break;
    Eigen::Matrix<double, 12, 3> J;
    for (int i = 0; i < 3; ++i) {
      const double h = 1e-7 * std::max(1.0, std::abs(th[i]));
      Eigen::Vector3d tp = th, tm = th;
      tp[i] += h;
      tm[i] -= h;
      J.col(i) = (residual(tp) - residual(tm)) / (2.0 * h);
    }
    const Eigen::Matrix3d JtJ = J.transpose() * J;
    const Eigen::Vector3d Jtr = J.transpose() * r;
    bool accepted = false;
    for (int tries = 0; tries < 15 && !accepted; ++tries) {
      Eigen::Matrix3d M = JtJ;
      M.diagonal() += lambda * JtJ.diagonal().cwiseMax(1e-12);
      const Eigen::Vector3d step = M.ldlt().solve(-Jtr);
      const Eigen::Vector3d tn = th + step;
      if (tn[2] > 0.0) {
        const Eigen::VectorXd rn = residual(tn);
        if (rn.norm() < r.norm()) {
          th = tn;
          r = rn;
          lambda = lambda * 0.1;
          accepted = true;
          break;
        }
      }
      lambda = lambda == 0.0 ? 1e-8 : lambda * 10.0;
    }
    if (!accepted) break;
  }
  out.residual = r.lpNorm<Eigen::Infinity>();
  out.iterations = it;
  if (out.residual > tol * scale) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "shooting stalled at period-return defect " << std::scientific << out.residual
        << " (target " << tol * scale << ") after " << it << " iterations";
    throw ConvergenceError(msg.str());
  }
  out.state = crossing_state(a, Complex{th[0], th[1]});
  out.period = th[2];
  return out;
}

FigureEight find_figure_eight(const MassDistribution& mm, const EightOptions& opts) {
  if (!mm.is_equal()) throw UnsupportedError("the figure-eight construction needs equal masses");
  if (opts.N < 16) throw ArgumentError("need at least 16 segments per arc");
  if (!(opts.T > 0.0)) throw ArgumentError("arc duration must be positive");

  const SpecialPoints sp = special_points(mm);
  BoundaryCondition bc;
  bc.start = BoundaryCondition::ray(sp.euler[0]);
  bc.end = BoundaryCondition::plane(sp.isosc_plane_normals[1]);

  int n0 = opts.N;
  while (n0 % 2 == 0 && n0 / 2 >= 64) n0 /= 2;

  FigureEight out;
  MinimizeOptions mo;
  mo.seed = opts.seed;
  mo.grad_tol = n0 == opts.N ? opts.grad_tol : 1e-8;
  out.arc = minimize_arc(bc, opts.T, n0, mm, mo);
  for (int n = 2 * n0; n <= opts.N; n *= 2) {
    MinimizeOptions wo;
    wo.grad_tol = n == opts.N ? opts.grad_tol : 1e-8;
    wo.initial = refine_path(out.arc.path);
    out.arc = minimize_arc(bc, opts.T, n, mm, wo);
  }

  out.curve = extend_by_symmetry(out.arc.path, mm);

  const int M = out.curve.path.segments();
  const double dt = out.curve.path.dt();
  const Eigen::Vector3d wdot0 =
      (out.curve.path.nodes.col(1) - out.curve.path.nodes.col(M - 1)) / (2.0 * dt);
  const PhaseState lifted = horizontal_lift({out.curve.path.nodes.col(0), wdot0}, mm);
  out.orbit = refine_by_shooting(lifted, out.curve.path.T, mm, opts.shoot_tol);
  return out;
}

}  // namespace threebody

#include "threebody/action_minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "threebody/errors.hpp"
#include "threebody/reduced_dynamics.hpp"
#include "threebody/shape_geometry.hpp"

namespace threebody {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using Kind = BoundaryCondition::Kind;

struct Terms {
  const MassDistribution* mm = nullptr;
  double dt = 0.0;
  bool with_potential = true;
  double barrier = 0.0;  ///< log-barrier coefficient, 0 = off
};

// Potential-like part evaluated at a segment midpoint: U plus, during barrier
// continuation, -barrier * sum log(d_p / sqrt(rho)). The log argument is
// scale-free so the barrier does not fight the free size of ray endpoints.
double midpoint_phi(const Terms& tm, const ShapeVector& m, Eigen::Vector3d* grad) {
  double phi = 0.0;
  if (grad) grad->setZero();
  if (tm.with_potential) {
    phi += shape_potential(m, *tm.mm);
    if (grad) *grad += shape_potential_gradient(m, *tm.mm);
  }
  if (tm.barrier > 0.0) {
    const double rho = m.norm();
    const ShapeVector mhat = m / rho;
    for (Pair p : {Pair::P12, Pair::P23, Pair::P31}) {
      const ShapeVector b = binary_ray(p, *tm.mm).direction;
      const double dsq = std::max(rho - m.dot(b), 0.0);
      if (!(dsq > 0.0)) throw SingularityError("barrier evaluated on a binary ray");
      phi -= tm.barrier * (0.5 * std::log(dsq) - 0.5 * std::log(rho));
      if (grad) *grad -= tm.barrier * ((mhat - b) / (2.0 * dsq) - mhat / (2.0 * rho));
    }
  }
  return phi;
}

// One segment's midpoint-rule contribution and its exact gradient with
// respect to the two nodes.
double segment_eval(const Terms& tm, const ShapeVector& wa, const ShapeVector& wb,
                    Eigen::Vector3d* ga, Eigen::Vector3d* gb) {
  const ShapeVector m = 0.5 * (wa + wb);
  const double rho = m.norm();
  if (rho <= 0.0) throw SingularityError("segment midpoint at the cone point");
  const ShapeVector d = wb - wa;
  const double dsq = d.squaredNorm();
  Eigen::Vector3d gphi;
  const double phi = midpoint_phi(tm, m, (ga || gb) ? &gphi : nullptr);
  const double val = dsq / (4.0 * tm.dt * rho) + tm.dt * phi;
  if (ga || gb) {
    const ShapeVector mhat = m / rho;
    const Eigen::Vector3d common =
        (-dsq / (8.0 * tm.dt * rho * rho)) * mhat + (0.5 * tm.dt) * gphi;
    const Eigen::Vector3d dterm = d / (2.0 * tm.dt * rho);
    if (ga) *ga = common - dterm;
    if (gb) *gb = common + dterm;
  }
  return val;
}

int dof_count(Kind k) { return k == Kind::Point ? 0 : (k == Kind::Ray ? 1 : 2); }

// Maps the optimization variables onto node positions: interior nodes are
// free, endpoints carry 0 (point), 1 (ray: log size) or 2 (plane coordinates)
// variables.
struct DofMap {
  BoundaryCondition bc;
  int N = 0;
  int sd = 0, ed = 0;
  ShapeVector se1 = ShapeVector::Zero(), se2 = ShapeVector::Zero();
  ShapeVector ee1 = ShapeVector::Zero(), ee2 = ShapeVector::Zero();

  static DofMap make(const BoundaryCondition& bc_in, int N) {
    DofMap map;
    map.bc = bc_in;
    map.N = N;
    auto prep = [](BoundaryCondition::End& e, ShapeVector& e1, ShapeVector& e2) {
      if (e.kind == Kind::Point) {
        if (e.v.norm() <= 0.0) throw ArgumentError("fixed endpoint at the cone point");
        return;
      }
      if (e.v.norm() <= 0.0) throw ArgumentError("endpoint set has zero direction");
      e.v.normalize();
      if (e.kind == Kind::Plane) {
        e1 = e.v.unitOrthogonal();
        e2 = e.v.cross(e1);
      }
    };
    prep(map.bc.start, map.se1, map.se2);
    prep(map.bc.end, map.ee1, map.ee2);
    map.sd = dof_count(map.bc.start.kind);
    map.ed = dof_count(map.bc.end.kind);
    return map;
  }

  int size() const { return sd + 3 * (N - 1) + ed; }
  int end_offset() const { return sd + 3 * (N - 1); }

  void fill_nodes(const Eigen::VectorXd& x, Eigen::Matrix3Xd& nodes) const {
    nodes.resize(3, N + 1);
    switch (bc.start.kind) {
      case Kind::Point: nodes.col(0) = bc.start.v; break;
      case Kind::Ray: nodes.col(0) = std::exp(x[0]) * bc.start.v; break;
      case Kind::Plane: nodes.col(0) = x[0] * se1 + x[1] * se2; break;
    }
    for (int j = 1; j < N; ++j) nodes.col(j) = x.segment<3>(sd + 3 * (j - 1));
    const int o = end_offset();
    switch (bc.end.kind) {
      case Kind::Point: nodes.col(N) = bc.end.v; break;
      case Kind::Ray: nodes.col(N) = std::exp(x[o]) * bc.end.v; break;
      case Kind::Plane: nodes.col(N) = x[o] * ee1 + x[o + 1] * ee2; break;
    }
  }

  Eigen::VectorXd from_nodes(const Eigen::Matrix3Xd& nodes) const {
    Eigen::VectorXd x(size());
    auto enc = [&](const BoundaryCondition::End& e, const ShapeVector& w, const ShapeVector& e1,
                   const ShapeVector& e2, int off) {
      switch (e.kind) {
        case Kind::Point: break;
        case Kind::Ray: x[off] = std::log(std::max(e.v.dot(w), 1e-12)); break;
        case Kind::Plane:
          x[off] = e1.dot(w);
          x[off + 1] = e2.dot(w);
          break;
      }
    };
    enc(bc.start, nodes.col(0), se1, se2, 0);
    for (int j = 1; j < N; ++j) x.segment<3>(sd + 3 * (j - 1)) = nodes.col(j);
    enc(bc.end, nodes.col(N), ee1, ee2, end_offset());
    return x;
  }

  Eigen::VectorXd pull_gradient(const Eigen::VectorXd& x, const Eigen::Matrix3Xd& gw) const {
    Eigen::VectorXd g(size());
    auto enc = [&](const BoundaryCondition::End& e, const Eigen::Vector3d& gcol,
                   const ShapeVector& e1, const ShapeVector& e2, int off) {
      switch (e.kind) {
        case Kind::Point: break;
        case Kind::Ray: g[off] = std::exp(x[off]) * e.v.dot(gcol); break;
        case Kind::Plane:
          g[off] = e1.dot(gcol);
          g[off + 1] = e2.dot(gcol);
          break;
      }
    };
    enc(bc.start, gw.col(0), se1, se2, 0);
    for (int j = 1; j < N; ++j) g.segment<3>(sd + 3 * (j - 1)) = gw.col(j);
    enc(bc.end, gw.col(N), ee1, ee2, end_offset());
    return g;
  }

  // 3 x k Jacobian of a node position in the variables, k = dofs at the node.
  void node_jacobian(const Eigen::VectorXd& x, int node, Eigen::Matrix3d& J, int& off,
                     int& k) const {
    if (node == 0) {
      k = sd;
      off = 0;
      if (sd == 1) J.col(0) = std::exp(x[0]) * bc.start.v;
      if (sd == 2) {
        J.col(0) = se1;
        J.col(1) = se2;
      }
    } else if (node == N) {
      k = ed;
      off = end_offset();
      if (ed == 1) J.col(0) = std::exp(x[off]) * bc.end.v;
      if (ed == 2) {
        J.col(0) = ee1;
        J.col(1) = ee2;
      }
    } else {
      k = 3;
      off = sd + 3 * (node - 1);
      J.setIdentity();
    }
  }
};

struct Problem {
  DofMap map;
  Terms tm;

  double eval_nodes(const Eigen::VectorXd& x, Eigen::Matrix3Xd* gw) const {
    Eigen::Matrix3Xd nodes;
    map.fill_nodes(x, nodes);
    if (gw) gw->setZero(3, map.N + 1);
    double val = 0.0;
    for (int k = 0; k < map.N; ++k) {
      Eigen::Vector3d ga, gb;
      val += segment_eval(tm, nodes.col(k), nodes.col(k + 1), gw ? &ga : nullptr,
                          gw ? &gb : nullptr);
      if (gw) {
        gw->col(k) += ga;
        gw->col(k + 1) += gb;
      }
    }
    return val;
  }

  double eval(const Eigen::VectorXd& x, Eigen::VectorXd* g) const {
    Eigen::Matrix3Xd gw;
    const double val = eval_nodes(x, g ? &gw : nullptr);
    if (g) *g = map.pull_gradient(x, gw);
    return val;
  }

  // +inf instead of a singularity throw; the line searches treat that as a
  // rejected trial.
  double safe(const Eigen::VectorXd& x, Eigen::VectorXd* g) const {
    try {
      return eval(x, g);
    } catch (const SingularityError&) {
      return kInf;
    }
  }

  // min over nodes and midpoints of d_ray / sqrt(rho), the scale-free
  // ray-approach monitor.
  double ray_proximity(const Eigen::VectorXd& x) const {
    Eigen::Matrix3Xd nodes;
    map.fill_nodes(x, nodes);
    double best = kInf;
    auto probe = [&](const ShapeVector& w) {
      const double rho = w.norm();
      if (rho <= 0.0) {
        best = 0.0;
        return;
      }
      for (Pair p : {Pair::P12, Pair::P23, Pair::P31})
        best = std::min(best, distance_to_binary_ray(w, p, *tm.mm) / std::sqrt(rho));
    };
    for (int j = 0; j <= map.N; ++j) probe(nodes.col(j));
    for (int k = 0; k < map.N; ++k) probe(0.5 * (nodes.col(k) + nodes.col(k + 1)));
    return best;
  }
};

Eigen::VectorXd lbfgs_direction(const std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& mem,
                                const Eigen::VectorXd& g) {
  Eigen::VectorXd q = g;
  std::vector<double> alpha(mem.size());
  for (int i = static_cast<int>(mem.size()) - 1; i >= 0; --i) {
    const auto& [s, y] = mem[i];
    const double rho = 1.0 / y.dot(s);
    alpha[i] = rho * s.dot(q);
    q -= alpha[i] * y;
  }
  if (!mem.empty()) {
    const auto& [s, y] = mem.back();
    q *= s.dot(y) / y.dot(y);
  }
  for (std::size_t i = 0; i < mem.size(); ++i) {
    const auto& [s, y] = mem[i];
    const double rho = 1.0 / y.dot(s);
    q += (alpha[i] - rho * y.dot(q)) * s;
  }
  return q;
}

struct DescentState {
  Eigen::VectorXd x;
  double f = kInf;
  Eigen::VectorXd g;
  int iters = 0;
  bool converged = false;
  bool proximity = false;
};

DescentState lbfgs(const Problem& pb, Eigen::VectorXd x, double tol, int maxit,
                   double prox_trigger) {
  DescentState st;
  Eigen::VectorXd g;
  double f = pb.safe(x, &g);
  if (!std::isfinite(f))
    throw ConvergenceError("descent started from an infeasible path (singular midpoint)");
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> mem;
  bool fresh = true;
  int it = 0;
  for (; it < maxit; ++it) {
    if (g.norm() <= tol) {
      st.converged = true;
      break;
    }
    Eigen::VectorXd p = -lbfgs_direction(mem, g);
    double dphi = g.dot(p);
    if (!(dphi < -1e-14 * g.norm() * p.norm())) {
      p = -g;
      dphi = -g.squaredNorm();
      mem.clear();
      fresh = true;
    }
    double alpha = fresh ? std::min(1.0, 1.0 / std::max(1.0, g.norm())) : 1.0;
    bool accepted = false;
    Eigen::VectorXd xn, gn;
    double fn = kInf;
    for (int ls = 0; ls < 70; ++ls) {
      xn = x + alpha * p;
      fn = pb.safe(xn, &gn);
      if (fn <= f + 1e-4 * alpha * dphi) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    Eigen::VectorXd s = xn - x;
    Eigen::VectorXd yv = gn - g;
    if (s.dot(yv) > 1e-10 * s.norm() * yv.norm()) {
      mem.emplace_back(std::move(s), std::move(yv));
      if (mem.size() > 10) mem.pop_front();
    }
    x = std::move(xn);
    f = fn;
    g = std::move(gn);
    fresh = false;
    if (prox_trigger > 0.0 && pb.ray_proximity(x) < prox_trigger) {
      st.proximity = true;
      ++it;
      break;
    }
  }
  st.x = std::move(x);
  st.f = f;
  st.g = std::move(g);
  st.iters = it;
  return st;
}

void add_block(std::vector<Eigen::Triplet<double>>& trips, const Eigen::MatrixXd& B, int row,
               int col) {
  for (int i = 0; i < B.rows(); ++i)
    for (int j = 0; j < B.cols(); ++j) trips.emplace_back(row + i, col + j, B(i, j));
}

// Hessian of the reduced functional: per-segment 6x6 central differences of
// the exact segment gradient, assembled block-tridiagonally and pulled onto
// the variables (plus the second-derivative term of the exponential ray
// parametrization).
Eigen::SparseMatrix<double> assemble_hessian(const Problem& pb, const Eigen::VectorXd& x,
                                             const Eigen::Matrix3Xd& gw) {
  const DofMap& map = pb.map;
  const int n = map.size();
  Eigen::Matrix3Xd nodes;
  map.fill_nodes(x, nodes);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(36) * map.N + 8);
  for (int seg = 0; seg < map.N; ++seg) {
    Eigen::Matrix<double, 6, 1> z;
    z << nodes.col(seg), nodes.col(seg + 1);
    const double h = 1e-6 * (1.0 + z.cwiseAbs().maxCoeff());
    Eigen::Matrix<double, 6, 6> H;
    for (int i = 0; i < 6; ++i) {
      Eigen::Matrix<double, 6, 1> zp = z, zm = z;
      zp[i] += h;
      zm[i] -= h;
      Eigen::Vector3d gap, gbp, gam, gbm;
      segment_eval(pb.tm, zp.head<3>(), zp.tail<3>(), &gap, &gbp);
      segment_eval(pb.tm, zm.head<3>(), zm.tail<3>(), &gam, &gbm);
      H.block<3, 1>(0, i) = (gap - gam) / (2.0 * h);
      H.block<3, 1>(3, i) = (gbp - gbm) / (2.0 * h);
    }
    H = (0.5 * (H + H.transpose())).eval();

    Eigen::Matrix3d Ja, Jb;
    int offa = 0, offb = 0, ka = 0, kb = 0;
    map.node_jacobian(x, seg, Ja, offa, ka);
    map.node_jacobian(x, seg + 1, Jb, offb, kb);
    if (ka > 0)
      add_block(trips, Ja.leftCols(ka).transpose() * H.topLeftCorner<3, 3>() * Ja.leftCols(ka),
                offa, offa);
    if (kb > 0)
      add_block(trips,
                Jb.leftCols(kb).transpose() * H.bottomRightCorner<3, 3>() * Jb.leftCols(kb),
                offb, offb);
    if (ka > 0 && kb > 0) {
      const Eigen::MatrixXd C =
          Ja.leftCols(ka).transpose() * H.topRightCorner<3, 3>() * Jb.leftCols(kb);
      add_block(trips, C, offa, offb);
      add_block(trips, C.transpose(), offb, offa);
    }
  }
  if (map.sd == 1) trips.emplace_back(0, 0, std::exp(x[0]) * map.bc.start.v.dot(gw.col(0)));
  if (map.ed == 1)
    trips.emplace_back(map.end_offset(), map.end_offset(),
                       std::exp(x[map.end_offset()]) * map.bc.end.v.dot(gw.col(map.N)));
  Eigen::SparseMatrix<double> H(n, n);
  H.setFromTriplets(trips.begin(), trips.end());
  return H;
}

DescentState newton_polish(const Problem& pb, Eigen::VectorXd x, double tol, int maxit) {
  DescentState st;
  Eigen::SparseMatrix<double> Id(pb.map.size(), pb.map.size());
  Id.setIdentity();
  for (int it = 0; it < maxit; ++it) {
    Eigen::Matrix3Xd gw;
    double f;
    try {
      f = pb.eval_nodes(x, &gw);
    } catch (const SingularityError& e) {
      throw ConvergenceError(std::string("polish hit a singular path: ") + e.what());
    }
    Eigen::VectorXd g = pb.map.pull_gradient(x, gw);
    st.x = x;
    st.f = f;
    st.g = g;
    st.iters = it;
    if (g.norm() <= tol) {
      st.converged = true;
      return st;
    }
    const Eigen::SparseMatrix<double> H = assemble_hessian(pb, x, gw);
    const double tau = std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
    double lambda = 0.0;
    bool stepped = false;
    while (!stepped) {
      Eigen::SparseMatrix<double> Hs = H;
      if (lambda > 0.0) Hs = H + lambda * Id;
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(Hs);
      if (solver.info() == Eigen::Success) {
        const Eigen::VectorXd p = solver.solve(-g);
        const double dphi = g.dot(p);
        if (std::isfinite(p.squaredNorm()) && dphi < 0.0) {
          double alpha = 1.0;
          for (int ls = 0; ls < 60; ++ls) {
            const Eigen::VectorXd xn = x + alpha * p;
            Eigen::VectorXd gn;
            const double fn = pb.safe(xn, &gn);
            const bool armijo = fn <= f + 1e-4 * alpha * dphi;
            // Near the floor of double precision the value plateaus; accept
            // steps that still shrink the gradient.
            const bool polishing =
                fn <= f + 1e-9 * (1.0 + std::abs(f)) && gn.size() > 0 && gn.norm() <= 0.9 * g.norm();
            if (armijo || polishing) {
              x = xn;
              stepped = true;
              break;
            }
            alpha *= 0.5;
          }
        }
      }
      if (!stepped) {
        lambda = lambda == 0.0 ? 1e-10 * tau : 10.0 * lambda;
        if (lambda > 1e14 * tau) return st;  // caller decides whether st.g is good enough
      }
    }
  }
  Eigen::VectorXd g;
  st.f = pb.safe(x, &g);
  st.g = g;
  st.x = std::move(x);
  st.iters = maxit;
  st.converged = st.g.norm() <= tol;
  return st;
}

ShapeVector in_plane(const ShapeVector& v, const ShapeVector& n) { return v - v.dot(n) * n; }

ShapeVector slerp_dir(const ShapeVector& u0, const ShapeVector& u1, double tau) {
  const double c = std::clamp(u0.dot(u1), -1.0, 1.0);
  const double ang = std::acos(c);
  if (ang < 1e-9) return ((1.0 - tau) * u0 + tau * u1).normalized();
  if (std::numbers::pi - ang < 1e-8) {
    // antipodal: route through a deterministic orthogonal waypoint
    const ShapeVector mid = u0.unitOrthogonal();
    return tau < 0.5 ? slerp_dir(u0, mid, 2.0 * tau) : slerp_dir(mid, u1, 2.0 * tau - 1.0);
  }
  return (std::sin((1.0 - tau) * ang) * u0 + std::sin(tau * ang) * u1) / std::sin(ang);
}

// Great-circle-like default guess: anchor directions on both boundary sets,
// spherical interpolation between them, linear radius, and a small
// deterministic interior perturbation so descent never starts on a symmetry
// plane of the functional.
Eigen::Matrix3Xd build_guess(const DofMap& map, std::uint64_t seed) {
  const auto& bs = map.bc.start;
  const auto& be = map.bc.end;
  double r0 = 0.5, r1 = 0.5;
  if (bs.kind == Kind::Point) r0 = bs.v.norm();
  if (be.kind == Kind::Point) r1 = be.v.norm();
  if (bs.kind == Kind::Point && be.kind != Kind::Point) r1 = r0;
  if (be.kind == Kind::Point && bs.kind != Kind::Point) r0 = r1;

  ShapeVector d0, d1;
  const ShapeVector zhat = ShapeVector::UnitZ();
  auto plane_target = [&](const BoundaryCondition::End& e, const ShapeVector& toward,
                          const ShapeVector& fallback) {
    ShapeVector h = in_plane(toward, e.v);
    if (h.norm() < 1e-9) h = fallback;
    h.normalize();
    ShapeVector zin = in_plane(zhat, e.v);
    if (zin.norm() < 1e-9) return h;
    return (h + zin.normalized()).normalized();
  };
  if (bs.kind == Kind::Plane && be.kind == Kind::Plane) {
    d0 = map.se1;
    d1 = plane_target(be, d0, map.ee1);
  } else if (bs.kind == Kind::Plane) {
    d1 = be.v.normalized();
    ShapeVector h = in_plane(d1, bs.v);
    d0 = h.norm() < 1e-9 ? map.se1 : h.normalized();
  } else {
    d0 = bs.v.normalized();
    d1 = be.kind == Kind::Plane ? plane_target(be, d0, map.ee1) : be.v.normalized();
  }

  Eigen::Matrix3Xd nodes(3, map.N + 1);
  for (int k = 0; k <= map.N; ++k) {
    const double tau = static_cast<double>(k) / map.N;
    nodes.col(k) = slerp_dir(d0, d1, tau) * (r0 + tau * (r1 - r0));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double amp = 0.005 * std::min(r0, r1);
  for (int k = 1; k < map.N; ++k) {
    const double window = std::sin(std::numbers::pi * k / map.N);
    for (int i = 0; i < 3; ++i) nodes(i, k) += amp * window * unif(rng);
  }
  return nodes;
}

}  // namespace

ActionEval discrete_action(const DiscretePath& path, const MassDistribution& mm,
                           bool with_potential) {
  const int N = path.segments();
  if (N < 1) throw ArgumentError("path needs at least one segment");
  if (!(path.T > 0.0)) throw ArgumentError("path duration must be positive");
  for (int j = 1; j < N; ++j) {
    const ShapeVector w = path.nodes.col(j);
    const double rho = w.norm();
    if (rho <= 0.0)
      throw SingularityError("node " + std::to_string(j) + " at the cone point");
    if (with_potential) {
      for (Pair p : {Pair::P12, Pair::P23, Pair::P31}) {
        if (distance_to_binary_ray(w, p, mm) <= 1e-12 * std::sqrt(rho))
          throw SingularityError("node " + std::to_string(j) + " on binary ray " +
                                 pair_name(p));
      }
    }
  }
  const Terms tm{&mm, path.dt(), with_potential, 0.0};
  ActionEval out;
  out.gradient = Eigen::Matrix3Xd::Zero(3, N + 1);
  for (int k = 0; k < N; ++k) {
    Eigen::Vector3d ga, gb;
    try {
      out.value += segment_eval(tm, path.nodes.col(k), path.nodes.col(k + 1), &ga, &gb);
    } catch (const SingularityError& e) {
      throw SingularityError("segment " + std::to_string(k) + ": " + e.what());
    }
    out.gradient.col(k) += ga;
    out.gradient.col(k + 1) += gb;
  }
  return out;
}

MinimizeResult minimize_arc(const BoundaryCondition& bc, double T, int N,
                            const MassDistribution& mm, const MinimizeOptions& opts) {
  if (!(T > 0.0)) throw ArgumentError("arc duration must be positive");
  if (N < 16) throw ArgumentError("minimize_arc needs at least 16 segments");
  if (!(opts.grad_tol > 0.0)) throw ArgumentError("gradient tolerance must be positive");
  const DofMap map = DofMap::make(bc, N);

  Eigen::Matrix3Xd guess;
  if (opts.initial) {
    if (opts.initial->segments() != N)
      throw ArgumentError("warm start has the wrong segment count");
    if (std::abs(opts.initial->T - T) > 1e-12 * std::max(1.0, T))
      throw ArgumentError("warm start has the wrong duration");
    guess = opts.initial->nodes;
  } else {
    guess = build_guess(map, opts.seed);
  }
  const Eigen::VectorXd x0 = map.from_nodes(guess);

  Problem pb;
  pb.map = map;
  pb.tm = Terms{&mm, T / N, opts.with_potential, 0.0};

  const double coarse_tol = std::max(1e-6, opts.grad_tol);
  // The ray monitor only matters when the potential (or barrier) is singular
  // on the rays.
  const double trigger = opts.with_potential ? 1e-3 : 0.0;
  int budget = opts.max_iterations;
  int used = 0;
  bool barrier_restart = false;

  DescentState st = lbfgs(pb, x0, coarse_tol, budget, trigger);
  used += st.iters;
  if (st.proximity) {
    barrier_restart = true;
    Eigen::VectorXd x = x0;
    for (double beta : {1e-3, 1e-5}) {
      pb.tm.barrier = beta;
      DescentState bs = lbfgs(pb, x, 1e-5, std::max(1, budget - used), 1e-7);
      used += bs.iters;
      if (bs.proximity)
        throw ConvergenceError(
            "descent keeps collapsing onto a binary ray even under a log barrier");
      x = std::move(bs.x);
    }
    pb.tm.barrier = 0.0;
    st = lbfgs(pb, x, coarse_tol, std::max(1, budget - used), trigger);
    used += st.iters;
    if (st.proximity)
      throw ConvergenceError("descent re-approached a binary ray after barrier continuation");
  }

  DescentState fin =
      newton_polish(pb, st.x, opts.grad_tol, std::max(1, std::min(80, budget - used)));
  used += fin.iters;
  if (!fin.converged) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "arc minimization stalled: gradient norm " << std::scientific << fin.g.norm()
        << " (target " << opts.grad_tol << "), action " << fin.f << ", " << used
        << " iterations";
    throw ConvergenceError(msg.str());
  }

  MinimizeResult out;
  out.path.T = T;
  pb.map.fill_nodes(fin.x, out.path.nodes);
  out.action = fin.f;
  out.grad_norm = fin.g.norm();
  out.iterations = used;
  out.barrier_restart = barrier_restart;
  return out;
}

DiscretePath refine_path(const DiscretePath& path) {
  const int N = path.segments();
  if (N < 1) throw ArgumentError("path needs at least one segment");
  DiscretePath fine;
  fine.T = path.T;
  fine.nodes.resize(3, 2 * N + 1);
  for (int k = 0; k < N; ++k) {
    fine.nodes.col(2 * k) = path.nodes.col(k);
    fine.nodes.col(2 * k + 1) = 0.5 * (path.nodes.col(k) + path.nodes.col(k + 1));
  }
  fine.nodes.col(2 * N) = path.nodes.col(N);
  return fine;
}

double el_residual(const DiscretePath& path, const MassDistribution& mm, bool with_potential) {
  const int N = path.segments();
  if (N < 2) throw ArgumentError("residual needs at least two segments");
  if (!(path.T > 0.0)) throw ArgumentError("path duration must be positive");
  const double dt = path.dt();
  double worst = 0.0;
  for (int j = 1; j < N; ++j) {
    const ShapeVector w = path.nodes.col(j);
    const Eigen::Vector3d vel = (path.nodes.col(j + 1) - path.nodes.col(j - 1)) / (2.0 * dt);
    const Eigen::Vector3d d2 =
        (path.nodes.col(j + 1) - 2.0 * path.nodes.col(j) + path.nodes.col(j - 1)) / (dt * dt);
    Eigen::Vector3d acc;
    if (with_potential) {
      acc = reduced_accelerations({w, vel}, mm);
    } else {
      const double rho = w.norm();
      if (rho <= 0.0) throw SingularityError("node " + std::to_string(j) + " at the cone point");
      acc = (w.dot(vel) / (rho * rho)) * vel -
            (vel.squaredNorm() / (2.0 * rho * rho)) * w;
    }
    worst = std::max(worst, (d2 - acc).norm() / (1.0 + acc.norm()));
  }
  return worst;
}

}  // namespace threebody

#include "threebody/shape_projection.hpp"

#include <cmath>

#include "threebody/core_model.hpp"
#include "threebody/errors.hpp"

namespace threebody {

JacobiCoordinates jacobi_from_config(const Config& q, const MassDistribution& mm) {
  const double m1 = mm.m[0], m2 = mm.m[1];
  JacobiCoordinates Z;
  Z.Z1 = mm.mu1 * (q[0] - q[1]);
  Z.Z2 = mm.mu2 * (q[2] - (m1 * q[0] + m2 * q[1]) / (m1 + m2));
  return Z;
}

JacobiCoordinates jacobi_velocity(const Config& v, const MassDistribution& mm) {
  return jacobi_from_config(v, mm);
}

Config config_from_jacobi(const JacobiCoordinates& Z, const MassDistribution& mm) {
  const double m1 = mm.m[0], m2 = mm.m[1], m3 = mm.m[2];
  const double m12 = m1 + m2;
  const Complex q3 = (m12 / (mm.M * mm.mu2)) * Z.Z2;
  const Complex p = -m3 * q3 / m12;              // barycenter of bodies 1 and 2
  const Complex d = Z.Z1 / mm.mu1;               // q1 - q2
  Config q;
  q[0] = p + (m2 / m12) * d;
  q[1] = p - (m1 / m12) * d;
  q[2] = q3;
  return q;
}

ShapeVector hopf_map(const JacobiCoordinates& Z) {
  const Complex cross = Z.Z1 * std::conj(Z.Z2);
  return {0.5 * (std::norm(Z.Z1) - std::norm(Z.Z2)), std::real(cross), std::imag(cross)};
}

ShapeVector project(const Config& q, const MassDistribution& mm) {
  return hopf_map(jacobi_from_config(q, mm));
}

SignedAreaCheck signed_area_check(const Config& q, const MassDistribution& mm) {
  SignedAreaCheck out;
  out.area = 0.5 * wedge(q[1] - q[0], q[2] - q[0]);
  out.w3 = project(q, mm)[2];
  out.ratio = out.w3 / (2.0 * mm.mu1 * mm.mu2 * out.area);
  return out;
}

Eigen::Matrix<double, 3, 4> hopf_differential(const JacobiCoordinates& Z) {
  const double x1 = std::real(Z.Z1), y1 = std::imag(Z.Z1);
  const double x2 = std::real(Z.Z2), y2 = std::imag(Z.Z2);
  Eigen::Matrix<double, 3, 4> L;
  L << x1, y1, -x2, -y2,
       x2, y2, x1, y1,
       -y2, x2, y1, -x1;
  return L;
}

namespace {

Eigen::Vector4d as_real4(const JacobiCoordinates& Z) {
  return {std::real(Z.Z1), std::imag(Z.Z1), std::real(Z.Z2), std::imag(Z.Z2)};
}

JacobiCoordinates from_real4(const Eigen::Vector4d& z) {
  return {Complex{z[0], z[1]}, Complex{z[2], z[3]}};
}

}  // namespace

Eigen::Vector3d pushforward_velocity(const PhaseState& s, const MassDistribution& mm) {
  const JacobiCoordinates Z = jacobi_from_config(s.q, mm);
  const JacobiCoordinates Zd = jacobi_velocity(s.v, mm);
  return hopf_differential(Z) * as_real4(Zd);
}

ReducedState project_state(const PhaseState& s, const MassDistribution& mm) {
  return {project(s.q, mm), pushforward_velocity(s, mm)};
}

Config reconstruct_config(const ShapeVector& w, const MassDistribution& mm) {
  const double n = w.norm();
  JacobiCoordinates Z;
  const double z1sq = n + w[0];
  // The gauge freedom is one overall rotation of (Z1, Z2); fix Z1 real and
  // nonnegative, falling back to Z2 real on the Z1 = 0 ray.
  if (z1sq > 1e-15 * n) {
    const double z1 = std::sqrt(z1sq);
    Z.Z1 = z1;
    Z.Z2 = Complex{w[1], -w[2]} / z1;
  } else {
    Z.Z1 = 0.0;
    Z.Z2 = std::sqrt(2.0 * n);
  }
  return config_from_jacobi(Z, mm);
}

Config horizontal_velocity(const Config& q, const Eigen::Vector3d& wdot,
                           const MassDistribution& mm) {
  const JacobiCoordinates Z = jacobi_from_config(q, mm);
  const double nsq = std::norm(Z.Z1) + std::norm(Z.Z2);
  if (nsq <= 0.0) throw SingularityError("no horizontal lift at the triple collision");
  const Eigen::Matrix<double, 3, 4> L = hopf_differential(Z);
  // L L^T = ||Z||^2 Id, so the minimum-norm (horizontal) preimage is explicit.
  const Eigen::Vector4d zdot = L.transpose() * wdot / nsq;
  return config_from_jacobi(from_real4(zdot), mm);
}

PhaseState horizontal_lift(const ReducedState& rs, const MassDistribution& mm) {
  PhaseState s;
  s.q = reconstruct_config(rs.w, mm);
  s.v = horizontal_velocity(s.q, rs.wdot, mm);
  return s;
}

}  // namespace threebody

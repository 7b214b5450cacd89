#include "threebody/shape_geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "threebody/core_model.hpp"
#include "threebody/errors.hpp"
#include "threebody/shape_projection.hpp"
#include "threebody/solutions.hpp"

namespace threebody {

double metric_factor(const ShapeVector& w) {
  const double n = w.norm();
  if (n <= 0.0) throw SingularityError("shape metric is singular at the cone point");
  return 1.0 / (2.0 * n);
}

double shape_speed(const ShapeVector& w, const Eigen::Vector3d& wdot) {
  return wdot.norm() * std::sqrt(metric_factor(w));
}

double shape_distance(const ShapeVector& a, const ShapeVector& b) {
  const double na = a.norm(), nb = b.norm();
  const double cross = std::max(0.0, 2.0 * (na * nb + a.dot(b)));
  const double dsq = 2.0 * na + 2.0 * nb - 2.0 * std::sqrt(cross);
  return std::sqrt(std::max(0.0, dsq));
}

BinaryRay binary_ray(Pair p, const MassDistribution& mm) {
  // Project an explicit two-bodies-coincident configuration; any point of the
  // ray works since pi is homogeneous along it.
  const int i = pair_first(p), j = pair_second(p);
  const int k = 3 - i - j;
  Config q;
  q[i] = 1.0;
  q[j] = 1.0;
  q[k] = -(mm.m[i] + mm.m[j]) / mm.m[k];
  const ShapeVector w = project(q, mm);
  return {p, w.normalized()};
}

double distance_to_binary_ray(const ShapeVector& w, Pair p, const MassDistribution& mm) {
  const BinaryRay b = binary_ray(p, mm);
  return std::sqrt(std::max(0.0, w.norm() - w.dot(b.direction)));
}

Eigen::Vector3d side_lengths_from_shape(const ShapeVector& w, const MassDistribution& mm) {
  Eigen::Vector3d r;
  for (Pair p : {Pair::P12, Pair::P23, Pair::P31}) {
    const double mi = mm.m[pair_first(p)], mj = mm.m[pair_second(p)];
    const double d = distance_to_binary_ray(w, p, mm);
    r[pair_index(p)] = d * std::sqrt((mi + mj) / (mi * mj));
  }
  return r;
}

namespace {

// d_ij for all pairs at once, plus the ray directions.
struct RayDistances {
  std::array<ShapeVector, 3> b;
  Eigen::Vector3d d;
};

RayDistances ray_distances(const ShapeVector& w, const MassDistribution& mm) {
  RayDistances out;
  const double n = w.norm();
  for (Pair p : {Pair::P12, Pair::P23, Pair::P31}) {
    out.b[pair_index(p)] = binary_ray(p, mm).direction;
    out.d[pair_index(p)] = std::sqrt(std::max(0.0, n - w.dot(out.b[pair_index(p)])));
  }
  return out;
}

}  // namespace

double shape_potential(const ShapeVector& w, const MassDistribution& mm) {
  const RayDistances rd = ray_distances(w, mm);
  const double scale = std::sqrt(w.norm());
  double u = 0.0;
  for (Pair p : {Pair::P12, Pair::P23, Pair::P31}) {
    const int k = pair_index(p);
    if (rd.d[k] <= 1e-15 * scale)
      throw SingularityError(std::string("shape potential singular on binary ray ") +
                             pair_name(p));
    u += mm.c_pair[k] / rd.d[k];
  }
  return u;
}

Eigen::Vector3d shape_potential_gradient(const ShapeVector& w, const MassDistribution& mm) {
  const RayDistances rd = ray_distances(w, mm);
  const double n = w.norm();
  const double scale = std::sqrt(n);
  const ShapeVector what = w / n;
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  for (Pair p : {Pair::P12, Pair::P23, Pair::P31}) {
    const int k = pair_index(p);
    if (rd.d[k] <= 1e-15 * scale)
      throw SingularityError(std::string("shape potential singular on binary ray ") +
                             pair_name(p));
    g -= mm.c_pair[k] * (what - rd.b[k]) / (2.0 * rd.d[k] * rd.d[k] * rd.d[k]);
  }
  return g;
}

double cone_circle_length(const ShapeVector& plane_normal, double r) {
  if (!(r > 0.0)) throw ArgumentError("cone circle radius must be positive");
  const ShapeVector n = plane_normal.normalized();
  // Orthonormal basis of the plane.
  ShapeVector e1 = n.unitOrthogonal();
  ShapeVector e2 = n.cross(e1);
  const double R = 0.5 * r * r;  // Euclidean radius of the geodesic circle
  // Composite Simpson over the angle.
  const int panels = 512;
  const double dphi = 2.0 * std::numbers::pi / panels;
  auto speed = [&](double phi) {
    const ShapeVector w = R * (std::cos(phi) * e1 + std::sin(phi) * e2);
    const Eigen::Vector3d dw = R * (-std::sin(phi) * e1 + std::cos(phi) * e2);
    return shape_speed(w, dw);
  };
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = k * dphi;
    sum += dphi / 6.0 * (speed(a) + 4.0 * speed(a + 0.5 * dphi) + speed(a + dphi));
  }
  return sum;
}

EqualMassSymmetries equal_mass_symmetries(const MassDistribution& mm) {
  if (!mm.is_equal())
    throw UnsupportedError("the discrete symmetry set is only exposed for equal masses");
  // B_i = collision ray of the pair not containing body i; EUL_i = -B_i.
  std::array<ShapeVector, 3> B;
  B[0] = binary_ray(Pair::P23, mm).direction;
  B[1] = binary_ray(Pair::P31, mm).direction;
  B[2] = binary_ray(Pair::P12, mm).direction;
  EqualMassSymmetries s;
  for (int i = 0; i < 3; ++i) {
    // Isosceles plane of body i: equal distance to the other two, i.e. w
    // equidistant from the two rays of pairs containing i.
    const Pair pj = pair_of(i, (i + 1) % 3);
    const Pair pk = pair_of(i, (i + 2) % 3);
    const ShapeVector nrm =
        (binary_ray(pj, mm).direction - binary_ray(pk, mm).direction).normalized();
    s.reflection[i] = Eigen::Matrix3d::Identity() - 2.0 * nrm * nrm.transpose();
    s.half_twist[i] = 2.0 * B[i] * B[i].transpose() - Eigen::Matrix3d::Identity();
  }
  return s;
}

SpecialPoints special_points(const MassDistribution& mm) {
  SpecialPoints sp;
  const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  Config equilateral;
  equilateral << Complex{1.0, 0.0}, omega, omega * omega;
  sp.lagrange_plus = project(equilateral, mm).normalized();
  sp.lagrange_minus = project(equilateral.conjugate(), mm).normalized();
  for (Pair p : {Pair::P12, Pair::P23, Pair::P31})
    sp.binary[pair_index(p)] = binary_ray(p, mm).direction;
  const auto eulers = find_euler_configs(mm);
  for (int i = 0; i < 3; ++i) sp.euler[i] = project(eulers[i].q0, mm).normalized();
  for (int i = 0; i < 3; ++i) {
    const Pair pj = pair_of(i, (i + 1) % 3);
    const Pair pk = pair_of(i, (i + 2) % 3);
    sp.isosc_plane_normals[i] =
        (sp.binary[pair_index(pj)] - sp.binary[pair_index(pk)]).normalized();
  }
  return sp;
}

}  // namespace threebody

#pragma once

#include <array>

#include "threebody/types.hpp"

namespace threebody {

/// Conformal factor of the shape metric ds^2 = ||dw||^2 / (2||w||).
/// Throws SingularityError at the cone point w = 0.
double metric_factor(const ShapeVector& w);

/// Metric speed of a shape-space velocity: ||wdot|| / sqrt(2||w||).
double shape_speed(const ShapeVector& w, const Eigen::Vector3d& wdot);

/// Quotient distance between two shapes,
/// d^2 = 2||a|| + 2||b|| - 2 sqrt(2(||a|| ||b|| + a.b)).
double shape_distance(const ShapeVector& a, const ShapeVector& b);

/// Unit direction of the shapes with bodies i and j coincident. Always lies
/// in the collinear plane w3 = 0.
struct BinaryRay {
  Pair pair;
  ShapeVector direction;
};

BinaryRay binary_ray(Pair p, const MassDistribution& mm);

/// d_ij = sqrt(||w|| - w . b_ij), the shape-metric distance to the ray.
double distance_to_binary_ray(const ShapeVector& w, Pair p, const MassDistribution& mm);

/// Side lengths recovered from the shape alone:
/// r_ij^2 = ((m_i + m_j)/(m_i m_j)) (||w|| - w . b_ij). Ordered (12, 23, 31).
Eigen::Vector3d side_lengths_from_shape(const ShapeVector& w, const MassDistribution& mm);

/// U as a function on shape space, sum of c_ij / d_ij. Agrees with
/// potential_U of any lift. Throws SingularityError on a binary ray.
double shape_potential(const ShapeVector& w, const MassDistribution& mm);

/// Euclidean-coordinate gradient of shape_potential,
/// grad U = -sum c_ij (what - b_ij) / (2 d_ij^3).
Eigen::Vector3d shape_potential_gradient(const ShapeVector& w, const MassDistribution& mm);

/// Metric length of the locus at geodesic radius r from the cone point inside
/// the plane through the origin with the given normal, by numerical
/// quadrature. Comes out as pi r for every plane: the cone angle is half the
/// flat one.
double cone_circle_length(const ShapeVector& plane_normal, double r);

/// The linear isometries of shape space fixing the equal-mass potential:
/// reflections across the three isosceles planes (body i equidistant from the
/// other two) and half-twists about the three Euler/binary axes. Indexed by
/// body i - 1. Throws UnsupportedError for unequal masses.
struct EqualMassSymmetries {
  std::array<Eigen::Matrix3d, 3> reflection;
  std::array<Eigen::Matrix3d, 3> half_twist;

  std::array<Eigen::Matrix3d, 6> all() const {
    return {reflection[0], reflection[1], reflection[2],
            half_twist[0], half_twist[1], half_twist[2]};
  }
};

EqualMassSymmetries equal_mass_symmetries(const MassDistribution& mm);

/// Landmark directions on the unit shape sphere. euler[i] and
/// isosc_plane_normals[i] are indexed by the distinguished body i + 1;
/// binary[] is indexed by Pair. isosc_plane_normals[i] is the normal of the
/// plane equidistant from the two collision rays involving body i; for equal
/// masses that plane is exactly the locus of triangles isosceles about body i
/// (for unequal masses the isosceles locus is not planar).
struct SpecialPoints {
  ShapeVector lagrange_plus;
  ShapeVector lagrange_minus;
  std::array<ShapeVector, 3> euler;
  std::array<ShapeVector, 3> binary;
  std::array<ShapeVector, 3> isosc_plane_normals;
};

SpecialPoints special_points(const MassDistribution& mm);

}  // namespace threebody

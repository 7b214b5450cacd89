#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace threebody {

using Complex = std::complex<double>;

/// Positions (or velocities) of the three vertices as points of the complex plane.
using Config = Eigen::Vector3cd;
using PlanarConfiguration = Config;

/// A point w = (w1, w2, w3) of shape space. ||w|| equals I/2 for projected
/// configurations; the cone point w = 0 is triple collision.
using ShapeVector = Eigen::Vector3d;

/// Index of an unordered body pair. Values chosen so that pairwise quantities
/// (separations, reduced masses, collision rays) can live in plain Vector3d
/// slots ordered (12, 23, 31).
enum class Pair : int { P12 = 0, P23 = 1, P31 = 2 };

constexpr int pair_index(Pair p) { return static_cast<int>(p); }
constexpr int pair_first(Pair p) { return p == Pair::P12 ? 0 : (p == Pair::P23 ? 1 : 2); }
constexpr int pair_second(Pair p) { return p == Pair::P12 ? 1 : (p == Pair::P23 ? 2 : 0); }
constexpr Pair pair_of(int i, int j) {
  return (i + j) == 1 ? Pair::P12 : ((i + j) == 3 ? Pair::P23 : Pair::P31);
}
const char* pair_name(Pair p);

/// Three masses plus every derived constant the shape-space formulas need.
/// Immutable after construction; build through make().
struct MassDistribution {
  Eigen::Vector3d m;        ///< m1, m2, m3
  double M = 0.0;           ///< total mass
  double mu1 = 0.0;         ///< Jacobi normalizer, 1/mu1^2 = 1/m1 + 1/m2
  double mu2 = 0.0;         ///< Jacobi normalizer, 1/mu2^2 = 1/m3 + 1/(m1+m2)
  Eigen::Vector3d mu_pair;  ///< reduced masses m_i m_j / (m_i + m_j), ordered (12, 23, 31)
  Eigen::Vector3d c_pair;   ///< shape potential coefficients m_i m_j sqrt(mu_ij)

  /// Throws ArgumentError unless all masses are strictly positive.
  static MassDistribution make(double m1, double m2, double m3);

  double mu(Pair p) const { return mu_pair[pair_index(p)]; }
  double c(Pair p) const { return c_pair[pair_index(p)]; }
  bool is_equal(double rel_tol = 1e-12) const;
};

/// Full phase point: positions and velocities.
struct PhaseState {
  Config q;
  Config v;
};

/// Point of the reduced (shape space) phase space.
struct ReducedState {
  ShapeVector w;
  Eigen::Vector3d wdot;
};

/// Translation-reduced configuration coordinates.
struct JacobiCoordinates {
  Complex Z1;  ///< mu1 (q1 - q2)
  Complex Z2;  ///< mu2 (q3 - (m1 q1 + m2 q2)/(m1 + m2))
};

enum class Termination {
  TimeReached,
  Collision,
  Escape,
  StepUnderflow,
  Singularity,
};
const char* termination_name(Termination t);

/// Conserved-quantity samples recorded alongside every trajectory point.
/// For reduced runs H holds the reduced energy and P, J are identically zero.
struct SampleDiagnostics {
  double H = 0.0;
  double J = 0.0;
  Complex P{0.0, 0.0};
  double I = 0.0;
};

/// One accepted integrator step's interpolation polynomial, kept so that
/// events can be refined without re-integrating. Evaluation is defined in
/// the integrator module.
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  std::vector<Eigen::VectorXd> r;  ///< interpolation coefficients in the method's basis

  Eigen::VectorXd eval(double t) const;
  Eigen::VectorXd eval_theta(double theta) const;
};

/// Time-stamped integration result, full or reduced. Exactly one of
/// states/rstates is populated, matching the flag.
struct Trajectory {
  bool reduced = false;
  std::vector<double> times;
  std::vector<PhaseState> states;
  std::vector<ReducedState> rstates;
  std::vector<SampleDiagnostics> diagnostics;
  std::vector<DenseSegment> dense;  ///< per accepted step; not serialized
  Termination termination = Termination::TimeReached;
  std::string termination_detail;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  double t_front() const { return times.front(); }
  double t_back() const { return times.back(); }
};

enum class Method { RK4Fixed, Dopri54 };

/// Knobs for both the full and the reduced integrator.
struct IntegratorConfig {
  Method method = Method::Dopri54;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double max_step = 1.0;
  double min_step = 1e-14;
  double fixed_step = 1e-3;      ///< RK4Fixed only
  /// Separation below which a run terminates with a collision reason.
  /// Zero means: derive from the initial state as 1e-9 * sqrt(I_cm / M).
  double collision_radius = 0.0;
  double escape_factor = 1e6;    ///< terminate when I_cm exceeds this multiple of its initial value
  /// When positive, record samples on a uniform grid of this spacing instead
  /// of at every accepted step. Dense segments are kept either way.
  double sample_dt = 0.0;

  void validate() const;  ///< throws ArgumentError on bad settings
};

/// Uniform-in-time discretized curve in shape space.
struct DiscretePath {
  Eigen::Matrix3Xd nodes;  ///< columns w_0 .. w_N
  double T = 0.0;          ///< total duration

  int segments() const { return static_cast<int>(nodes.cols()) - 1; }
  double dt() const { return T / segments(); }
};

/// Endpoint constraint for arc minimization. Kind::Point pins the node,
/// Kind::Ray lets it slide along {s u : s > 0}, Kind::Plane lets it move in
/// the plane through the origin with the given unit normal.
struct BoundaryCondition {
  enum class Kind { Point, Ray, Plane };

  struct End {
    Kind kind = Kind::Point;
    ShapeVector v = ShapeVector::Zero();  ///< point, ray direction, or plane normal
  };

  End start;
  End end;

  static End point(const ShapeVector& w) { return {Kind::Point, w}; }
  static End ray(const ShapeVector& u) { return {Kind::Ray, u.normalized()}; }
  static End plane(const ShapeVector& n) { return {Kind::Plane, n.normalized()}; }
};

}  // namespace threebody

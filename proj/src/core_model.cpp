#include "threebody/core_model.hpp"

#include <cmath>
#include <string>

#include "threebody/errors.hpp"

namespace threebody {

const char* pair_name(Pair p) {
  switch (p) {
    case Pair::P12: return "12";
    case Pair::P23: return "23";
    default: return "31";
  }
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::TimeReached: return "time-reached";
    case Termination::Collision: return "collision";
    case Termination::Escape: return "escape";
    case Termination::StepUnderflow: return "step-underflow";
    default: return "singularity";
  }
}

MassDistribution MassDistribution::make(double m1, double m2, double m3) {
  if (!(m1 > 0.0) || !(m2 > 0.0) || !(m3 > 0.0))
    throw ArgumentError("masses must be strictly positive");
  MassDistribution mm;
  mm.m << m1, m2, m3;
  mm.M = m1 + m2 + m3;
  mm.mu1 = 1.0 / std::sqrt(1.0 / m1 + 1.0 / m2);
  mm.mu2 = 1.0 / std::sqrt(1.0 / m3 + 1.0 / (m1 + m2));
  for (Pair p : {Pair::P12, Pair::P23, Pair::P31}) {
    const double mi = mm.m[pair_first(p)];
    const double mj = mm.m[pair_second(p)];
    mm.mu_pair[pair_index(p)] = mi * mj / (mi + mj);
    mm.c_pair[pair_index(p)] = mi * mj * std::sqrt(mm.mu_pair[pair_index(p)]);
  }
  return mm;
}

bool MassDistribution::is_equal(double rel_tol) const {
  const double avg = M / 3.0;
  return (m.array() - avg).abs().maxCoeff() <= rel_tol * avg;
}

Complex mass_inner(const Config& v, const Config& w, const MassDistribution& mm) {
  Complex s{0.0, 0.0};
  for (int i = 0; i < 3; ++i) s += mm.m[i] * std::conj(v[i]) * w[i];
  return s;
}

Eigen::Vector3d pairwise_separations(const Config& q) {
  return {std::abs(q[0] - q[1]), std::abs(q[1] - q[2]), std::abs(q[2] - q[0])};
}

namespace {

// Collision threshold for domain errors: tiny relative to the configuration's
// own size so that forces have overflowed long before it trips.
double collision_threshold(const Config& q, const MassDistribution& mm) {
  return 1e-12 * length_scale(q, mm);
}

void require_no_collision(const Config& q, const MassDistribution& mm) {
  const Eigen::Vector3d r = pairwise_separations(q);
  const double thresh = collision_threshold(q, mm);
  for (Pair p : {Pair::P12, Pair::P23, Pair::P31}) {
    if (r[pair_index(p)] <= thresh) {
      throw CollisionError(std::string("bodies ") + pair_name(p) + " collide",
                           pair_first(p) + 1, pair_second(p) + 1);
    }
  }
}

}  // namespace

double potential_V(const Config& q, const MassDistribution& mm) {
  require_no_collision(q, mm);
  const Eigen::Vector3d r = pairwise_separations(q);
  double v = 0.0;
  for (Pair p : {Pair::P12, Pair::P23, Pair::P31})
    v -= mm.m[pair_first(p)] * mm.m[pair_second(p)] / r[pair_index(p)];
  return v;
}

double potential_U(const Config& q, const MassDistribution& mm) {
  return -potential_V(q, mm);
}

double kinetic_energy(const Config& v, const MassDistribution& mm) {
  double k = 0.0;
  for (int i = 0; i < 3; ++i) k += mm.m[i] * std::norm(v[i]);
  return 0.5 * k;
}

double total_energy(const PhaseState& s, const MassDistribution& mm) {
  return kinetic_energy(s.v, mm) + potential_V(s.q, mm);
}

Config accelerations(const Config& q, const MassDistribution& mm) {
  require_no_collision(q, mm);
  Config a = Config::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (j == i) continue;
      const Complex d = q[j] - q[i];
      const double r = std::abs(d);
      a[i] += mm.m[j] * d / (r * r * r);
    }
  }
  return a;
}

Config grad_V(const Config& q, const MassDistribution& mm) {
  return -accelerations(q, mm);
}

Complex linear_momentum(const PhaseState& s, const MassDistribution& mm) {
  Complex p{0.0, 0.0};
  for (int i = 0; i < 3; ++i) p += mm.m[i] * s.v[i];
  return p;
}

Complex center_of_mass(const Config& q, const MassDistribution& mm) {
  Complex c{0.0, 0.0};
  for (int i = 0; i < 3; ++i) c += mm.m[i] * q[i];
  return c / mm.M;
}

double angular_momentum(const PhaseState& s, const MassDistribution& mm) {
  return std::imag(mass_inner(s.q, s.v, mm));
}

double moment_of_inertia(const Config& q, const MassDistribution& mm) {
  double i = 0.0;
  for (int k = 0; k < 3; ++k) i += mm.m[k] * std::norm(q[k]);
  return i;
}

double moment_of_inertia_cm(const Config& q, const MassDistribution& mm) {
  const Complex c = center_of_mass(q, mm);
  const double i = moment_of_inertia(q, mm) - mm.M * std::norm(c);
  return std::max(i, 0.0);
}

double length_scale(const Config& q, const MassDistribution& mm) {
  return std::sqrt(moment_of_inertia_cm(q, mm) / mm.M);
}

Config center_config(const Config& q, const MassDistribution& mm) {
  const Complex c = center_of_mass(q, mm);
  return q - Config::Constant(c);
}

double inertia_second_derivative(const PhaseState& s, const MassDistribution& mm) {
  const Config a = accelerations(s.q, mm);
  return 2.0 * std::real(mass_inner(s.v, s.v, mm)) + 2.0 * std::real(mass_inner(s.q, a, mm));
}

double lagrange_jacobi_residual(const Trajectory& traj, const MassDistribution& mm) {
  if (traj.reduced) throw ArgumentError("lagrange_jacobi_residual needs a full trajectory");
  if (traj.size() < 3) throw ArgumentError("need at least three samples");
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
    const double hm = traj.times[k] - traj.times[k - 1];
    const double hp = traj.times[k + 1] - traj.times[k];
    const double Im = moment_of_inertia(traj.states[k - 1].q, mm);
    const double I0 = moment_of_inertia(traj.states[k].q, mm);
    const double Ip = moment_of_inertia(traj.states[k + 1].q, mm);
    // second difference on a nonuniform grid
    const double idd = 2.0 * (Im / (hm * (hm + hp)) - I0 / (hm * hp) + Ip / (hp * (hm + hp)));
    const double h = total_energy(traj.states[k], mm);
    const double u = potential_U(traj.states[k].q, mm);
    worst = std::max(worst, std::abs(idd - (4.0 * h + 2.0 * u)));
  }
  return worst;
}

void IntegratorConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw ArgumentError("integrator tolerances must be strictly positive");
  if (!(min_step > 0.0) || !(max_step > 0.0) || min_step > max_step)
    throw ArgumentError("integrator steps must satisfy 0 < min_step <= max_step");
  if (method == Method::RK4Fixed && !(fixed_step > 0.0))
    throw ArgumentError("fixed_step must be positive");
  if (collision_radius < 0.0) throw ArgumentError("collision_radius must be nonnegative");
  if (!(escape_factor > 1.0)) throw ArgumentError("escape_factor must exceed 1");
  if (sample_dt < 0.0) throw ArgumentError("sample_dt must be nonnegative");
}

}  // namespace threebody

#include "threebody/syzygy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "threebody/core_model.hpp"
#include "threebody/errors.hpp"
#include "threebody/integrator.hpp"
#include "threebody/shape_geometry.hpp"
#include "threebody/shape_projection.hpp"

namespace threebody {

namespace {

ShapeVector shape_of_sample(const Trajectory& traj, std::size_t k, const MassDistribution& mm) {
  if (traj.reduced) return traj.rstates[k].w;
  return project(traj.states[k].q, mm);
}

ShapeVector shape_of_packed(const Eigen::VectorXd& y, bool reduced, const MassDistribution& mm) {
  if (reduced) return ShapeVector(y.head<3>());
  return project(unpack_state(y).q, mm);
}

int middle_body(const ShapeVector& w, const MassDistribution& mm) {
  const Eigen::Vector3d r = side_lengths_from_shape(w, mm);
  int longest = 0;
  r.maxCoeff(&longest);
  // The body absent from the longest (outer) pair sits between the other two.
  switch (static_cast<Pair>(longest)) {
    case Pair::P12: return 3;
    case Pair::P23: return 1;
    default: return 2;
  }
}

}  // namespace

int SyzygyReport::count() const {
  return static_cast<int>(std::count_if(events.begin(), events.end(), [](const SyzygyEvent& e) {
    return !e.grazing && !e.collision_graze;
  }));
}

SyzygyReport detect_syzygies(const Trajectory& traj, const MassDistribution& mm) {
  if (traj.empty()) throw ArgumentError("detect_syzygies: empty trajectory");

  double wmax = 0.0, w3max = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const ShapeVector w = shape_of_sample(traj, k, mm);
    wmax = std::max(wmax, w.norm());
    w3max = std::max(w3max, std::abs(w[2]));
  }

  SyzygyReport report;
  if (w3max <= 1e-10 * wmax) {
    report.identically_collinear = true;
    return report;
  }

  const bool reduced = traj.reduced;
  Observable w3 = [&](double, const Eigen::VectorXd& y) {
    return shape_of_packed(y, reduced, mm)[2];
  };

  // Deserialized trajectories carry no dense output; detect on the samples.
  const std::vector<Event> raw =
      traj.dense.empty() ? detect_events_sampled(traj, w3) : detect_events(traj, w3);
  for (const Event& ev : raw) {
    SyzygyEvent se;
    se.t = ev.t;
    se.w = shape_of_packed(ev.y, reduced, mm);
    se.grazing = ev.grazing;
    const double wn = se.w.norm();
    double dmin = std::numeric_limits<double>::infinity();
    for (Pair p : {Pair::P12, Pair::P23, Pair::P31})
      dmin = std::min(dmin, distance_to_binary_ray(se.w, p, mm));
    se.collision_graze = wn <= 0.0 || dmin < 1e-6 * std::sqrt(wn);
    se.middle = se.collision_graze ? 0 : middle_body(se.w, mm);
    report.events.push_back(se);
  }
  return report;
}

std::string syzygy_sequence(const std::vector<SyzygyEvent>& events) {
  std::string word;
  for (const SyzygyEvent& e : events)
    if (!e.grazing && !e.collision_graze) word.push_back(static_cast<char>('0' + e.middle));
  return word;
}

TheoremHypotheses hypothesis_check(const PhaseState& s, const MassDistribution& mm,
                                   double j_tol) {
  TheoremHypotheses h;
  h.H = total_energy(s, mm);
  h.J = angular_momentum(s, mm);
  h.negative_energy = h.H < 0.0;
  h.zero_angular_momentum = std::abs(h.J) <= j_tol;
  h.applies = h.negative_energy && h.zero_angular_momentum;
  return h;
}

}  // namespace threebody

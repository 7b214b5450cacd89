#include <cmath>
#include <numbers>

#include "threebody/core_model.hpp"
#include "threebody/errors.hpp"
#include "threebody/solutions.hpp"

namespace threebody {

const char* central_config_kind_name(CentralConfigKind k) {
  switch (k) {
    case CentralConfigKind::Euler1: return "euler-1";
    case CentralConfigKind::Euler2: return "euler-2";
    case CentralConfigKind::Euler3: return "euler-3";
    case CentralConfigKind::LagrangePlus: return "lagrange-+";
    default: return "lagrange--";
  }
}

double central_configuration_residual(const Config& q0, const MassDistribution& mm) {
  const Config qc = center_config(q0, mm);
  const double I = moment_of_inertia(qc, mm);
  const double c = -potential_V(qc, mm) / I;
  // grad V - (c/2) grad I, with grad I = 2q in the mass metric
  const Config res = grad_V(qc, mm) - c * qc;
  return std::sqrt(std::real(mass_inner(res, res, mm)));
}

namespace {

Config normalize_central(Config q, const MassDistribution& mm) {
  q = center_config(q, mm);
  return q / std::sqrt(moment_of_inertia(q, mm));
}

// Collinear configuration for middle body k: outer bodies i < j at -1 and x.
Config collinear_config(int k, double x) {
  int outer[2], n = 0;
  for (int b = 0; b < 3; ++b)
    if (b != k) outer[n++] = b;
  Config q;
  q[outer[0]] = -1.0;
  q[k] = 0.0;
  q[outer[1]] = x;
  return q;
}

// Difference of the per-body multipliers c_i = -a_i/(q_i - q_cm) between the
// two outer bodies; the Euler configuration is its unique root in x > 0.
double euler_balance(int k, double x, const MassDistribution& mm) {
  const Config q = collinear_config(k, x);
  const Config qc = center_config(q, mm);
  const Config a = accelerations(q, mm);
  int outer[2], n = 0;
  for (int b = 0; b < 3; ++b)
    if (b != k) outer[n++] = b;
  const double ci = -std::real(a[outer[0]]) / std::real(qc[outer[0]]);
  const double cj = -std::real(a[outer[1]]) / std::real(qc[outer[1]]);
  return ci - cj;
}

CentralConfiguration solve_euler(int k, const MassDistribution& mm) {
  // Bracket the balance root; f -> -inf as x -> 0+ (body j crashes into k)
  // and f -> +inf as x -> inf by the same blowup on the other side.
  double lo = 1e-6, hi = 1.0;
  while (euler_balance(k, lo, mm) > 0.0) {
    lo *= 0.5;
    if (lo < 1e-12) throw ConvergenceError("euler bracket: lower end not found");
  }
  while (euler_balance(k, hi, mm) < 0.0) {
    hi *= 2.0;
    if (hi > 1e12) throw ConvergenceError("euler bracket: upper end not found");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;  // bracket at machine resolution
    (euler_balance(k, mid, mm) < 0.0 ? lo : hi) = mid;
  }
  CentralConfiguration cc;
  cc.q0 = normalize_central(collinear_config(k, 0.5 * (lo + hi)), mm);
  cc.multiplier = potential_U(cc.q0, mm);
  cc.kind = k == 0 ? CentralConfigKind::Euler1
                   : (k == 1 ? CentralConfigKind::Euler2 : CentralConfigKind::Euler3);
  const double res = central_configuration_residual(cc.q0, mm);
  if (res > 1e-12) throw ConvergenceError("euler configuration residual above 1e-12");
  return cc;
}

}  // namespace

std::array<CentralConfiguration, 3> find_euler_configs(const MassDistribution& mm) {
  return {solve_euler(0, mm), solve_euler(1, mm), solve_euler(2, mm)};
}

CentralConfiguration lagrange_config(const MassDistribution& mm, bool positive_orientation) {
  const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  Config q;
  q << Complex{1.0, 0.0}, omega, omega * omega;
  if (!positive_orientation) q = q.conjugate();
  CentralConfiguration cc;
  cc.q0 = normalize_central(q, mm);
  cc.multiplier = potential_U(cc.q0, mm);
  cc.kind = positive_orientation ? CentralConfigKind::LagrangePlus
                                 : CentralConfigKind::LagrangeMinus;
  return cc;
}

std::array<CentralConfiguration, 5> five_central_configurations(const MassDistribution& mm) {
  const auto e = find_euler_configs(mm);
  return {e[0], e[1], e[2], lagrange_config(mm, true), lagrange_config(mm, false)};
}

PhaseState homographic_solution(const CentralConfiguration& cc, const KeplerOrbit& orbit,
                                double t) {
  if (std::abs(orbit.c - cc.multiplier) > 1e-10 * std::abs(cc.multiplier))
    throw ArgumentError(
        "homographic ansatz needs the Kepler constant to equal the configuration multiplier");
  const KeplerSample s = kepler_state(orbit, t);
  PhaseState ps;
  ps.q = s.lambda * cc.q0;
  ps.v = s.lambdadot * cc.q0;
  return ps;
}

LagrangeCircular lagrange_circular_orbit(const MassDistribution& mm) {
  LagrangeCircular lc;
  lc.mm = mm;
  // Equilateral with side sqrt(3): for equal masses the bodies sit on the
  // unit circle and omega = 3^(-1/4).
  const Complex w3 = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  Config q;
  q << Complex{1.0, 0.0}, w3, w3 * w3;
  lc.q0 = center_config(q, mm);
  const double I = moment_of_inertia(lc.q0, mm);
  lc.omega = std::sqrt(potential_U(lc.q0, mm) / I);
  lc.period = 2.0 * std::numbers::pi / lc.omega;
  return lc;
}

PhaseState LagrangeCircular::initial_state() const { return state(0.0); }

PhaseState LagrangeCircular::state(double t) const {
  const Complex rot = std::polar(1.0, omega * t);
  PhaseState s;
  s.q = rot * q0;
  s.v = (Complex{0.0, omega} * rot) * q0;
  return s;
}

}  // namespace threebody

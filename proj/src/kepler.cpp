#include <cmath>
#include <limits>
#include <numbers>

#include "threebody/core_model.hpp"
#include "threebody/errors.hpp"
#include "threebody/solutions.hpp"

namespace threebody {

namespace {

// Stumpff functions C and S with series fallback around z = 0.
double stumpff_C(double z) {
  if (std::abs(z) < 1e-2)
    return 1.0 / 2.0 - z / 24.0 + z * z / 720.0 - z * z * z / 40320.0;
  if (z > 0.0) return (1.0 - std::cos(std::sqrt(z))) / z;
  const double s = std::sqrt(-z);
  return (std::cosh(s) - 1.0) / (-z);
}

double stumpff_S(double z) {
  if (std::abs(z) < 1e-2)
    return 1.0 / 6.0 - z / 120.0 + z * z / 5040.0 - z * z * z / 362880.0;
  if (z > 0.0) {
    const double s = std::sqrt(z);
    return (s - std::sin(s)) / (z * s);
  }
  const double s = std::sqrt(-z);
  return (std::sinh(s) - s) / (s * s * s);
}

struct UniversalTerms {
  double chi, z, C, S, r, t;  // r = dF/dchi, t = elapsed time at chi
};

// Evaluate the universal Kepler equation at chi.
UniversalTerms universal_eval(double chi, double r0, double sigma0, double alpha, double c) {
  UniversalTerms u;
  u.chi = chi;
  u.z = alpha * chi * chi;
  u.C = stumpff_C(u.z);
  u.S = stumpff_S(u.z);
  const double chi2 = chi * chi, chi3 = chi2 * chi;
  const double sqrtc = std::sqrt(c);
  u.t = (sigma0 * chi2 * u.C + r0 * chi * (1.0 - u.z * u.S) + chi3 * u.S) / sqrtc;
  u.r = sigma0 * chi * (1.0 - u.z * u.S) + r0 * (1.0 - u.z * u.C) + chi2 * u.C;
  return u;
}

// Monotone root solve of t(chi) = target, Newton with bisection safeguard.
UniversalTerms universal_solve(double target, double r0, double sigma0, double alpha,
                               double c) {
  if (target == 0.0) return universal_eval(0.0, r0, sigma0, alpha, c);
  const double sqrtc = std::sqrt(c);
  // Expand a bracket in the direction of target; t(chi) increases with chi.
  double lo = 0.0, hi = 0.0;
  double step = std::max(std::abs(alpha) * sqrtc * std::abs(target), sqrtc * std::abs(target) / std::max(r0, 1e-12));
  step = std::max(step, 1e-8);
  if (target > 0.0) {
    hi = step;
    while (universal_eval(hi, r0, sigma0, alpha, c).t < target) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e12) throw ConvergenceError("universal Kepler bracket expansion failed");
    }
  } else {
    lo = -step;
    while (universal_eval(lo, r0, sigma0, alpha, c).t > target) {
      hi = lo;
      lo *= 2.0;
      if (lo < -1e12) throw ConvergenceError("universal Kepler bracket expansion failed");
    }
  }
  UniversalTerms u = universal_eval(0.5 * (lo + hi), r0, sigma0, alpha, c);
  const double tol = 1e-13 * std::max(1.0, std::abs(target));
  for (int it = 0; it < 200; ++it) {
    if (std::abs(u.t - target) < tol) return u;
    double next;
    if (u.r > 1e-14) {
      next = u.chi - (u.t - target) * std::sqrt(c) / u.r;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    } else {
      next = 0.5 * (lo + hi);
    }
    if (u.t < target) lo = u.chi; else hi = u.chi;
    u = universal_eval(next, r0, sigma0, alpha, c);
  }
  if (std::abs(u.t - target) < 1e4 * tol) return u;
  throw ConvergenceError("universal Kepler iteration did not converge");
}

// Time for a rectilinear orbit to fall from radius r0 (inward start) to zero.
double rectilinear_fall_time(double r0, double E, double c) {
  if (E == 0.0) return std::sqrt(2.0 / (9.0 * c)) * r0 * std::sqrt(r0);
  if (E > 0.0) {
    const double beta = 2.0 * E, gamma = 2.0 * c;
    return std::sqrt(r0 * (beta * r0 + gamma)) / beta -
           (gamma / (beta * std::sqrt(beta))) * std::asinh(std::sqrt(beta * r0 / gamma));
  }
  // handled by the eccentric-anomaly formula in collision_time()
  return std::numeric_limits<double>::quiet_NaN();
}

double degenerate_forward_collision_time(double r0, double vr0, double E, double c) {
  if (E < 0.0) {
    // r = a(1 - cos eta), t = sqrt(a^3/c) (eta - sin eta), collision at eta = 2 pi
    const double a = c / (-2.0 * E);
    double eta = std::acos(std::clamp(1.0 - r0 / a, -1.0, 1.0));
    if (vr0 < 0.0) eta = 2.0 * std::numbers::pi - eta;
    return std::sqrt(a * a * a / c) * (2.0 * std::numbers::pi - eta + std::sin(eta));
  }
  if (vr0 > 0.0) return std::numeric_limits<double>::infinity();
  return rectilinear_fall_time(r0, E, c);
}

}  // namespace

bool KeplerOrbit::degenerate() const {
  const double scale = std::abs(lambda0) * std::max(std::abs(lambdadot0), 1e-300);
  return std::abs(angular_momentum) <= 1e-14 * std::max(scale, 1e-300);
}

double KeplerOrbit::collision_time() const {
  if (!degenerate()) return std::numeric_limits<double>::infinity();
  const double r0 = std::abs(lambda0);
  const double vr0 = std::real(std::conj(lambda0) * lambdadot0) / r0;
  return degenerate_forward_collision_time(r0, vr0, energy, c);
}

KeplerOrbit kepler_orbit(Complex lambda0, Complex lambdadot0, double c) {
  if (!(c > 0.0)) throw ArgumentError("Kepler attraction constant must be positive");
  if (lambda0 == Complex{0.0, 0.0}) throw ArgumentError("Kepler initial position is zero");
  KeplerOrbit o;
  o.c = c;
  o.lambda0 = lambda0;
  o.lambdadot0 = lambdadot0;
  const double r0 = std::abs(lambda0);
  o.energy = 0.5 * std::norm(lambdadot0) - c / r0;
  o.angular_momentum = wedge(lambda0, lambdadot0);
  if (o.energy < 0.0) o.semi_major_axis = -c / (2.0 * o.energy);
  // Laplace vector e = ((|v|^2 - c/r) lambda - (lambda . v) v)/c
  const Complex evec =
      ((std::norm(lambdadot0) - c / r0) * lambda0 -
       std::real(std::conj(lambda0) * lambdadot0) * lambdadot0) /
      c;
  o.eccentricity = std::abs(evec);
  o.orientation = (o.eccentricity > 1e-14) ? std::arg(evec) : 0.0;
  return o;
}

KeplerSample kepler_state(const KeplerOrbit& orbit, double t) {
  const double r0 = std::abs(orbit.lambda0);
  if (r0 == 0.0) throw ArgumentError("Kepler initial position is zero");
  if (orbit.degenerate()) {
    const double fwd = orbit.collision_time();
    if (t >= fwd)
      throw CollisionError("rectilinear Kepler orbit reaches collision before t", 1, 2);
    // mirror the orbit for the backward bound
    const double vr0 = std::real(std::conj(orbit.lambda0) * orbit.lambdadot0) / r0;
    const double bwd = -degenerate_forward_collision_time(r0, -vr0, orbit.energy, orbit.c);
    if (t <= bwd)
      throw CollisionError("rectilinear Kepler orbit reaches collision before t", 1, 2);
  }
  const double sqrtc = std::sqrt(orbit.c);
  const double sigma0 = std::real(std::conj(orbit.lambda0) * orbit.lambdadot0) / sqrtc;
  const double alpha = 2.0 / r0 - std::norm(orbit.lambdadot0) / orbit.c;  // 1/a
  const UniversalTerms u = universal_solve(t, r0, sigma0, alpha, orbit.c);
  const double chi2 = u.chi * u.chi;
  const double f = 1.0 - chi2 * u.C / r0;
  const double g = t - chi2 * u.chi * u.S / sqrtc;
  const double r = u.r;
  const double fdot = sqrtc / (r * r0) * u.chi * (u.z * u.S - 1.0);
  const double gdot = 1.0 - chi2 * u.C / r;
  KeplerSample s;
  s.lambda = f * orbit.lambda0 + g * orbit.lambdadot0;
  s.lambdadot = fdot * orbit.lambda0 + gdot * orbit.lambdadot0;
  return s;
}

Complex kepler_solve(Complex lambda0, Complex lambdadot0, double c, double t) {
  return kepler_state(kepler_orbit(lambda0, lambdadot0, c), t).lambda;
}

double kepler_period(const KeplerOrbit& orbit) {
  if (!orbit.bounded()) throw ArgumentError("only negative-energy Kepler orbits have a period");
  const double a = orbit.semi_major_axis;
  return 2.0 * std::numbers::pi * std::sqrt(a * a * a / orbit.c);
}

}  // namespace threebody

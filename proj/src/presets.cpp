#include "threebody/presets.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "threebody/errors.hpp"

namespace threebody {

namespace {

std::vector<Preset> build_presets() {
  std::vector<Preset> out;

  {
    // Equal masses on the unit circle (equilateral, side sqrt(3)) in rigid
    // rotation with omega = 3^(-1/4); period 2 pi 3^(1/4).
    Preset p;
    p.name = "lagrange-circular";
    p.masses = Eigen::Vector3d::Ones();
    const double omega = std::pow(3.0, -0.25);
    for (int k = 0; k < 3; ++k) {
      const double th = 2.0 * std::numbers::pi * k / 3.0;
      p.state.q[k] = Complex{std::cos(th), std::sin(th)};
      p.state.v[k] = Complex{0.0, omega} * p.state.q[k];
    }
    p.default_T = 2.0 * std::numbers::pi * std::pow(3.0, 0.25);
    p.description = "equal masses, equilateral on the unit circle, rigid rotation";
    out.push_back(p);
  }

  {
    // Collinear central configuration released from rest: homothetic total
    // collapse, ends in a triple collision.
    Preset p;
    p.name = "euler-homothetic";
    p.masses = Eigen::Vector3d::Ones();
    p.state.q << Complex{0.0, 0.0}, Complex{-1.0, 0.0}, Complex{1.0, 0.0};
    p.state.v << Complex{0.0, 0.0}, Complex{0.0, 0.0}, Complex{0.0, 0.0};
    p.default_T = 10.0;
    p.description = "equal masses, collinear central configuration, free fall to triple collision";
    out.push_back(p);
  }

  {
    // Free fall from the 3-4-5 right triangle, centered.
    Preset p;
    p.name = "free-fall-345";
    p.masses = Eigen::Vector3d::Ones();
    p.state.q << Complex{-1.0, -4.0 / 3.0}, Complex{2.0, -4.0 / 3.0}, Complex{-1.0, 8.0 / 3.0};
    p.state.v << Complex{0.0, 0.0}, Complex{0.0, 0.0}, Complex{0.0, 0.0};
    p.default_T = 10.0;
    p.description = "equal masses at rest on a 3-4-5 right triangle";
    out.push_back(p);
  }

  {
    // Figure-eight choreography at an equal-mass collinear crossing, body 1
    // midway between the others; outer bodies share one velocity, the middle
    // body carries minus twice it, so P = J = 0 exactly. Values frozen from
    // the find-eight pipeline at N = 512; default_T is the orbit period.
    Preset p;
    p.name = "figure-eight";
    p.masses = Eigen::Vector3d::Ones();
    const double a = 1.5323995957472518;
    const double ux = -0.28040756724879434;
    const double uy = -0.43034525530771911;
    p.state.q << Complex{0.0, 0.0}, Complex{-a, 0.0}, Complex{a, 0.0};
    p.state.v << Complex{-2.0 * ux, -2.0 * uy}, Complex{ux, uy}, Complex{ux, uy};
    p.default_T = 12.000002193624526;
    p.description = "equal-mass figure-eight choreography, one period";
    out.push_back(p);
  }

  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = build_presets();
  return table;
}

const Preset& preset_by_name(const std::string& name) {
  for (const Preset& p : presets())
    if (p.name == name) return p;
  std::ostringstream msg;
  msg << "unknown preset '" << name << "'; known presets:";
  for (const Preset& p : presets()) msg << " " << p.name;
  throw ArgumentError(msg.str());
}

}  // namespace threebody

#pragma once

#include <string>
#include <vector>

#include "threebody/types.hpp"

namespace threebody {

/// Named, exactly documented initial conditions. The numbers here are frozen;
/// tests hold them to their documented properties rather than recomputing
/// them.
struct Preset {
  std::string name;
  Eigen::Vector3d masses;
  PhaseState state;
  double default_T;  ///< horizon used when the run config leaves T unset
  std::string description;
};

const std::vector<Preset>& presets();

/// Throws ArgumentError listing the known names when the lookup fails.
const Preset& preset_by_name(const std::string& name);

}  // namespace threebody

#pragma once

#include <filesystem>
#include <string>

#include "alip/rbd/model.hpp"

namespace alip::rbd {

/// Parses a robot model from its JSON description.
///
/// Schema (all lengths in metres, masses in kg, inertias in kg m^2):
///   bodies: ordered list, parents first. Each entry has
///     name, parent (null for the root), joint ("free" | "revolute"),
///     origin_m [x,y,z] (joint position in the parent frame),
///     axis [x,y,z] (revolute only), mass_kg, com_m [x,y,z],
///     inertia_kgm2 [ixx, iyy, izz, ixy, ixz, iyz] about the body CoM.
///   feet: { left: {...}, right: {...} } with body, reference_offset_m,
///     toe_m, heel_m, half_width_m.
/// Throws alip::ConfigError on schema violations.
RobotModel parse_robot_model(const std::string& json_text);
RobotModel load_robot_model(const std::filesystem::path& path);

}  // namespace alip::rbd

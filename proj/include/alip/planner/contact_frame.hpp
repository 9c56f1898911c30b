#pragma once

#include <Eigen/Geometry>

#include "alip/core/frames.hpp"

namespace alip {

/// Builds {c} from the world pose of the stance-foot reference point.
/// Only the position of the pose is used; the axes come from `heading`.
ContactFrame contact_frame_for_step(const Eigen::Isometry3d& stance_reference_pose, double heading);

}  // namespace alip

#include "alip/planner/contact_frame.hpp"

namespace alip {

ContactFrame contact_frame_for_step(const Eigen::Isometry3d& stance_reference_pose, double heading) {
  ContactFrame frame;
  frame.rotation = Eigen::AngleAxisd(heading, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  frame.origin = stance_reference_pose.translation();
  return frame;
}

}  // namespace alip

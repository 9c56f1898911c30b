#pragma once

#include <array>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace alip::rbd {

enum class JointType { Free, Revolute };

/// Mass properties of one body, expressed in the body frame.
struct BodyInertia {
  double mass = 0.0;
  Eigen::Vector3d com = Eigen::Vector3d::Zero();                // [m]
  Eigen::Matrix3d rotational = Eigen::Matrix3d::Identity();     // about the CoM [kg m^2]
};

/// One link of the kinematic tree. The body frame sits at the joint and is
/// parallel to the parent frame at zero joint angle.
struct Body {
  std::string name;
  int parent = -1;
  JointType joint = JointType::Revolute;
  Eigen::Vector3d joint_origin = Eigen::Vector3d::Zero();  // in the parent frame
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();        // revolute axis in the body frame
  BodyInertia inertia;
};

enum class FootSide { Left = 0, Right = 1 };

inline const char* to_string(FootSide s) { return s == FootSide::Left ? "left" : "right"; }

/// Rectangular flat-foot sole. The reference point (polygon centre) is given
/// in the foot body frame; toe/heel extents are along the foot x axis.
struct FootGeometry {
  std::string body_name;
  int body = -1;
  Eigen::Vector3d reference_offset = Eigen::Vector3d::Zero();
  double toe = 0.1;         // l_t [m]
  double heel = 0.1;        // l_h [m]
  double half_width = 0.05; // w_f [m]
};

/// Floating-base kinematic tree: body 0 carries the free joint, every other
/// body a revolute joint, parents precede children.
///
/// Configuration layout: q = [base position (3), base quaternion (w, x, y, z),
/// joint angles], qd = [base linear velocity in world (3), base angular
/// velocity in the base frame (3), joint rates].
class RobotModel {
 public:
  RobotModel(std::vector<Body> bodies, std::array<FootGeometry, 2> feet);

  const std::vector<Body>& bodies() const { return bodies_; }
  const Body& body(int i) const { return bodies_[static_cast<std::size_t>(i)]; }
  int num_bodies() const { return static_cast<int>(bodies_.size()); }
  int nq() const { return nq_; }
  int nv() const { return nv_; }
  int num_actuated() const { return nv_ - 6; }

  /// Index of the first velocity coordinate of body i's joint.
  int v_index(int i) const { return v_index_[static_cast<std::size_t>(i)]; }
  int q_index(int i) const { return q_index_[static_cast<std::size_t>(i)]; }
  int joint_dofs(int i) const { return body(i).joint == JointType::Free ? 6 : 1; }

  int body_index(std::string_view name) const;
  const FootGeometry& foot(FootSide side) const { return feet_[static_cast<std::size_t>(side)]; }
  double total_mass() const { return total_mass_; }

  /// True if `ancestor` lies on the path from `body` to the root (inclusive).
  bool is_ancestor(int ancestor, int body) const;

  /// Copy of the model with the mass and rotational inertia of every body
  /// matching `select` multiplied by `factor`.
  RobotModel with_scaled_bodies(const std::function<bool(const Body&)>& select, double factor) const;

 private:
  std::vector<Body> bodies_;
  std::array<FootGeometry, 2> feet_;
  std::vector<int> v_index_;
  std::vector<int> q_index_;
  int nq_ = 0;
  int nv_ = 0;
  double total_mass_ = 0.0;
};

/// Full-order state (q, qd).
struct State {
  Eigen::VectorXd q;
  Eigen::VectorXd qd;
};

/// Zero joint angles, identity base orientation, base at `base_position`.
State neutral_state(const RobotModel& model, const Eigen::Vector3d& base_position = Eigen::Vector3d::Zero());

Eigen::Vector3d base_position(const Eigen::VectorXd& q);
Eigen::Quaterniond base_orientation(const Eigen::VectorXd& q);
void set_base_pose(Eigen::VectorXd& q, const Eigen::Vector3d& position, const Eigen::Quaterniond& orientation);

/// q (+) v*dt on the configuration manifold. v is a generalized velocity.
Eigen::VectorXd integrate(const RobotModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& v, double dt);

/// Throws std::invalid_argument if sizes mismatch, entries are non-finite or
/// the base quaternion is not unit within 1e-12.
void validate_state(const RobotModel& model, const State& state);

}  // namespace alip::rbd

#include "alip/rbd/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "alip/core/errors.hpp"

namespace alip::rbd {

namespace {

using nlohmann::json;

Eigen::Vector3d vec3(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 3) throw ConfigError(std::string("'") + key + "' must be a 3-vector");
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

Eigen::Matrix3d inertia(const json& j) {
  const auto& a = j.at("inertia_kgm2");
  if (!a.is_array() || a.size() != 6) throw ConfigError("'inertia_kgm2' must list ixx, iyy, izz, ixy, ixz, iyz");
  Eigen::Matrix3d I;
  const double ixx = a[0], iyy = a[1], izz = a[2], ixy = a[3], ixz = a[4], iyz = a[5];
  I << ixx, ixy, ixz, ixy, iyy, iyz, ixz, iyz, izz;
  return I;
}

FootGeometry foot(const json& j) {
  FootGeometry f;
  f.body_name = j.at("body").get<std::string>();
  f.reference_offset = vec3(j, "reference_offset_m");
  f.toe = j.at("toe_m").get<double>();
  f.heel = j.at("heel_m").get<double>();
  f.half_width = j.at("half_width_m").get<double>();
  return f;
}

}  // namespace

RobotModel parse_robot_model(const std::string& json_text) {
  try {
    const json doc = json::parse(json_text);
    std::vector<Body> bodies;
    std::vector<std::string> names;
    for (const auto& jb : doc.at("bodies")) {
      Body b;
      b.name = jb.at("name").get<std::string>();
      const std::string joint = jb.at("joint").get<std::string>();
      if (joint == "free") {
        b.joint = JointType::Free;
      } else if (joint == "revolute") {
        b.joint = JointType::Revolute;
        b.axis = vec3(jb, "axis");
      } else {
        throw ConfigError("body '" + b.name + "': unknown joint type '" + joint + "'");
      }
      if (!jb.at("parent").is_null()) {
        const auto parent = jb.at("parent").get<std::string>();
        const auto it = std::find(names.begin(), names.end(), parent);
        if (it == names.end()) throw ConfigError("body '" + b.name + "': parent '" + parent + "' not defined before it");
        b.parent = static_cast<int>(it - names.begin());
      }
      if (jb.contains("origin_m")) b.joint_origin = vec3(jb, "origin_m");
      b.inertia.mass = jb.at("mass_kg").get<double>();
      b.inertia.com = vec3(jb, "com_m");
      b.inertia.rotational = inertia(jb);
      names.push_back(b.name);
      bodies.push_back(std::move(b));
    }
    const auto& jf = doc.at("feet");
    return RobotModel(std::move(bodies), {foot(jf.at("left")), foot(jf.at("right"))});
  } catch (const json::exception& e) {
    throw ConfigError(std::string("robot model: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("robot model: ") + e.what());
  }
}

RobotModel load_robot_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open robot model '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_robot_model(buf.str());
}

}  // namespace alip::rbd

#include "reachopt/kinematics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "reachopt/errors.hpp"

namespace reachopt {

namespace {

Iso3 joint_motion(const ChainJoint& joint, double q) {
  Iso3 motion = Iso3::Identity();
  if (joint.type == JointType::Revolute) {
    motion.linear() = Eigen::AngleAxisd(q, joint.axis).toRotationMatrix();
  } else {
    motion.translation() = joint.axis * q;
  }
  return motion;
}

}  // namespace

KinematicChain::KinematicChain(std::vector<ChainJoint> joints, Iso3 ee_offset, VecX q_min,
                               VecX q_max, VecX qd_min, VecX qd_max, int body_points_per_link,
                               double body_point_radius, double ee_point_radius)
    : joints_(std::move(joints)),
      ee_offset_(std::move(ee_offset)),
      q_min_(std::move(q_min)),
      q_max_(std::move(q_max)),
      qd_min_(std::move(qd_min)),
      qd_max_(std::move(qd_max)) {
  const int n = dof();
  if (n == 0) throw std::invalid_argument("KinematicChain: no joints");
  if (q_min_.size() != n || q_max_.size() != n || qd_min_.size() != n || qd_max_.size() != n) {
    throw ShapeError("KinematicChain: limit vectors must have one entry per joint");
  }
  for (int j = 0; j < n; ++j) {
    if (!(q_min_[j] < q_max_[j])) {
      throw std::invalid_argument("KinematicChain: q_min must be < q_max elementwise");
    }
    const double norm = joints_[j].axis.norm();
    if (norm < 1e-9) throw std::invalid_argument("KinematicChain: zero joint axis");
    joints_[j].axis /= norm;
  }
  build_body_points(body_points_per_link, body_point_radius, ee_point_radius);

  reach_ = ee_offset_.translation().norm();
  for (int j = 0; j < n; ++j) {
    reach_ += joints_[j].origin.translation().norm();
    if (joints_[j].type == JointType::Prismatic) {
      reach_ += std::max(std::abs(q_min_[j]), std::abs(q_max_[j]));
    }
  }
}

void KinematicChain::build_body_points(int per_link, double radius, double ee_radius) {
  const int n = dof();
  full_set_.kind = BodyPointSetKind::FullWithEE;
  body_set_.kind = BodyPointSetKind::BodyMinusLastLink;

  for (int link = 0; link < n; ++link) {
    // The segment of link `link` runs from its joint frame origin to the
    // next joint's origin (or the ee offset for the last link).
    const Vec3 tip = (link + 1 < n) ? joints_[link + 1].origin.translation()
                                    : ee_offset_.translation();
    std::vector<BodyPoint> points;
    if (tip.norm() < 1e-9 || per_link <= 1) {
      points.push_back({link, Vec3::Zero(), radius});
    } else {
      for (int k = 0; k < per_link; ++k) {
        const double s = static_cast<double>(k) / (per_link - 1);
        points.push_back({link, tip * s, radius});
      }
    }
    for (const auto& p : points) {
      full_set_.points.push_back(p);
      if (link < n - 1) body_set_.points.push_back(p);
    }
  }
  // End-effector point, in the ee frame.
  full_set_.points.push_back({n, Vec3::Zero(), ee_radius});
}

void KinematicChain::check_dof(const VecX& q, const char* where) const {
  if (q.size() != dof()) {
    throw ShapeError(std::string(where) + ": expected " + std::to_string(dof()) +
                     " joint values, got " + std::to_string(q.size()));
  }
}

std::vector<Iso3> KinematicChain::link_frames(const VecX& q) const {
  check_dof(q, "link_frames");
  std::vector<Iso3> frames(dof() + 1);
  Iso3 current = Iso3::Identity();
  for (int j = 0; j < dof(); ++j) {
    current = current * joints_[j].origin * joint_motion(joints_[j], q[j]);
    frames[j] = current;
  }
  frames[dof()] = current * ee_offset_;
  return frames;
}

Pose KinematicChain::fk(const VecX& q) const {
  const auto frames = link_frames(q);
  const Iso3& ee = frames.back();
  Pose pose;
  pose.position = ee.translation();
  pose.orientation = Quat(ee.linear()).normalized();
  return pose;
}

std::vector<Vec3> KinematicChain::body_points_world(const VecX& q, const BodyPointSet& set) const {
  const auto frames = link_frames(q);
  std::vector<Vec3> world;
  world.reserve(set.points.size());
  for (const auto& p : set.points) {
    if (p.link < 0 || p.link > dof()) throw ShapeError("body_points_world: bad link index");
    world.push_back(frames[p.link] * p.local);
  }
  return world;
}

MatX KinematicChain::jacobian_position(const VecX& q, int link, const Vec3& local) const {
  check_dof(q, "jacobian_position");
  if (link < 0 || link > dof()) throw ShapeError("jacobian_position: bad link index");
  const auto frames = link_frames(q);
  const Vec3 point = frames[link] * local;

  MatX jac = MatX::Zero(3, dof());
  // Joints beyond `link` do not move the point. The ee frame (index dof())
  // depends on every joint.
  const int last = (link == dof()) ? dof() - 1 : link;
  Iso3 pre = Iso3::Identity();
  for (int j = 0; j <= last; ++j) {
    pre = pre * joints_[j].origin;  // frame of joint j before its motion
    const Vec3 axis_world = pre.linear() * joints_[j].axis;
    if (joints_[j].type == JointType::Revolute) {
      jac.col(j) = axis_world.cross(point - pre.translation());
    } else {
      jac.col(j) = axis_world;
    }
    pre = pre * joint_motion(joints_[j], q[j]);
  }
  return jac;
}

VecX KinematicChain::ik_position(const Vec3& target, const VecX& q_seed,
                                 const IkOptions& opts) const {
  check_dof(q_seed, "ik_position");
  VecX q = clamp(q_seed);
  double best_residual = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter <= opts.max_iters; ++iter) {
    const Vec3 error = target - fk(q).position;
    const double residual = error.norm();
    best_residual = std::min(best_residual, residual);
    if (residual < opts.tolerance) return q;
    if (iter == opts.max_iters) break;

    const MatX jac = jacobian_position(q, dof(), Vec3::Zero());
    Mat3 gram = jac * jac.transpose();
    gram.diagonal().array() += opts.damping * opts.damping;
    const VecX dq = jac.transpose() * gram.ldlt().solve(error);
    q = clamp(q + dq);
  }
  std::ostringstream msg;
  msg << "ik_position: no convergence to [" << target.transpose() << "] after " << opts.max_iters
      << " iterations (best residual " << best_residual << " m)";
  throw NoConvergenceError(msg.str(), best_residual);
}

const BodyPointSet& KinematicChain::body_point_set(BodyPointSetKind kind) const {
  return kind == BodyPointSetKind::FullWithEE ? full_set_ : body_set_;
}

VecX KinematicChain::clamp(const VecX& q) const {
  check_dof(q, "clamp");
  return q.cwiseMax(q_min_).cwiseMin(q_max_);
}

MatX KinematicChain::clamp_trajectory(const MatX& q) const {
  if (q.cols() != dof()) throw ShapeError("clamp_trajectory: column count != dof");
  MatX out = q;
  for (int j = 0; j < dof(); ++j) {
    out.col(j) = out.col(j).cwiseMax(q_min_[j]).cwiseMin(q_max_[j]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// YAML chain definition

namespace {

[[noreturn]] void fail(const std::string& origin, const YAML::Node& node, const std::string& msg) {
  throw ParseError(origin + ":" + std::to_string(node.Mark().line + 1) + ": " + msg);
}

YAML::Node expect(const std::string& origin, const YAML::Node& node, const std::string& key) {
  const YAML::Node child = node[key];
  if (!child) fail(origin, node, "missing key '" + key + "'");
  return child;
}

Vec3 parse_vec3(const std::string& origin, const YAML::Node& node) {
  if (!node.IsSequence() || node.size() != 3) fail(origin, node, "expected a 3-vector");
  return Vec3(node[0].as<double>(), node[1].as<double>(), node[2].as<double>());
}

Iso3 parse_transform(const std::string& origin, const YAML::Node& node) {
  Iso3 tf = Iso3::Identity();
  if (!node) return tf;
  if (node["xyz"]) tf.translation() = parse_vec3(origin, node["xyz"]);
  if (node["rpy"]) {
    const Vec3 rpy = parse_vec3(origin, node["rpy"]);
    tf.linear() = (Eigen::AngleAxisd(rpy.z(), Vec3::UnitZ()) *
                   Eigen::AngleAxisd(rpy.y(), Vec3::UnitY()) *
                   Eigen::AngleAxisd(rpy.x(), Vec3::UnitX()))
                      .toRotationMatrix();
  }
  return tf;
}

}  // namespace

KinematicChain parse_chain_yaml(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ParseError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }

  const YAML::Node joints_node = expect(origin, root, "joints");
  if (!joints_node.IsSequence() || joints_node.size() == 0) {
    fail(origin, joints_node, "'joints' must be a non-empty sequence");
  }

  std::vector<ChainJoint> joints;
  const int n = static_cast<int>(joints_node.size());
  VecX q_min(n), q_max(n), qd_min(n), qd_max(n);

  for (int j = 0; j < n; ++j) {
    const YAML::Node jn = joints_node[j];
    ChainJoint joint;
    const std::string type = expect(origin, jn, "type").as<std::string>();
    if (type == "revolute") {
      joint.type = JointType::Revolute;
    } else if (type == "prismatic") {
      joint.type = JointType::Prismatic;
    } else {
      fail(origin, jn, "joint type must be 'revolute' or 'prismatic', got '" + type + "'");
    }
    joint.axis = parse_vec3(origin, expect(origin, jn, "axis"));
    joint.origin = parse_transform(origin, jn["origin"]);
    joint.name = jn["name"] ? jn["name"].as<std::string>() : "joint" + std::to_string(j + 1);

    const YAML::Node limits = expect(origin, jn, "limits");
    if (!limits.IsSequence() || limits.size() != 2) fail(origin, limits, "limits must be [lo, hi]");
    q_min[j] = limits[0].as<double>();
    q_max[j] = limits[1].as<double>();

    if (jn["velocity_limits"]) {
      const YAML::Node vl = jn["velocity_limits"];
      if (!vl.IsSequence() || vl.size() != 2) fail(origin, vl, "velocity_limits must be [lo, hi]");
      qd_min[j] = vl[0].as<double>();
      qd_max[j] = vl[1].as<double>();
    } else {
      qd_min[j] = -2.0;
      qd_max[j] = 2.0;
    }
    joints.push_back(joint);
  }

  const Iso3 ee_offset = parse_transform(origin, root["ee_offset"]);
  const int per_link = root["body_points_per_link"] ? root["body_points_per_link"].as<int>() : 5;
  const double radius = root["body_point_radius"] ? root["body_point_radius"].as<double>() : 0.01;
  const double ee_radius = root["ee_point_radius"] ? root["ee_point_radius"].as<double>() : 0.02;

  KinematicChain chain(std::move(joints), ee_offset, q_min, q_max, qd_min, qd_max, per_link,
                       radius, ee_radius);
  if (root["name"]) chain.name_ = root["name"].as<std::string>();
  return chain;
}

KinematicChain KinematicChain::from_yaml_string(const std::string& text) {
  return parse_chain_yaml(text, "<string>");
}

KinematicChain KinematicChain::from_yaml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open chain file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_chain_yaml(buffer.str(), path);
}

}  // namespace reachopt

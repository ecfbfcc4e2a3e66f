#pragma once

#include <string>
#include <vector>

#include "reachopt/types.hpp"

namespace reachopt {

enum class JointType { Revolute, Prismatic };

/// One joint of a serial chain: a fixed transform from the previous link
/// frame followed by rotation about (or translation along) `axis`.
struct ChainJoint {
  JointType type{JointType::Revolute};
  Vec3 axis{Vec3::UnitZ()};
  Iso3 origin{Iso3::Identity()};
  std::string name{};
};

/// A point rigidly attached to link `link` (frame after that link's joint),
/// carrying a bounding-sphere radius used to inflate distance queries.
struct BodyPoint {
  int link{0};
  Vec3 local{Vec3::Zero()};
  double radius{0.0};
};

enum class BodyPointSetKind {
  FullWithEE,         // every link plus the end-effector point
  BodyMinusLastLink,  // links 0..n-2 only; the gripper link is exempt
};

struct BodyPointSet {
  BodyPointSetKind kind{BodyPointSetKind::FullWithEE};
  std::vector<BodyPoint> points;
};

struct IkOptions {
  double tolerance{1e-4};  // meters
  int max_iters{500};
  double damping{0.05};
};

/// Serial kinematic chain with joint limits and sampled body points.
/// Immutable after construction; all queries are reentrant.
class KinematicChain {
 public:
  KinematicChain(std::vector<ChainJoint> joints, Iso3 ee_offset, VecX q_min, VecX q_max,
                 VecX qd_min, VecX qd_max, int body_points_per_link = 5,
                 double body_point_radius = 0.01, double ee_point_radius = 0.02);

  static KinematicChain from_yaml_file(const std::string& path);
  static KinematicChain from_yaml_string(const std::string& text);

  int dof() const { return static_cast<int>(joints_.size()); }
  const std::string& name() const { return name_; }
  const VecX& q_min() const { return q_min_; }
  const VecX& q_max() const { return q_max_; }
  const VecX& qd_min() const { return qd_min_; }
  const VecX& qd_max() const { return qd_max_; }

  /// End-effector pose. Joint-limit violations are not an error here;
  /// the optimizer owns limit handling.
  Pose fk(const VecX& q) const;

  /// World frame of every link (index j = frame after joint j), followed
  /// by the end-effector frame at index dof().
  std::vector<Iso3> link_frames(const VecX& q) const;

  /// Body points mapped through their link transforms.
  std::vector<Vec3> body_points_world(const VecX& q, const BodyPointSet& set) const;

  /// Position Jacobian (3 x dof) of a point given in link-local coordinates.
  /// Pass link = dof() for a point in the end-effector frame.
  MatX jacobian_position(const VecX& q, int link, const Vec3& local) const;

  /// Damped-least-squares inverse kinematics for position. Iterates from
  /// q_seed, clamping to joint limits every step. Throws NoConvergenceError
  /// (carrying the best residual) after max_iters.
  VecX ik_position(const Vec3& target, const VecX& q_seed, const IkOptions& opts = {}) const;

  const BodyPointSet& body_point_set(BodyPointSetKind kind) const;

  /// Conservative upper bound on end-effector distance from the base.
  double reach() const { return reach_; }

  VecX clamp(const VecX& q) const;

  /// Joint clamped elementwise into [q_min, q_max].
  MatX clamp_trajectory(const MatX& q) const;

  const std::vector<ChainJoint>& joints() const { return joints_; }
  const Iso3& ee_offset() const { return ee_offset_; }

 private:
  void build_body_points(int per_link, double radius, double ee_radius);
  void check_dof(const VecX& q, const char* where) const;

  std::string name_{"chain"};
  std::vector<ChainJoint> joints_;
  Iso3 ee_offset_{Iso3::Identity()};
  VecX q_min_, q_max_, qd_min_, qd_max_;
  BodyPointSet full_set_;
  BodyPointSet body_set_;
  double reach_{0.0};

  friend KinematicChain parse_chain_yaml(const std::string& text, const std::string& origin);
};

}  // namespace reachopt

#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace reachopt {

using Vec3 = Eigen::Vector3d;
using VecX = Eigen::VectorXd;
using Mat3 = Eigen::Matrix3d;
using MatX = Eigen::MatrixXd;
using Iso3 = Eigen::Isometry3d;
using Quat = Eigen::Quaterniond;
using Vec6 = Eigen::Matrix<double, 6, 1>;

/// Rigid pose: position in meters plus a unit quaternion.
struct Pose {
  Vec3 position{Vec3::Zero()};
  Quat orientation{Quat::Identity()};

  /// Position followed by fixed-axis roll-pitch-yaw, for callers that
  /// need the pose as a flat 6-vector.
  Vec6 as_vector6() const;
};

/// Discretized joint-space path: `steps` rows by `dof` columns with a
/// uniform time step `dt`.
struct JointTrajectory {
  MatX q;
  double dt{0.0};

  int steps() const { return static_cast<int>(q.rows()); }
  int dof() const { return static_cast<int>(q.cols()); }

  /// All-zero trajectory with dt = 1/(steps-1).
  static JointTrajectory zeros(int steps, int dof);
};

}  // namespace reachopt

#include "reachopt/types.hpp"

#include <cmath>

namespace reachopt {

Vec6 Pose::as_vector6() const {
  const Mat3 r = orientation.toRotationMatrix();
  // Fixed-axis roll-pitch-yaw (x, then y, then z about the world axes).
  const double pitch = std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
  double roll, yaw;
  if (std::abs(std::cos(pitch)) > 1e-12) {
    roll = std::atan2(r(2, 1), r(2, 2));
    yaw = std::atan2(r(1, 0), r(0, 0));
  } else {
    roll = std::atan2(-r(1, 2), r(1, 1));
    yaw = 0.0;
  }
  Vec6 v;
  v << position.x(), position.y(), position.z(), roll, pitch, yaw;
  return v;
}

JointTrajectory JointTrajectory::zeros(int steps, int dof) {
  JointTrajectory traj;
  traj.q = MatX::Zero(steps, dof);
  traj.dt = steps > 1 ? 1.0 / (steps - 1) : 1.0;
  return traj;
}

}  // namespace reachopt

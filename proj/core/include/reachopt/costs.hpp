#pragma once

#include "reachopt/kinematics.hpp"
#include "reachopt/scene.hpp"
#include "reachopt/types.hpp"

namespace reachopt {

/// Weights of the four elemental cost functionals.
struct CostWeights {
  double alpha1{1.0};  // static obstacles
  double alpha2{1.0};  // avoid-dynamic obstacles
  double alpha3{1.0};  // pushing
  double alpha4{0.0};  // joint velocity

  void validate() const;  // at least one alpha > 0
};

/// Soft-constraint weights and tolerances.
struct PenaltyParams {
  double w_drift{1.0};     // gripper-radius drift hinge
  double w_stem{10.0};     // stem-crossing count
  double w_lock{1.0};      // approach-plane lock on x_g/z_g
  double delta_tol{0.005}; // allowed per-step x_g/z_g change, meters
};

struct CostBreakdown {
  double f_obs_s{0.0};
  double f_obs_d{0.0};
  double f_push{0.0};
  double f_vel{0.0};
  double penalties{0.0};
  double total{0.0};
};

/// A scalar cost with its gradient over the trajectory (steps x dof).
struct CostTerm {
  double value{0.0};
  MatX gradient;
};

/// Per-constraint diagnostics reported alongside the penalty value.
struct PenaltyDiagnostics {
  double drift{0.0};
  double stem{0.0};
  double lock{0.0};
  int stem_crossings{0};
  bool direction_flipped{false};
  bool velocity_violation{false};
  double suggested_time_scale{1.0};  // factor that would bring velocities in range
};

/// Workspace obstacle cost: -D + eps/2 inside, quadratic ramp within the
/// safety margin, zero beyond it. Continuous (C1) at both branch points.
double obstacle_cost_pointwise(double D, double epsilon_s);
double obstacle_cost_derivative(double D, double epsilon_s);

/// Obstacle functional: per step, the worst body-point cost of the set
/// times that point's workspace speed. Gradient flows through the cost
/// slope, the (finite-difference) SDF gradient and the position Jacobian
/// of the argmax point, including the speed factor's dependence on the
/// neighboring waypoints.
CostTerm f_obs(const JointTrajectory& traj, const KinematicChain& chain, const Scene& scene,
               const BodyPointSet& set, ClassFilter filter);

/// Pushing functional: squared goal-frame distance of the end-effector to
/// the target, accumulated from t1 on. axis_weights selects/weights the
/// goal-frame axes (all ones = plain squared distance).
CostTerm f_push(const JointTrajectory& traj, const KinematicChain& chain, const Scene& scene,
                int t1, const Vec3& axis_weights = Vec3::Ones());

/// Joint velocity functional over forward differences. `literal_form`
/// evaluates velocity dotted with position instead of the squared-velocity
/// measure; it is exposed for comparison, not used by default.
CostTerm f_vel(const JointTrajectory& traj, bool literal_form = false);

/// Soft constraint penalties: gripper-radius drift from pushable centers
/// (from t1 on), stem-crossing count of the ee-to-goal segment, and the
/// per-step lock on the goal-frame x/z coordinates. Joint and velocity
/// limits are not penalized here: positions are clamped by the optimizer
/// and velocity violations are only flagged in the diagnostics.
CostTerm constraint_penalties(const JointTrajectory& traj, const KinematicChain& chain,
                              const Scene& scene, int t1, const PenaltyParams& params,
                              PenaltyDiagnostics* diagnostics = nullptr);

enum class StageObjective { Push, Collision, Velocity, Combined };

const char* to_string(StageObjective objective);

/// Bundles everything needed to evaluate the total cost and its per-stage
/// restrictions on a trajectory. Stage term selection:
///   Push      -> alpha3 * f_push + penalties
///   Collision -> alpha1 * f_obs_s + alpha2 * f_obs_d
///   Velocity  -> alpha4 * f_vel
///   Combined  -> all four terms + penalties
/// f_obs_s pairs the full body-point set with static obstacles; f_obs_d
/// pairs the gripper-free set with the avoid clusters and the pushables,
/// so only the end-effector may enter the target cluster.
class CostEvaluator {
 public:
  CostEvaluator(const KinematicChain& chain, const Scene& scene, CostWeights weights,
                PenaltyParams penalties, int t1, Vec3 axis_weights = Vec3::Ones(),
                bool velocity_literal = false);

  CostBreakdown breakdown(const JointTrajectory& traj) const;

  double objective(const JointTrajectory& traj, StageObjective stage) const;

  /// Objective value and gradient of the selected stage terms.
  std::pair<double, MatX> objective_with_gradient(const JointTrajectory& traj,
                                                  StageObjective stage) const;

  const KinematicChain& chain() const { return chain_; }
  const Scene& scene() const { return scene_; }
  const CostWeights& weights() const { return weights_; }
  const PenaltyParams& penalty_params() const { return penalties_; }
  int t1() const { return t1_; }

 private:
  const KinematicChain& chain_;
  const Scene& scene_;
  CostWeights weights_;
  PenaltyParams penalties_;
  int t1_;
  Vec3 axis_weights_;
  bool velocity_literal_;
};

}  // namespace reachopt

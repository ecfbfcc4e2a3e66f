#include "reachopt/costs.hpp"

#include <cmath>

#include "reachopt/errors.hpp"

namespace reachopt {

namespace {

constexpr double kSdfGradStep = 1e-5;

Vec3 sdf_gradient(const Scene& scene, const Vec3& x, ClassFilter filter) {
  Vec3 g;
  for (int k = 0; k < 3; ++k) {
    Vec3 hi = x, lo = x;
    hi[k] += kSdfGradStep;
    lo[k] -= kSdfGradStep;
    g[k] = (sdf(scene, hi, filter) - sdf(scene, lo, filter)) / (2.0 * kSdfGradStep);
  }
  return g;
}

/// World positions of every point in `set` at every time step.
std::vector<std::vector<Vec3>> positions_over_time(const JointTrajectory& traj,
                                                   const KinematicChain& chain,
                                                   const BodyPointSet& set) {
  std::vector<std::vector<Vec3>> positions(traj.steps());
  for (int t = 0; t < traj.steps(); ++t) {
    positions[t] = chain.body_points_world(traj.q.row(t).transpose(), set);
  }
  return positions;
}

}  // namespace

void CostWeights::validate() const {
  if (alpha1 < 0 || alpha2 < 0 || alpha3 < 0 || alpha4 < 0) {
    throw std::invalid_argument("CostWeights: weights must be nonnegative");
  }
  if (alpha1 + alpha2 + alpha3 + alpha4 <= 0.0) {
    throw std::invalid_argument("CostWeights: at least one weight must be positive");
  }
}

double obstacle_cost_pointwise(double D, double epsilon_s) {
  if (epsilon_s <= 0.0) throw std::invalid_argument("obstacle_cost_pointwise: epsilon_s <= 0");
  if (D < 0.0) return -D + 0.5 * epsilon_s;
  if (D <= epsilon_s) {
    const double r = D - epsilon_s;
    return r * r / (2.0 * epsilon_s);
  }
  return 0.0;
}

double obstacle_cost_derivative(double D, double epsilon_s) {
  if (epsilon_s <= 0.0) throw std::invalid_argument("obstacle_cost_derivative: epsilon_s <= 0");
  if (D < 0.0) return -1.0;
  if (D <= epsilon_s) return (D - epsilon_s) / epsilon_s;
  return 0.0;
}

CostTerm f_obs(const JointTrajectory& traj, const KinematicChain& chain, const Scene& scene,
               const BodyPointSet& set, ClassFilter filter) {
  if (traj.dof() != chain.dof()) throw ShapeError("f_obs: trajectory dof != chain dof");
  if (traj.steps() < 2) throw ShapeError("f_obs: need at least 2 steps");

  const int T = traj.steps();
  const double dt = traj.dt;
  const auto pos = positions_over_time(traj, chain, set);
  const int n_points = static_cast<int>(set.points.size());

  CostTerm term;
  term.gradient = MatX::Zero(T, traj.dof());

  for (int t = 0; t < T; ++t) {
    // Worst body point by obstacle cost; ties keep the lowest index.
    int worst = -1;
    double c_worst = 0.0;
    double d_worst = 0.0;
    for (int i = 0; i < n_points; ++i) {
      const double d = sdf(scene, pos[t][i], filter) - set.points[i].radius;
      const double c = obstacle_cost_pointwise(d, scene.epsilon_s);
      if (c > c_worst) {
        c_worst = c;
        d_worst = d;
        worst = i;
      }
    }
    if (worst < 0) continue;  // every point beyond the safety margin

    // Workspace velocity of the worst point: central differences inside,
    // one-sided at the ends.
    int t_prev = t, t_next = t;
    double denom = dt;
    if (t == 0) {
      t_next = 1;
    } else if (t == T - 1) {
      t_prev = T - 2;
    } else {
      t_prev = t - 1;
      t_next = t + 1;
      denom = 2.0 * dt;
    }
    const Vec3 w = pos[t_next][worst] - pos[t_prev][worst];
    const double speed = w.norm() / denom;
    term.value += c_worst * speed * dt;

    const BodyPoint& bp = set.points[worst];
    const VecX q_t = traj.q.row(t).transpose();

    // Chain rule through the obstacle cost at the argmax point.
    if (speed > 0.0) {
      const double slope = obstacle_cost_derivative(d_worst, scene.epsilon_s);
      if (slope != 0.0) {
        const Vec3 dgrad = sdf_gradient(scene, pos[t][worst], filter);
        const MatX jac = chain.jacobian_position(q_t, bp.link, bp.local);
        term.gradient.row(t) += (slope * speed * dt) * (dgrad.transpose() * jac);
      }
    }

    // Chain rule through the speed factor (depends on neighboring steps).
    const double wnorm = w.norm();
    if (c_worst > 0.0 && wnorm > 1e-12) {
      const Vec3 w_hat = w / wnorm;
      const double scale = c_worst * dt / denom;
      const MatX jac_next =
          chain.jacobian_position(traj.q.row(t_next).transpose(), bp.link, bp.local);
      const MatX jac_prev =
          chain.jacobian_position(traj.q.row(t_prev).transpose(), bp.link, bp.local);
      term.gradient.row(t_next) += scale * (w_hat.transpose() * jac_next);
      term.gradient.row(t_prev) -= scale * (w_hat.transpose() * jac_prev);
    }
  }
  return term;
}

CostTerm f_push(const JointTrajectory& traj, const KinematicChain& chain, const Scene& scene,
                int t1, const Vec3& axis_weights) {
  if (traj.dof() != chain.dof()) throw ShapeError("f_push: trajectory dof != chain dof");
  if (t1 < 0 || t1 >= traj.steps()) {
    throw IndexError("f_push: t1 = " + std::to_string(t1) + " outside [0, " +
                     std::to_string(traj.steps() - 1) + "]");
  }

  // Squared-distance metric expressed in the goal frame.
  const Mat3 metric = scene.goal.frame * axis_weights.cwiseProduct(axis_weights).asDiagonal() *
                      scene.goal.frame.transpose();

  CostTerm term;
  term.gradient = MatX::Zero(traj.steps(), traj.dof());
  for (int t = t1; t < traj.steps(); ++t) {
    const VecX q_t = traj.q.row(t).transpose();
    const Vec3 d = chain.fk(q_t).position - scene.goal.target.position;
    term.value += d.dot(metric * d) * traj.dt;
    const MatX jac = chain.jacobian_position(q_t, chain.dof(), Vec3::Zero());
    term.gradient.row(t) += (2.0 * traj.dt) * ((metric * d).transpose() * jac);
  }
  return term;
}

CostTerm f_vel(const JointTrajectory& traj, bool literal_form) {
  if (traj.steps() < 2) throw ShapeError("f_vel: need at least 2 steps");
  const int T = traj.steps();
  const double dt = traj.dt;

  CostTerm term;
  term.gradient = MatX::Zero(T, traj.dof());

  if (!literal_form) {
    // sum_t ||(q_{t+1} - q_t)/dt||^2 dt
    for (int t = 0; t + 1 < T; ++t) {
      const auto diff = traj.q.row(t + 1) - traj.q.row(t);
      term.value += diff.squaredNorm() / dt;
      term.gradient.row(t) -= (2.0 / dt) * diff;
      term.gradient.row(t + 1) += (2.0 / dt) * diff;
    }
  } else {
    // Literal integrand: velocity dotted with position.
    for (int t = 0; t + 1 < T; ++t) {
      const auto diff = traj.q.row(t + 1) - traj.q.row(t);
      term.value += diff.dot(traj.q.row(t));
      term.gradient.row(t) += diff - traj.q.row(t);
      term.gradient.row(t + 1) += traj.q.row(t);
    }
  }
  return term;
}

namespace {

/// Crossing count for the straight segment from `from` to the goal.
int crossings_to_goal(const Scene& scene, const Vec3& from) {
  const Vec3 goal = scene.goal.target.position;
  if ((from - goal).norm() < 1e-9) return 0;
  return static_cast<int>(segment_stem_intersections(scene, from, goal).size());
}

}  // namespace

CostTerm constraint_penalties(const JointTrajectory& traj, const KinematicChain& chain,
                              const Scene& scene, int t1, const PenaltyParams& params,
                              PenaltyDiagnostics* diagnostics) {
  if (traj.dof() != chain.dof()) {
    throw ShapeError("constraint_penalties: trajectory dof != chain dof");
  }
  if (t1 < 0 || t1 >= traj.steps()) throw IndexError("constraint_penalties: t1 out of range");

  const int T = traj.steps();
  const double dt = traj.dt;
  const GoalSpec& goal = scene.goal;
  const Vec3 y_axis = goal.y_axis();

  // In-plane axes: the two goal-frame columns orthogonal to the approach.
  const int k = goal.approach_axis;
  const Vec3 axis_a = goal.frame.col((k + 1) % 3);
  const Vec3 axis_b = goal.frame.col((k + 2) % 3);

  PenaltyDiagnostics diag;
  CostTerm term;
  term.gradient = MatX::Zero(T, traj.dof());

  std::vector<Vec3> ee(T);
  for (int t = 0; t < T; ++t) ee[t] = chain.fk(traj.q.row(t).transpose()).position;

  // --- drift hinge: stay a gripper radius away from pushable centers ----
  if (!scene.pushables.empty() && params.w_drift > 0.0) {
    for (int t = t1; t < T; ++t) {
      int nearest = 0;
      double dist = std::numeric_limits<double>::infinity();
      double da = 0.0, db = 0.0;
      for (int i = 0; i < static_cast<int>(scene.pushables.size()); ++i) {
        const Vec3 d = ee[t] - scene.pushables[i].center;
        const double ca = axis_a.dot(d);
        const double cb = axis_b.dot(d);
        const double in_plane = std::hypot(ca, cb);
        if (in_plane < dist) {
          dist = in_plane;
          nearest = i;
          da = ca;
          db = cb;
        }
      }
      const double hinge = goal.r_gripper - dist;
      if (hinge <= 0.0) continue;

      diag.drift += params.w_drift * hinge * hinge * dt;

      // Side with fewer stem crossings wins; probe from the object center
      // displaced a gripper radius to either side.
      const Vec3 center = scene.pushables[nearest].center;
      const int plus = crossings_to_goal(scene, center + goal.r_gripper * y_axis);
      const int minus = crossings_to_goal(scene, center - goal.r_gripper * y_axis);
      const int preferred = plus < minus ? 1 : (minus < plus ? -1 : 0);

      Vec3 dist_dir;  // d(dist)/d(ee)
      if (dist > 1e-9) {
        dist_dir = (axis_a * da + axis_b * db) / dist;
        const double natural = y_axis.dot(dist_dir);
        if (preferred != 0 && natural != 0.0 &&
            ((natural > 0.0) != (preferred > 0))) {
          // Flip the drift direction's y_g component toward the clear side.
          dist_dir -= 2.0 * natural * y_axis;
          diag.direction_flipped = true;
        }
      } else {
        // Exactly at the center the hinge has no defined direction; drift
        // toward the preferred side (or +y_g when both sides tie).
        dist_dir = (preferred >= 0 ? 1.0 : -1.0) * y_axis;
        diag.direction_flipped = true;
      }

      const MatX jac = chain.jacobian_position(traj.q.row(t).transpose(), chain.dof(), Vec3::Zero());
      term.gradient.row(t) -=
          (2.0 * params.w_drift * hinge * dt) * (dist_dir.transpose() * jac);
    }
  }

  // --- stem crossings of the ee-to-goal segment -------------------------
  if (!scene.pushables.empty() && params.w_stem > 0.0) {
    for (int t = t1; t < T; ++t) {
      const int count = crossings_to_goal(scene, ee[t]);
      diag.stem_crossings += count;
      diag.stem += params.w_stem * count * dt;
    }
    // Piecewise constant in the trajectory: no gradient contribution.
  }

  // --- approach-plane lock on x_g / z_g ----------------------------------
  if (params.w_lock > 0.0) {
    const Vec3 lock_axes[2] = {goal.x_axis(), goal.z_axis()};
    for (int t = t1; t + 1 < T; ++t) {
      const Vec3 step = ee[t + 1] - ee[t];
      for (const Vec3& axis : lock_axes) {
        const double c = axis.dot(step);
        const double excess = std::abs(c) - params.delta_tol;
        if (excess <= 0.0) continue;
        diag.lock += params.w_lock * excess * excess;
        const double sign = c > 0.0 ? 1.0 : -1.0;
        const MatX jac_next =
            chain.jacobian_position(traj.q.row(t + 1).transpose(), chain.dof(), Vec3::Zero());
        const MatX jac_here =
            chain.jacobian_position(traj.q.row(t).transpose(), chain.dof(), Vec3::Zero());
        const auto coeff = 2.0 * params.w_lock * excess * sign;
        term.gradient.row(t + 1) += coeff * (axis.transpose() * jac_next);
        term.gradient.row(t) -= coeff * (axis.transpose() * jac_here);
      }
    }
  }

  // --- velocity-limit report (no modification) ---------------------------
  double scale = 1.0;
  for (int t = 0; t + 1 < T; ++t) {
    const VecX v = (traj.q.row(t + 1) - traj.q.row(t)).transpose() / dt;
    for (int j = 0; j < traj.dof(); ++j) {
      if (v[j] > chain.qd_max()[j]) scale = std::max(scale, v[j] / chain.qd_max()[j]);
      if (v[j] < chain.qd_min()[j]) scale = std::max(scale, v[j] / chain.qd_min()[j]);
    }
  }
  diag.velocity_violation = scale > 1.0;
  diag.suggested_time_scale = scale;

  term.value = diag.drift + diag.stem + diag.lock;
  if (diagnostics) *diagnostics = diag;
  return term;
}

const char* to_string(StageObjective objective) {
  switch (objective) {
    case StageObjective::Push: return "push";
    case StageObjective::Collision: return "collision";
    case StageObjective::Velocity: return "velocity";
    case StageObjective::Combined: return "combined";
  }
  return "?";
}

CostEvaluator::CostEvaluator(const KinematicChain& chain, const Scene& scene, CostWeights weights,
                             PenaltyParams penalties, int t1, Vec3 axis_weights,
                             bool velocity_literal)
    : chain_(chain),
      scene_(scene),
      weights_(weights),
      penalties_(penalties),
      t1_(t1),
      axis_weights_(std::move(axis_weights)),
      velocity_literal_(velocity_literal) {
  weights_.validate();
}

CostBreakdown CostEvaluator::breakdown(const JointTrajectory& traj) const {
  CostBreakdown b;
  b.f_obs_s = f_obs(traj, chain_, scene_, chain_.body_point_set(BodyPointSetKind::FullWithEE),
                    ClassFilter::Static)
                  .value;
  b.f_obs_d = f_obs(traj, chain_, scene_,
                    chain_.body_point_set(BodyPointSetKind::BodyMinusLastLink),
                    ClassFilter::AvoidDynamic | ClassFilter::Pushable)
                  .value;
  b.f_push = f_push(traj, chain_, scene_, t1_, axis_weights_).value;
  b.f_vel = f_vel(traj, velocity_literal_).value;
  b.penalties = constraint_penalties(traj, chain_, scene_, t1_, penalties_).value;
  b.total = weights_.alpha1 * b.f_obs_s + weights_.alpha2 * b.f_obs_d +
            weights_.alpha3 * b.f_push + weights_.alpha4 * b.f_vel + b.penalties;
  return b;
}

double CostEvaluator::objective(const JointTrajectory& traj, StageObjective stage) const {
  switch (stage) {
    case StageObjective::Push:
      return weights_.alpha3 * f_push(traj, chain_, scene_, t1_, axis_weights_).value +
             constraint_penalties(traj, chain_, scene_, t1_, penalties_).value;
    case StageObjective::Collision:
      return weights_.alpha1 *
                 f_obs(traj, chain_, scene_, chain_.body_point_set(BodyPointSetKind::FullWithEE),
                       ClassFilter::Static)
                     .value +
             weights_.alpha2 *
                 f_obs(traj, chain_, scene_,
                       chain_.body_point_set(BodyPointSetKind::BodyMinusLastLink),
                       ClassFilter::AvoidDynamic | ClassFilter::Pushable)
                     .value;
    case StageObjective::Velocity:
      return weights_.alpha4 * f_vel(traj, velocity_literal_).value;
    case StageObjective::Combined:
      return breakdown(traj).total;
  }
  throw std::invalid_argument("objective: unknown stage");
}

std::pair<double, MatX> CostEvaluator::objective_with_gradient(const JointTrajectory& traj,
                                                               StageObjective stage) const {
  double value = 0.0;
  MatX gradient = MatX::Zero(traj.steps(), traj.dof());
  auto add = [&](const CostTerm& term, double weight) {
    value += weight * term.value;
    gradient += weight * term.gradient;
  };

  const bool obs = stage == StageObjective::Collision || stage == StageObjective::Combined;
  const bool push = stage == StageObjective::Push || stage == StageObjective::Combined;
  const bool vel = stage == StageObjective::Velocity || stage == StageObjective::Combined;

  if (obs) {
    add(f_obs(traj, chain_, scene_, chain_.body_point_set(BodyPointSetKind::FullWithEE),
              ClassFilter::Static),
        weights_.alpha1);
    add(f_obs(traj, chain_, scene_, chain_.body_point_set(BodyPointSetKind::BodyMinusLastLink),
              ClassFilter::AvoidDynamic | ClassFilter::Pushable),
        weights_.alpha2);
  }
  if (push) {
    add(f_push(traj, chain_, scene_, t1_, axis_weights_), weights_.alpha3);
    add(constraint_penalties(traj, chain_, scene_, t1_, penalties_), 1.0);
  }
  if (vel) add(f_vel(traj, velocity_literal_), weights_.alpha4);

  return {value, std::move(gradient)};
}

}  // namespace reachopt

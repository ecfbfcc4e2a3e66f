#pragma once

#include <functional>
#include <string>
#include <vector>

#include "reachopt/costs.hpp"
#include "reachopt/promp.hpp"

namespace reachopt {

enum class StageMethod { GradientDescent, BoundedQuasiNewton, TrustRegion };

const char* to_string(StageMethod method);

/// One optimization stage of a recipe.
struct StageSpec {
  StageObjective objective{StageObjective::Combined};
  StageMethod method{StageMethod::GradientDescent};
  int max_iters{50};
  double gamma{1e-2};      // step size (gradient-descent family)
  double tolerance{1e-6};
  bool pin_final{false};   // keep the conditioned final state fixed
  std::string label{};
};

struct TraceEntry {
  int iteration{0};
  CostBreakdown breakdown;
  double objective{0.0};
};

struct StageTrace {
  StageSpec spec;
  CostBreakdown initial_breakdown;
  double initial_objective{0.0};
  std::vector<TraceEntry> entries;  // one per accepted iteration
  bool converged{false};
};

struct OptimizationReport {
  JointTrajectory initial;
  JointTrajectory trajectory;  // final
  std::vector<StageTrace> stages;
  double wall_seconds{0.0};
};

/// Called after every accepted iteration with the current iterate.
using IterationObserver =
    std::function<void(int stage_index, int iteration, const JointTrajectory&)>;

/// Via-point given in workspace coordinates; mapped to joint space by
/// inverse kinematics during initialization.
struct WorkspaceVia {
  int t_index{0};
  Vec3 position{Vec3::Zero()};
  double noise{0.0};
  std::string name{};
};

/// Everything the pipeline needs besides scene, chain and recipe.
struct PipelineInputs {
  std::vector<ViaPoint> joint_vias;
  std::vector<WorkspaceVia> workspace_vias;
  int t1{0};
  CostWeights weights;
  PenaltyParams penalties;
  Vec3 axis_weights{Vec3::Ones()};
  bool velocity_literal{false};
};

/// Discretized Euler-Lagrange gradient of the selected stage objective.
/// Row 0 is always zeroed so the conditioned initial state is preserved;
/// the last row is zeroed when pin_final is set.
MatX functional_gradient(const JointTrajectory& traj, const CostEvaluator& eval,
                         StageObjective objective, bool pin_final);

/// Fixed-step gradient descent with backtracking (halve the step up to 20
/// times when the objective would increase, then stop). TrustRegion doubles
/// the accepted step for the next iteration and keeps halvings, so the step
/// adapts like a scalar trust radius. Iterates are clamped to joint limits.
StageTrace descend(JointTrajectory& traj, const StageSpec& stage, const CostEvaluator& eval,
                   int stage_index = 0, const IterationObserver& observer = {});

/// Limited-memory quasi-Newton stage with box bounds equal to the joint
/// limits (pinned waypoints get equal bounds). Same acceptance contract as
/// descend.
StageTrace bounded_quasi_newton(JointTrajectory& traj, const StageSpec& stage,
                                const CostEvaluator& eval, int stage_index = 0,
                                const IterationObserver& observer = {});

/// Condition the primitive on the pipeline's via-points (workspace points
/// mapped through IK, seeded at the evolving mean trajectory) and return
/// the mean as the initial trajectory, clamped to joint limits.
std::pair<PrompModel, JointTrajectory> build_initialization(const Scene& scene,
                                                            const KinematicChain& chain,
                                                            const PrompModel& model,
                                                            const PipelineInputs& inputs);

/// Full pipeline: initialization followed by the recipe stages in order,
/// each stage fed the previous stage's output. Deterministic given
/// identical inputs.
OptimizationReport run_pipeline(const Scene& scene, const KinematicChain& chain,
                                const PrompModel& model, const std::vector<StageSpec>& recipe,
                                const PipelineInputs& inputs,
                                const IterationObserver& observer = {});

}  // namespace reachopt

#pragma once

#include <vector>

#include "reachopt/kinematics.hpp"
#include "reachopt/optimizer.hpp"
#include "reachopt/scene.hpp"

namespace reachopt {

/// Quantitative performance of a finished trajectory.
struct MetricsReport {
  double m_c{0.0};                   // worst static clearance, meters
  std::vector<double> m_p;           // signed push drift per pushable
  std::vector<double> stem_proj_y;   // stem vector projected on y_g
  double mc_threshold{0.0};
  bool collision_pass{false};
  std::vector<bool> push_pass;       // drift sign opposite the stem projection

  bool all_pass() const;
};

/// Worst-case clearance: minimum over all time steps and full-set body
/// points of the static+avoid signed distance, body radii subtracted.
/// Throws UndefinedMetricError when the scene has no such obstacle.
double collision_measure(const JointTrajectory& traj, const KinematicChain& chain,
                         const Scene& scene);

/// Signed drift of the end-effector from a pushable's center, projected on
/// y_g, evaluated at the closest encounter at or after t1.
double push_measure(const JointTrajectory& traj, const KinematicChain& chain, const Scene& scene,
                    int object_index, int t1);

/// Both measures plus pass flags against the scene-declared threshold.
MetricsReport evaluate_scenario(const OptimizationReport& report, const Scene& scene,
                                const KinematicChain& chain, int t1, double mc_threshold);

}  // namespace reachopt

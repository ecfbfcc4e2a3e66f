#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "reachopt/types.hpp"

namespace reachopt {

/// Radial-basis layout shared by every joint of a movement primitive.
/// Centers are equally spaced on the phase interval [0,1]; `h` divides the
/// squared phase distance (larger h = wider, smoother basis).
struct BasisConfig {
  int psi{5};
  double h{4.0};
  int steps{50};

  /// Throws std::invalid_argument unless psi >= 2, h > 0, steps >= 2.
  void validate() const;
};

/// Observation forcing the primitive through `value` at one time index.
/// `noise` is the observation variance; zero means exact (a small floor is
/// applied internally for numerical stability).
struct ViaPoint {
  int t_index{0};
  VecX value;
  double noise{0.0};
  std::string name{};
};

/// Gaussian distribution over basis weights, one independent block per
/// joint. Immutable after construction; conditioning returns a new model.
struct PrompModel {
  BasisConfig basis;
  std::vector<VecX> mu_w;     // per joint, length psi
  std::vector<MatX> sigma_w;  // per joint, psi x psi

  int dof() const { return static_cast<int>(mu_w.size()); }

  /// Checks symmetry (1e-9), eigenvalues >= -1e-9 and finite means.
  void validate() const;
};

/// Normalized Gaussian radial-basis activations at one time step.
/// Entries are strictly positive and sum to 1.
VecX rbf_basis(const BasisConfig& config, int t_index);

/// Full steps x psi basis matrix (row t = rbf_basis(config, t)).
MatX rbf_basis_matrix(const BasisConfig& config);

/// Fit a primitive to demonstrations: per joint and demo, ridge-regularized
/// least squares on the basis matrix; weight mean and sample covariance
/// (plus ridge on the diagonal) form the model.
PrompModel learn_promp(const std::vector<JointTrajectory>& demos, const BasisConfig& config,
                       double ridge = 1e-6);

/// Gaussian conditioning of the weight distribution on a via-point.
PrompModel condition(const PrompModel& model, const ViaPoint& via);

/// Mean trajectory of the weight distribution.
JointTrajectory mean_trajectory(const PrompModel& model);

/// Per-joint absolute residual of the mean trajectory at the via's index.
/// Reports how exactly a (possibly zero-noise) conditioning is realized
/// given the basis expressiveness.
VecX via_residual(const PrompModel& model, const ViaPoint& via);

/// Minimum-jerk point-to-point demonstrations with Gaussian endpoint
/// jitter. Stand-in for recorded human demonstrations.
std::vector<JointTrajectory> synthesize_demos(const VecX& q_start, const VecX& q_goal, int steps,
                                              int count, double jitter, std::uint32_t seed);

/// Demonstration file: one row per time step, one column per joint,
/// header row with joint names.
JointTrajectory read_demo_csv(const std::filesystem::path& path);
void write_demo_csv(const std::filesystem::path& path, const JointTrajectory& demo,
                    const std::vector<std::string>& joint_names = {});

}  // namespace reachopt

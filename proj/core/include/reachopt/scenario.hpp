#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "reachopt/kinematics.hpp"
#include "reachopt/optimizer.hpp"
#include "reachopt/scene.hpp"

namespace reachopt {

/// Via-point as written in a scenario file: either joint values or a
/// workspace position (resolved through IK at initialization).
struct ViaConfig {
  std::string name;
  int t_index{0};
  std::optional<VecX> joints;
  std::optional<Vec3> position;
  double noise{0.0};
};

/// A fully parsed scenario: scene, chain, primitive setup, recipe, weights,
/// metric thresholds and output location.
struct Scenario {
  std::string name;
  std::filesystem::path path;        // scenario file itself
  std::filesystem::path chain_path;  // resolved relative to the file
  Scene scene;
  KinematicChain chain;

  BasisConfig basis;
  double ridge{1e-6};
  int demo_count{8};
  double demo_jitter{0.01};
  std::optional<std::filesystem::path> demo_dir;  // recorded demos instead of synthetic
  std::optional<VecX> demo_goal_joints;           // default: IK of the target position

  std::vector<ViaConfig> vias;
  std::string t1_via{"camera"};

  CostWeights weights;
  PenaltyParams penalties;
  Vec3 axis_weights{Vec3::Ones()};
  bool velocity_literal{false};
  std::vector<StageSpec> recipe;

  double mc_threshold{0.0};
  std::uint32_t seed{0};
  std::filesystem::path out_dir;

  /// Index of the t1 via; throws when the name resolves to nothing.
  int t1_index() const;
};

/// Parse a scenario file. Throws ParseError with file and line on schema
/// violations; referenced files (chain, demos) are resolved and loaded.
Scenario load_scenario(const std::filesystem::path& path);

struct ValidationIssue {
  std::string message;
};

/// Static sanity checks without running the optimization: target outside
/// statics, via indices in range, via positions reachable by IK.
std::vector<ValidationIssue> validate_scenario(const Scenario& scenario);

}  // namespace reachopt

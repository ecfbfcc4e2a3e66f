#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "reachopt/types.hpp"

namespace reachopt {

struct Sphere {
  Vec3 center{Vec3::Zero()};
  double radius{0.0};
};

struct Capsule {
  Vec3 p0{Vec3::Zero()};
  Vec3 p1{Vec3::Zero()};
  double radius{0.0};
};

/// Axis-aligned box.
struct Box {
  Vec3 center{Vec3::Zero()};
  Vec3 half_extents{Vec3::Zero()};
};

enum class ObstacleClass { Static, AvoidDynamic, Pushable };

struct ObstaclePrimitive {
  std::variant<Sphere, Capsule, Box> shape;
  ObstacleClass cls{ObstacleClass::Static};
};

/// Signed distance to one primitive: negative inside, zero on the boundary.
double shape_sdf(const ObstaclePrimitive& obstacle, const Vec3& x);

/// An occluding element the end-effector may displace, connected to its
/// anchor by a stem capsule. The stem starts at the object center.
struct PushableObject {
  Vec3 center{Vec3::Zero()};
  double radius{0.0};
  Capsule stem;

  /// Stem vector S: from the object center along the stem to the anchor.
  Vec3 stem_vector() const { return stem.p1 - stem.p0; }
};

/// Target pose with its fixed reference frame and the gripper clearance
/// radius used by the drift constraint.
struct GoalSpec {
  Pose target;
  Mat3 frame{Mat3::Identity()};  // columns x_g, y_g, z_g
  double r_gripper{0.04};
  int approach_axis{2};  // frame column the gripper advances along

  Vec3 x_axis() const { return frame.col(0); }
  Vec3 y_axis() const { return frame.col(1); }
  Vec3 z_axis() const { return frame.col(2); }
};

/// Bitmask selecting obstacle classes for distance queries.
enum class ClassFilter : unsigned {
  None = 0,
  Static = 1,
  AvoidDynamic = 2,
  Pushable = 4,
  StaticAndAvoid = 3,
  All = 7,
};

constexpr ClassFilter operator|(ClassFilter a, ClassFilter b) {
  return static_cast<ClassFilter>(static_cast<unsigned>(a) | static_cast<unsigned>(b));
}
constexpr bool contains(ClassFilter f, ClassFilter c) {
  return (static_cast<unsigned>(f) & static_cast<unsigned>(c)) != 0;
}

/// One stem crossed by a query segment.
struct StemHit {
  int stem_index{0};
  Vec3 point{Vec3::Zero()};  // closest point on the query segment
  double distance{0.0};      // segment-to-stem-axis distance
};

/// Cluttered environment: static obstacles, clusters to avoid, pushable
/// objects with stems, and the goal. Immutable after load; all queries
/// are reentrant.
struct Scene {
  std::vector<ObstaclePrimitive> statics;
  std::vector<ObstaclePrimitive> avoids;
  std::vector<PushableObject> pushables;
  GoalSpec goal;
  double epsilon_s{0.01};

  /// Throws std::invalid_argument when the goal frame is not orthonormal,
  /// a stem is detached from its object, or the target sits inside a
  /// static obstacle.
  void validate() const;

  static Scene from_yaml_file(const std::string& path);
  static Scene from_yaml_string(const std::string& text);
};

/// Minimum signed distance from x to obstacles of the selected classes.
/// Pushables contribute their bounding spheres. Returns +infinity when the
/// filter matches no obstacle.
double sdf(const Scene& scene, const Vec3& x, ClassFilter filter);

/// Stems whose capsule the segment [a,b] passes through, ordered by stem
/// index. a and b must differ.
std::vector<StemHit> segment_stem_intersections(const Scene& scene, const Vec3& a, const Vec3& b);

/// Exact minimum of sdf over a set of points.
double nearest_static_distance(const Scene& scene, std::span<const Vec3> points,
                               ClassFilter filter = ClassFilter::StaticAndAvoid);

}  // namespace reachopt

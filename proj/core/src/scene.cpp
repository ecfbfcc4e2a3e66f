#include "reachopt/scene.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "reachopt/errors.hpp"

namespace reachopt {

namespace {

double sphere_sdf(const Sphere& s, const Vec3& x) { return (x - s.center).norm() - s.radius; }

double point_segment_distance(const Vec3& x, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 < 1e-18) return (x - a).norm();
  const double t = std::clamp((x - a).dot(ab) / len2, 0.0, 1.0);
  return (x - (a + t * ab)).norm();
}

double capsule_sdf(const Capsule& c, const Vec3& x) {
  return point_segment_distance(x, c.p0, c.p1) - c.radius;
}

double box_sdf(const Box& b, const Vec3& x) {
  const Vec3 q = (x - b.center).cwiseAbs() - b.half_extents;
  const double outside = q.cwiseMax(0.0).norm();
  const double inside = std::min(q.maxCoeff(), 0.0);
  return outside + inside;
}

/// Closest-point parameters (s on [a0,a1], t on [b0,b1]) between segments.
std::pair<double, double> segment_segment_params(const Vec3& a0, const Vec3& a1, const Vec3& b0,
                                                 const Vec3& b1) {
  const Vec3 d1 = a1 - a0;
  const Vec3 d2 = b1 - b0;
  const Vec3 r = a0 - b0;
  const double A = d1.squaredNorm();
  const double E = d2.squaredNorm();
  const double F = d2.dot(r);

  double s = 0.0, t = 0.0;
  if (A < 1e-18 && E < 1e-18) return {0.0, 0.0};
  if (A < 1e-18) {
    t = std::clamp(F / E, 0.0, 1.0);
    return {0.0, t};
  }
  const double C = d1.dot(r);
  if (E < 1e-18) {
    s = std::clamp(-C / A, 0.0, 1.0);
    return {s, 0.0};
  }
  const double B = d1.dot(d2);
  const double denom = A * E - B * B;
  if (denom > 1e-18) s = std::clamp((B * F - C * E) / denom, 0.0, 1.0);
  t = (B * s + F) / E;
  if (t < 0.0) {
    t = 0.0;
    s = std::clamp(-C / A, 0.0, 1.0);
  } else if (t > 1.0) {
    t = 1.0;
    s = std::clamp((B - C) / A, 0.0, 1.0);
  }
  return {s, t};
}

}  // namespace

double shape_sdf(const ObstaclePrimitive& obstacle, const Vec3& x) {
  return std::visit(
      [&x](const auto& shape) -> double {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Sphere>) return sphere_sdf(shape, x);
        if constexpr (std::is_same_v<T, Capsule>) return capsule_sdf(shape, x);
        if constexpr (std::is_same_v<T, Box>) return box_sdf(shape, x);
      },
      obstacle.shape);
}

double sdf(const Scene& scene, const Vec3& x, ClassFilter filter) {
  if (!x.allFinite()) throw std::invalid_argument("sdf: non-finite query point");
  double d = std::numeric_limits<double>::infinity();
  if (contains(filter, ClassFilter::Static)) {
    for (const auto& o : scene.statics) d = std::min(d, shape_sdf(o, x));
  }
  if (contains(filter, ClassFilter::AvoidDynamic)) {
    for (const auto& o : scene.avoids) d = std::min(d, shape_sdf(o, x));
  }
  if (contains(filter, ClassFilter::Pushable)) {
    for (const auto& p : scene.pushables) {
      d = std::min(d, sphere_sdf({p.center, p.radius}, x));
    }
  }
  return d;
}

std::vector<StemHit> segment_stem_intersections(const Scene& scene, const Vec3& a, const Vec3& b) {
  if ((a - b).norm() < 1e-12) {
    throw std::invalid_argument("segment_stem_intersections: degenerate segment");
  }
  std::vector<StemHit> hits;
  for (int i = 0; i < static_cast<int>(scene.pushables.size()); ++i) {
    const Capsule& stem = scene.pushables[i].stem;
    const auto [s, t] = segment_segment_params(a, b, stem.p0, stem.p1);
    const Vec3 on_query = a + s * (b - a);
    const Vec3 on_stem = stem.p0 + t * (stem.p1 - stem.p0);
    const double distance = (on_query - on_stem).norm();
    if (distance <= stem.radius) hits.push_back({i, on_query, distance});
  }
  return hits;
}

double nearest_static_distance(const Scene& scene, std::span<const Vec3> points,
                               ClassFilter filter) {
  double d = std::numeric_limits<double>::infinity();
  for (const Vec3& p : points) d = std::min(d, sdf(scene, p, filter));
  return d;
}

void Scene::validate() const {
  if ((goal.frame * goal.frame.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("Scene: goal frame is not orthonormal");
  }
  if (goal.r_gripper <= 0.0) throw std::invalid_argument("Scene: r_gripper must be > 0");
  if (epsilon_s <= 0.0) throw std::invalid_argument("Scene: epsilon_s must be > 0");
  if (goal.approach_axis < 0 || goal.approach_axis > 2) {
    throw std::invalid_argument("Scene: approach_axis must be 0, 1 or 2");
  }
  auto check_shape = [](const ObstaclePrimitive& o) {
    std::visit(
        [](const auto& shape) {
          using T = std::decay_t<decltype(shape)>;
          if constexpr (std::is_same_v<T, Sphere>) {
            if (shape.radius <= 0.0) throw std::invalid_argument("Scene: sphere radius must be > 0");
          } else if constexpr (std::is_same_v<T, Capsule>) {
            if (shape.radius <= 0.0) throw std::invalid_argument("Scene: capsule radius must be > 0");
          } else {
            if ((shape.half_extents.array() <= 0.0).any()) {
              throw std::invalid_argument("Scene: box half-extents must be > 0");
            }
          }
        },
        o.shape);
  };
  for (const auto& o : statics) check_shape(o);
  for (const auto& o : avoids) check_shape(o);
  for (const auto& p : pushables) {
    if (p.radius <= 0.0) throw std::invalid_argument("Scene: pushable radius must be > 0");
    if (p.stem.radius <= 0.0) throw std::invalid_argument("Scene: stem radius must be > 0");
    if ((p.stem.p0 - p.center).norm() > 1e-6) {
      throw std::invalid_argument("Scene: stem must start at the object center");
    }
  }
  if (!statics.empty() && sdf(*this, goal.target.position, ClassFilter::Static) <= 0.0) {
    throw std::invalid_argument("Scene: target position is inside a static obstacle");
  }
}

// ---------------------------------------------------------------------------
// YAML scene definition

namespace {

[[noreturn]] void fail(const std::string& origin, const YAML::Node& node, const std::string& msg) {
  throw ParseError(origin + ":" + std::to_string(node.Mark().line + 1) + ": " + msg);
}

YAML::Node expect(const std::string& origin, const YAML::Node& node, const std::string& key) {
  const YAML::Node child = node[key];
  if (!child) fail(origin, node, "missing key '" + key + "'");
  return child;
}

Vec3 parse_vec3(const std::string& origin, const YAML::Node& node) {
  if (!node.IsSequence() || node.size() != 3) fail(origin, node, "expected a 3-vector");
  return Vec3(node[0].as<double>(), node[1].as<double>(), node[2].as<double>());
}

ObstaclePrimitive parse_obstacle(const std::string& origin, const YAML::Node& node,
                                 ObstacleClass cls) {
  ObstaclePrimitive o;
  o.cls = cls;
  const std::string type = expect(origin, node, "type").as<std::string>();
  if (type == "sphere") {
    o.shape = Sphere{parse_vec3(origin, expect(origin, node, "center")),
                     expect(origin, node, "radius").as<double>()};
  } else if (type == "capsule") {
    o.shape = Capsule{parse_vec3(origin, expect(origin, node, "p0")),
                      parse_vec3(origin, expect(origin, node, "p1")),
                      expect(origin, node, "radius").as<double>()};
  } else if (type == "box") {
    o.shape = Box{parse_vec3(origin, expect(origin, node, "center")),
                  parse_vec3(origin, expect(origin, node, "half_extents"))};
  } else {
    fail(origin, node, "obstacle type must be sphere, capsule or box, got '" + type + "'");
  }
  return o;
}

}  // namespace

Scene parse_scene_yaml(const YAML::Node& root, const std::string& origin) {
  Scene scene;
  if (root["epsilon_s"]) scene.epsilon_s = root["epsilon_s"].as<double>();

  const YAML::Node goal = expect(origin, root, "goal");
  scene.goal.target.position = parse_vec3(origin, expect(origin, goal, "position"));
  if (goal["frame"]) {
    const YAML::Node frame = goal["frame"];
    scene.goal.frame.col(0) = parse_vec3(origin, expect(origin, frame, "x"));
    scene.goal.frame.col(1) = parse_vec3(origin, expect(origin, frame, "y"));
    scene.goal.frame.col(2) = parse_vec3(origin, expect(origin, frame, "z"));
  }
  if (goal["r_gripper"]) scene.goal.r_gripper = goal["r_gripper"].as<double>();
  if (goal["approach_axis"]) {
    const std::string axis = goal["approach_axis"].as<std::string>();
    if (axis == "x") scene.goal.approach_axis = 0;
    else if (axis == "y") scene.goal.approach_axis = 1;
    else if (axis == "z") scene.goal.approach_axis = 2;
    else fail(origin, goal["approach_axis"], "approach_axis must be x, y or z");
  }

  for (const auto& node : root["statics"]) {
    scene.statics.push_back(parse_obstacle(origin, node, ObstacleClass::Static));
  }
  for (const auto& node : root["avoids"]) {
    scene.avoids.push_back(parse_obstacle(origin, node, ObstacleClass::AvoidDynamic));
  }
  for (const auto& node : root["pushables"]) {
    PushableObject p;
    p.center = parse_vec3(origin, expect(origin, node, "center"));
    p.radius = expect(origin, node, "radius").as<double>();
    p.stem.p0 = p.center;
    p.stem.p1 = parse_vec3(origin, expect(origin, node, "anchor"));
    p.stem.radius = node["stem_radius"] ? node["stem_radius"].as<double>() : 0.003;
    scene.pushables.push_back(p);
  }

  try {
    scene.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(origin + ": " + e.what());
  }
  return scene;
}

Scene Scene::from_yaml_string(const std::string& text) {
  try {
    return parse_scene_yaml(YAML::Load(text), "<string>");
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("<string>:") + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
}

Scene Scene::from_yaml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scene file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_scene_yaml(YAML::Load(buffer.str()), path);
  } catch (const YAML::Exception& e) {
    throw ParseError(path + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
}

}  // namespace reachopt

#pragma once

#include "core/geometry.hpp"

#include <filesystem>
#include <variant>

namespace sgrasp {

struct Sphere {
  Vec3 center = Vec3::Zero();
  double radius = 0;
};

struct Box {
  Vec3 center = Vec3::Zero();
  Mat3 rotation = Mat3::Identity();
  Vec3 half_extents = Vec3::Zero();
};

struct Cylinder {
  Vec3 center = Vec3::Zero();
  Vec3 axis = Vec3::UnitZ();  // unit
  double radius = 0;
  double half_height = 0;
};

using ScenePrimitive = std::variant<Sphere, Box, Cylinder>;

Vec3 primitive_center(const ScenePrimitive& prim);
/// Max distance from center to any surface point (bounding sphere radius).
double primitive_circumradius(const ScenePrimitive& prim);
/// Distance from center down to the lowest surface point (the -z support).
double primitive_support_below(const ScenePrimitive& prim);
/// Primitive moved so its center sits at `center`, spun by `yaw` about z.
ScenePrimitive reposed(const ScenePrimitive& prim, const Vec3& center,
                       double yaw);

/// Tabletop scene: primitives over the plane z = table_height. Fixtures may
/// drop the table (has_table = false) to render free-floating objects.
struct Scene {
  std::vector<ScenePrimitive> primitives;
  double table_height = 0;
  bool has_table = true;

  void validate() const;  // throws on bad shape parameters
};

Scene scene_from_json(const std::string& text);
std::string scene_to_json(const Scene& scene);
Scene load_scene(const std::filesystem::path& path);
void save_scene(const std::filesystem::path& path, const Scene& scene);

struct PlacementRegion {
  double x_min = -0.13, x_max = 0.13;
  double y_min = 0.02, y_max = 0.28;
};

/// Re-poses every primitive: uniform translation in the region, uniform yaw,
/// resting on the table. Placement is rejection-sampled so bounding spheres
/// keep >= 2 mm pairwise clearance; throws after 1000 failed attempts.
Scene randomize_scene(const Scene& scene, uint64_t seed,
                      const PlacementRegion& region = {});

}  // namespace sgrasp

#include "core/scene.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <random>

namespace sgrasp {

using json = nlohmann::ordered_json;

Vec3 primitive_center(const ScenePrimitive& prim) {
  return std::visit([](const auto& p) { return p.center; }, prim);
}

double primitive_circumradius(const ScenePrimitive& prim) {
  struct {
    double operator()(const Sphere& s) const { return s.radius; }
    double operator()(const Box& b) const { return b.half_extents.norm(); }
    double operator()(const Cylinder& c) const {
      return std::hypot(c.radius, c.half_height);
    }
  } v;
  return std::visit(v, prim);
}

double primitive_support_below(const ScenePrimitive& prim) {
  struct {
    double operator()(const Sphere& s) const { return s.radius; }
    double operator()(const Box& b) const {
      // support function of the box in the -z direction
      double h = 0;
      for (int j = 0; j < 3; ++j)
        h += std::abs(b.rotation(2, j)) * b.half_extents[j];
      return h;
    }
    double operator()(const Cylinder& c) const {
      const double az = std::clamp(c.axis.z(), -1.0, 1.0);
      return c.half_height * std::abs(az) +
             c.radius * std::sqrt(std::max(0.0, 1.0 - az * az));
    }
  } v;
  return std::visit(v, prim);
}

ScenePrimitive reposed(const ScenePrimitive& prim, const Vec3& center,
                       double yaw) {
  const Mat3 rz = rotation_about_z(yaw);
  ScenePrimitive out = prim;
  if (auto* s = std::get_if<Sphere>(&out)) {
    s->center = center;
  } else if (auto* b = std::get_if<Box>(&out)) {
    b->center = center;
    b->rotation = rz * b->rotation;
  } else if (auto* c = std::get_if<Cylinder>(&out)) {
    c->center = center;
    c->axis = rz * c->axis;
  }
  return out;
}

void Scene::validate() const {
  for (const ScenePrimitive& prim : primitives) {
    if (const auto* s = std::get_if<Sphere>(&prim)) {
      if (s->radius <= 0) throw std::invalid_argument("sphere radius <= 0");
    } else if (const auto* b = std::get_if<Box>(&prim)) {
      if ((b->half_extents.array() <= 0).any())
        throw std::invalid_argument("box half_extents <= 0");
      RigidTransform t;
      t.rotation = b->rotation;
      if (!t.is_valid(1e-6)) throw std::invalid_argument("box rotation not orthonormal");
    } else if (const auto* c = std::get_if<Cylinder>(&prim)) {
      if (c->radius <= 0 || c->half_height <= 0)
        throw std::invalid_argument("cylinder radius/half_height <= 0");
      if (std::abs(c->axis.norm() - 1.0) > 1e-6)
        throw std::invalid_argument("cylinder axis not unit");
    }
    if (has_table) {
      const double low =
          primitive_center(prim).z() - primitive_support_below(prim);
      if (low < table_height - 1e-6)
        throw std::invalid_argument("primitive dips below the table plane");
    }
  }
}

namespace {

json vec3_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw std::runtime_error("expected 3-vector");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json mat3_to_json(const Mat3& m) {
  json a = json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) a.push_back(m(r, c));
  return a;
}

Mat3 mat3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 9)
    throw std::runtime_error("expected row-major 3x3 matrix (9 floats)");
  Mat3 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = j[size_t(3 * r + c)].get<double>();
  return m;
}

json primitive_to_json(const ScenePrimitive& prim) {
  json j;
  if (const auto* s = std::get_if<Sphere>(&prim)) {
    j["type"] = "sphere";
    j["center"] = vec3_to_json(s->center);
    j["radius"] = s->radius;
  } else if (const auto* b = std::get_if<Box>(&prim)) {
    j["type"] = "box";
    j["center"] = vec3_to_json(b->center);
    j["half_extents"] = vec3_to_json(b->half_extents);
    j["rotation"] = mat3_to_json(b->rotation);
  } else if (const auto* c = std::get_if<Cylinder>(&prim)) {
    j["type"] = "cylinder";
    j["center"] = vec3_to_json(c->center);
    j["radius"] = c->radius;
    j["half_height"] = c->half_height;
    j["axis"] = vec3_to_json(c->axis);
  }
  return j;
}

ScenePrimitive primitive_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "sphere") {
    Sphere s;
    s.center = vec3_from_json(j.at("center"));
    s.radius = j.at("radius").get<double>();
    return s;
  }
  if (type == "box") {
    Box b;
    b.center = vec3_from_json(j.at("center"));
    b.half_extents = vec3_from_json(j.at("half_extents"));
    if (j.contains("rotation")) b.rotation = mat3_from_json(j.at("rotation"));
    return b;
  }
  if (type == "cylinder") {
    Cylinder c;
    c.center = vec3_from_json(j.at("center"));
    c.radius = j.at("radius").get<double>();
    c.half_height = j.at("half_height").get<double>();
    if (j.contains("axis")) {
      c.axis = vec3_from_json(j.at("axis"));
      c.axis.normalize();
    }
    return c;
  }
  throw std::runtime_error("unknown primitive type: " + type);
}

}  // namespace

Scene scene_from_json(const std::string& text) {
  const json j = json::parse(text);
  Scene scene;
  scene.table_height = j.value("table_height", 0.0);
  scene.has_table = j.value("table", true);
  for (const json& p : j.at("primitives"))
    scene.primitives.push_back(primitive_from_json(p));
  scene.validate();
  return scene;
}

std::string scene_to_json(const Scene& scene) {
  json j;
  j["table_height"] = scene.table_height;
  j["table"] = scene.has_table;
  j["primitives"] = json::array();
  for (const ScenePrimitive& p : scene.primitives)
    j["primitives"].push_back(primitive_to_json(p));
  return j.dump(2) + "\n";
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open scene: " + path.string());
  std::string text((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  return scene_from_json(text);
}

void save_scene(const std::filesystem::path& path, const Scene& scene) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write scene: " + path.string());
  f << scene_to_json(scene);
}

Scene randomize_scene(const Scene& scene, uint64_t seed,
                      const PlacementRegion& region) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(region.x_min, region.x_max);
  std::uniform_real_distribution<double> uy(region.y_min, region.y_max);
  std::uniform_real_distribution<double> uyaw(0.0, 2.0 * M_PI);

  constexpr double kClearance = 0.002;
  constexpr int kMaxAttempts = 1000;

  Scene out = scene;
  out.primitives.clear();
  int attempts = 0;
  for (const ScenePrimitive& prim : scene.primitives) {
    const double circum = primitive_circumradius(prim);
    while (true) {
      if (++attempts > kMaxAttempts)
        throw std::runtime_error(
            "randomize_scene: no collision-free placement found (scene too crowded)");
      const double x = ux(rng), y = uy(rng), yaw = uyaw(rng);
      ScenePrimitive candidate = reposed(prim, Vec3(x, y, 0), yaw);
      const double z =
          scene.table_height + primitive_support_below(candidate);
      candidate = reposed(candidate, Vec3(x, y, z), 0.0);

      // Bounding-sphere clearance is conservative, so accepted layouts
      // always satisfy the true >= 2 mm surface clearance.
      bool ok = true;
      for (const ScenePrimitive& placed : out.primitives) {
        const double min_center_dist = circum + primitive_circumradius(placed) + kClearance;
        if ((primitive_center(candidate) - primitive_center(placed)).norm() <
            min_center_dist) {
          ok = false;
          break;
        }
      }
      if (ok) {
        out.primitives.push_back(candidate);
        break;
      }
    }
  }
  out.validate();
  return out;
}

}  // namespace sgrasp

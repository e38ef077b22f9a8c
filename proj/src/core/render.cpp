#include "core/render.hpp"

#include <cmath>
#include <random>

namespace sgrasp {

namespace {

constexpr double kRayEps = 1e-9;
constexpr double kNoHit = std::numeric_limits<double>::infinity();

double hit_sphere(const Sphere& s, const Vec3& o, const Vec3& d) {
  const Vec3 oc = o - s.center;
  const double a = d.squaredNorm();
  const double b = 2.0 * d.dot(oc);
  const double c = oc.squaredNorm() - s.radius * s.radius;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0) return kNoHit;
  const double sq = std::sqrt(disc);
  const double t0 = (-b - sq) / (2.0 * a);
  if (t0 > kRayEps) return t0;
  const double t1 = (-b + sq) / (2.0 * a);
  if (t1 > kRayEps) return t1;
  return kNoHit;
}

double hit_box(const Box& b, const Vec3& o, const Vec3& d) {
  const Vec3 ro = b.rotation.transpose() * (o - b.center);
  const Vec3 rd = b.rotation.transpose() * d;
  double t_enter = -kNoHit, t_exit = kNoHit;
  for (int i = 0; i < 3; ++i) {
    if (rd[i] == 0.0) {
      if (std::abs(ro[i]) > b.half_extents[i]) return kNoHit;
      continue;
    }
    double t0 = (-b.half_extents[i] - ro[i]) / rd[i];
    double t1 = (b.half_extents[i] - ro[i]) / rd[i];
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
    if (t_enter > t_exit) return kNoHit;
  }
  if (t_enter > kRayEps) return t_enter;
  if (t_exit > kRayEps) return t_exit;
  return kNoHit;
}

double hit_cylinder(const Cylinder& c, const Vec3& o, const Vec3& d) {
  // local frame with the cylinder axis as +z
  const Vec3 w = c.axis;
  Vec3 u = std::abs(w.z()) < 0.9 ? w.cross(Vec3::UnitZ()) : w.cross(Vec3::UnitX());
  u.normalize();
  const Vec3 v = w.cross(u);
  const Vec3 po = o - c.center;
  const Vec3 lo(po.dot(u), po.dot(v), po.dot(w));
  const Vec3 ld(d.dot(u), d.dot(v), d.dot(w));

  double best = kNoHit;
  // lateral surface
  const double a = ld.x() * ld.x() + ld.y() * ld.y();
  if (a > 0) {
    const double b = 2.0 * (lo.x() * ld.x() + lo.y() * ld.y());
    const double cc = lo.x() * lo.x() + lo.y() * lo.y() - c.radius * c.radius;
    const double disc = b * b - 4.0 * a * cc;
    if (disc >= 0) {
      const double sq = std::sqrt(disc);
      for (const double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
        if (t > kRayEps && t < best &&
            std::abs(lo.z() + t * ld.z()) <= c.half_height)
          best = t;
      }
    }
  }
  // end caps
  if (ld.z() != 0.0) {
    for (const double sz : {-c.half_height, c.half_height}) {
      const double t = (sz - lo.z()) / ld.z();
      if (t <= kRayEps || t >= best) continue;
      const double px = lo.x() + t * ld.x();
      const double py = lo.y() + t * ld.y();
      if (px * px + py * py <= c.radius * c.radius) best = t;
    }
  }
  return best;
}

double hit_primitive(const ScenePrimitive& prim, const Vec3& o, const Vec3& d) {
  struct {
    const Vec3 &o, &d;
    double operator()(const Sphere& s) const { return hit_sphere(s, o, d); }
    double operator()(const Box& b) const { return hit_box(b, o, d); }
    double operator()(const Cylinder& c) const { return hit_cylinder(c, o, d); }
  } v{o, d};
  return std::visit(v, prim);
}

}  // namespace

double cast_pixel(const Scene& scene, const CameraIntrinsics& K,
                  const RigidTransform& T_wc, double u, double v,
                  double max_range) {
  // direction scaled so the ray parameter equals camera-frame Z
  const Vec3 d_cam((u - K.u0) / K.fx, (v - K.v0) / K.fy, 1.0);
  const Vec3 d = T_wc.rotation * d_cam;
  const Vec3& o = T_wc.translation;

  double best = kNoHit;
  for (const ScenePrimitive& prim : scene.primitives)
    best = std::min(best, hit_primitive(prim, o, d));
  if (scene.has_table && d.z() != 0.0) {
    const double t = (scene.table_height - o.z()) / d.z();
    if (t > kRayEps) best = std::min(best, t);
  }
  return best <= max_range ? best : 0.0;
}

DepthImage render_depth(const Scene& scene, const CameraIntrinsics& K,
                        const RigidTransform& T_wc, double max_range,
                        const RenderOptions& opts) {
  if (max_range <= 0) throw std::invalid_argument("render_depth: max_range <= 0");
  DepthImage depth(K.width, K.height);
  for (int v = 0; v < K.height; ++v)
    for (int u = 0; u < K.width; ++u)
      depth.at(u, v) = cast_pixel(scene, K, T_wc, u, v, max_range);

  if (opts.noise_sigma > 0) {
    std::mt19937_64 rng(opts.noise_seed);
    std::normal_distribution<double> noise(0.0, opts.noise_sigma);
    for (double& z : depth.data) {
      if (z <= 0) continue;
      z = std::clamp(z + noise(rng), 1e-4, max_range);
    }
  }
  return depth;
}

std::vector<RigidTransform> hemisphere_poses(
    const Vec3& center, double radius, int n,
    const std::vector<double>& elevations_deg) {
  if (n < 1) throw std::invalid_argument("hemisphere_poses: n < 1");
  if (radius <= 0) throw std::invalid_argument("hemisphere_poses: radius <= 0");
  if (elevations_deg.empty())
    throw std::invalid_argument("hemisphere_poses: no elevations");

  std::vector<RigidTransform> poses;
  poses.reserve(size_t(n));
  for (int i = 0; i < n; ++i) {
    const double az = 2.0 * M_PI * double(i) / double(n);
    const double el =
        elevations_deg[size_t(i) % elevations_deg.size()] * M_PI / 180.0;
    const Vec3 dir(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az),
                   std::sin(el));
    const Vec3 pos = center + radius * dir;

    const Vec3 z_cam = -dir;  // optical axis, aimed at center exactly
    Vec3 up = Vec3::UnitZ();
    if (up.cross(z_cam).norm() < 1e-9) up = Vec3::UnitY();
    const Vec3 x_cam = up.cross(z_cam).normalized();
    const Vec3 y_cam = z_cam.cross(x_cam);

    RigidTransform pose;
    pose.rotation.col(0) = x_cam;
    pose.rotation.col(1) = y_cam;
    pose.rotation.col(2) = z_cam;
    pose.translation = pos;
    poses.push_back(pose);
  }
  return poses;
}

}  // namespace sgrasp

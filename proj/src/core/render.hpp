#pragma once

#include "core/geometry.hpp"
#include "core/scene.hpp"

namespace sgrasp {

struct RenderOptions {
  double noise_sigma = 0;  // additive Gaussian depth noise, meters
  uint64_t noise_seed = 0;
};

/// Closed-form ray casting of the scene into a depth image. Depth is the
/// camera-frame Z of the nearest hit (primitives and table plane);
/// 0 when nothing is hit within max_range. Deterministic.
DepthImage render_depth(const Scene& scene, const CameraIntrinsics& K,
                        const RigidTransform& T_wc, double max_range,
                        const RenderOptions& opts = {});

/// Camera-frame Z of the nearest hit along the ray through pixel (u, v),
/// or 0. Exposed for per-pixel oracle checks.
double cast_pixel(const Scene& scene, const CameraIntrinsics& K,
                  const RigidTransform& T_wc, double u, double v,
                  double max_range);

/// n viewpoints on a sphere around `center`: azimuths evenly spaced over
/// [0, 2pi), elevations cycling through `elevations_deg`. Each returned pose
/// is world-from-camera with the +Z optical axis aimed exactly at `center`.
std::vector<RigidTransform> hemisphere_poses(
    const Vec3& center, double radius, int n,
    const std::vector<double>& elevations_deg = {30.0, 45.0, 60.0});

}  // namespace sgrasp

#pragma once

#include "core/geometry.hpp"
#include "core/kdtree.hpp"

namespace sgrasp {

/// PCA normal estimation over the k nearest neighbors of each point.
/// Normals are unit length and flipped so n . (viewpoint - p) >= 0.
/// Points whose neighborhood is rank deficient (collinear or coincident)
/// keep a zero normal, which marks them invalid.
PointCloud estimate_normals(const PointCloud& cloud, int k,
                            const Vec3& viewpoint);

PointCloud estimate_normals(const PointCloud& cloud, const KdTree& tree, int k,
                            const Vec3& viewpoint);

}  // namespace sgrasp

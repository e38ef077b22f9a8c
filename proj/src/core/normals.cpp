#include "core/normals.hpp"

namespace sgrasp {

PointCloud estimate_normals(const PointCloud& cloud, int k,
                            const Vec3& viewpoint) {
  const KdTree tree(cloud.points);
  return estimate_normals(cloud, tree, k, viewpoint);
}

PointCloud estimate_normals(const PointCloud& cloud, const KdTree& tree, int k,
                            const Vec3& viewpoint) {
  if (k < 3) throw std::invalid_argument("estimate_normals: k must be >= 3");
  if (cloud.size() < size_t(k) + 1)
    throw std::invalid_argument("estimate_normals: cloud smaller than k+1");

  PointCloud out;
  out.points = cloud.points;
  out.normals.assign(cloud.size(), Vec3::Zero());

  for (size_t i = 0; i < cloud.size(); ++i) {
    const std::vector<int> nb = tree.knn(cloud.points[i], k);
    Vec3 mean = Vec3::Zero();
    for (int j : nb) mean += cloud.points[j];
    mean /= double(nb.size());

    Mat3 cov = Mat3::Zero();
    for (int j : nb) {
      const Vec3 d = cloud.points[j] - mean;
      cov += d * d.transpose();
    }

    Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
    const Vec3 evals = eig.eigenvalues();  // ascending
    // Collinear or coincident neighborhoods have two (near) zero
    // eigenvalues; the normal direction is undefined there.
    if (evals[2] <= 0.0 || evals[1] <= 1e-9 * evals[2]) continue;

    Vec3 n = eig.eigenvectors().col(0);
    n.normalize();
    if (n.dot(viewpoint - cloud.points[i]) < 0) n = -n;
    out.normals[i] = n;
  }
  return out;
}

}  // namespace sgrasp

#pragma once

#include "core/geometry.hpp"

namespace sgrasp {

/// Exact median-split KD-tree over a fixed point set. Immutable after
/// construction; queries are const and safe to run concurrently.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(const std::vector<Vec3>& points);

  size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }

  /// Index of the closest point, -1 when the tree is empty.
  int nearest(const Vec3& query, double* dist_sq_out = nullptr) const;

  /// Indices of all points with |p - query| <= r, ascending index order.
  std::vector<int> radius_indices(const Vec3& query, double r) const;
  size_t radius_count(const Vec3& query, double r) const;

  /// Indices of the k closest points (fewer if the tree is smaller),
  /// ordered by increasing distance.
  std::vector<int> knn(const Vec3& query, int k) const;

 private:
  struct Node {
    int point = -1;  // index into pts_
    int axis = 0;
    int left = -1, right = -1;
  };

  int build(std::vector<int>& ids, int begin, int end, int depth);
  void nearest_rec(int node, const Vec3& q, int& best, double& best_d2) const;
  void radius_rec(int node, const Vec3& q, double r2,
                  std::vector<int>* out, size_t* count) const;
  void knn_rec(int node, const Vec3& q, int k,
               std::vector<std::pair<double, int>>& heap) const;

  std::vector<Vec3> pts_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace sgrasp

#include "core/kdtree.hpp"

#include <algorithm>
#include <numeric>

namespace sgrasp {

KdTree::KdTree(const std::vector<Vec3>& points) : pts_(points) {
  if (pts_.empty()) return;
  std::vector<int> ids(pts_.size());
  std::iota(ids.begin(), ids.end(), 0);
  nodes_.reserve(pts_.size());
  root_ = build(ids, 0, int(ids.size()), 0);
}

int KdTree::build(std::vector<int>& ids, int begin, int end, int depth) {
  if (begin >= end) return -1;
  const int axis = depth % 3;
  const int mid = (begin + end) / 2;
  std::nth_element(ids.begin() + begin, ids.begin() + mid, ids.begin() + end,
                   [&](int a, int b) {
                     if (pts_[a][axis] != pts_[b][axis])
                       return pts_[a][axis] < pts_[b][axis];
                     return a < b;  // tie-break keeps the build deterministic
                   });
  const int node_id = int(nodes_.size());
  nodes_.push_back(Node{ids[mid], axis, -1, -1});
  const int left = build(ids, begin, mid, depth + 1);
  const int right = build(ids, mid + 1, end, depth + 1);
  nodes_[node_id].left = left;
  nodes_[node_id].right = right;
  return node_id;
}

int KdTree::nearest(const Vec3& query, double* dist_sq_out) const {
  int best = -1;
  double best_d2 = std::numeric_limits<double>::infinity();
  nearest_rec(root_, query, best, best_d2);
  if (dist_sq_out) *dist_sq_out = best_d2;
  return best;
}

void KdTree::nearest_rec(int node, const Vec3& q, int& best,
                         double& best_d2) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  const Vec3& p = pts_[n.point];
  const double d2 = (p - q).squaredNorm();
  if (d2 < best_d2 || (d2 == best_d2 && n.point < best)) {
    best = n.point;
    best_d2 = d2;
  }
  const double delta = q[n.axis] - p[n.axis];
  const int first = delta < 0 ? n.left : n.right;
  const int second = delta < 0 ? n.right : n.left;
  nearest_rec(first, q, best, best_d2);
  if (delta * delta <= best_d2) nearest_rec(second, q, best, best_d2);
}

std::vector<int> KdTree::radius_indices(const Vec3& query, double r) const {
  if (r <= 0) throw std::invalid_argument("radius_indices: r must be > 0");
  std::vector<int> out;
  radius_rec(root_, query, r * r, &out, nullptr);
  std::sort(out.begin(), out.end());
  return out;
}

size_t KdTree::radius_count(const Vec3& query, double r) const {
  if (r <= 0) throw std::invalid_argument("radius_count: r must be > 0");
  size_t count = 0;
  radius_rec(root_, query, r * r, nullptr, &count);
  return count;
}

void KdTree::radius_rec(int node, const Vec3& q, double r2,
                        std::vector<int>* out, size_t* count) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  const Vec3& p = pts_[n.point];
  if ((p - q).squaredNorm() <= r2) {
    if (out) out->push_back(n.point);
    if (count) ++*count;
  }
  const double delta = q[n.axis] - p[n.axis];
  if (delta < 0) {
    radius_rec(n.left, q, r2, out, count);
    if (delta * delta <= r2) radius_rec(n.right, q, r2, out, count);
  } else {
    radius_rec(n.right, q, r2, out, count);
    if (delta * delta <= r2) radius_rec(n.left, q, r2, out, count);
  }
}

std::vector<int> KdTree::knn(const Vec3& query, int k) const {
  if (k <= 0) return {};
  std::vector<std::pair<double, int>> heap;  // max-heap on distance
  heap.reserve(size_t(k) + 1);
  knn_rec(root_, query, k, heap);
  std::sort_heap(heap.begin(), heap.end());
  std::vector<int> out;
  out.reserve(heap.size());
  for (const auto& [d2, id] : heap) out.push_back(id);
  return out;
}

void KdTree::knn_rec(int node, const Vec3& q, int k,
                     std::vector<std::pair<double, int>>& heap) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  const Vec3& p = pts_[n.point];
  const double d2 = (p - q).squaredNorm();
  if (int(heap.size()) < k) {
    heap.emplace_back(d2, n.point);
    std::push_heap(heap.begin(), heap.end());
  } else if (d2 < heap.front().first) {
    std::pop_heap(heap.begin(), heap.end());
    heap.back() = {d2, n.point};
    std::push_heap(heap.begin(), heap.end());
  }
  const double delta = q[n.axis] - p[n.axis];
  const int first = delta < 0 ? n.left : n.right;
  const int second = delta < 0 ? n.right : n.left;
  knn_rec(first, q, k, heap);
  const double worst = int(heap.size()) < k
                           ? std::numeric_limits<double>::infinity()
                           : heap.front().first;
  if (delta * delta <= worst) knn_rec(second, q, k, heap);
}

}  // namespace sgrasp

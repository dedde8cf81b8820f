#include "torque/kdtree.hpp"

#include <algorithm>
#include <numeric>

#include "torque/core.hpp"

namespace torque {

KdTree::KdTree(std::span<const double> points, std::size_t dim, std::span<const std::size_t> keys)
    : dim_(dim) {
  if (dim == 0 || points.size() != keys.size() * dim) {
    throw InputError("k-d tree: point buffer does not match key count and dimension");
  }
  const std::size_t count = keys.size();
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  nodes_.reserve(count / kLeafSize * 2 + 1);
  if (count > 0) build(order, points, 0, count);

  points_.resize(count * dim);
  keys_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::copy_n(points.begin() + order[i] * dim, dim, points_.begin() + i * dim);
    keys_[i] = keys[order[i]];
  }
}

std::size_t KdTree::build(std::vector<std::size_t>& order, std::span<const double> points,
                          std::size_t begin, std::size_t end) {
  const std::size_t index = nodes_.size();
  nodes_.push_back(Node{begin, end});
  if (end - begin <= kLeafSize) return index;

  // Split on the dimension of widest spread.
  std::size_t best_dim = 0;
  double best_spread = -1.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = begin; i < end; ++i) {
      const double v = points[order[i] * dim_ + k];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      best_dim = k;
    }
  }
  if (best_spread <= 0.0) return index;  // all points coincide

  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                   [&](std::size_t a, std::size_t b) {
                     return points[a * dim_ + best_dim] < points[b * dim_ + best_dim];
                   });
  const double split = points[order[mid] * dim_ + best_dim];
  const std::size_t left = build(order, points, begin, mid);
  const std::size_t right = build(order, points, mid, end);
  Node& node = nodes_[index];
  node.split_dim = best_dim;
  node.split_value = split;
  node.left = left;
  node.right = right;
  return index;
}

std::optional<KdTree::Hit> KdTree::nearest(std::span<const double> query,
                                           std::optional<std::size_t> excluded_key) const {
  if (query.size() != dim_) throw InputError("k-d tree: query dimension mismatch");
  Hit best;
  bool found = false;
  if (!nodes_.empty()) search(0, query, excluded_key, best, found);
  if (!found) return std::nullopt;
  return best;
}

void KdTree::search(std::size_t node_index, std::span<const double> query,
                    std::optional<std::size_t> excluded, Hit& best, bool& found) const {
  const Node& node = nodes_[node_index];
  if (node.left == kLeaf) {
    for (std::size_t i = node.begin; i < node.end; ++i) {
      if (excluded && keys_[i] == *excluded) continue;
      const double* p = points_.data() + i * dim_;
      double d2 = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) {
        const double diff = query[k] - p[k];
        d2 += diff * diff;
      }
      if (!found || d2 < best.squared_distance ||
          (d2 == best.squared_distance && keys_[i] < best.key)) {
        best = Hit{keys_[i], d2};
        found = true;
      }
    }
    return;
  }
  const double diff = query[node.split_dim] - node.split_value;
  const std::size_t near = diff < 0.0 ? node.left : node.right;
  const std::size_t far = diff < 0.0 ? node.right : node.left;
  search(near, query, excluded, best, found);
  // Equal bound still visits: a tie there may carry a smaller key.
  if (!found || diff * diff <= best.squared_distance) search(far, query, excluded, best, found);
}

}  // namespace torque

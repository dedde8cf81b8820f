#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace torque {

/// Static k-d tree for exact nearest-neighbour queries under squared
/// euclidean distance.
///
/// Every point carries an integer key. Equidistant candidates are resolved in
/// favour of the smallest key, so query results do not depend on the build
/// order. A query may exclude one key (the caller's own point).
class KdTree {
 public:
  struct Hit {
    std::size_t key = 0;
    double squared_distance = std::numeric_limits<double>::infinity();
  };

  KdTree() = default;
  // points: count x dim, row-major. keys.size() must equal count.
  KdTree(std::span<const double> points, std::size_t dim, std::span<const std::size_t> keys);

  std::size_t size() const noexcept { return keys_.size(); }
  std::size_t dim() const noexcept { return dim_; }

  std::optional<Hit> nearest(std::span<const double> query,
                             std::optional<std::size_t> excluded_key = std::nullopt) const;

 private:
  struct Node {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t split_dim = 0;
    double split_value = 0.0;
    std::size_t left = kLeaf;
    std::size_t right = kLeaf;
  };
  static constexpr std::size_t kLeaf = std::numeric_limits<std::size_t>::max();
  static constexpr std::size_t kLeafSize = 8;

  std::size_t build(std::vector<std::size_t>& order, std::span<const double> points,
                    std::size_t begin, std::size_t end);
  void search(std::size_t node, std::span<const double> query, std::optional<std::size_t> excluded,
              Hit& best, bool& found) const;

  std::size_t dim_ = 0;
  std::vector<double> points_;  // permuted copy, row-major
  std::vector<std::size_t> keys_;
  std::vector<Node> nodes_;
};

}  // namespace torque

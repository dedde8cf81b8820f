#include "torque/core.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

namespace torque {

Dataset::Dataset(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw InputError("dataset has " + std::to_string(values_.size()) + " values, expected " +
                     std::to_string(rows_ * cols_));
  }
  if (rows_ > 0 && cols_ == 0) throw InputError("dataset rows have no features");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw InputError("non-finite feature at row " + std::to_string(k / cols_) + ", column " +
                       std::to_string(k % cols_));
    }
  }
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t d = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * d);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) {
      throw InputError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                       " features, expected " + std::to_string(d));
    }
    values.insert(values.end(), rows[i].begin(), rows[i].end());
  }
  return Dataset(rows.size(), d, std::move(values));
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
  if (auto v = validate_distance_matrix(n_, values_)) throw InputError(v->message);
}

namespace {

std::string at(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

std::optional<MatrixViolation> validate_distance_matrix(std::size_t n,
                                                        std::span<const double> values) {
  if (values.size() != n * n) {
    throw InputError("distance matrix is not square: " + std::to_string(values.size()) +
                     " entries for " + std::to_string(n) + " rows");
  }
  using Kind = MatrixViolation::Kind;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = values[i * n + j];
      if (!std::isfinite(v)) {
        return MatrixViolation{Kind::non_finite, i, j, "non-finite entry at " + at(i, j)};
      }
      if (v < 0.0) {
        return MatrixViolation{Kind::negative, i, j, "negative entry at " + at(i, j)};
      }
      if (i == j && v != 0.0) {
        return MatrixViolation{Kind::nonzero_diagonal, i, j, "nonzero diagonal at " + at(i, j)};
      }
      if (j > i && std::abs(v - values[j * n + i]) > kSymmetryTolerance) {
        return MatrixViolation{Kind::asymmetric, i, j,
                               "asymmetric entries at " + at(i, j) + "/" + at(j, i)};
      }
    }
  }
  return std::nullopt;
}

std::optional<MatrixViolation> validate_distance_matrix(const DistanceMatrix& m) {
  return validate_distance_matrix(m.size(), m.values());
}

std::vector<std::size_t> Partition::cluster_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (auto l : labels) ++sizes[l];
  return sizes;
}

std::size_t TorqueResult::non_redundant_count() const noexcept {
  std::size_t count = 0;
  for (const auto& c : connections) count += c.redundant ? 0 : 1;
  return count;
}

DisjointSet::DisjointSet(std::size_t n) : parent_(n), size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSet::find(std::size_t x) noexcept {
  std::size_t root = x;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[x] != root) {
    const std::size_t next = parent_[x];
    parent_[x] = root;
    x = next;
  }
  return root;
}

bool DisjointSet::unite(std::size_t x, std::size_t y) noexcept {
  x = find(x);
  y = find(y);
  if (x == y) return false;
  if (size_[x] < size_[y]) std::swap(x, y);
  parent_[y] = x;
  size_[x] += size_[y];
  return true;
}

Partition partition_from_components(std::size_t n, std::span<const SamplePair> edges) {
  DisjointSet sets(n);
  for (const auto& e : edges) {
    if (e.first >= n || e.second >= n) {
      throw InputError("edge endpoint out of range: " + at(e.first, e.second) + " for n=" +
                       std::to_string(n));
    }
    sets.unite(e.first, e.second);
  }
  std::vector<std::size_t> roots(n);
  for (std::size_t i = 0; i < n; ++i) roots[i] = sets.find(i);
  return canonical_partition(roots);
}

Partition canonical_partition(std::span<const std::size_t> labels) {
  Partition p;
  p.labels.resize(labels.size());
  std::unordered_map<std::size_t, std::size_t> remap;
  remap.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(labels[i], p.k);
    if (inserted) ++p.k;
    p.labels[i] = it->second;
  }
  return p;
}

}  // namespace torque

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace torque {

using SampleIndex = std::size_t;
using ClusterId = std::size_t;
using ConnectionId = std::size_t;

// Error hierarchy. Every failure the library reports derives from Error so
// front ends can catch one type and map the subtype to an exit code or status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied malformed or out-of-range data.
class InputError : public Error {
 public:
  using Error::Error;
};

// Operation invoked in a state where it is undefined (e.g. merging one cluster).
class StateError : public Error {
 public:
  using Error::Error;
};

// Requested mode cannot run on the available input (e.g. centroid linkage on a
// precomputed matrix).
class UnsupportedModeError : public Error {
 public:
  using Error::Error;
};

/// Dense n x d feature matrix, row-major. All values are finite.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t rows, std::size_t cols, std::vector<double> values);
  static Dataset from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * cols_, cols_};
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[i * cols_ + j];
  }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Symmetric n x n matrix of nonnegative pairwise distances with zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}
  // Validates; throws InputError describing the first violation.
  DistanceMatrix(std::size_t n, std::vector<double> values);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[i * n_ + j];
  }
  // Writes both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double v) noexcept {
    values_[i * n_ + j] = v;
    values_[j * n_ + i] = v;
  }
  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * n_, n_};
  }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

inline constexpr double kSymmetryTolerance = 1e-9;

struct MatrixViolation {
  enum class Kind { asymmetric, negative, nonzero_diagonal, non_finite };
  Kind kind;
  std::size_t row;
  std::size_t col;
  std::string message;
};

/// Checks symmetry (within kSymmetryTolerance), zero diagonal, finiteness and
/// nonnegativity of a row-major square matrix. Returns the first violation in
/// row-major scan order, or nullopt. Throws InputError if values.size() != n*n.
std::optional<MatrixViolation> validate_distance_matrix(std::size_t n,
                                                        std::span<const double> values);
std::optional<MatrixViolation> validate_distance_matrix(const DistanceMatrix& m);

struct Cluster {
  ClusterId id = 0;
  std::vector<SampleIndex> members;  // sorted ascending

  std::size_t mass() const noexcept { return members.size(); }
};

/// Unordered sample pair stored with first < second.
struct SamplePair {
  SampleIndex first = 0;
  SampleIndex second = 0;

  static SamplePair of(SampleIndex a, SampleIndex b) noexcept {
    return a < b ? SamplePair{a, b} : SamplePair{b, a};
  }
  friend auto operator<=>(const SamplePair&, const SamplePair&) = default;
};

/// One logged merge edge of the hierarchy.
struct Connection {
  ConnectionId id = 0;
  std::size_t round = 0;
  ClusterId from_cluster = 0;
  ClusterId to_cluster = 0;
  std::size_t from_mass = 0;
  std::size_t to_mass = 0;
  double distance = 0.0;
  std::uint64_t mass_product = 0;   // from_mass * to_mass
  double squared_distance = 0.0;    // distance^2
  double gamma = 0.0;               // mass_product * squared_distance
  bool redundant = false;
  SamplePair samples;               // member pair realizing the connection

  friend bool operator==(const Connection&, const Connection&) = default;
};

struct Partition {
  std::vector<std::size_t> labels;
  std::size_t k = 0;

  std::vector<std::size_t> cluster_sizes() const;
  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Full hierarchy produced by one clustering run.
struct TorqueResult {
  std::size_t n = 0;
  std::vector<Connection> connections;  // ordered by id
  std::vector<std::size_t> rounds;      // cluster count before round 0, after each round
  std::size_t final_cluster_count = 0;

  std::size_t non_redundant_count() const noexcept;
  bool contains(ConnectionId id) const noexcept { return id < connections.size(); }
  friend bool operator==(const TorqueResult&, const TorqueResult&) = default;
};

/// Path-compressed, union-by-size disjoint sets over [0, n).
class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n = 0);

  std::size_t find(std::size_t x) noexcept;
  // Returns false when x and y were already in the same set.
  bool unite(std::size_t x, std::size_t y) noexcept;
  std::size_t size() const noexcept { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

/// Connected components of the undirected graph on n vertices. Labels are
/// renumbered 0..k-1 in order of each component's smallest member.
Partition partition_from_components(std::size_t n, std::span<const SamplePair> edges);

/// Relabels arbitrary labels canonically (first occurrence order).
Partition canonical_partition(std::span<const std::size_t> labels);

}  // namespace torque

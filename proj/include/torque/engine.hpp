#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "torque/core.hpp"
#include "torque/linkage.hpp"

namespace torque {

/// How nearest clusters are found. Linkage::mean_representative selects the
/// approximate mode (cluster means in a k-d tree, euclidean only); every other
/// linkage runs exactly against the pairwise distance matrix.
struct RunOptions {
  Metric metric = Metric::euclidean;
  Linkage linkage = Linkage::single;

  bool approximate() const noexcept { return linkage == Linkage::mean_representative; }
};

struct TorqueProperties {
  std::uint64_t mass_product = 0;
  double squared_distance = 0.0;
  double gamma = 0.0;
};

TorqueProperties connection_properties(std::size_t from_mass, std::size_t to_mass,
                                       double distance);
// Same, for callers that already hold the squared distance.
TorqueProperties connection_properties_squared(std::size_t from_mass, std::size_t to_mass,
                                               double squared_distance);

/// A cluster pointing at its nearest cluster, before deduplication.
struct DirectedConnection {
  ClusterId from = 0;
  ClusterId to = 0;
  std::size_t from_mass = 0;
  std::size_t to_mass = 0;
  double distance = 0.0;
  SamplePair samples;
};

struct EngineState {
  std::vector<Cluster> clusters;  // sorted by id
  std::size_t round = 0;
  DisjointSet samples;            // mirrors cluster membership
  std::vector<Connection> log;
  std::vector<std::size_t> rounds;
  ClusterId next_cluster_id = 0;

  static EngineState singletons(std::size_t n);
  std::size_t mass_total() const noexcept;
};

/// Keeps cluster i -> nearest(i) exactly when mass(i) <= mass(nearest(i)).
/// `nearest` is aligned with `clusters`.
std::vector<DirectedConnection> form_connections(std::span<const Cluster> clusters,
                                                 std::span<const NearestCluster> nearest);

/// Collapses mutual pairs, orders edges by (smaller id, larger id), assigns
/// connection ids and properties, and replays them through the sample-level
/// union: an edge whose endpoints are already joined is flagged redundant.
/// Appends to state.log and unites state.samples; returns the new records.
std::vector<Connection> dedupe_and_classify(std::span<const DirectedConnection> directed,
                                            EngineState& state);

/// Stepwise driver. Inputs are borrowed and must outlive the engine.
class TorqueEngine {
 public:
  TorqueEngine(const Dataset& data, RunOptions options);
  TorqueEngine(const DistanceMatrix& matrix, RunOptions options);
  ~TorqueEngine();
  TorqueEngine(const TorqueEngine&) = delete;
  TorqueEngine& operator=(const TorqueEngine&) = delete;

  const EngineState& state() const noexcept { return state_; }
  bool done() const noexcept { return state_.clusters.size() <= 1; }

  /// One round: nearest query, connection rule, components, mass summation.
  /// Throws StateError when fewer than two clusters remain.
  void merge_round();
  TorqueResult result() const;

 private:
  struct Table;

  void init(std::size_t n);
  std::vector<NearestCluster> nearest_exact() const;
  void rebuild_table(std::span<const std::size_t> old_to_new, std::size_t new_count);

  const Dataset* data_ = nullptr;
  const DistanceMatrix* matrix_ = nullptr;
  std::optional<DistanceMatrix> owned_matrix_;
  RunOptions options_;
  EngineState state_;
  std::unique_ptr<Table> table_;
};

/// Runs the merge loop from n singletons down to a single cluster.
/// Throws InputError for an empty input.
TorqueResult run(const Dataset& data, RunOptions options = {});
TorqueResult run(const DistanceMatrix& matrix, RunOptions options = {});

}  // namespace torque

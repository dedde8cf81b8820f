#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "torque/core.hpp"

namespace torque {

enum class Metric { euclidean, cosine, precomputed };

enum class Linkage { single, complete, average, centroid, mean_representative };

Metric parse_metric(std::string_view name);
Linkage parse_linkage(std::string_view name);
std::string_view to_string(Metric m) noexcept;
std::string_view to_string(Linkage l) noexcept;

/// Distance between two feature vectors. Euclidean accumulates squared
/// differences in index order; cosine is 1 - a.b/(|a||b|) clamped at zero.
double point_distance(std::span<const double> a, std::span<const double> b, Metric metric);

/// Full pairwise matrix. Throws InputError for a zero-norm row under cosine and
/// UnsupportedModeError for Metric::precomputed.
DistanceMatrix pairwise_distances(const Dataset& data, Metric metric);

/// Linkage distance between two clusters plus the closest member pair, which
/// is what a cut later uses to reconnect samples.
struct ClusterLink {
  double distance = 0.0;
  SamplePair samples;
};

/// Total order used for every nearest query: distance, then the sample pair.
inline bool closer(double da, const SamplePair& pa, double db, const SamplePair& pb) noexcept {
  return da < db || (da == db && pa < pb);
}

/// Inter-cluster distance. Centroid linkage needs raw features: pass `data`
/// and the metric used to build `s`; otherwise UnsupportedModeError.
/// mean_representative is treated as centroid.
ClusterLink cluster_distance(const Cluster& a, const Cluster& b, const DistanceMatrix& s,
                             Linkage linkage, const Dataset* data = nullptr,
                             Metric metric = Metric::euclidean);

struct NearestCluster {
  ClusterId id = 0;
  double distance = 0.0;
  SamplePair samples;
  friend bool operator==(const NearestCluster&, const NearestCluster&) = default;
};

/// For every cluster, the other cluster minimizing cluster_distance; ties go
/// to the smallest cluster id. Output is aligned with `clusters`.
std::vector<NearestCluster> nearest_clusters_exact(std::span<const Cluster> clusters,
                                                   const DistanceMatrix& s, Linkage linkage,
                                                   const Dataset* data = nullptr,
                                                   Metric metric = Metric::euclidean);

/// Mean-representative nearest clusters: each cluster is summarized by its
/// feature mean and the nearest mean is found through a k-d tree. Distances
/// are euclidean between means; ties go to the smallest cluster id. The
/// returned sample pair is left empty; see closest_member_pair.
std::vector<NearestCluster> nearest_clusters_approx(std::span<const Cluster> clusters,
                                                    const Dataset& data);

/// Feature mean of a cluster, members summed in ascending index order.
std::vector<double> cluster_mean(const Cluster& c, const Dataset& data);

/// Closest euclidean member pair between two clusters, found by indexing the
/// larger cluster. Ties resolve to the lexicographically smallest pair.
ClusterLink closest_member_pair(const Cluster& a, const Cluster& b, const Dataset& data);

}  // namespace torque

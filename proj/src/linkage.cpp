#include "torque/linkage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "torque/kdtree.hpp"

namespace torque {

Metric parse_metric(std::string_view name) {
  if (name == "euclidean") return Metric::euclidean;
  if (name == "cosine") return Metric::cosine;
  if (name == "precomputed") return Metric::precomputed;
  throw InputError("unknown metric '" + std::string(name) + "'");
}

Linkage parse_linkage(std::string_view name) {
  if (name == "single") return Linkage::single;
  if (name == "complete") return Linkage::complete;
  if (name == "average") return Linkage::average;
  if (name == "centroid") return Linkage::centroid;
  if (name == "mean_representative") return Linkage::mean_representative;
  throw InputError("unknown linkage '" + std::string(name) + "'");
}

std::string_view to_string(Metric m) noexcept {
  switch (m) {
    case Metric::euclidean: return "euclidean";
    case Metric::cosine: return "cosine";
    case Metric::precomputed: return "precomputed";
  }
  return "?";
}

std::string_view to_string(Linkage l) noexcept {
  switch (l) {
    case Linkage::single: return "single";
    case Linkage::complete: return "complete";
    case Linkage::average: return "average";
    case Linkage::centroid: return "centroid";
    case Linkage::mean_representative: return "mean_representative";
  }
  return "?";
}

namespace {

double squared_norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

double cosine_from_norms(std::span<const double> a, std::span<const double> b, double na,
                         double nb) {
  double dot = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
  return std::max(0.0, 1.0 - dot / (na * nb));
}

}  // namespace

double point_distance(std::span<const double> a, std::span<const double> b, Metric metric) {
  switch (metric) {
    case Metric::euclidean: {
      double s = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        s += diff * diff;
      }
      return std::sqrt(s);
    }
    case Metric::cosine: {
      const double na = std::sqrt(squared_norm(a));
      const double nb = std::sqrt(squared_norm(b));
      if (na == 0.0 || nb == 0.0) throw InputError("cosine distance of a zero-norm vector");
      return cosine_from_norms(a, b, na, nb);
    }
    case Metric::precomputed:
      break;
  }
  throw UnsupportedModeError("precomputed metric has no feature-space kernel");
}

DistanceMatrix pairwise_distances(const Dataset& data, Metric metric) {
  if (metric == Metric::precomputed) {
    throw UnsupportedModeError("precomputed metric requires a distance matrix input");
  }
  const std::size_t n = data.rows();
  DistanceMatrix s(n);
  if (metric == Metric::cosine) {
    std::vector<double> norms(n);
    for (std::size_t i = 0; i < n; ++i) {
      norms[i] = std::sqrt(squared_norm(data.row(i)));
      if (norms[i] == 0.0) {
        throw InputError("row " + std::to_string(i) + " has zero norm; cosine distance undefined");
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        s.set(i, j, cosine_from_norms(data.row(i), data.row(j), norms[i], norms[j]));
      }
    }
    return s;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      s.set(i, j, point_distance(data.row(i), data.row(j), Metric::euclidean));
    }
  }
  return s;
}

std::vector<double> cluster_mean(const Cluster& c, const Dataset& data) {
  std::vector<double> mean(data.cols(), 0.0);
  for (auto m : c.members) {
    const auto row = data.row(m);
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += row[k];
  }
  const double mass = static_cast<double>(c.mass());
  for (auto& v : mean) v /= mass;
  return mean;
}

ClusterLink cluster_distance(const Cluster& a, const Cluster& b, const DistanceMatrix& s,
                             Linkage linkage, const Dataset* data, Metric metric) {
  if (a.members.empty() || b.members.empty()) throw InputError("cluster_distance: empty cluster");
  const bool needs_features =
      linkage == Linkage::centroid || linkage == Linkage::mean_representative;
  if (needs_features && (data == nullptr || metric == Metric::precomputed)) {
    throw UnsupportedModeError("centroid linkage needs raw feature vectors");
  }

  ClusterLink closest{std::numeric_limits<double>::infinity(), {}};
  double farthest = 0.0;
  double sum = 0.0;
  for (auto i : a.members) {
    for (auto j : b.members) {
      if (i == j) throw InputError("cluster_distance: clusters share sample " + std::to_string(i));
      const double d = s(i, j);
      const SamplePair p = SamplePair::of(i, j);
      if (closer(d, p, closest.distance, closest.samples)) closest = {d, p};
      farthest = std::max(farthest, d);
    }
  }
  // Mean accumulates in ascending (smaller index, larger index) pair order so
  // that the value does not depend on which cluster is passed first.
  if (linkage == Linkage::average) {
    const auto& lo = a.members.front() < b.members.front() ? a : b;
    const auto& hi = &lo == &a ? b : a;
    std::vector<std::pair<SampleIndex, SampleIndex>> pairs;
    pairs.reserve(a.mass() * b.mass());
    for (auto i : lo.members)
      for (auto j : hi.members) pairs.emplace_back(std::min(i, j), std::max(i, j));
    std::sort(pairs.begin(), pairs.end());
    for (auto [i, j] : pairs) sum += s(i, j);
  }

  switch (linkage) {
    case Linkage::single:
      return closest;
    case Linkage::complete:
      return {farthest, closest.samples};
    case Linkage::average:
      return {sum / (static_cast<double>(a.mass()) * static_cast<double>(b.mass())),
              closest.samples};
    case Linkage::centroid:
    case Linkage::mean_representative:
      return {point_distance(cluster_mean(a, *data), cluster_mean(b, *data), metric),
              closest.samples};
  }
  return closest;
}

std::vector<NearestCluster> nearest_clusters_exact(std::span<const Cluster> clusters,
                                                   const DistanceMatrix& s, Linkage linkage,
                                                   const Dataset* data, Metric metric) {
  if (clusters.size() < 2) throw StateError("nearest-cluster query needs at least two clusters");
  std::vector<NearestCluster> out(clusters.size());
  std::vector<bool> found(clusters.size(), false);
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    for (std::size_t j = i + 1; j < clusters.size(); ++j) {
      const ClusterLink link = cluster_distance(clusters[i], clusters[j], s, linkage, data, metric);
      auto offer = [&](std::size_t self, std::size_t other) {
        auto& best = out[self];
        const ClusterId id = clusters[other].id;
        if (!found[self] || link.distance < best.distance ||
            (link.distance == best.distance && id < best.id)) {
          best = {id, link.distance, link.samples};
          found[self] = true;
        }
      };
      offer(i, j);
      offer(j, i);
    }
  }
  return out;
}

std::vector<NearestCluster> nearest_clusters_approx(std::span<const Cluster> clusters,
                                                    const Dataset& data) {
  if (clusters.size() < 2) throw StateError("nearest-cluster query needs at least two clusters");
  if (data.empty()) throw UnsupportedModeError("mean-representative mode needs raw features");
  const std::size_t d = data.cols();
  std::vector<double> means;
  means.reserve(clusters.size() * d);
  std::vector<std::size_t> keys;
  keys.reserve(clusters.size());
  for (const auto& c : clusters) {
    const auto m = cluster_mean(c, data);
    means.insert(means.end(), m.begin(), m.end());
    keys.push_back(c.id);
  }
  const KdTree tree(means, d, keys);
  std::vector<NearestCluster> out(clusters.size());
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const auto hit = tree.nearest(std::span<const double>(means).subspan(i * d, d), keys[i]);
    out[i] = {hit->key, std::sqrt(hit->squared_distance), {}};
  }
  return out;
}

ClusterLink closest_member_pair(const Cluster& a, const Cluster& b, const Dataset& data) {
  const Cluster& indexed = a.mass() >= b.mass() ? a : b;
  const Cluster& probe = &indexed == &a ? b : a;
  const std::size_t d = data.cols();
  std::vector<double> points;
  points.reserve(indexed.mass() * d);
  for (auto m : indexed.members) {
    const auto row = data.row(m);
    points.insert(points.end(), row.begin(), row.end());
  }
  const KdTree tree(points, d, indexed.members);
  // For a fixed probe sample the smallest partner index also yields the
  // lexicographically smallest ordered pair, so per-probe tie-breaking by key
  // composes into the global pair order.
  double best_d2 = std::numeric_limits<double>::infinity();
  SamplePair best{};
  for (auto u : probe.members) {
    const auto hit = tree.nearest(data.row(u));
    const SamplePair p = SamplePair::of(u, hit->key);
    if (closer(hit->squared_distance, p, best_d2, best)) {
      best_d2 = hit->squared_distance;
      best = p;
    }
  }
  return {std::sqrt(best_d2), best};
}

}  // namespace torque

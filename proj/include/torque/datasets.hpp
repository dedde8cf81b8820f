#pragma once

#include <cstdint>
#include <vector>

#include "torque/core.hpp"
#include "torque/metrics.hpp"

namespace torque::datasets {

struct Labeled {
  Dataset data;
  std::vector<Label> labels;
};

/// Fifty 2-D points in seven "galaxies" of masses 15, 2, 10, 3, 2, 2, 16
/// (labels 0..6). Round 0 builds exactly those galaxies; round 1 joins them
/// into masses 17, 17, 16 with connections of mass product 30, 30, 20, 20;
/// round 2 links the three with mass products 289 and 272. The last two are
/// the only connections with large mass product and large squared distance.
Labeled galaxies();

/// Ground truth of galaxies() after the two abnormal connections are cut.
std::vector<Label> galaxies_final_labels();

/// Connection log with the published galaxy-level properties: seven galaxy
/// nodes (A=0 .. G=6), ids 0..5 for the six connections in table order,
/// squared distances taken verbatim.
TorqueResult galaxy_connection_log();

/// Isotropic Gaussian blobs, `per_blob` samples each, labels = blob index.
Labeled gaussian_blobs(const std::vector<std::vector<double>>& centers, std::size_t per_blob,
                       double sigma, std::uint64_t seed);

/// n points uniform in [0, 1)^d.
Dataset uniform(std::size_t n, std::size_t d, std::uint64_t seed);

}  // namespace torque::datasets

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace torque {

using Label = std::int64_t;

/// Cross-tabulation of two labelings. Rows follow the sorted distinct values
/// of the first labeling, columns those of the second.
struct ContingencyTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> counts;  // row-major
  std::vector<std::size_t> row_sums;
  std::vector<std::size_t> col_sums;
  std::size_t n = 0;

  static ContingencyTable build(std::span<const Label> a, std::span<const Label> b);
  std::size_t operator()(std::size_t r, std::size_t c) const noexcept {
    return counts[r * cols + c];
  }
};

/// Natural-log entropy of marginal counts; 0 log 0 = 0.
double entropy(std::span<const std::size_t> counts, std::size_t n);
double mutual_information(const ContingencyTable& t);
/// Expected mutual information under the hypergeometric model, summed exactly.
double expected_mutual_information(const ContingencyTable& t);

/// I(a;b) / sqrt(H(a) H(b)); 1 when both labelings are a single cluster, 0
/// when exactly one is. Throws InputError on length mismatch or empty input.
double nmi(std::span<const Label> a, std::span<const Label> b);

/// Best fraction of agreeing samples over one-to-one matchings of predicted
/// to true labels (Hungarian assignment on the zero-padded table).
double acc(std::span<const Label> pred, std::span<const Label> truth);

/// (I - E[I]) / (mean(H(a), H(b)) - E[I]) with the arithmetic mean. Returns 0
/// when the denominator vanishes, except for identical partitions with at
/// least two clusters, which score 1.
double ami(std::span<const Label> a, std::span<const Label> b);

/// Minimum-cost perfect assignment on a square cost matrix (row-major).
/// Returns the column assigned to each row.
std::vector<std::size_t> hungarian_min_cost(std::span<const double> cost, std::size_t size);

}  // namespace torque

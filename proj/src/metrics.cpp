#include "torque/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "torque/core.hpp"

namespace torque {

namespace {

void check_pair(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) {
    throw InputError("label vectors differ in length: " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
  if (a.empty()) throw InputError("label vectors are empty");
}

std::vector<std::size_t> dense_codes(std::span<const Label> labels, std::size_t& distinct) {
  std::vector<Label> values(labels.begin(), labels.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  distinct = values.size();
  std::vector<std::size_t> codes(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    codes[i] = static_cast<std::size_t>(
        std::lower_bound(values.begin(), values.end(), labels[i]) - values.begin());
  }
  return codes;
}

bool same_partition(const ContingencyTable& t) {
  if (t.rows != t.cols) return false;
  for (std::size_t r = 0; r < t.rows; ++r) {
    std::size_t nonzero = 0;
    for (std::size_t c = 0; c < t.cols; ++c) nonzero += t(r, c) > 0 ? 1 : 0;
    if (nonzero != 1) return false;
  }
  return true;
}

}  // namespace

ContingencyTable ContingencyTable::build(std::span<const Label> a, std::span<const Label> b) {
  check_pair(a, b);
  ContingencyTable t;
  const auto ra = dense_codes(a, t.rows);
  const auto cb = dense_codes(b, t.cols);
  t.n = a.size();
  t.counts.assign(t.rows * t.cols, 0);
  t.row_sums.assign(t.rows, 0);
  t.col_sums.assign(t.cols, 0);
  for (std::size_t i = 0; i < t.n; ++i) {
    ++t.counts[ra[i] * t.cols + cb[i]];
    ++t.row_sums[ra[i]];
    ++t.col_sums[cb[i]];
  }
  return t;
}

double entropy(std::span<const std::size_t> counts, std::size_t n) {
  double h = 0.0;
  const double total = static_cast<double>(n);
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log(p);
  }
  return h;
}

double mutual_information(const ContingencyTable& t) {
  const double n = static_cast<double>(t.n);
  double mi = 0.0;
  for (std::size_t r = 0; r < t.rows; ++r) {
    for (std::size_t c = 0; c < t.cols; ++c) {
      const auto nij = t(r, c);
      if (nij == 0) continue;
      const double v = static_cast<double>(nij);
      mi += v / n *
            std::log(n * v / (static_cast<double>(t.row_sums[r]) * static_cast<double>(t.col_sums[c])));
    }
  }
  return std::max(0.0, mi);
}

double expected_mutual_information(const ContingencyTable& t) {
  const double n = static_cast<double>(t.n);
  const double log_n_fact = std::lgamma(n + 1.0);
  double emi = 0.0;
  for (std::size_t r = 0; r < t.rows; ++r) {
    const double a = static_cast<double>(t.row_sums[r]);
    for (std::size_t c = 0; c < t.cols; ++c) {
      const double b = static_cast<double>(t.col_sums[c]);
      const double lo = std::max(1.0, a + b - n);
      const double hi = std::min(a, b);
      const double fixed = std::lgamma(a + 1.0) + std::lgamma(b + 1.0) +
                           std::lgamma(n - a + 1.0) + std::lgamma(n - b + 1.0) - log_n_fact;
      for (double nij = lo; nij <= hi; nij += 1.0) {
        const double log_p = fixed - std::lgamma(nij + 1.0) - std::lgamma(a - nij + 1.0) -
                             std::lgamma(b - nij + 1.0) - std::lgamma(n - a - b + nij + 1.0);
        emi += nij / n * std::log(n * nij / (a * b)) * std::exp(log_p);
      }
    }
  }
  return emi;
}

double nmi(std::span<const Label> a, std::span<const Label> b) {
  const auto t = ContingencyTable::build(a, b);
  const double ha = entropy(t.row_sums, t.n);
  const double hb = entropy(t.col_sums, t.n);
  if (t.rows == 1 && t.cols == 1) return 1.0;
  if (t.rows == 1 || t.cols == 1) return 0.0;
  return std::clamp(mutual_information(t) / std::sqrt(ha * hb), 0.0, 1.0);
}

std::vector<std::size_t> hungarian_min_cost(std::span<const double> cost, std::size_t size) {
  if (cost.size() != size * size) throw InputError("assignment cost matrix must be square");
  // Shortest augmenting path with row/column potentials; 1-based internally.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(size + 1, 0.0), v(size + 1, 0.0), slack(size + 1);
  std::vector<std::size_t> match(size + 1, 0), way(size + 1, 0);
  std::vector<bool> used(size + 1);
  for (std::size_t row = 1; row <= size; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::fill(slack.begin(), slack.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[col0] = true;
      const std::size_t r = match[col0];
      double delta = inf;
      std::size_t col1 = 0;
      for (std::size_t c = 1; c <= size; ++c) {
        if (used[c]) continue;
        const double reduced = cost[(r - 1) * size + (c - 1)] - u[r] - v[c];
        if (reduced < slack[c]) {
          slack[c] = reduced;
          way[c] = col0;
        }
        if (slack[c] < delta) {
          delta = slack[c];
          col1 = c;
        }
      }
      for (std::size_t c = 0; c <= size; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          slack[c] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<std::size_t> assignment(size);
  for (std::size_t c = 1; c <= size; ++c) {
    if (match[c] != 0) assignment[match[c] - 1] = c - 1;
  }
  return assignment;
}

double acc(std::span<const Label> pred, std::span<const Label> truth) {
  const auto t = ContingencyTable::build(pred, truth);
  const std::size_t size = std::max(t.rows, t.cols);
  std::vector<double> cost(size * size, 0.0);
  for (std::size_t r = 0; r < t.rows; ++r) {
    for (std::size_t c = 0; c < t.cols; ++c) cost[r * size + c] = -static_cast<double>(t(r, c));
  }
  const auto assignment = hungarian_min_cost(cost, size);
  std::size_t agree = 0;
  for (std::size_t r = 0; r < t.rows; ++r) {
    if (assignment[r] < t.cols) agree += t(r, assignment[r]);
  }
  return static_cast<double>(agree) / static_cast<double>(t.n);
}

double ami(std::span<const Label> a, std::span<const Label> b) {
  const auto t = ContingencyTable::build(a, b);
  const double mi = mutual_information(t);
  const double emi = expected_mutual_information(t);
  const double mean_h = 0.5 * (entropy(t.row_sums, t.n) + entropy(t.col_sums, t.n));
  const double denominator = mean_h - emi;
  if (std::abs(denominator) <= 1e-12 * std::max(1.0, mean_h)) {
    return same_partition(t) && t.rows >= 2 ? 1.0 : 0.0;
  }
  return (mi - emi) / denominator;
}

}  // namespace torque

#include <doctest.h>

#include <cmath>
#include <random>

#include "support/naive_reference.hpp"
#include "torque/core.hpp"
#include "torque/metrics.hpp"

using namespace torque;

using Labels = std::vector<Label>;

TEST_SUITE_BEGIN("metrics");

TEST_CASE("contingency table") {
  const Labels a{5, 5, 1, 1, 1}, b{0, 2, 2, 2, 0};
  const auto t = ContingencyTable::build(a, b);
  CHECK(t.rows == 2);
  CHECK(t.cols == 2);
  CHECK(t(0, 0) == 1);  // label 1 with 0
  CHECK(t(0, 1) == 2);
  CHECK(t(1, 0) == 1);
  CHECK(t(1, 1) == 1);
  CHECK(t.row_sums == std::vector<std::size_t>{3, 2});
  CHECK(t.col_sums == std::vector<std::size_t>{2, 3});
  CHECK_THROWS_AS(ContingencyTable::build(a, Labels{1}), InputError);
  CHECK_THROWS_AS(ContingencyTable::build(Labels{}, Labels{}), InputError);
}

TEST_CASE("perfect and degenerate scores") {
  const Labels x{0, 0, 1, 1, 2, 2};
  const Labels renamed{7, 7, 3, 3, 9, 9};
  CHECK(nmi(x, renamed) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(acc(x, renamed) == 1.0);
  CHECK(ami(x, renamed) == doctest::Approx(1.0).epsilon(1e-12));

  const Labels one(6, 4);
  CHECK(nmi(one, one) == 1.0);
  CHECK(nmi(one, x) == 0.0);
  CHECK(nmi(x, one) == 0.0);
  CHECK(ami(one, one) == 0.0);
  CHECK(ami(one, x) == 0.0);
  CHECK(acc(one, x) == doctest::Approx(2.0 / 6.0));

  const Labels singletons{0, 1, 2, 3};
  CHECK(ami(singletons, singletons) == 1.0);
}

TEST_CASE("acc with unequal cluster counts") {
  // Three predicted groups against two true ones; the best matching leaves
  // one predicted group unmatched.
  const Labels pred{0, 0, 1, 1, 2, 2};
  const Labels truth{0, 0, 0, 1, 1, 1};
  CHECK(acc(pred, truth) == doctest::Approx(4.0 / 6.0));
  CHECK(acc(truth, pred) == doctest::Approx(4.0 / 6.0));
}

TEST_CASE("hungarian assignment on a known matrix") {
  const std::vector<double> cost{4, 1, 3, 2, 0, 5, 3, 2, 2};
  const auto a = hungarian_min_cost(cost, 3);
  double total = 0.0;
  for (std::size_t r = 0; r < 3; ++r) total += cost[r * 3 + a[r]];
  CHECK(total == 5.0);  // 1 + 2 + 2
  CHECK_THROWS_AS(hungarian_min_cost(cost, 2), InputError);
}

TEST_CASE("metrics match direct formulas on random labelings") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(2, 10), ks(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(size(rng));
    const auto a = oracle::random_labels(rng, n, ks(rng));
    const auto b = oracle::random_labels(rng, n, ks(rng));
    CAPTURE(trial);
    CHECK(std::abs(nmi(a, b) - oracle::naive_nmi(a, b)) <= 1e-9);
    CHECK(std::abs(acc(a, b) - oracle::brute_force_acc(a, b)) <= 1e-12);
    CHECK(std::abs(ami(a, b) - oracle::naive_ami(a, b)) <= 1e-9);
    const auto t = ContingencyTable::build(a, b);
    CHECK(std::abs(mutual_information(t) - oracle::naive_mi(a, b)) <= 1e-12);
  }
}

TEST_CASE("expected mutual information equals the permutation average") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = oracle::random_labels(rng, 7, 3);
    const auto b = oracle::random_labels(rng, 7, 3);
    const auto t = ContingencyTable::build(a, b);
    CHECK(std::abs(expected_mutual_information(t) - oracle::permutation_emi(a, b)) <= 1e-12);
    CHECK(std::abs(expected_mutual_information(t) - oracle::hypergeometric_emi(a, b)) <= 1e-12);
  }
}

TEST_CASE("relabeling invariance") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = oracle::random_labels(rng, 40, 5);
    const auto b = oracle::random_labels(rng, 40, 4);
    Labels b2(b);
    for (auto& l : b2) l = 100 - 3 * l;
    CHECK(nmi(a, b) == doctest::Approx(nmi(a, b2)).epsilon(1e-12));
    CHECK(acc(a, b) == acc(a, b2));
    CHECK(ami(a, b) == doctest::Approx(ami(a, b2)).epsilon(1e-12));
    CHECK(nmi(a, b) == doctest::Approx(nmi(b, a)).epsilon(1e-12));
    CHECK(ami(a, b) == doctest::Approx(ami(b, a)).epsilon(1e-12));
  }
}

TEST_CASE("independent labelings score near zero AMI") {
  std::mt19937_64 rng(9);
  double total = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    total += ami(oracle::random_labels(rng, 500, 5), oracle::random_labels(rng, 500, 5));
  }
  CHECK(std::abs(total / 20.0) < 0.01);
}

TEST_SUITE_END();

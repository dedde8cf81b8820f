#include <doctest.h>

#include <cmath>
#include <limits>

#include "torque/core.hpp"

using namespace torque;

TEST_SUITE_BEGIN("core");

TEST_CASE("dataset shape and finiteness") {
  const auto d = Dataset::from_rows({{0, 1}, {2, 3}, {4, 5}});
  CHECK(d.rows() == 3);
  CHECK(d.cols() == 2);
  CHECK(d(2, 1) == 5.0);
  CHECK(d.row(1)[0] == 2.0);

  CHECK_THROWS_AS(Dataset::from_rows({{0, 1}, {2}}), InputError);
  CHECK_THROWS_AS(Dataset(2, 2, {1, 2, 3}), InputError);
  CHECK_THROWS_AS(Dataset(1, 2, {1, std::nan("")}), InputError);
  CHECK_THROWS_AS(Dataset(1, 1, {std::numeric_limits<double>::infinity()}), InputError);
  CHECK(Dataset::from_rows({}).empty());
}

TEST_CASE("distance matrix validation reports the first violation") {
  using Kind = MatrixViolation::Kind;
  CHECK_FALSE(validate_distance_matrix(2, std::vector<double>{0, 1, 1, 0}));

  auto v = validate_distance_matrix(2, std::vector<double>{0, 1, 2, 0});
  REQUIRE(v);
  CHECK(v->kind == Kind::asymmetric);
  CHECK(v->row == 0);
  CHECK(v->col == 1);

  // Within tolerance is accepted.
  CHECK_FALSE(validate_distance_matrix(2, std::vector<double>{0, 1, 1 + 1e-12, 0}));

  v = validate_distance_matrix(2, std::vector<double>{0, -1, -1, 0});
  REQUIRE(v);
  CHECK(v->kind == Kind::negative);

  v = validate_distance_matrix(2, std::vector<double>{0, 1, 1, 0.5});
  REQUIRE(v);
  CHECK(v->kind == Kind::nonzero_diagonal);
  CHECK(v->row == 1);

  v = validate_distance_matrix(2, std::vector<double>{0, std::nan(""), 1, 0});
  REQUIRE(v);
  CHECK(v->kind == Kind::non_finite);

  CHECK_THROWS_AS(validate_distance_matrix(3, std::vector<double>{0, 1, 1, 0}), InputError);
  CHECK_THROWS_AS(DistanceMatrix(2, {0, 1, 2, 0}), InputError);
  CHECK_NOTHROW(DistanceMatrix(2, {0, 1, 1, 0}));
}

TEST_CASE("sample pair is ordered") {
  const auto p = SamplePair::of(7, 3);
  CHECK(p.first == 3);
  CHECK(p.second == 7);
  CHECK(SamplePair::of(1, 5) < SamplePair::of(2, 3));
  CHECK(SamplePair::of(1, 5) < SamplePair::of(1, 6));
}

TEST_CASE("disjoint set") {
  DisjointSet ds(5);
  CHECK(ds.unite(0, 1));
  CHECK(ds.unite(3, 4));
  CHECK_FALSE(ds.unite(1, 0));
  CHECK(ds.find(0) == ds.find(1));
  CHECK(ds.find(2) != ds.find(0));
  CHECK(ds.unite(1, 4));
  CHECK(ds.find(0) == ds.find(3));
  CHECK_FALSE(ds.unite(0, 4));
}

TEST_CASE("components get canonical labels") {
  const std::vector<SamplePair> edges{{3, 4}, {0, 2}};
  const auto p = partition_from_components(5, edges);
  CHECK(p.k == 3);
  CHECK(p.labels == std::vector<std::size_t>{0, 1, 0, 2, 2});
  CHECK(p.cluster_sizes() == std::vector<std::size_t>{2, 1, 2});

  const auto none = partition_from_components(3, {});
  CHECK(none.k == 3);
  CHECK(none.labels == std::vector<std::size_t>{0, 1, 2});

  const std::vector<SamplePair> bad{{0, 9}};
  CHECK_THROWS_AS(partition_from_components(3, bad), InputError);
}

TEST_CASE("canonical relabeling follows first occurrence") {
  const std::vector<std::size_t> labels{7, 7, 2, 9, 2};
  const auto p = canonical_partition(labels);
  CHECK(p.k == 3);
  CHECK(p.labels == std::vector<std::size_t>{0, 0, 1, 2, 1});
}

TEST_CASE("non-redundant count") {
  TorqueResult r;
  r.connections.resize(3);
  r.connections[1].redundant = true;
  CHECK(r.non_redundant_count() == 2);
  CHECK(r.contains(2));
  CHECK_FALSE(r.contains(3));
}

TEST_SUITE_END();

#include <doctest.h>

#include <algorithm>
#include <random>

#include "support/naive_reference.hpp"
#include "torque/cut.hpp"
#include "torque/datasets.hpp"
#include "torque/engine.hpp"

using namespace torque;

namespace {

Connection edge(ConnectionId id, std::uint64_t m, double d, SamplePair s, bool redundant = false) {
  Connection c;
  c.id = id;
  c.from_mass = 1;
  c.to_mass = static_cast<std::size_t>(m);
  c.mass_product = m;
  c.squared_distance = d;
  c.distance = std::sqrt(d);
  c.gamma = static_cast<double>(m) * d;
  c.samples = s;
  c.redundant = redundant;
  return c;
}

}  // namespace

TEST_SUITE_BEGIN("cut");

TEST_CASE("cut spec parsing") {
  CHECK(std::holds_alternative<AutoCut>(parse_cut_spec("auto")));
  const auto top = parse_cut_spec("topk:3");
  REQUIRE(std::holds_alternative<TopKCut>(top));
  CHECK(std::get<TopKCut>(top).k == 3);
  const auto manual = parse_cut_spec("manual:4,0,2");
  REQUIRE(std::holds_alternative<ManualCut>(manual));
  CHECK(std::get<ManualCut>(manual).ids == std::vector<ConnectionId>{4, 0, 2});
  CHECK(std::get<ManualCut>(parse_cut_spec("manual:")).ids.empty());
  CHECK_THROWS_AS(parse_cut_spec("topk:"), InputError);
  CHECK_THROWS_AS(parse_cut_spec("topk:-1"), InputError);
  CHECK_THROWS_AS(parse_cut_spec("manual:1,x"), InputError);
  CHECK_THROWS_AS(parse_cut_spec("best"), InputError);
}

TEST_CASE("galaxy log: auto and top-3 agree on the two abnormal connections") {
  const auto log = datasets::galaxy_connection_log();
  CHECK(auto_cut(log.connections) == std::vector<ConnectionId>{4, 5});
  CHECK(topk_cut(log, 3) == std::vector<ConnectionId>{4, 5});
  const auto p = apply_cut(log, std::vector<ConnectionId>{4, 5});
  CHECK(p.k == 3);
  CHECK(p.labels == std::vector<std::size_t>{0, 0, 1, 1, 1, 1, 2});
}

TEST_CASE("auto cut thresholds are inclusive and use all connections") {
  // Means: M = 2, D = 2. Edge 1 sits exactly on both means.
  std::vector<Connection> log{edge(0, 1, 1.0, {0, 1}), edge(1, 2, 2.0, {1, 2}),
                              edge(2, 3, 3.0, {2, 3}, true), edge(3, 2, 1.0, {3, 4}),
                              edge(4, 2, 3.0, {4, 5})};
  CHECK(auto_cut(log) == std::vector<ConnectionId>{1, 2, 4});
  CHECK(oracle::naive_auto_cut(log) == auto_cut(log));
  CHECK(auto_cut(std::vector<Connection>{}).empty());
}

TEST_CASE("auto cut on constant logs removes everything") {
  std::vector<Connection> log;
  for (ConnectionId k = 0; k < 7; ++k) log.push_back(edge(k, 3, 0.1, {k, k + 1}));
  CHECK(auto_cut(log).size() == 7);
}

TEST_CASE("auto cut does not depend on log order") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = run(oracle::random_points(rng, 120, 2));
    auto shuffled = r.connections;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(auto_cut(shuffled) == auto_cut(r.connections));
    CHECK(auto_cut(r.connections) == oracle::naive_auto_cut(r.connections));
  }
}

TEST_CASE("top-k yields exactly k clusters") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 40;
    const auto r = run(oracle::random_points(rng, n, 2));
    for (std::size_t k = 1; k <= n; ++k) {
      const auto removed = topk_cut(r, k);
      CHECK(removed.size() == k - 1);
      CHECK(apply_cut(r, removed).k == k);
    }
    CHECK_THROWS_AS(topk_cut(r, n + 1), InputError);
    CHECK_THROWS_AS(topk_cut(r, 0), InputError);
    CHECK(topk_cut(r, 1).empty());
  }
}

TEST_CASE("top-k skips redundant edges and breaks gamma ties by id") {
  TorqueResult r;
  r.n = 4;
  r.connections = {edge(0, 1, 5.0, {0, 1}), edge(1, 1, 5.0, {1, 2}), edge(2, 1, 9.0, {0, 2}, true),
                   edge(3, 1, 1.0, {2, 3})};
  CHECK(topk_cut(r, 2) == std::vector<ConnectionId>{0});
  CHECK(topk_cut(r, 3) == std::vector<ConnectionId>{0, 1});
  CHECK(topk_cut(r, 4) == std::vector<ConnectionId>{0, 1, 3});
}

TEST_CASE("gamma ranking") {
  const auto ranking = gamma_ranking(datasets::galaxy_connection_log().connections);
  REQUIRE(ranking.size() == 6);
  const std::vector<ConnectionId> order{4, 5, 1, 3, 0, 2};
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(ranking[k].rank == k + 1);
    CHECK(ranking[k].id == order[k]);
  }
}

TEST_CASE("manual cut validates ids and warns on redundant edges") {
  std::vector<Connection> log{edge(0, 1, 1.0, {0, 1}), edge(1, 1, 1.0, {1, 2}, true)};
  const std::vector<ConnectionId> ids{1, 0, 1};
  const auto sel = manual_cut(log, ids);
  CHECK(sel.removed == std::vector<ConnectionId>{0, 1});
  REQUIRE(sel.warnings.size() == 2);
  CHECK(sel.warnings[0].find("redundant") != std::string::npos);
  const std::vector<ConnectionId> bad{2};
  CHECK_THROWS_AS(manual_cut(log, bad), InputError);

  TorqueResult r;
  r.n = 3;
  r.connections = log;
  // Removing the redundant edge changes nothing.
  CHECK(apply_cut(r, std::vector<ConnectionId>{1}).k == 2);
  CHECK(apply_cut(r, std::vector<ConnectionId>{}).k == 2);
  CHECK_THROWS_AS(apply_cut(r, std::vector<ConnectionId>{5}), InputError);
}

TEST_CASE("empty selection leaves one cluster") {
  std::mt19937_64 rng(31);
  const auto r = run(oracle::random_points(rng, 25, 3));
  CHECK(apply_cut(r, std::vector<ConnectionId>{}).k == 1);
  const auto sel = select_cut(r, parse_cut_spec("manual:"));
  CHECK(apply_cut(r, sel.removed).k == 1);
}

TEST_CASE("cut labels agree with a naive component search") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto r = run(oracle::random_points(rng, 50, 2));
    const auto removed = auto_cut(r.connections);
    CHECK(apply_cut(r, removed).labels == oracle::naive_cut_labels(r, removed));
  }
}

TEST_CASE("galaxy points: auto cut recovers three groups") {
  const auto g = datasets::galaxies();
  const auto r = run(g.data);
  const auto removed = auto_cut(r.connections);
  REQUIRE(removed.size() == 2);
  for (auto id : removed) CHECK(r.connections[id].round == 2);
  const auto p = apply_cut(r, removed);
  CHECK(p.k == 3);
  const auto truth = datasets::galaxies_final_labels();
  std::vector<std::size_t> expected(truth.begin(), truth.end());
  CHECK(p.labels == canonical_partition(expected).labels);
}

TEST_SUITE_END();

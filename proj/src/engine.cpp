#include "torque/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

namespace torque {

TorqueProperties connection_properties_squared(std::size_t from_mass, std::size_t to_mass,
                                               double squared_distance) {
  if (from_mass == 0 || to_mass == 0) throw InputError("connection masses must be positive");
  if (!(squared_distance >= 0.0)) throw InputError("connection distance must be nonnegative");
  TorqueProperties p;
  p.mass_product = static_cast<std::uint64_t>(from_mass) * static_cast<std::uint64_t>(to_mass);
  p.squared_distance = squared_distance;
  p.gamma = static_cast<double>(p.mass_product) * squared_distance;
  return p;
}

TorqueProperties connection_properties(std::size_t from_mass, std::size_t to_mass,
                                       double distance) {
  if (!(distance >= 0.0)) throw InputError("connection distance must be nonnegative");
  return connection_properties_squared(from_mass, to_mass, distance * distance);
}

EngineState EngineState::singletons(std::size_t n) {
  EngineState s;
  s.clusters.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.clusters[i] = Cluster{i, {i}};
  s.samples = DisjointSet(n);
  s.rounds.push_back(n);
  s.next_cluster_id = n;
  return s;
}

std::size_t EngineState::mass_total() const noexcept {
  std::size_t total = 0;
  for (const auto& c : clusters) total += c.mass();
  return total;
}

std::vector<DirectedConnection> form_connections(std::span<const Cluster> clusters,
                                                 std::span<const NearestCluster> nearest) {
  if (nearest.size() != clusters.size()) {
    throw InputError("form_connections: one nearest entry per cluster required");
  }
  std::unordered_map<ClusterId, std::size_t> mass_of;
  mass_of.reserve(clusters.size());
  for (const auto& c : clusters) mass_of.emplace(c.id, c.mass());

  std::vector<DirectedConnection> out;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const auto it = mass_of.find(nearest[i].id);
    if (it == mass_of.end()) {
      throw InputError("form_connections: unknown nearest cluster " + std::to_string(nearest[i].id));
    }
    const std::size_t own = clusters[i].mass();
    if (own <= it->second) {
      out.push_back({clusters[i].id, nearest[i].id, own, it->second, nearest[i].distance,
                     nearest[i].samples});
    }
  }
  return out;
}

std::vector<Connection> dedupe_and_classify(std::span<const DirectedConnection> directed,
                                            EngineState& state) {
  std::unordered_map<ClusterId, SampleIndex> representative;
  representative.reserve(state.clusters.size());
  for (const auto& c : state.clusters) representative.emplace(c.id, c.members.front());

  // Keyed by (smaller id, larger id). A mutual pair has equal masses, so the
  // surviving record points from the smaller id.
  std::map<std::pair<ClusterId, ClusterId>, DirectedConnection> undirected;
  for (const auto& e : directed) {
    if (e.from == e.to) throw InputError("connection from a cluster to itself");
    const auto key = std::minmax(e.from, e.to);
    auto [it, inserted] = undirected.try_emplace(key, e);
    if (!inserted && e.from < it->second.from) it->second = e;
  }

  std::vector<Connection> added;
  added.reserve(undirected.size());
  for (const auto& [key, e] : undirected) {
    const auto from_rep = representative.find(e.from);
    const auto to_rep = representative.find(e.to);
    if (from_rep == representative.end() || to_rep == representative.end()) {
      throw InputError("connection references a cluster not in the current state");
    }
    const auto props = connection_properties(e.from_mass, e.to_mass, e.distance);
    Connection c;
    c.id = state.log.size();
    c.round = state.round;
    c.from_cluster = e.from;
    c.to_cluster = e.to;
    c.from_mass = e.from_mass;
    c.to_mass = e.to_mass;
    c.distance = e.distance;
    c.mass_product = props.mass_product;
    c.squared_distance = props.squared_distance;
    c.gamma = props.gamma;
    c.samples = e.samples;
    c.redundant = !state.samples.unite(from_rep->second, to_rep->second);
    state.log.push_back(c);
    added.push_back(c);
  }
  return added;
}

// Inter-cluster linkage distances for the current round, upper triangle over
// cluster positions (positions follow state.clusters order).
struct TorqueEngine::Table {
  struct Cell {
    double distance = std::numeric_limits<double>::infinity();
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;
  };

  std::size_t count = 0;
  std::vector<Cell> cells;

  explicit Table(std::size_t n) : count(n), cells(n * (n - 1) / 2) {}

  std::size_t index(std::size_t p, std::size_t q) const noexcept {
    return p * (2 * count - p - 1) / 2 + (q - p - 1);
  }
  Cell& at(std::size_t p, std::size_t q) noexcept {
    return p < q ? cells[index(p, q)] : cells[index(q, p)];
  }
  const Cell& at(std::size_t p, std::size_t q) const noexcept {
    return p < q ? cells[index(p, q)] : cells[index(q, p)];
  }
};

namespace {

// Keeps the closer of (cell, candidate) under (distance, pair) order.
template <typename Cell>
void keep_closer(Cell& cell, double d, SampleIndex lo, SampleIndex hi) {
  if (closer(d, SamplePair{lo, hi}, cell.distance, SamplePair{cell.lo, cell.hi})) {
    cell.distance = d;
    cell.lo = static_cast<std::uint32_t>(lo);
    cell.hi = static_cast<std::uint32_t>(hi);
  }
}

}  // namespace

TorqueEngine::TorqueEngine(const Dataset& data, RunOptions options)
    : data_(&data), options_(options) {
  if (data.empty()) throw InputError("cannot cluster an empty dataset");
  if (options_.metric == Metric::precomputed) {
    throw UnsupportedModeError("precomputed metric requires a distance matrix input");
  }
  if (options_.approximate()) {
    if (options_.metric != Metric::euclidean) {
      throw UnsupportedModeError("mean-representative mode supports the euclidean metric only");
    }
  } else {
    owned_matrix_ = pairwise_distances(data, options_.metric);
    matrix_ = &*owned_matrix_;
  }
  init(data.rows());
}

TorqueEngine::TorqueEngine(const DistanceMatrix& matrix, RunOptions options)
    : matrix_(&matrix), options_(options) {
  if (matrix.size() == 0) throw InputError("cannot cluster an empty distance matrix");
  if (options_.linkage == Linkage::centroid || options_.approximate()) {
    throw UnsupportedModeError(std::string(to_string(options_.linkage)) +
                               " linkage needs raw feature vectors");
  }
  options_.metric = Metric::precomputed;
  init(matrix.size());
}

TorqueEngine::~TorqueEngine() = default;

void TorqueEngine::init(std::size_t n) {
  if (n > std::numeric_limits<std::uint32_t>::max()) throw InputError("too many samples");
  state_ = EngineState::singletons(n);
}

std::vector<NearestCluster> TorqueEngine::nearest_exact() const {
  const auto& clusters = state_.clusters;
  const std::size_t count = clusters.size();
  std::vector<NearestCluster> out(count);
  if (!table_) {
    // Every cluster is still a singleton whose position equals its sample.
    const DistanceMatrix& s = *matrix_;
    for (std::size_t i = 0; i < count; ++i) {
      const auto row = s.row(i);
      std::size_t best = i == 0 ? 1 : 0;
      for (std::size_t j = best + 1; j < count; ++j) {
        if (j != i && row[j] < row[best]) best = j;
      }
      out[i] = {best, row[best], SamplePair::of(i, best)};
    }
    return out;
  }
  // Positions are sorted by id, so the first strict minimum has the smallest id.
  for (std::size_t p = 0; p < count; ++p) {
    std::size_t best = p == 0 ? 1 : 0;
    for (std::size_t q = best + 1; q < count; ++q) {
      if (q != p && table_->at(p, q).distance < table_->at(p, best).distance) best = q;
    }
    const auto& cell = table_->at(p, best);
    out[p] = {clusters[best].id, cell.distance, SamplePair{cell.lo, cell.hi}};
  }
  return out;
}

void TorqueEngine::rebuild_table(std::span<const std::size_t> old_to_new, std::size_t new_count) {
  if (new_count < 2) {
    table_.reset();
    return;
  }
  auto next = std::make_unique<Table>(new_count);
  const DistanceMatrix& s = *matrix_;

  if (options_.linkage == Linkage::single) {
    // Single linkage contracts the previous table: d(a u b, c) = min(d(a,c), d(b,c)).
    if (!table_) {
      const std::size_t n = s.size();
      for (std::size_t i = 0; i < n; ++i) {
        const auto row = s.row(i);
        const std::size_t pi = old_to_new[i];
        for (std::size_t j = i + 1; j < n; ++j) {
          const std::size_t pj = old_to_new[j];
          if (pi != pj) keep_closer(next->at(pi, pj), row[j], i, j);
        }
      }
    } else {
      const std::size_t old_count = table_->count;
      for (std::size_t p = 0; p < old_count; ++p) {
        for (std::size_t q = p + 1; q < old_count; ++q) {
          const std::size_t np = old_to_new[p];
          const std::size_t nq = old_to_new[q];
          if (np == nq) continue;
          const auto& cell = table_->at(p, q);
          keep_closer(next->at(np, nq), cell.distance, cell.lo, cell.hi);
        }
      }
    }
    table_ = std::move(next);
    return;
  }

  // Other linkages rescan members: one pass over sample pairs in ascending
  // (i, j) order collects the closest pair and the max or sum per cell.
  const auto& clusters = state_.clusters;
  std::vector<std::size_t> position(s.size());
  for (std::size_t p = 0; p < clusters.size(); ++p) {
    for (auto m : clusters[p].members) position[m] = p;
  }
  std::vector<double> aggregate(next->cells.size(), 0.0);
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = s.row(i);
    const std::size_t pi = position[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t pj = position[j];
      if (pi == pj) continue;
      auto& cell = next->at(pi, pj);
      keep_closer(cell, row[j], i, j);
      double& agg = aggregate[pi < pj ? next->index(pi, pj) : next->index(pj, pi)];
      if (options_.linkage == Linkage::complete) {
        agg = std::max(agg, row[j]);
      } else {
        agg += row[j];
      }
    }
  }
  std::vector<std::vector<double>> means;
  if (options_.linkage == Linkage::centroid) {
    means.reserve(clusters.size());
    for (const auto& c : clusters) means.push_back(cluster_mean(c, *data_));
  }
  for (std::size_t p = 0; p < new_count; ++p) {
    for (std::size_t q = p + 1; q < new_count; ++q) {
      const std::size_t k = next->index(p, q);
      auto& cell = next->cells[k];
      switch (options_.linkage) {
        case Linkage::complete:
          cell.distance = aggregate[k];
          break;
        case Linkage::average:
          cell.distance = aggregate[k] / (static_cast<double>(clusters[p].mass()) *
                                          static_cast<double>(clusters[q].mass()));
          break;
        case Linkage::centroid:
          cell.distance = point_distance(means[p], means[q], options_.metric);
          break;
        default:
          break;
      }
    }
  }
  table_ = std::move(next);
}

void TorqueEngine::merge_round() {
  if (state_.clusters.size() < 2) throw StateError("merge_round needs at least two clusters");

  const auto nearest = options_.approximate()
                           ? nearest_clusters_approx(state_.clusters, *data_)
                           : nearest_exact();
  const auto directed = form_connections(state_.clusters, nearest);
  const std::size_t first_new = state_.log.size();
  dedupe_and_classify(directed, state_);

  if (options_.approximate()) {
    std::unordered_map<ClusterId, const Cluster*> by_id;
    for (const auto& c : state_.clusters) by_id.emplace(c.id, &c);
    for (std::size_t k = first_new; k < state_.log.size(); ++k) {
      auto& c = state_.log[k];
      c.samples = closest_member_pair(*by_id.at(c.from_cluster), *by_id.at(c.to_cluster), *data_)
                      .samples;
    }
  }

  // Regroup clusters by their sample-level component.
  auto& clusters = state_.clusters;
  std::unordered_map<std::size_t, std::size_t> group_of_root;
  std::vector<std::vector<std::size_t>> groups;  // positions, in order of smallest member
  std::vector<std::pair<SampleIndex, std::size_t>> order;
  for (std::size_t p = 0; p < clusters.size(); ++p) {
    const std::size_t root = state_.samples.find(clusters[p].members.front());
    auto [it, inserted] = group_of_root.try_emplace(root, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(p);
  }
  order.reserve(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    SampleIndex smallest = std::numeric_limits<SampleIndex>::max();
    for (auto p : groups[g]) smallest = std::min(smallest, clusters[p].members.front());
    order.emplace_back(smallest, g);
  }
  std::sort(order.begin(), order.end());

  std::vector<ClusterId> group_id(groups.size());
  std::vector<Cluster> next;
  next.reserve(groups.size());
  for (auto [smallest, g] : order) {
    if (groups[g].size() == 1) {
      group_id[g] = clusters[groups[g].front()].id;
      continue;
    }
    Cluster c{state_.next_cluster_id++, {}};
    for (auto p : groups[g]) {
      c.members.insert(c.members.end(), clusters[p].members.begin(), clusters[p].members.end());
    }
    std::sort(c.members.begin(), c.members.end());
    group_id[g] = c.id;
    next.push_back(std::move(c));
  }
  for (const auto& group : groups) {
    if (group.size() == 1) next.push_back(std::move(clusters[group.front()]));
  }
  std::sort(next.begin(), next.end(), [](const Cluster& a, const Cluster& b) { return a.id < b.id; });

  std::unordered_map<ClusterId, std::size_t> new_position;
  new_position.reserve(next.size());
  for (std::size_t k = 0; k < next.size(); ++k) new_position.emplace(next[k].id, k);
  std::vector<std::size_t> old_to_new(clusters.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (auto p : groups[g]) old_to_new[p] = new_position.at(group_id[g]);
  }
  clusters = std::move(next);

  ++state_.round;
  state_.rounds.push_back(clusters.size());

  if (!options_.approximate()) rebuild_table(old_to_new, clusters.size());
}

TorqueResult TorqueEngine::result() const {
  TorqueResult r;
  r.n = state_.samples.size();
  r.connections = state_.log;
  r.rounds = state_.rounds;
  r.final_cluster_count = state_.clusters.size();
  return r;
}

namespace {

TorqueResult drive(TorqueEngine& engine) {
  while (!engine.done()) engine.merge_round();
  return engine.result();
}

}  // namespace

TorqueResult run(const Dataset& data, RunOptions options) {
  TorqueEngine engine(data, options);
  return drive(engine);
}

TorqueResult run(const DistanceMatrix& matrix, RunOptions options) {
  TorqueEngine engine(matrix, options);
  return drive(engine);
}

}  // namespace torque

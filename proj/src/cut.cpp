#include "torque/cut.hpp"

#include <algorithm>
#include <charconv>

namespace torque {

namespace {

std::size_t parse_count(std::string_view text, std::string_view what) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw InputError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

// Running mean over ascending values: exact for constant input and
// independent of the input order.
double sorted_mean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double mean = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    mean += (values[i] - mean) / static_cast<double>(i + 1);
  }
  return mean;
}

}  // namespace

CutSpec parse_cut_spec(std::string_view text) {
  if (text == "auto") return AutoCut{};
  if (text.starts_with("topk:")) return TopKCut{parse_count(text.substr(5), "cluster count")};
  if (text.starts_with("manual:")) {
    ManualCut cut;
    std::string_view rest = text.substr(7);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      cut.ids.push_back(parse_count(rest.substr(0, comma), "connection id"));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return cut;
  }
  throw InputError("unknown cut '" + std::string(text) + "' (expected auto, topk:K or manual:IDS)");
}

std::vector<ConnectionId> auto_cut(std::span<const Connection> connections) {
  if (connections.empty()) return {};
  std::vector<double> masses;
  std::vector<double> distances;
  masses.reserve(connections.size());
  distances.reserve(connections.size());
  for (const auto& c : connections) {
    masses.push_back(static_cast<double>(c.mass_product));
    distances.push_back(c.squared_distance);
  }
  const double mean_mass = sorted_mean(std::move(masses));
  const double mean_distance = sorted_mean(std::move(distances));

  std::vector<ConnectionId> removed;
  for (const auto& c : connections) {
    if (static_cast<double>(c.mass_product) >= mean_mass && c.squared_distance >= mean_distance) {
      removed.push_back(c.id);
    }
  }
  std::sort(removed.begin(), removed.end());
  return removed;
}

std::vector<GammaRank> gamma_ranking(std::span<const Connection> connections) {
  std::vector<GammaRank> ranks;
  ranks.reserve(connections.size());
  for (const auto& c : connections) ranks.push_back({0, c.id, c.gamma, c.redundant});
  std::sort(ranks.begin(), ranks.end(), [](const GammaRank& a, const GammaRank& b) {
    return a.gamma > b.gamma || (a.gamma == b.gamma && a.id < b.id);
  });
  for (std::size_t r = 0; r < ranks.size(); ++r) ranks[r].rank = r + 1;
  return ranks;
}

Partition apply_cut(const TorqueResult& result, std::span<const ConnectionId> removed) {
  std::vector<bool> skip(result.connections.size(), false);
  for (auto id : removed) {
    if (!result.contains(id)) throw InputError("unknown connection id " + std::to_string(id));
    skip[id] = true;
  }
  std::vector<SamplePair> edges;
  edges.reserve(result.connections.size());
  for (const auto& c : result.connections) {
    if (!c.redundant && !skip[c.id]) edges.push_back(c.samples);
  }
  return partition_from_components(result.n, edges);
}

std::vector<ConnectionId> topk_cut(const TorqueResult& result, std::size_t k) {
  if (k == 0) throw InputError("target cluster count must be at least 1");
  if (k > result.n) {
    throw InputError("target cluster count " + std::to_string(k) + " exceeds sample count " +
                     std::to_string(result.n));
  }
  if (k == 1) return {};

  std::vector<ConnectionId> candidates;
  for (const auto& r : gamma_ranking(result.connections)) {
    if (!r.redundant) candidates.push_back(r.id);
  }
  // Kept non-redundant edges form a forest, so every removal splits exactly
  // one component; the loop still re-checks in case the log was not a forest.
  std::vector<ConnectionId> removed(candidates.begin(),
                                    candidates.begin() + std::min(k - 1, candidates.size()));
  std::size_t next = removed.size();
  while (true) {
    const std::size_t got = apply_cut(result, removed).k;
    if (got == k) break;
    if (got > k || next >= candidates.size()) {
      throw StateError("cannot reach exactly " + std::to_string(k) + " clusters");
    }
    removed.push_back(candidates[next++]);
  }
  std::sort(removed.begin(), removed.end());
  return removed;
}

CutSelection manual_cut(std::span<const Connection> connections,
                        std::span<const ConnectionId> ids) {
  CutSelection out;
  for (auto id : ids) {
    if (id >= connections.size() || connections[id].id != id) {
      throw InputError("unknown connection id " + std::to_string(id));
    }
    if (connections[id].redundant) {
      out.warnings.push_back("connection " + std::to_string(id) +
                             " is redundant; removing it does not change the partition");
    }
    out.removed.push_back(id);
  }
  std::sort(out.removed.begin(), out.removed.end());
  out.removed.erase(std::unique(out.removed.begin(), out.removed.end()), out.removed.end());
  return out;
}

CutSelection select_cut(const TorqueResult& result, const CutSpec& spec) {
  if (const auto* top = std::get_if<TopKCut>(&spec)) return {topk_cut(result, top->k), {}};
  if (const auto* manual = std::get_if<ManualCut>(&spec)) {
    return manual_cut(result.connections, manual->ids);
  }
  return {auto_cut(result.connections), {}};
}

}  // namespace torque

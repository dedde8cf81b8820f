#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "torque/core.hpp"

namespace torque {

/// Removal strategies for abnormal connections.
struct AutoCut {};
struct TopKCut {
  std::size_t k = 1;
};
struct ManualCut {
  std::vector<ConnectionId> ids;
};
using CutSpec = std::variant<AutoCut, TopKCut, ManualCut>;

/// Parses "auto", "topk:K" or "manual:a,b,c".
CutSpec parse_cut_spec(std::string_view text);

struct CutSelection {
  std::vector<ConnectionId> removed;  // ascending
  std::vector<std::string> warnings;
};

/// Connections whose mass product and squared distance are both at or above
/// their means over the whole log (redundant edges included). Means are
/// accumulated over sorted values so the result only depends on the multiset.
std::vector<ConnectionId> auto_cut(std::span<const Connection> connections);

/// Removes non-redundant connections by descending gamma (ties: smaller id)
/// until the partition has exactly k components. Throws InputError if k > n
/// or k == 0.
std::vector<ConnectionId> topk_cut(const TorqueResult& result, std::size_t k);

/// Validates ids against the log. Selecting a redundant edge is allowed but
/// produces a warning since it cannot split anything.
CutSelection manual_cut(std::span<const Connection> connections,
                        std::span<const ConnectionId> ids);

CutSelection select_cut(const TorqueResult& result, const CutSpec& spec);

struct GammaRank {
  std::size_t rank = 0;  // 1-based
  ConnectionId id = 0;
  double gamma = 0.0;
  bool redundant = false;
};

/// All connections by gamma descending, ties by smaller id.
std::vector<GammaRank> gamma_ranking(std::span<const Connection> connections);

/// Components over the realizing sample pairs of the kept non-redundant
/// connections. Throws InputError for an id not in the log.
Partition apply_cut(const TorqueResult& result, std::span<const ConnectionId> removed);

}  // namespace torque

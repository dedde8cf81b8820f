#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "torque/core.hpp"
#include "torque/cut.hpp"
#include "torque/metrics.hpp"

namespace torque {

/// Malformed text input. `line` is 1-based.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct PointsTable {
  Dataset data;
  std::optional<std::vector<Label>> labels;
};

/// Comma-separated rows of finite reals. A first row containing any
/// non-numeric field is treated as a header. When `label_column` is set, that
/// column (negative counts from the end) is split off as integer labels.
PointsTable parse_points_csv(std::string_view text, std::optional<int> label_column = {});
PointsTable load_points_csv(const std::filesystem::path& path,
                            std::optional<int> label_column = {});

/// Square numeric CSV, validated as a distance matrix.
DistanceMatrix parse_distance_csv(std::string_view text);
DistanceMatrix load_distance_csv(const std::filesystem::path& path);

/// One integer per line; blank lines ignored.
std::vector<Label> parse_labels(std::string_view text);
std::vector<Label> load_labels(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

/// `v` rendered with 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

inline constexpr std::string_view kDecisionGraphHeader =
    "id,round,from_cluster,to_cluster,from_mass,to_mass,distance,mass_product,"
    "squared_distance,gamma,redundant,sample_a,sample_b";

void write_labels(std::ostream& out, const Partition& p);
void write_decision_graph(std::ostream& out, std::span<const Connection> connections);
void write_hierarchy(std::ostream& out, std::span<const std::size_t> rounds);
void write_gamma_ranking(std::ostream& out, std::span<const GammaRank> ranking);

std::vector<Connection> parse_decision_graph(std::string_view text);

}  // namespace torque

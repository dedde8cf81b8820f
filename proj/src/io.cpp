#include "torque/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace torque {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = line.find(',');
    fields.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

std::optional<double> to_double(std::string_view field) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) return std::nullopt;
  return v;
}

template <typename Int>
std::optional<Int> to_integer(std::string_view field) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  Int v{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) return std::nullopt;
  return v;
}

struct Line {
  std::size_t number;
  std::vector<std::string_view> fields;
};

// Non-blank lines split into fields, numbered from 1.
std::vector<Line> csv_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const auto nl = text.find('\n');
    const auto line = text.substr(0, nl);
    if (!trim(line).empty()) lines.push_back({number, split_fields(line)});
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

bool all_numeric(const Line& line) {
  for (auto f : line.fields) {
    if (!to_double(f)) return false;
  }
  return true;
}

double finite_value(const Line& line, std::size_t column) {
  const auto v = to_double(line.fields[column]);
  if (!v) {
    throw ParseError(line.number, "column " + std::to_string(column + 1) + " is not a number: '" +
                                      std::string(line.fields[column]) + "'");
  }
  if (!std::isfinite(*v)) {
    throw ParseError(line.number, "non-finite value in column " + std::to_string(column + 1));
  }
  return *v;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

PointsTable parse_points_csv(std::string_view text, std::optional<int> label_column) {
  auto lines = csv_lines(text);
  if (!lines.empty() && !all_numeric(lines.front())) lines.erase(lines.begin());
  if (lines.empty()) throw InputError("no data rows");

  const std::size_t width = lines.front().fields.size();
  std::optional<std::size_t> label_index;
  if (label_column) {
    const int w = static_cast<int>(width);
    const int idx = *label_column < 0 ? w + *label_column : *label_column;
    if (idx < 0 || idx >= w) {
      throw InputError("label column " + std::to_string(*label_column) + " out of range for " +
                       std::to_string(width) + " columns");
    }
    if (width < 2) throw InputError("label column leaves no feature columns");
    label_index = static_cast<std::size_t>(idx);
  }

  const std::size_t d = width - (label_index ? 1 : 0);
  std::vector<double> values;
  values.reserve(lines.size() * d);
  std::vector<Label> labels;
  for (const auto& line : lines) {
    if (line.fields.size() != width) {
      throw ParseError(line.number, "expected " + std::to_string(width) + " fields, found " +
                                        std::to_string(line.fields.size()));
    }
    for (std::size_t c = 0; c < width; ++c) {
      if (label_index && c == *label_index) {
        const auto label = to_integer<Label>(line.fields[c]);
        if (!label) {
          // Accept integral values written as reals, e.g. "2.0".
          const double v = finite_value(line, c);
          if (v != std::floor(v)) throw ParseError(line.number, "label is not an integer");
          labels.push_back(static_cast<Label>(v));
        } else {
          labels.push_back(*label);
        }
        continue;
      }
      values.push_back(finite_value(line, c));
    }
  }
  PointsTable out{Dataset(lines.size(), d, std::move(values)), std::nullopt};
  if (label_index) out.labels = std::move(labels);
  return out;
}

PointsTable load_points_csv(const std::filesystem::path& path, std::optional<int> label_column) {
  return parse_points_csv(read_text_file(path), label_column);
}

DistanceMatrix parse_distance_csv(std::string_view text) {
  auto lines = csv_lines(text);
  if (!lines.empty() && !all_numeric(lines.front())) lines.erase(lines.begin());
  const std::size_t n = lines.size();
  if (n == 0) throw InputError("empty distance matrix");
  std::vector<double> values;
  values.reserve(n * n);
  for (const auto& line : lines) {
    if (line.fields.size() != n) {
      throw ParseError(line.number, "distance matrix must be square: " + std::to_string(n) +
                                        " rows but " + std::to_string(line.fields.size()) +
                                        " columns");
    }
    for (std::size_t c = 0; c < n; ++c) values.push_back(finite_value(line, c));
  }
  return DistanceMatrix(n, std::move(values));
}

DistanceMatrix load_distance_csv(const std::filesystem::path& path) {
  return parse_distance_csv(read_text_file(path));
}

std::vector<Label> parse_labels(std::string_view text) {
  std::vector<Label> labels;
  for (const auto& line : csv_lines(text)) {
    if (line.fields.size() != 1) throw ParseError(line.number, "expected one label per line");
    const auto v = to_integer<Label>(line.fields.front());
    if (!v) throw ParseError(line.number, "label is not an integer");
    labels.push_back(*v);
  }
  return labels;
}

std::vector<Label> load_labels(const std::filesystem::path& path) {
  return parse_labels(read_text_file(path));
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), ptr);
}

void write_labels(std::ostream& out, const Partition& p) {
  for (auto l : p.labels) out << l << '\n';
}

void write_decision_graph(std::ostream& out, std::span<const Connection> connections) {
  out << kDecisionGraphHeader << '\n';
  for (const auto& c : connections) {
    out << c.id << ',' << c.round << ',' << c.from_cluster << ',' << c.to_cluster << ','
        << c.from_mass << ',' << c.to_mass << ',' << format_double(c.distance) << ','
        << c.mass_product << ',' << format_double(c.squared_distance) << ','
        << format_double(c.gamma) << ',' << (c.redundant ? 1 : 0) << ',' << c.samples.first << ','
        << c.samples.second << '\n';
  }
}

void write_hierarchy(std::ostream& out, std::span<const std::size_t> rounds) {
  for (auto count : rounds) out << count << '\n';
}

void write_gamma_ranking(std::ostream& out, std::span<const GammaRank> ranking) {
  out << "rank,id,gamma,redundant\n";
  for (const auto& r : ranking) {
    out << r.rank << ',' << r.id << ',' << format_double(r.gamma) << ',' << (r.redundant ? 1 : 0)
        << '\n';
  }
}

std::vector<Connection> parse_decision_graph(std::string_view text) {
  auto lines = csv_lines(text);
  if (lines.empty()) throw InputError("empty decision graph");
  std::string header;
  for (std::size_t i = 0; i < lines.front().fields.size(); ++i) {
    header += (i ? "," : "") + std::string(lines.front().fields[i]);
  }
  if (header != kDecisionGraphHeader) throw ParseError(lines.front().number, "unexpected header");

  std::vector<Connection> out;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& line = lines[k];
    if (line.fields.size() != 13) throw ParseError(line.number, "expected 13 fields");
    auto count = [&](std::size_t col) {
      const auto v = to_integer<std::uint64_t>(line.fields[col]);
      if (!v) throw ParseError(line.number, "column " + std::to_string(col + 1) + " not integral");
      return *v;
    };
    Connection c;
    c.id = count(0);
    c.round = count(1);
    c.from_cluster = count(2);
    c.to_cluster = count(3);
    c.from_mass = count(4);
    c.to_mass = count(5);
    c.distance = finite_value(line, 6);
    c.mass_product = count(7);
    c.squared_distance = finite_value(line, 8);
    c.gamma = finite_value(line, 9);
    c.redundant = count(10) != 0;
    c.samples = SamplePair{count(11), count(12)};
    out.push_back(c);
  }
  return out;
}

}  // namespace torque

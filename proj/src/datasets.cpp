#include "torque/datasets.hpp"

#include <cmath>
#include <iterator>
#include <random>

#include "torque/engine.hpp"

namespace torque::datasets {

namespace {

struct Galaxy {
  double x0, y0, dx, dy;
  std::size_t count;
};

// Unit-spaced lines keep every sample's nearest neighbour inside its galaxy
// (spacing 1, all gaps >= 2), so round 0 forms the galaxies exactly.
constexpr Galaxy kGalaxies[] = {
    {0.0, 0.0, 1.0, 0.0, 15},    // A: x 0..14
    {16.0, 0.0, 1.0, 0.0, 2},    // B: gap 2 to A
    {60.0, 0.0, 1.0, 0.0, 10},   // C: x 60..69
    {60.0, 3.0, 0.0, 1.0, 3},    // D: above C, gap 3
    {71.0, 0.0, 1.0, 0.0, 2},    // E: right of C, gap 2
    {60.0, -3.0, 0.0, -1.0, 2},  // F: below C, gap 3
    {-35.0, 0.0, 1.0, 0.0, 16},  // G: x -35..-20, gap 20 to A
};

}  // namespace

Labeled galaxies() {
  std::vector<double> values;
  std::vector<Label> labels;
  Label label = 0;
  for (const auto& g : kGalaxies) {
    for (std::size_t k = 0; k < g.count; ++k) {
      values.push_back(g.x0 + g.dx * static_cast<double>(k));
      values.push_back(g.y0 + g.dy * static_cast<double>(k));
      labels.push_back(label);
    }
    ++label;
  }
  const std::size_t n = labels.size();
  return {Dataset(n, 2, std::move(values)), std::move(labels)};
}

std::vector<Label> galaxies_final_labels() {
  // A+B, C+D+E+F, G.
  constexpr Label merged[] = {0, 0, 1, 1, 1, 1, 2};
  std::vector<Label> out;
  for (std::size_t g = 0; g < std::size(kGalaxies); ++g) {
    out.insert(out.end(), kGalaxies[g].count, merged[g]);
  }
  return out;
}

TorqueResult galaxy_connection_log() {
  struct Row {
    std::size_t round;
    ClusterId from, to;
    std::size_t from_mass, to_mass;
    double squared_distance;
    SampleIndex a, b;
  };
  // Galaxy nodes: A=0 (15), B=1 (2), C=2 (10), D=3 (3), E=4 (2), F=5 (2),
  // G=6 (16). After the first round: AB=7 (17), CDEF=8 (17), G=6 (16).
  constexpr Row rows[] = {
      {0, 1, 0, 2, 15, 0.64, 0, 1},   {0, 3, 2, 3, 10, 1.00, 2, 3},
      {0, 4, 2, 2, 10, 0.64, 2, 4},   {0, 5, 2, 2, 10, 1.44, 2, 5},
      {1, 8, 7, 17, 17, 15.83, 0, 2}, {1, 6, 7, 16, 17, 14.50, 0, 6},
  };
  TorqueResult r;
  r.n = 7;
  r.rounds = {7, 3, 1};
  r.final_cluster_count = 1;
  for (const auto& row : rows) {
    const auto props = connection_properties_squared(row.from_mass, row.to_mass, row.squared_distance);
    Connection c;
    c.id = r.connections.size();
    c.round = row.round;
    c.from_cluster = row.from;
    c.to_cluster = row.to;
    c.from_mass = row.from_mass;
    c.to_mass = row.to_mass;
    c.distance = std::sqrt(row.squared_distance);
    c.mass_product = props.mass_product;
    c.squared_distance = props.squared_distance;
    c.gamma = props.gamma;
    c.samples = SamplePair{row.a, row.b};
    r.connections.push_back(c);
  }
  return r;
}

Labeled gaussian_blobs(const std::vector<std::vector<double>>& centers, std::size_t per_blob,
                       double sigma, std::uint64_t seed) {
  if (centers.empty()) throw InputError("gaussian_blobs: no centers");
  const std::size_t d = centers.front().size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<double> values;
  std::vector<Label> labels;
  values.reserve(centers.size() * per_blob * d);
  for (std::size_t b = 0; b < centers.size(); ++b) {
    if (centers[b].size() != d) throw InputError("gaussian_blobs: ragged centers");
    for (std::size_t i = 0; i < per_blob; ++i) {
      for (std::size_t k = 0; k < d; ++k) values.push_back(centers[b][k] + noise(rng));
      labels.push_back(static_cast<Label>(b));
    }
  }
  const std::size_t n = labels.size();
  return {Dataset(n, d, std::move(values)), std::move(labels)};
}

Dataset uniform(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> values(n * d);
  for (auto& v : values) v = unit(rng);
  return Dataset(n, d, std::move(values));
}

}  // namespace torque::datasets

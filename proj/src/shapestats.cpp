/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "lmg/shapestats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "lmg/tdist.hpp"

namespace lmg {

namespace {

struct DisjointSet {
  std::vector<std::size_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

double sorted_mean(std::vector<double>& values) {
  // summing in sorted order makes the reduction independent of input order
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

void validate_topology(const Topology& topology, std::size_t num_landmarks) {
  if (num_landmarks < 2) fail(errc::invalid_argument, "topology: need at least 2 landmarks");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  DisjointSet dsu(num_landmarks);
  std::size_t components = num_landmarks;
  for (const auto& [i, j] : topology.edges) {
    if (i == j) fail(errc::invalid_argument, "topology: self-loop at node " + std::to_string(i));
    if (i >= j) fail(errc::invalid_argument, "topology: edges must be stored with i < j");
    if (j >= num_landmarks)
      fail(errc::out_of_range, "topology: edge index " + std::to_string(j) + " out of range");
    if (!seen.insert({i, j}).second)
      fail(errc::invalid_argument,
           "topology: duplicate edge (" + std::to_string(i) + "," + std::to_string(j) + ")");
    if (dsu.unite(i, j)) --components;
  }
  if (components != 1)
    fail(errc::invalid_argument, "topology: graph is not connected over all landmarks");
}

Topology default_topology(const std::vector<Point2>& landmark_means) {
  const std::size_t n = landmark_means.size();
  if (n < 2) fail(errc::invalid_argument, "default_topology: need at least 2 landmarks");

  struct WeightedEdge {
    double d2;
    std::size_t i, j;
  };
  std::vector<WeightedEdge> all;
  all.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = landmark_means[i].x - landmark_means[j].x;
      const double dy = landmark_means[i].y - landmark_means[j].y;
      all.push_back({dx * dx + dy * dy, i, j});
    }
  std::sort(all.begin(), all.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    if (a.d2 != b.d2) return a.d2 < b.d2;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  Topology topo;
  DisjointSet dsu(n);
  for (const auto& e : all) {
    if (dsu.unite(e.i, e.j)) {
      topo.edges.push_back({e.i, e.j});
      if (topo.edges.size() == n - 1) break;
    }
  }
  std::sort(topo.edges.begin(), topo.edges.end());
  return topo;
}

Topology load_topology(const std::filesystem::path& path, std::size_t num_landmarks) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open topology file '" + path.string() + "'");
  Topology topo;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::size_t i = 0, j = 0;
    if (std::sscanf(line.c_str(), "%zu %zu", &i, &j) != 2)
      fail(errc::parse_error,
           path.string() + ":" + std::to_string(line_no) + ": expected 'i j' pair");
    if (i > j) std::swap(i, j);
    topo.edges.push_back({i, j});
  }
  validate_topology(topo, num_landmarks);
  return topo;
}

void save_topology(const std::filesystem::path& path, const Topology& topology) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot write topology file '" + path.string() + "'");
  for (const auto& [i, j] : topology.edges) out << i << " " << j << "\n";
}

TrainStats fit_stats(const Dataset& train_mm, const Topology& topology, double unary_sigma,
                     const NormalizationSpec& normalization, double variance_fraction) {
  if (train_mm.shapes.size() < 3)
    fail(errc::invalid_argument, "fit_stats: need at least 3 training shapes for the t fit");
  if (!(unary_sigma > 0.0)) fail(errc::invalid_argument, "fit_stats: unary sigma must be positive");
  const std::size_t num_landmarks = train_mm.num_landmarks;
  for (const auto& s : train_mm.shapes) {
    if (s.size() != num_landmarks)
      fail(errc::landmark_count_mismatch, "fit_stats: inconsistent landmark count");
    if (s.unit != Unit::Millimeters)
      fail(errc::invalid_argument, "fit_stats: training shapes must be in millimeters");
    check_finite(s, "fit_stats");
  }
  validate_topology(topology, num_landmarks);

  TrainStats stats;
  stats.num_landmarks = num_landmarks;
  stats.topology = topology;
  stats.unary_sigma = unary_sigma;
  stats.normalization = normalization;

  const std::size_t n = train_mm.shapes.size();
  stats.landmark_means.resize(num_landmarks);
  std::vector<double> xs(n), ys(n);
  for (std::size_t k = 0; k < num_landmarks; ++k) {
    for (std::size_t s = 0; s < n; ++s) {
      xs[s] = train_mm.shapes[s].points[k].x;
      ys[s] = train_mm.shapes[s].points[k].y;
    }
    stats.landmark_means[k] = {sorted_mean(xs), sorted_mean(ys)};
  }

  constexpr double scale_floor = 1e-3;
  stats.edge_stats.reserve(topology.edges.size());
  std::vector<double> dists(n);
  for (const auto& [i, j] : topology.edges) {
    for (std::size_t s = 0; s < n; ++s)
      dists[s] = distance(train_mm.shapes[s].points[i], train_mm.shapes[s].points[j]);
    std::sort(dists.begin(), dists.end());

    EdgeStats es;
    es.i = i;
    es.j = j;
    es.mean_distance = sorted_mean(dists);
    if (dists.back() - dists.front() <= 0.0) {
      // constant distances: the t fit is degenerate; keep the mean with the scale floor
      es.t_dof = 100.0;
      es.t_loc = es.mean_distance;
      es.t_scale = scale_floor;
    } else {
      const TFit fit = fit_t_mle(dists, 1.0, 100.0, scale_floor);
      es.t_dof = fit.dof;
      es.t_loc = fit.loc;
      es.t_scale = fit.scale;
    }
    stats.edge_stats.push_back(es);
  }

  const ProcrustesResult gpa = procrustes_align(train_mm.shapes);
  stats.ssm = fit_pca(gpa.aligned, gpa.mean_shape, variance_fraction);
  return stats;
}

}  // namespace lmg

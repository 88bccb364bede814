/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "lmg/mrf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lmg/tdist.hpp"

namespace lmg {

void FactorGraph::validate() const {
  const std::size_t n = num_nodes();
  if (n == 0) fail(errc::empty_input, "factor graph has no nodes");
  if (unary.size() != n) fail(errc::dimension_mismatch, "factor graph: unary size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (candidates[i].empty()) fail(errc::empty_input, "factor graph: node without candidates");
    if (unary[i].size() != candidates[i].size())
      fail(errc::dimension_mismatch, "factor graph: unary vector length mismatch");
    for (double s : unary[i])
      if (!std::isfinite(s)) fail(errc::nonfinite_coordinate, "factor graph: non-finite unary");
  }
  if (pairwise.size() != topology.edges.size())
    fail(errc::dimension_mismatch, "factor graph: pairwise size mismatch");
  for (std::size_t e = 0; e < topology.edges.size(); ++e) {
    const auto& [i, j] = topology.edges[e];
    if (i >= n || j >= n) fail(errc::out_of_range, "factor graph: edge index out of range");
    if (pairwise[e].size() != candidates[i].size() * candidates[j].size())
      fail(errc::dimension_mismatch, "factor graph: pairwise matrix shape mismatch");
    for (double s : pairwise[e])
      if (!std::isfinite(s)) fail(errc::nonfinite_coordinate, "factor graph: non-finite pairwise");
  }
}

std::vector<double> unary_scores(std::span<const Candidate> candidates_mm, std::size_t node,
                                 const TrainStats& stats) {
  if (node >= stats.num_landmarks) fail(errc::out_of_range, "unary_scores: node out of range");
  if (!(stats.unary_sigma > 0.0))
    fail(errc::invalid_argument, "unary_scores: unary sigma must be positive");
  const Point2 mean = stats.landmark_means[node];
  const double inv_two_sigma_sq = 1.0 / (2.0 * stats.unary_sigma * stats.unary_sigma);
  std::vector<double> scores;
  scores.reserve(candidates_mm.size());
  for (const auto& c : candidates_mm) {
    const double d = distance(c.position, mean);
    scores.push_back(c.peak_value * std::exp(-d * d * inv_two_sigma_sq));
  }
  return scores;
}

std::vector<double> binary_scores(std::span<const Candidate> candidates_i,
                                  std::span<const Candidate> candidates_j,
                                  const EdgeStats& edge_stats) {
  if (!(edge_stats.t_dof > 0.0) || !(edge_stats.t_scale > 0.0))
    fail(errc::invalid_argument, "binary_scores: invalid edge stats");
  std::vector<double> scores(candidates_i.size() * candidates_j.size());
  for (std::size_t a = 0; a < candidates_i.size(); ++a) {
    for (std::size_t b = 0; b < candidates_j.size(); ++b) {
      const double d = distance(candidates_i[a].position, candidates_j[b].position);
      scores[a * candidates_j.size() + b] =
          t_pdf(d, edge_stats.t_dof, edge_stats.t_loc, edge_stats.t_scale) +
          2.0 * std::exp(-std::abs(edge_stats.mean_distance - d));
    }
  }
  return scores;
}

FactorGraph build_graph(std::span<const Candidate> pool_mm, const TrainStats& stats) {
  if (pool_mm.empty()) fail(errc::empty_input, "build_graph: empty candidate pool");
  FactorGraph graph;
  graph.topology = stats.topology;
  graph.candidates.assign(stats.num_landmarks,
                          std::vector<Candidate>(pool_mm.begin(), pool_mm.end()));
  graph.unary.reserve(stats.num_landmarks);
  for (std::size_t node = 0; node < stats.num_landmarks; ++node)
    graph.unary.push_back(unary_scores(pool_mm, node, stats));
  graph.pairwise.reserve(stats.edge_stats.size());
  for (const auto& es : stats.edge_stats)
    graph.pairwise.push_back(binary_scores(pool_mm, pool_mm, es));
  graph.validate();
  return graph;
}

double energy(const FactorGraph& graph, std::span<const std::size_t> assignment) {
  const std::size_t n = graph.num_nodes();
  if (assignment.size() != n) fail(errc::dimension_mismatch, "energy: assignment length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (assignment[i] >= graph.unary[i].size())
      fail(errc::out_of_range, "energy: candidate index out of range");
    total += graph.unary[i][assignment[i]];
  }
  for (std::size_t e = 0; e < graph.topology.edges.size(); ++e) {
    const auto& [i, j] = graph.topology.edges[e];
    total += graph.pairwise[e][assignment[i] * graph.candidates[j].size() + assignment[j]];
  }
  return total;
}

double energy(const FactorGraph& graph, const Labeling& labeling) {
  return energy(graph, labeling.assignment);
}

Labeling lbp_map(const FactorGraph& graph, const LbpParams& params) {
  graph.validate();
  if (!(params.damping >= 0.0 && params.damping < 1.0))
    fail(errc::invalid_argument, "lbp_map: damping must be in [0, 1)");
  if (!(params.tolerance > 0.0)) fail(errc::invalid_argument, "lbp_map: tolerance must be > 0");
  if (params.max_iterations < 1)
    fail(errc::invalid_argument, "lbp_map: max_iterations must be >= 1");

  const std::size_t n = graph.num_nodes();
  const std::size_t num_edges = graph.topology.edges.size();

  // directed messages: 2e is edge e from i to j, 2e+1 the reverse
  struct Directed {
    std::size_t from, to, edge;
    bool transposed;  // pairwise indexed as [to][from] when set
  };
  std::vector<Directed> directed(2 * num_edges);
  std::vector<std::vector<std::size_t>> incoming(n);  // directed message ids into each node
  for (std::size_t e = 0; e < num_edges; ++e) {
    const auto& [i, j] = graph.topology.edges[e];
    directed[2 * e] = {i, j, e, false};
    directed[2 * e + 1] = {j, i, e, true};
    incoming[j].push_back(2 * e);
    incoming[i].push_back(2 * e + 1);
  }

  std::vector<std::vector<double>> messages(directed.size()), fresh(directed.size());
  for (std::size_t m = 0; m < directed.size(); ++m) {
    messages[m].assign(graph.candidates[directed[m].to].size(), 0.0);
    fresh[m] = messages[m];
  }

  Labeling result;
  result.iterations = params.max_iterations;
  std::vector<std::vector<double>> node_sum(n);

  for (std::size_t iter = 1; iter <= params.max_iterations; ++iter) {
    // synchronous schedule: all updates read the previous iteration only
    for (std::size_t i = 0; i < n; ++i) {
      node_sum[i] = graph.unary[i];
      for (std::size_t m : incoming[i])
        for (std::size_t x = 0; x < node_sum[i].size(); ++x) node_sum[i][x] += messages[m][x];
    }

    double delta = 0.0;
    for (std::size_t m = 0; m < directed.size(); ++m) {
      const Directed& d = directed[m];
      const std::size_t reverse = m ^ 1;
      const std::size_t k_from = graph.candidates[d.from].size();
      const std::size_t k_to = graph.candidates[d.to].size();
      const std::vector<double>& pair = graph.pairwise[d.edge];

      double best_of_all = -std::numeric_limits<double>::infinity();
      for (std::size_t xt = 0; xt < k_to; ++xt) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t xf = 0; xf < k_from; ++xf) {
          const double pair_score = d.transposed ? pair[xt * k_from + xf] : pair[xf * k_to + xt];
          const double v = node_sum[d.from][xf] - messages[reverse][xf] + pair_score;
          if (v > best) best = v;
        }
        fresh[m][xt] = best;
        if (best > best_of_all) best_of_all = best;
      }
      for (std::size_t xt = 0; xt < k_to; ++xt) {
        const double damped =
            params.damping * messages[m][xt] + (1.0 - params.damping) * (fresh[m][xt] - best_of_all);
        delta = std::max(delta, std::abs(damped - messages[m][xt]));
        fresh[m][xt] = damped;
      }
    }
    messages.swap(fresh);
    if (delta < params.tolerance) {
      result.converged = true;
      result.iterations = iter;
      break;
    }
  }

  result.assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> belief = graph.unary[i];
    for (std::size_t m : incoming[i])
      for (std::size_t x = 0; x < belief.size(); ++x) belief[x] += messages[m][x];
    std::size_t best = 0;
    for (std::size_t x = 1; x < belief.size(); ++x)
      if (belief[x] > belief[best]) best = x;  // ties keep the lowest index
    result.assignment[i] = best;
  }
  return result;
}

Labeling brute_force_map(const FactorGraph& graph) {
  graph.validate();
  const std::size_t n = graph.num_nodes();
  double space = 1.0;
  for (const auto& c : graph.candidates) space *= static_cast<double>(c.size());
  if (space > 1e7)
    fail(errc::search_space_too_large,
         "brute_force_map: " + format_double(space) + " labelings exceed the 1e7 guard");

  std::vector<std::size_t> assignment(n, 0);
  Labeling best;
  best.converged = true;
  best.iterations = 0;
  best.assignment = assignment;
  double best_energy = energy(graph, assignment);

  // odometer with the last node fastest enumerates assignments in
  // lexicographic order, so strict improvement keeps the smallest argmax
  while (true) {
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++assignment[pos] < graph.candidates[pos].size()) break;
      assignment[pos] = 0;
      if (pos == 0) return best;
    }
    const double e = energy(graph, assignment);
    if (e > best_energy) {
      best_energy = e;
      best.assignment = assignment;
    }
  }
}

}  // namespace lmg

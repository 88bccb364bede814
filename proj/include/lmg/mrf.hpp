#pragma once
/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cstddef>
#include <span>
#include <vector>

#include "lmg/heatmap.hpp"
#include "lmg/shapestats.hpp"

namespace lmg {

/// Node/edge scored labeling problem: maximize
///   f(c) = sum_i U_i(c_i) + sum_(i,j) B_ij(c_i, c_j)
/// over one candidate choice per landmark node.
struct FactorGraph {
  std::vector<std::vector<Candidate>> candidates;  // per node, mm positions
  std::vector<std::vector<double>> unary;          // per node, one score per candidate
  Topology topology;
  std::vector<std::vector<double>> pairwise;  // per edge, row-major |cand_i| x |cand_j|

  std::size_t num_nodes() const { return candidates.size(); }
  void validate() const;
};

struct Labeling {
  std::vector<std::size_t> assignment;  // candidate index per node
  bool converged = false;
  std::size_t iterations = 0;
};

struct LbpParams {
  std::size_t max_iterations = 200;
  double damping = 0.5;     // in [0, 1)
  double tolerance = 1e-6;  // max absolute message change
};

/// score[k] = peak_k * exp(-|pos_k - mean_node|^2 / (2 unary_sigma^2))
std::vector<double> unary_scores(std::span<const Candidate> candidates_mm, std::size_t node,
                                 const TrainStats& stats);

/// entry[a][b] = t_pdf(d) + 2 exp(-|mean_distance - d|), d = |pos_a - pos_b| mm
std::vector<double> binary_scores(std::span<const Candidate> candidates_i,
                                  std::span<const Candidate> candidates_j,
                                  const EdgeStats& edge_stats);

/// One node per landmark, all sharing the candidate pool.
FactorGraph build_graph(std::span<const Candidate> pool_mm, const TrainStats& stats);

double energy(const FactorGraph& graph, std::span<const std::size_t> assignment);
double energy(const FactorGraph& graph, const Labeling& labeling);

/// Max-sum loopy belief propagation on the raw scores: synchronous message
/// schedule with damping, messages normalized by their max. Exact on trees;
/// non-convergence is reported via the flag, never an error. Belief ties break
/// to the lowest candidate index.
Labeling lbp_map(const FactorGraph& graph, const LbpParams& params = {});

/// Exhaustive argmax of energy(), lexicographically smallest assignment on
/// ties. Guarded at 10^7 labelings.
Labeling brute_force_map(const FactorGraph& graph);

}  // namespace lmg

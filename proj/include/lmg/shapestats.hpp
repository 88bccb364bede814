#pragma once
/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cstddef>
#include <filesystem>
#include <utility>
#include <vector>

#include "lmg/core.hpp"
#include "lmg/ssm.hpp"

namespace lmg {

/// MRF edge set over landmark indices. Edges stored with i < j; the graph must
/// be connected, free of duplicates and of self-loops.
struct Topology {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

void validate_topology(const Topology& topology, std::size_t num_landmarks);

/// Euclidean minimum spanning tree over the mean coordinates; ties broken by
/// index pair order so the result is deterministic.
Topology default_topology(const std::vector<Point2>& landmark_means);

Topology load_topology(const std::filesystem::path& path, std::size_t num_landmarks);
void save_topology(const std::filesystem::path& path, const Topology& topology);

struct EdgeStats {
  std::size_t i = 0;
  std::size_t j = 0;
  double t_dof = 0.0;
  double t_loc = 0.0;
  double t_scale = 0.0;
  double mean_distance = 0.0;  // stands in for d_gt on generated images
};

struct TrainStats {
  std::size_t num_landmarks = 0;
  std::vector<Point2> landmark_means;  // mm
  std::vector<EdgeStats> edge_stats;   // one per topology edge, same order
  Topology topology;
  double unary_sigma = 25.0;  // mm
  SsmModel ssm;
  NormalizationSpec normalization;
};

/// Fit everything the MRF and gate consume from a wrist-normalized training
/// set: per-landmark means, per-edge t fits and mean distances, and the SSM.
/// Coordinates and distances are sorted before reduction, so the result is
/// bit-exactly invariant to training-shape order (the SSM part is invariant
/// only to alignment tolerance).
TrainStats fit_stats(const Dataset& train_mm, const Topology& topology, double unary_sigma,
                     const NormalizationSpec& normalization, double variance_fraction = 0.95);

/// Versioned structured-text stats file ("landmark-gate-stats v1"); lossless
/// field-for-field roundtrip.
void save_stats(const std::filesystem::path& path, const TrainStats& stats);
TrainStats load_stats(const std::filesystem::path& path);

}  // namespace lmg

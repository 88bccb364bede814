#pragma once
/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "lmg/core.hpp"

namespace lmg {

/// Row-major scalar grid with values in [0, 1].
struct Heatmap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

struct RenderResult {
  Heatmap heatmap;
  std::vector<std::size_t> clipped;  // landmarks outside the grid; their in-grid tail is still rendered
};

/// value(p) = max over landmarks of exp(-|p - landmark|^2 / (2 sigma^2)).
/// Max keeps the [0,1] range when peaks overlap.
RenderResult render(const Shape& shape_px, int width, int height, double sigma);

struct Candidate {
  Point2 position;  // pixel centers from extraction; mm once converted for scoring
  double peak_value = 0.0;
};

/// Local maxima of a (2*window+1)^2 neighborhood with value >= min_value,
/// sorted by value descending (ties by row-major position), truncated to count.
/// Exact-tie plateaus keep only the earliest row-major pixel.
std::vector<Candidate> extract_candidates(const Heatmap& h, std::size_t count, int window = 3,
                                          double min_value = 0.05);

/// Affine [0,1] <-> [-1,1] bridges for the diffusion model range.
std::vector<double> to_model_range(std::span<const double> values01);
std::vector<double> from_model_range(std::span<const double> values_pm1);

/// 16-bit binary PGM (P5, maxval 65535, big-endian), v stored as round(v*65535).
void save_pgm(const std::filesystem::path& path, const Heatmap& h);
Heatmap load_pgm(const std::filesystem::path& path);

}  // namespace lmg

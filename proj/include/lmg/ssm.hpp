#pragma once
/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lmg/core.hpp"

namespace lmg {

/// p' = scale * R(rotation) * p + translation. Reflections are excluded
/// everywhere in this module (hands are chiral).
struct SimilarityTransform {
  double scale = 1.0;
  double rotation = 0.0;  // radians, in (-pi, pi]
  Point2 translation{};

  Point2 apply(const Point2& p) const;
  Shape apply(const Shape& s) const;
};

/// Least-squares similarity src -> dst (closed form via the centered
/// cross-covariance); exact for two point pairs.
SimilarityTransform estimate_similarity(std::span<const Point2> src, std::span<const Point2> dst);

struct ProcrustesResult {
  std::vector<Shape> aligned;
  Shape mean_shape;  // centered, unit centroid size, canonical orientation
  std::size_t iterations = 0;
};

/// Generalized Procrustes alignment with similarity transforms. The converged
/// frame is canonicalized by rotating so mean.points[1] - mean.points[0] lies
/// on the +x axis, which makes the result invariant to per-shape similarity
/// pre-transforms of the inputs.
ProcrustesResult procrustes_align(const std::vector<Shape>& shapes);

/// Point distribution model: x = mean + P b.
struct SsmModel {
  Shape mean_shape;
  std::vector<std::vector<double>> eigenvectors;  // t rows, each 2L (x0,y0,x1,y1,...)
  std::vector<double> eigenvalues;                // descending, length t
  double total_variance = 0.0;

  std::size_t num_modes() const { return eigenvectors.size(); }
};

/// PCA of the 2Lx2L sample covariance of the aligned shape vectors around
/// mean_shape; keeps the smallest mode count reaching variance_fraction of the
/// total variance.
SsmModel fit_pca(const std::vector<Shape>& aligned, const Shape& mean_shape,
                 double variance_fraction = 0.95);

std::vector<double> project(const Shape& aligned_shape, const SsmModel& model);
Shape reconstruct(std::span<const double> b, const SsmModel& model);

struct RansacParams {
  std::size_t iterations = 500;
  double inlier_threshold_mm = 10.0;
  std::size_t min_inliers = 0;  // 0 = ceil(L/2)
  std::uint64_t seed = 0;
};

struct MatchResult {
  SimilarityTransform transform;
  std::vector<bool> inlier_mask;
  Shape transformed_mean;        // mean shape posed into the labeled frame
  std::vector<double> residuals; // |transformed_mean[i] - labeled[i]|
};

/// RANSAC over known index correspondences: sample 2, estimate similarity,
/// count inliers; best consensus (tie: smaller mean inlier residual) is refit
/// once on its inlier set. Throws errc::match_failed below min_inliers.
MatchResult ransac_match(const Shape& mean_shape, const Shape& labeled_mm,
                         const RansacParams& params);

}  // namespace lmg

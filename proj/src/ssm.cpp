/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "lmg/ssm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace lmg {

namespace {

Point2 centroid(std::span<const Point2> pts) {
  Point2 c{};
  for (const auto& p : pts) {
    c.x += p.x;
    c.y += p.y;
  }
  c.x /= static_cast<double>(pts.size());
  c.y /= static_cast<double>(pts.size());
  return c;
}

double centroid_size(std::span<const Point2> pts, const Point2& c) {
  double s = 0.0;
  for (const auto& p : pts) s += (p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y);
  return std::sqrt(s);
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

Shape rotate_shape(const Shape& s, double angle) {
  const double c = std::cos(angle), sn = std::sin(angle);
  Shape out = s;
  for (auto& p : out.points) p = {c * p.x - sn * p.y, sn * p.x + c * p.y};
  return out;
}

// splitmix64: a counter-based stream so RANSAC iterations stay deterministic
// no matter how they are scheduled
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

Point2 SimilarityTransform::apply(const Point2& p) const {
  const double c = std::cos(rotation), s = std::sin(rotation);
  return {scale * (c * p.x - s * p.y) + translation.x,
          scale * (s * p.x + c * p.y) + translation.y};
}

Shape SimilarityTransform::apply(const Shape& s) const {
  Shape out = s;
  for (auto& p : out.points) p = apply(p);
  return out;
}

SimilarityTransform estimate_similarity(std::span<const Point2> src, std::span<const Point2> dst) {
  if (src.size() != dst.size()) fail(errc::dimension_mismatch, "estimate_similarity: size mismatch");
  if (src.size() < 2) fail(errc::invalid_argument, "estimate_similarity: need at least 2 pairs");

  const Point2 cs = centroid(src), cd = centroid(dst);
  double sxx = 0.0, dot = 0.0, cross = 0.0;
  for (std::size_t k = 0; k < src.size(); ++k) {
    const double ax = src[k].x - cs.x, ay = src[k].y - cs.y;
    const double bx = dst[k].x - cd.x, by = dst[k].y - cd.y;
    sxx += ax * ax + ay * ay;
    dot += ax * bx + ay * by;
    cross += ax * by - ay * bx;
  }
  if (sxx == 0.0) fail(errc::degenerate_input, "estimate_similarity: source points coincide");
  const double norm = std::hypot(dot, cross);
  if (norm == 0.0)
    fail(errc::degenerate_input, "estimate_similarity: destination points coincide");

  SimilarityTransform t;
  t.rotation = wrap_angle(std::atan2(cross, dot));
  t.scale = norm / sxx;
  const double c = std::cos(t.rotation), s = std::sin(t.rotation);
  t.translation = {cd.x - t.scale * (c * cs.x - s * cs.y), cd.y - t.scale * (s * cs.x + c * cs.y)};
  return t;
}

ProcrustesResult procrustes_align(const std::vector<Shape>& shapes) {
  if (shapes.size() < 2) fail(errc::invalid_argument, "procrustes_align: need at least 2 shapes");
  const std::size_t num_points = shapes.front().size();
  if (num_points < 2) fail(errc::invalid_argument, "procrustes_align: shapes need >= 2 points");
  for (const auto& s : shapes) {
    if (s.size() != num_points)
      fail(errc::dimension_mismatch, "procrustes_align: shapes differ in landmark count");
    check_finite(s, "procrustes_align");
    const Point2 c = centroid(s.points);
    if (centroid_size(s.points, c) == 0.0)
      fail(errc::degenerate_input, "procrustes_align: all points of a shape coincide");
  }

  const auto normalized = [&](const Shape& s) {
    const Point2 c = centroid(s.points);
    const double size = centroid_size(s.points, c);
    Shape out = s;
    for (auto& p : out.points) p = {(p.x - c.x) / size, (p.y - c.y) / size};
    return out;
  };

  Shape mean = normalized(shapes.front());
  ProcrustesResult result;
  result.aligned.resize(shapes.size());

  for (std::size_t iter = 1; iter <= 100; ++iter) {
    result.iterations = iter;
    for (std::size_t i = 0; i < shapes.size(); ++i) {
      const SimilarityTransform t = estimate_similarity(shapes[i].points, mean.points);
      result.aligned[i] = t.apply(shapes[i]);
    }
    Shape next = mean;
    for (std::size_t k = 0; k < num_points; ++k) {
      double sx = 0.0, sy = 0.0;
      for (const auto& a : result.aligned) {
        sx += a.points[k].x;
        sy += a.points[k].y;
      }
      next.points[k] = {sx / static_cast<double>(shapes.size()),
                        sy / static_cast<double>(shapes.size())};
    }
    next = normalized(next);
    double change = 0.0;
    for (std::size_t k = 0; k < num_points; ++k) {
      change += (next.points[k].x - mean.points[k].x) * (next.points[k].x - mean.points[k].x) +
                (next.points[k].y - mean.points[k].y) * (next.points[k].y - mean.points[k].y);
    }
    mean = next;
    if (std::sqrt(change) < 1e-10) break;
  }

  // canonical orientation: the landmark 0 -> landmark 1 direction of the mean
  // defines +x, making the frame independent of input pre-transforms
  const double dx = mean.points[1].x - mean.points[0].x;
  const double dy = mean.points[1].y - mean.points[0].y;
  if (dx != 0.0 || dy != 0.0) {
    const double angle = -std::atan2(dy, dx);
    mean = rotate_shape(mean, angle);
    for (auto& a : result.aligned) a = rotate_shape(a, angle);
  }

  result.mean_shape = mean;
  return result;
}

SsmModel fit_pca(const std::vector<Shape>& aligned, const Shape& mean_shape,
                 double variance_fraction) {
  if (aligned.size() < 2) fail(errc::invalid_argument, "fit_pca: need at least 2 shapes");
  if (!(variance_fraction > 0.0 && variance_fraction <= 1.0))
    fail(errc::invalid_argument, "fit_pca: variance_fraction must be in (0, 1]");
  const std::size_t num_points = mean_shape.size();
  const std::size_t dim = 2 * num_points;
  const std::size_t n = aligned.size();

  Eigen::MatrixXd deviations(dim, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (aligned[i].size() != num_points)
      fail(errc::dimension_mismatch, "fit_pca: shape/mean landmark count mismatch");
    for (std::size_t k = 0; k < num_points; ++k) {
      deviations(2 * k, i) = aligned[i].points[k].x - mean_shape.points[k].x;
      deviations(2 * k + 1, i) = aligned[i].points[k].y - mean_shape.points[k].y;
    }
  }
  const Eigen::MatrixXd cov = deviations * deviations.transpose() / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) fail(errc::degenerate_input, "fit_pca: eigensolver failed");

  SsmModel model;
  model.mean_shape = mean_shape;
  // numerical noise floor: identical shapes must give an all-zero spectrum
  double scale_sq = 0.0;
  for (const auto& p : mean_shape.points) scale_sq += p.x * p.x + p.y * p.y;
  const double eig_floor = 1e-24 * std::max(1.0, scale_sq + solver.eigenvalues().cwiseAbs().sum());
  std::vector<double> eigvals(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    // ascending from Eigen; flip to descending and clamp numerical negatives
    const double v = solver.eigenvalues()(static_cast<Eigen::Index>(dim - 1 - k));
    eigvals[k] = v > eig_floor ? v : 0.0;
    model.total_variance += eigvals[k];
  }

  std::size_t num_modes = 0;
  if (model.total_variance > 0.0) {
    double cumulative = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      cumulative += eigvals[k];
      ++num_modes;
      if (cumulative >= variance_fraction * model.total_variance) break;
    }
  }

  model.eigenvalues.assign(eigvals.begin(), eigvals.begin() + num_modes);
  model.eigenvectors.resize(num_modes);
  for (std::size_t m = 0; m < num_modes; ++m) {
    Eigen::VectorXd v = solver.eigenvectors().col(static_cast<Eigen::Index>(dim - 1 - m));
    // deterministic sign: largest-magnitude component positive
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
    model.eigenvectors[m].assign(v.data(), v.data() + dim);
  }
  return model;
}

std::vector<double> project(const Shape& aligned_shape, const SsmModel& model) {
  const std::size_t num_points = model.mean_shape.size();
  if (aligned_shape.size() != num_points)
    fail(errc::dimension_mismatch, "project: landmark count mismatch");
  std::vector<double> b(model.num_modes(), 0.0);
  for (std::size_t m = 0; m < model.num_modes(); ++m) {
    const auto& v = model.eigenvectors[m];
    double acc = 0.0;
    for (std::size_t k = 0; k < num_points; ++k) {
      acc += v[2 * k] * (aligned_shape.points[k].x - model.mean_shape.points[k].x);
      acc += v[2 * k + 1] * (aligned_shape.points[k].y - model.mean_shape.points[k].y);
    }
    b[m] = acc;
  }
  return b;
}

Shape reconstruct(std::span<const double> b, const SsmModel& model) {
  if (b.size() != model.num_modes())
    fail(errc::dimension_mismatch, "reconstruct: parameter vector has wrong length");
  Shape out = model.mean_shape;
  for (std::size_t m = 0; m < model.num_modes(); ++m) {
    const auto& v = model.eigenvectors[m];
    for (std::size_t k = 0; k < out.size(); ++k) {
      out.points[k].x += b[m] * v[2 * k];
      out.points[k].y += b[m] * v[2 * k + 1];
    }
  }
  return out;
}

MatchResult ransac_match(const Shape& mean_shape, const Shape& labeled_mm,
                         const RansacParams& params) {
  const std::size_t num_points = mean_shape.size();
  if (labeled_mm.size() != num_points)
    fail(errc::dimension_mismatch, "ransac_match: landmark count mismatch");
  if (num_points < 2) fail(errc::invalid_argument, "ransac_match: need at least 2 landmarks");
  if (params.iterations < 1) fail(errc::invalid_argument, "ransac_match: iterations must be >= 1");
  if (!(params.inlier_threshold_mm > 0.0))
    fail(errc::invalid_argument, "ransac_match: threshold must be positive");
  check_finite(labeled_mm, "ransac_match");

  const std::size_t min_inliers =
      std::max<std::size_t>(2, params.min_inliers ? params.min_inliers : (num_points + 1) / 2);

  std::size_t best_count = 0;
  double best_mean_residual = std::numeric_limits<double>::infinity();
  std::vector<bool> best_mask;
  std::vector<double> residuals(num_points);

  for (std::size_t iter = 0; iter < params.iterations; ++iter) {
    std::uint64_t stream = params.seed ^ (0x9e3779b97f4a7c15ull * (iter + 1));
    const std::size_t i = splitmix64(stream) % num_points;
    std::size_t j = splitmix64(stream) % (num_points - 1);
    if (j >= i) ++j;

    const Point2 src[2] = {mean_shape.points[i], mean_shape.points[j]};
    const Point2 dst[2] = {labeled_mm.points[i], labeled_mm.points[j]};
    SimilarityTransform t;
    try {
      t = estimate_similarity(src, dst);
    } catch (const error&) {
      continue;  // degenerate minimal sample
    }

    std::size_t count = 0;
    double inlier_sum = 0.0;
    for (std::size_t k = 0; k < num_points; ++k) {
      residuals[k] = distance(t.apply(mean_shape.points[k]), labeled_mm.points[k]);
      if (residuals[k] <= params.inlier_threshold_mm) {
        ++count;
        inlier_sum += residuals[k];
      }
    }
    const double mean_residual =
        count ? inlier_sum / static_cast<double>(count) : std::numeric_limits<double>::infinity();
    if (count > best_count || (count == best_count && mean_residual < best_mean_residual)) {
      best_count = count;
      best_mean_residual = mean_residual;
      best_mask.assign(num_points, false);
      for (std::size_t k = 0; k < num_points; ++k)
        best_mask[k] = residuals[k] <= params.inlier_threshold_mm;
    }
  }

  if (best_count < min_inliers)
    fail(errc::match_failed, "ransac_match: best consensus " + std::to_string(best_count) +
                                 " below minimum " + std::to_string(min_inliers));

  // one refit on the winning consensus set
  std::vector<Point2> src, dst;
  src.reserve(best_count);
  dst.reserve(best_count);
  for (std::size_t k = 0; k < num_points; ++k) {
    if (best_mask[k]) {
      src.push_back(mean_shape.points[k]);
      dst.push_back(labeled_mm.points[k]);
    }
  }

  MatchResult result;
  result.transform = estimate_similarity(src, dst);
  result.transform.rotation = wrap_angle(result.transform.rotation);
  result.inlier_mask = std::move(best_mask);
  result.transformed_mean = result.transform.apply(mean_shape);
  result.transformed_mean.unit = labeled_mm.unit;
  result.residuals.resize(num_points);
  for (std::size_t k = 0; k < num_points; ++k)
    result.residuals[k] = distance(result.transformed_mean.points[k], labeled_mm.points[k]);
  return result;
}

}  // namespace lmg

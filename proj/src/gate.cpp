/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "lmg/gate.hpp"

#include <algorithm>
#include <cmath>

namespace lmg {

const char* violation_kind_name(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::Coincidence: return "coincidence";
    case Violation::Kind::WristDistance: return "wrist_distance";
    case Violation::Kind::MatchFailed: return "match_failed";
  }
  return "unknown";
}

GateDecision check_constraints(const Shape& labeled_mm, const MatchResult* match,
                               const GateConfig& config) {
  const std::size_t n = labeled_mm.size();
  if (n < 2) fail(errc::invalid_argument, "check_constraints: shape needs at least 2 landmarks");
  if (config.coincidence_exempt_a >= n || config.coincidence_exempt_b >= n ||
      config.coincidence_exempt_a == config.coincidence_exempt_b)
    fail(errc::invalid_argument, "check_constraints: exempt pair must be distinct and < L");
  if (!(config.coincidence_tolerance_mm > 0.0))
    fail(errc::invalid_argument, "check_constraints: coincidence tolerance must be positive");
  if (!(config.wrist_distance_limit_mm > 0.0))
    fail(errc::invalid_argument, "check_constraints: wrist distance limit must be positive");
  check_finite(labeled_mm, "check_constraints");

  GateDecision decision;

  if (match == nullptr) {
    decision.violations.push_back({Violation::Kind::MatchFailed, 0, 0, 0.0});
  } else if (match->residuals.size() != n || match->transformed_mean.size() != n) {
    fail(errc::dimension_mismatch, "check_constraints: match result does not fit the shape");
  }

  // (i) no two landmarks may share a coordinate, except the exempt pair
  const auto exempt_lo = std::min(config.coincidence_exempt_a, config.coincidence_exempt_b);
  const auto exempt_hi = std::max(config.coincidence_exempt_a, config.coincidence_exempt_b);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (i == exempt_lo && j == exempt_hi) continue;
      const double d = distance(labeled_mm.points[i], labeled_mm.points[j]);
      if (d < config.coincidence_tolerance_mm)
        decision.violations.push_back({Violation::Kind::Coincidence, i, j, d});
    }
  }

  // (ii) wrist-region landmarks must stay within the limit of the posed mean
  if (match != nullptr) {
    for (std::size_t i : config.wrist_region) {
      if (i >= n) fail(errc::out_of_range, "check_constraints: wrist-region index out of range");
      if (match->residuals[i] > config.wrist_distance_limit_mm)
        decision.violations.push_back({Violation::Kind::WristDistance, i, i, match->residuals[i]});
    }
  }

  decision.accepted = decision.violations.empty() && match != nullptr;
  return decision;
}

double acceptance_rate(std::span<const GateDecision> decisions) {
  if (decisions.empty()) fail(errc::empty_input, "acceptance_rate: no decisions");
  std::size_t accepted = 0;
  for (const auto& d : decisions) accepted += d.accepted ? 1 : 0;
  return static_cast<double>(accepted) / static_cast<double>(decisions.size());
}

EvalReport evaluate(const std::vector<Shape>& predictions, const std::vector<Shape>& ground_truth,
                    std::span<const double> radii_mm) {
  if (predictions.size() != ground_truth.size())
    fail(errc::dimension_mismatch, "evaluate: prediction/ground-truth counts differ");
  if (predictions.empty()) fail(errc::empty_input, "evaluate: no shapes");

  std::vector<double> distances;
  for (std::size_t s = 0; s < predictions.size(); ++s) {
    const Shape& p = predictions[s];
    const Shape& g = ground_truth[s];
    if (p.size() != g.size() || p.size() == 0)
      fail(errc::landmark_count_mismatch, "evaluate: landmark count mismatch at image " +
                                              std::to_string(s));
    for (std::size_t k = 0; k < p.size(); ++k)
      distances.push_back(distance(p.points[k], g.points[k]));
  }

  EvalReport report;
  double sum = 0.0;
  for (double d : distances) sum += d;
  report.pe_mean_mm = sum / static_cast<double>(distances.size());
  double ss = 0.0;
  for (double d : distances) ss += (d - report.pe_mean_mm) * (d - report.pe_mean_mm);
  report.pe_sd_mm = std::sqrt(ss / static_cast<double>(distances.size()));

  report.outliers.reserve(radii_mm.size());
  for (double r : radii_mm) {
    std::size_t count = 0;
    for (double d : distances) count += d > r ? 1 : 0;
    report.outliers.emplace_back(r, count);
  }
  return report;
}

}  // namespace lmg

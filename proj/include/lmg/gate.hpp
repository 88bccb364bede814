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

#include "lmg/core.hpp"
#include "lmg/ssm.hpp"

namespace lmg {

struct GateConfig {
  std::size_t coincidence_exempt_a = 2;
  std::size_t coincidence_exempt_b = 3;
  double coincidence_tolerance_mm = 0.0;       // <= 0: caller substitutes one pixel in mm
  std::vector<std::size_t> wrist_region;       // mandatory, no default
  double wrist_distance_limit_mm = 16.0;
};

struct Violation {
  enum class Kind { Coincidence, WristDistance, MatchFailed };
  Kind kind = Kind::Coincidence;
  std::size_t landmark_a = 0;
  std::size_t landmark_b = 0;  // == landmark_a for single-landmark violations
  double measured_mm = 0.0;
};

const char* violation_kind_name(Violation::Kind kind);

struct GateDecision {
  bool accepted = false;
  std::vector<Violation> violations;
};

/// Constraint (i): no two labeled landmarks closer than the coincidence
/// tolerance, except the exempt pair. Constraint (ii): every wrist-region
/// landmark within wrist_distance_limit of its posed SSM mean coordinate.
/// match == nullptr means the SSM match failed upstream; that alone rejects.
GateDecision check_constraints(const Shape& labeled_mm, const MatchResult* match,
                               const GateConfig& config);

double acceptance_rate(std::span<const GateDecision> decisions);

struct EvalReport {
  double pe_mean_mm = 0.0;
  double pe_sd_mm = 0.0;  // population SD over the pooled distances
  std::vector<std::pair<double, std::size_t>> outliers;  // (radius mm, count of distances > radius)
};

/// Point-to-point error pooled over all landmarks of all images, plus outlier
/// counts per radius (strictly greater than).
EvalReport evaluate(const std::vector<Shape>& predictions, const std::vector<Shape>& ground_truth,
                    std::span<const double> radii_mm);

}  // namespace lmg

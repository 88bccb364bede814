#pragma once
/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lmg/gate.hpp"
#include "lmg/mrf.hpp"
#include "lmg/shapestats.hpp"
#include "lmg/ssm.hpp"

namespace lmg {

struct PipelineConfig {
  double mm_per_px = 1.0;
  GateConfig gate;
  LbpParams lbp;
  RansacParams ransac;
  int extract_window = 3;
  double extract_min_value = 0.05;
  std::uint64_t seed = 0;
  int jobs = 1;
};

struct StageTimings {
  double extract_ms = 0.0;
  double mrf_ms = 0.0;
  double ssm_ms = 0.0;
  double gate_ms = 0.0;
};

struct ImageVerdict {
  std::string id;
  bool readable = true;
  std::string error;  // set when the heatmap could not be processed
  std::optional<Labeling> labeling;
  double energy = 0.0;
  Shape labeled_mm;
  std::optional<MatchResult> match;
  GateDecision decision;
  StageTimings timings;
};

struct GateSummary {
  std::size_t total = 0;
  std::size_t accepted = 0;
  std::size_t unreadable = 0;
  double acceptance_rate = 0.0;  // accepted / total
  std::map<std::string, std::size_t> violation_histogram;
};

/// candidates -> MRF -> SSM -> gate for one heatmap already in memory.
ImageVerdict gate_heatmap(const std::string& id, const Heatmap& heatmap, const TrainStats& stats,
                          const PipelineConfig& config, std::uint64_t image_seed);

/// Runs gate_heatmap over every *.pgm in the directory (sorted by filename),
/// scheduling across config.jobs workers; verdicts come back in input order
/// and one bad file never affects another. Per-image seeds derive from
/// (config.seed, index), so results are identical for any job count.
std::pair<std::vector<ImageVerdict>, GateSummary> gate_directory(
    const std::filesystem::path& heatmap_dir, const TrainStats& stats,
    const PipelineConfig& config);

/// JSON-lines: one record per image, then one {"summary": ...} record.
/// Timings are omitted unless include_timings (they are not reproducible).
void write_verdicts_jsonl(const std::filesystem::path& path,
                          const std::vector<ImageVerdict>& verdicts, const GateSummary& summary,
                          bool include_timings = false);

}  // namespace lmg

/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "lmg/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "lmg/heatmap.hpp"

namespace lmg {

namespace {

using ordered_json = nlohmann::ordered_json;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ull * (index + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

ImageVerdict gate_heatmap(const std::string& id, const Heatmap& heatmap, const TrainStats& stats,
                          const PipelineConfig& config, std::uint64_t image_seed) {
  ImageVerdict verdict;
  verdict.id = id;

  GateConfig gate = config.gate;
  if (!(gate.coincidence_tolerance_mm > 0.0))
    gate.coincidence_tolerance_mm = config.mm_per_px;  // one heatmap pixel

  auto start = std::chrono::steady_clock::now();
  const std::vector<Candidate> px_candidates = extract_candidates(
      heatmap, stats.num_landmarks, config.extract_window, config.extract_min_value);
  verdict.timings.extract_ms = elapsed_ms(start);

  if (px_candidates.empty()) {
    verdict.error = "no candidates above threshold";
    verdict.decision.violations.push_back({Violation::Kind::MatchFailed, 0, 0, 0.0});
    return verdict;
  }

  std::vector<Candidate> candidates_mm;
  candidates_mm.reserve(px_candidates.size());
  for (const auto& c : px_candidates)
    candidates_mm.push_back(
        {{c.position.x * config.mm_per_px, c.position.y * config.mm_per_px}, c.peak_value});

  start = std::chrono::steady_clock::now();
  const FactorGraph graph = build_graph(candidates_mm, stats);
  Labeling labeling = lbp_map(graph, config.lbp);
  verdict.energy = energy(graph, labeling);
  verdict.labeled_mm.unit = Unit::Millimeters;
  verdict.labeled_mm.points.reserve(stats.num_landmarks);
  for (std::size_t node = 0; node < stats.num_landmarks; ++node)
    verdict.labeled_mm.points.push_back(candidates_mm[labeling.assignment[node]].position);
  verdict.labeling = std::move(labeling);
  verdict.timings.mrf_ms = elapsed_ms(start);

  start = std::chrono::steady_clock::now();
  RansacParams ransac = config.ransac;
  ransac.seed = image_seed;
  try {
    verdict.match = ransac_match(stats.ssm.mean_shape, verdict.labeled_mm, ransac);
  } catch (const error& e) {
    if (e.code() != errc::match_failed) throw;
  }
  verdict.timings.ssm_ms = elapsed_ms(start);

  start = std::chrono::steady_clock::now();
  verdict.decision = check_constraints(
      verdict.labeled_mm, verdict.match ? &*verdict.match : nullptr, gate);
  verdict.timings.gate_ms = elapsed_ms(start);
  return verdict;
}

std::pair<std::vector<ImageVerdict>, GateSummary> gate_directory(
    const std::filesystem::path& heatmap_dir, const TrainStats& stats,
    const PipelineConfig& config) {
  if (!std::filesystem::is_directory(heatmap_dir))
    fail(errc::io_error, "'" + heatmap_dir.string() + "' is not a directory");

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(heatmap_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".pgm")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
  if (files.empty())
    fail(errc::empty_input, "no .pgm heatmaps under '" + heatmap_dir.string() + "'");

  std::vector<ImageVerdict> verdicts(files.size());
  const int jobs = std::max(1, config.jobs);
  std::atomic<std::size_t> cursor{0};

  const auto worker = [&]() {
    while (true) {
      const std::size_t index = cursor.fetch_add(1);
      if (index >= files.size()) return;
      const std::filesystem::path& file = files[index];
      const std::string id = file.stem().string();
      try {
        const Heatmap heatmap = load_pgm(file);
        verdicts[index] =
            gate_heatmap(id, heatmap, stats, config, mix_seed(config.seed, index));
      } catch (const error& e) {
        // one bad image never stops the directory
        verdicts[index] = ImageVerdict{};
        verdicts[index].id = id;
        verdicts[index].readable = false;
        verdicts[index].error = e.what();
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  GateSummary summary;
  summary.total = verdicts.size();
  for (const auto& v : verdicts) {
    if (!v.readable) ++summary.unreadable;
    if (v.decision.accepted) ++summary.accepted;
    if (!v.readable) {
      ++summary.violation_histogram["unreadable"];
    } else {
      for (const auto& viol : v.decision.violations)
        ++summary.violation_histogram[violation_kind_name(viol.kind)];
    }
  }
  summary.acceptance_rate =
      static_cast<double>(summary.accepted) / static_cast<double>(summary.total);
  return {std::move(verdicts), summary};
}

void write_verdicts_jsonl(const std::filesystem::path& path,
                          const std::vector<ImageVerdict>& verdicts, const GateSummary& summary,
                          bool include_timings) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot write '" + path.string() + "'");

  for (const auto& v : verdicts) {
    ordered_json record;
    record["id"] = v.id;
    record["readable"] = v.readable;
    if (!v.error.empty()) record["error"] = v.error;
    if (v.labeling) {
      record["converged"] = v.labeling->converged;
      record["iterations"] = v.labeling->iterations;
      record["energy"] = v.energy;
      ordered_json coords = ordered_json::array();
      for (const auto& p : v.labeled_mm.points) {
        coords.push_back(p.x);
        coords.push_back(p.y);
      }
      record["labeled_mm"] = std::move(coords);
    }
    record["match_ok"] = v.match.has_value();
    if (v.match) {
      record["scale"] = v.match->transform.scale;
      record["rotation"] = v.match->transform.rotation;
      record["inliers"] =
          std::count(v.match->inlier_mask.begin(), v.match->inlier_mask.end(), true);
    }
    record["accepted"] = v.decision.accepted;
    ordered_json violations = ordered_json::array();
    for (const auto& viol : v.decision.violations) {
      ordered_json item;
      item["constraint"] = violation_kind_name(viol.kind);
      if (viol.kind != Violation::Kind::MatchFailed) {
        item["landmarks"] = ordered_json::array({viol.landmark_a, viol.landmark_b});
        item["measured_mm"] = viol.measured_mm;
      }
      violations.push_back(std::move(item));
    }
    record["violations"] = std::move(violations);
    if (include_timings) {
      record["timings_ms"] =
          ordered_json{{"extract", v.timings.extract_ms},
                       {"mrf", v.timings.mrf_ms},
                       {"ssm", v.timings.ssm_ms},
                       {"gate", v.timings.gate_ms}};
    }
    out << record.dump() << "\n";
  }

  ordered_json tail;
  ordered_json body;
  body["total"] = summary.total;
  body["accepted"] = summary.accepted;
  body["unreadable"] = summary.unreadable;
  body["acceptance_rate"] = summary.acceptance_rate;
  ordered_json histogram;
  for (const auto& [kind, count] : summary.violation_histogram) histogram[kind] = count;
  body["violations"] = std::move(histogram);
  tail["summary"] = std::move(body);
  out << tail.dump() << "\n";
  if (!out) fail(errc::io_error, "failed writing '" + path.string() + "'");
}

}  // namespace lmg

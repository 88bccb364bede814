/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cmath>

#include <doctest.h>

#include "lmg/fixture.hpp"
#include "lmg/heatmap.hpp"
#include "lmg/pipeline.hpp"
#include "test_util.hpp"

using namespace lmg;

namespace {

TrainStats fixture_stats(const std::filesystem::path& dir, std::size_t train_count,
                         std::uint64_t seed) {
  FixtureParams params;
  params.count = train_count;
  params.seed = seed;
  generate_fixture(dir, params);
  Dataset px = parse_annotations(dir / "annotations.txt", 12);
  const FixtureLayout layout = fixture_layout();
  Dataset mm = px;
  mm.unit = Unit::Millimeters;
  const NormalizationSpec norm{layout.wrist_a, layout.wrist_b, 50.0};
  for (auto& shape : mm.shapes) shape = normalize_to_wrist(shape, norm).shape;
  const Topology topology = load_topology(dir / "topology.txt", 12);
  return fit_stats(mm, topology, 25.0, norm);
}

PipelineConfig fixture_config(std::uint64_t seed, int jobs = 1) {
  const FixtureLayout layout = fixture_layout();
  PipelineConfig config;
  config.mm_per_px = layout.mm_per_px();
  config.gate.wrist_region = layout.wrist_region;
  config.seed = seed;
  config.jobs = jobs;
  return config;
}

}  // namespace

TEST_CASE("fixture generation is deterministic and self-consistent") {
  const auto dir_a = test::temp_dir("fixture_a");
  const auto dir_b = test::temp_dir("fixture_b");
  FixtureParams params;
  params.count = 6;
  params.seed = 40;

  const FixtureResult a = generate_fixture(dir_a, params);
  const FixtureResult b = generate_fixture(dir_b, params);
  CHECK(test::read_file(a.annotations) == test::read_file(b.annotations));
  REQUIRE(a.heatmaps.size() == 6);
  for (std::size_t k = 0; k < 6; ++k)
    CHECK(test::read_file(a.heatmaps[k]) == test::read_file(b.heatmaps[k]));
  CHECK(test::read_file(dir_a / "fixture_config.txt") ==
        test::read_file(dir_b / "fixture_config.txt"));
  CHECK(test::read_file(dir_a / "topology.txt") == test::read_file(dir_b / "topology.txt"));

  SUBCASE("extracted candidates sit on the annotated landmarks") {
    const Dataset annotations = parse_annotations(a.annotations, 12);
    for (std::size_t img = 0; img < 6; ++img) {
      const Heatmap heat = load_pgm(a.heatmaps[img]);
      const auto candidates = extract_candidates(heat, 12, 3, 0.05);
      REQUIRE(candidates.size() == 12);
      for (const auto& p : annotations.shapes[img].points) {
        double best = 1e9;
        for (const auto& c : candidates)
          best = std::min(best,
                          std::max(std::abs(c.position.x - p.x), std::abs(c.position.y - p.y)));
        CHECK(best <= 0.5);
      }
    }
  }
}

TEST_CASE("coincident corruption collapses two non-exempt landmarks") {
  const auto dir = test::temp_dir("fixture_coincident");
  FixtureParams params;
  params.count = 3;
  params.seed = 4;
  params.corruption = Corruption::Coincident;
  const FixtureResult r = generate_fixture(dir, params);
  const Dataset annotations = parse_annotations(r.annotations, 12);
  for (const Shape& s : annotations.shapes) {
    CHECK(s.points[6].x == s.points[7].x);
    CHECK(s.points[6].y == s.points[7].y);
  }
}

TEST_CASE("gate_directory discriminates clean from corrupted fixtures") {
  const auto train_dir = test::temp_dir("pipe_train");
  const TrainStats stats = fixture_stats(train_dir, 60, 1000);
  const PipelineConfig config = fixture_config(5);

  SUBCASE("clean fixtures pass") {
    const auto dir = test::temp_dir("pipe_clean");
    FixtureParams params;
    params.count = 30;
    params.seed = 2000;
    generate_fixture(dir, params);
    const auto [verdicts, summary] = gate_directory(dir, stats, config);
    CHECK(summary.total == 30);
    CHECK(summary.acceptance_rate >= 0.8);
    for (const auto& v : verdicts) {
      CHECK(v.readable);
      REQUIRE(v.labeling.has_value());
      CHECK(v.labeling->converged);
    }
  }
  SUBCASE("displaced wrist landmarks are rejected") {
    const auto dir = test::temp_dir("pipe_displaced");
    FixtureParams params;
    params.count = 30;
    params.seed = 3000;
    params.corruption = Corruption::Displaced;
    generate_fixture(dir, params);
    const auto [verdicts, summary] = gate_directory(dir, stats, config);
    CHECK(summary.acceptance_rate <= 0.2);
  }
  SUBCASE("coincident landmarks are rejected") {
    const auto dir = test::temp_dir("pipe_coincident");
    FixtureParams params;
    params.count = 30;
    params.seed = 4000;
    params.corruption = Corruption::Coincident;
    generate_fixture(dir, params);
    const auto [verdicts, summary] = gate_directory(dir, stats, config);
    CHECK(summary.acceptance_rate <= 0.2);
  }
}

TEST_CASE("gate_directory edge behavior") {
  const auto train_dir = test::temp_dir("pipe_edge_train");
  const TrainStats stats = fixture_stats(train_dir, 40, 7000);

  SUBCASE("empty directory fails with empty_input") {
    const auto dir = test::temp_dir("pipe_empty");
    try {
      gate_directory(dir, stats, fixture_config(1));
      FAIL("expected empty_input");
    } catch (const error& e) {
      CHECK(e.code() == errc::empty_input);
    }
  }
  SUBCASE("one unreadable file is isolated") {
    const auto dir = test::temp_dir("pipe_broken");
    FixtureParams params;
    params.count = 4;
    params.seed = 7100;
    generate_fixture(dir, params);
    const auto clean = gate_directory(dir, stats, fixture_config(2));
    test::write_file(dir / "img_0000.pgm", "not a pgm at all");
    const auto mixed = gate_directory(dir, stats, fixture_config(2));

    CHECK(mixed.second.unreadable == 1);
    CHECK(!mixed.first[0].readable);
    CHECK(!mixed.first[0].error.empty());
    CHECK(!mixed.first[0].decision.accepted);
    // the other images are untouched
    for (std::size_t k = 1; k < 4; ++k) {
      REQUIRE(mixed.first[k].labeling.has_value());
      CHECK(mixed.first[k].labeling->assignment == clean.first[k].labeling->assignment);
      CHECK(mixed.first[k].decision.accepted == clean.first[k].decision.accepted);
      CHECK(mixed.first[k].energy == clean.first[k].energy);
    }
  }
  SUBCASE("verdicts are independent of the job count") {
    const auto dir = test::temp_dir("pipe_jobs");
    FixtureParams params;
    params.count = 8;
    params.seed = 7200;
    generate_fixture(dir, params);
    const auto serial = gate_directory(dir, stats, fixture_config(3, 1));
    const auto parallel = gate_directory(dir, stats, fixture_config(3, 4));
    REQUIRE(serial.first.size() == parallel.first.size());
    for (std::size_t k = 0; k < serial.first.size(); ++k) {
      CHECK(serial.first[k].id == parallel.first[k].id);
      CHECK(serial.first[k].decision.accepted == parallel.first[k].decision.accepted);
      CHECK(serial.first[k].energy == parallel.first[k].energy);
      CHECK(serial.first[k].labeled_mm.points.size() ==
            parallel.first[k].labeled_mm.points.size());
    }
    CHECK(serial.second.accepted == parallel.second.accepted);

    const auto out_a = dir / "a.jsonl";
    const auto out_b = dir / "b.jsonl";
    write_verdicts_jsonl(out_a, serial.first, serial.second);
    write_verdicts_jsonl(out_b, parallel.first, parallel.second);
    CHECK(test::read_file(out_a) == test::read_file(out_b));
  }
  SUBCASE("stage timings are populated for readable images") {
    const auto dir = test::temp_dir("pipe_timing");
    FixtureParams params;
    params.count = 2;
    params.seed = 7300;
    generate_fixture(dir, params);
    const auto [verdicts, summary] = gate_directory(dir, stats, fixture_config(4));
    for (const auto& v : verdicts) {
      CHECK(v.timings.extract_ms >= 0.0);
      CHECK(v.timings.mrf_ms >= 0.0);
      CHECK(v.timings.ssm_ms >= 0.0);
      CHECK(v.timings.gate_ms >= 0.0);
    }
  }
}

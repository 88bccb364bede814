/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 *
 * Exercises the shared-library surface only: no C++ core headers here.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "landmark_gate.h"

namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("lmg_capi_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

struct Fixture {
  fs::path dir;
  lmg_stats* stats = nullptr;
  double mm_per_px = 50.0 / 56.0;

  Fixture() {
    dir = temp_dir("fixture");
    REQUIRE(lmg_fixture_generate((dir / "train").string().c_str(), 40, LMG_CORRUPTION_NONE, 11,
                                 256, 256, 1.0, 30.0) == LMG_OK);
    lmg_dataset* annotations = nullptr;
    REQUIRE(lmg_dataset_load((dir / "train" / "annotations.txt").string().c_str(), 12,
                             &annotations) == LMG_OK);
    REQUIRE(lmg_stats_fit(annotations, 0, 1, 50.0,
                          (dir / "train" / "topology.txt").string().c_str(), 25.0, 0.95,
                          &stats) == LMG_OK);
    lmg_dataset_free(annotations);
  }
  ~Fixture() {
    lmg_stats_free(stats);
  }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(lmg_version()) == "1.0.0");
  CHECK(std::string(lmg_status_name(LMG_OK)) == "ok");
  CHECK(std::string(lmg_status_name(LMG_ERR_MATCH_FAILED)) == "match_failed");
}

TEST_CASE("dataset lifecycle through the C API") {
  const auto dir = temp_dir("dataset");
  lmg_dataset* ds = nullptr;
  REQUIRE(lmg_dataset_create(2, LMG_UNIT_PIXELS, &ds) == LMG_OK);
  const double a[4] = {1.5, 2.5, 3.5, 4.5};
  const double b[4] = {9, 8, 7, 6};
  CHECK(lmg_dataset_add_shape(ds, "a", a) == LMG_OK);
  CHECK(lmg_dataset_add_shape(ds, "b", b) == LMG_OK);
  CHECK(lmg_dataset_size(ds) == 2);
  CHECK(lmg_dataset_landmarks(ds) == 2);
  CHECK(lmg_dataset_unit(ds) == LMG_UNIT_PIXELS);
  CHECK(std::string(lmg_dataset_id(ds, 1)) == "b");

  const auto path = dir / "ds.txt";
  CHECK(lmg_dataset_save(ds, path.string().c_str()) == LMG_OK);
  lmg_dataset* back = nullptr;
  REQUIRE(lmg_dataset_load(path.string().c_str(), 2, &back) == LMG_OK);
  double xy[4] = {0, 0, 0, 0};
  CHECK(lmg_dataset_shape(back, 0, xy) == LMG_OK);
  CHECK(std::memcmp(xy, a, sizeof a) == 0);

  lmg_dataset* mm = nullptr;
  REQUIRE(lmg_dataset_pixels_to_mm(back, 2.0, &mm) == LMG_OK);
  CHECK(lmg_dataset_unit(mm) == LMG_UNIT_MILLIMETERS);
  CHECK(lmg_dataset_shape(mm, 0, xy) == LMG_OK);
  CHECK(xy[0] == 3.0);

  CHECK(lmg_dataset_shape(back, 5, xy) == LMG_ERR_OUT_OF_RANGE);
  CHECK(std::string(lmg_last_error()).size() > 0);
  lmg_dataset_free(mm);
  lmg_dataset_free(back);
  lmg_dataset_free(ds);

  lmg_dataset* missing = nullptr;
  CHECK(lmg_dataset_load((dir / "nope.txt").string().c_str(), 2, &missing) == LMG_ERR_IO);
}

TEST_CASE("heatmap render/extract/pgm through the C API") {
  const auto dir = temp_dir("heatmap");
  const double xy[6] = {8, 8, 24, 9, 10, 26};
  lmg_heatmap* heat = nullptr;
  size_t clipped = 7;
  REQUIRE(lmg_heatmap_render(xy, 3, 40, 40, 1.0, &heat, &clipped) == LMG_OK);
  CHECK(clipped == 0);
  CHECK(lmg_heatmap_width(heat) == 40);
  CHECK(lmg_heatmap_height(heat) == 40);

  std::vector<double> values(40 * 40);
  CHECK(lmg_heatmap_values(heat, values.data()) == LMG_OK);
  CHECK(values[8 * 40 + 8] == 1.0);

  double cand_xy[6];
  double cand_value[3];
  size_t found = 0;
  REQUIRE(lmg_heatmap_extract(heat, 3, 3, 0.05, cand_xy, cand_value, &found) == LMG_OK);
  CHECK(found == 3);

  const auto pgm = dir / "h.pgm";
  CHECK(lmg_heatmap_save_pgm(heat, pgm.string().c_str()) == LMG_OK);
  lmg_heatmap* loaded = nullptr;
  REQUIRE(lmg_heatmap_load_pgm(pgm.string().c_str(), &loaded) == LMG_OK);
  CHECK(lmg_heatmap_width(loaded) == 40);
  lmg_heatmap_free(loaded);
  lmg_heatmap_free(heat);
}

TEST_CASE("schedule, predictor and sampling through the C API") {
  lmg_schedule* schedule = nullptr;
  REQUIRE(lmg_schedule_make(800, 1e-4, 0.02, &schedule) == LMG_OK);
  CHECK(lmg_schedule_timesteps(schedule) == 800);
  double beta = 0;
  CHECK(lmg_schedule_beta(schedule, 1, &beta) == LMG_OK);
  CHECK(beta == 1e-4);
  CHECK(lmg_schedule_beta(schedule, 801, &beta) == LMG_ERR_OUT_OF_RANGE);

  const double mu[2] = {0.3, -0.2};
  const double cov[4] = {0.25, 0.1, 0.1, 0.2};
  lmg_predictor* predictor = nullptr;
  REQUIRE(lmg_predictor_gaussian(mu, cov, 2, schedule, &predictor) == LMG_OK);

  std::vector<double> run_a(10 * 2), run_b(10 * 2);
  CHECK(lmg_sample(predictor, schedule, 2, 10, 77, run_a.data()) == LMG_OK);
  CHECK(lmg_sample(predictor, schedule, 2, 10, 77, run_b.data()) == LMG_OK);
  CHECK(std::memcmp(run_a.data(), run_b.data(), run_a.size() * sizeof(double)) == 0);

  const double x0[2] = {1.0, 0.0};
  const double eps[2] = {0.0, 0.0};
  double out[2] = {0, 0};
  CHECK(lmg_forward_sample(schedule, 400, x0, eps, 2, out) == LMG_OK);
  double ab = 0;
  CHECK(lmg_schedule_alpha_bar(schedule, 400, &ab) == LMG_OK);
  CHECK(out[0] == std::sqrt(ab));

  double loss = -1;
  CHECK(lmg_ddpm_loss(predictor, schedule, 100, x0, eps, 2, &loss) == LMG_OK);
  CHECK(loss >= 0.0);

  lmg_predictor* zero = nullptr;
  REQUIRE(lmg_predictor_zero(&zero) == LMG_OK);
  double zero_loss = -1;
  CHECK(lmg_ddpm_loss(zero, schedule, 100, x0, eps, 2, &zero_loss) == LMG_OK);
  CHECK(zero_loss == 0.0);  // eps was zero

  lmg_predictor_free(zero);
  lmg_predictor_free(predictor);
  lmg_schedule_free(schedule);
}

TEST_CASE("heatmap diffuse keeps the value range") {
  lmg_schedule* schedule = nullptr;
  REQUIRE(lmg_schedule_make(800, 1e-4, 0.02, &schedule) == LMG_OK);
  const double xy[2] = {10, 10};
  lmg_heatmap* heat = nullptr;
  REQUIRE(lmg_heatmap_render(xy, 1, 24, 24, 1.0, &heat, nullptr) == LMG_OK);
  lmg_heatmap* noisy = nullptr;
  REQUIRE(lmg_heatmap_diffuse(heat, schedule, 400, 5, &noisy) == LMG_OK);
  std::vector<double> values(24 * 24);
  CHECK(lmg_heatmap_values(noisy, values.data()) == LMG_OK);
  for (double v : values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  lmg_heatmap_free(noisy);
  lmg_heatmap_free(heat);
  lmg_schedule_free(schedule);
}

TEST_CASE_FIXTURE(Fixture, "stats accessors and persistence") {
  CHECK(lmg_stats_landmarks(stats) == 12);
  CHECK(lmg_stats_num_edges(stats) == 21);
  CHECK(lmg_stats_unary_sigma(stats) == 25.0);
  double x = 0, y = 0;
  CHECK(lmg_stats_mean(stats, 0, &x, &y) == LMG_OK);
  CHECK(x > 0);
  CHECK(lmg_stats_mean(stats, 40, &x, &y) == LMG_ERR_OUT_OF_RANGE);

  size_t i = 0, j = 0;
  double dof, loc, scale, mean_distance;
  CHECK(lmg_stats_edge(stats, 0, &i, &j, &dof, &loc, &scale, &mean_distance) == LMG_OK);
  CHECK(i < j);
  CHECK(scale > 0);

  const auto path = dir / "stats.txt";
  CHECK(lmg_stats_save(stats, path.string().c_str()) == LMG_OK);
  lmg_stats* back = nullptr;
  REQUIRE(lmg_stats_load(path.string().c_str(), &back) == LMG_OK);
  CHECK(lmg_stats_landmarks(back) == 12);
  lmg_stats_free(back);

  lmg_stats* bad = nullptr;
  CHECK(lmg_stats_load((dir / "absent.txt").string().c_str(), &bad) == LMG_ERR_IO);
}

TEST_CASE_FIXTURE(Fixture, "match, ssm and gate through the C API") {
  REQUIRE(lmg_fixture_generate((dir / "eval").string().c_str(), 6, LMG_CORRUPTION_NONE, 21, 256,
                               256, 1.0, 30.0) == LMG_OK);

  lmg_heatmap* heat = nullptr;
  REQUIRE(lmg_heatmap_load_pgm((dir / "eval" / "img_0000.pgm").string().c_str(), &heat) == LMG_OK);

  lmg_lbp_params lbp;
  lmg_lbp_params_default(&lbp);
  CHECK(lbp.max_iterations == 200);
  CHECK(lbp.damping == 0.5);

  std::vector<double> labeled(24);
  lmg_match_diag diag{};
  REQUIRE(lmg_match_heatmap(stats, heat, mm_per_px, &lbp, labeled.data(), &diag) == LMG_OK);
  CHECK(diag.converged == 1);
  CHECK(diag.num_candidates == 12);
  CHECK(diag.energy > 0.0);

  lmg_ransac_params ransac;
  lmg_ransac_params_default(&ransac);
  CHECK(ransac.iterations == 500);
  CHECK(ransac.inlier_threshold_mm == 10.0);
  ransac.seed = 3;

  double scale = 0, rotation = 0, translation[2] = {0, 0};
  std::vector<int> inliers(12);
  std::vector<double> residuals(12), transformed(24);
  REQUIRE(lmg_ssm_match(stats, labeled.data(), 12, &ransac, &scale, &rotation, translation,
                        inliers.data(), residuals.data(), transformed.data()) == LMG_OK);
  CHECK(scale > 0);

  const size_t region[3] = {0, 1, 4};
  lmg_gate_params gate;
  lmg_gate_params_default(&gate);
  gate.wrist_region = region;
  gate.wrist_region_len = 3;
  lmg_gate_decision decision{};
  REQUIRE(lmg_gate_check(stats, labeled.data(), 12, mm_per_px, &ransac, &gate, &decision) ==
          LMG_OK);
  CHECK(decision.accepted == 1);
  CHECK(decision.match_failed == 0);

  // shape-space roundtrip: reconstruct(project(x)) stays in the mode span
  const size_t modes = lmg_stats_ssm_modes(stats);
  if (modes > 0) {
    std::vector<double> b(modes, 0.0);
    std::vector<double> mean_xy(24);
    REQUIRE(lmg_ssm_reconstruct(stats, b.data(), modes, mean_xy.data()) == LMG_OK);
    REQUIRE(lmg_ssm_project(stats, mean_xy.data(), 12, b.data()) == LMG_OK);
    for (double v : b) CHECK(std::abs(v) < 1e-10);
  }

  // a scrambled shape must fail the match
  std::vector<double> garbage(24);
  for (size_t k = 0; k < 24; ++k) garbage[k] = 40.0 * ((k * 137) % 7);
  CHECK(lmg_ssm_match(stats, garbage.data(), 12, &ransac, &scale, &rotation, translation,
                      inliers.data(), residuals.data(),
                      transformed.data()) == LMG_ERR_MATCH_FAILED);
  lmg_gate_decision rejected{};
  REQUIRE(lmg_gate_check(stats, garbage.data(), 12, mm_per_px, &ransac, &gate, &rejected) ==
          LMG_OK);
  CHECK(rejected.accepted == 0);
  CHECK(rejected.match_failed == 1);

  lmg_heatmap_free(heat);
}

TEST_CASE_FIXTURE(Fixture, "gate_directory writes deterministic reports") {
  REQUIRE(lmg_fixture_generate((dir / "gate").string().c_str(), 10, LMG_CORRUPTION_NONE, 31, 256,
                               256, 1.0, 30.0) == LMG_OK);
  lmg_lbp_params lbp;
  lmg_lbp_params_default(&lbp);
  lmg_ransac_params ransac;
  lmg_ransac_params_default(&ransac);
  const size_t region[3] = {0, 1, 4};
  lmg_gate_params gate;
  lmg_gate_params_default(&gate);
  gate.wrist_region = region;
  gate.wrist_region_len = 3;

  lmg_gate_summary summary{};
  const auto out_a = dir / "a.jsonl";
  const auto out_b = dir / "b.jsonl";
  REQUIRE(lmg_gate_directory(stats, (dir / "gate").string().c_str(), mm_per_px, &lbp, &ransac,
                             &gate, 3, 0.05, 9, 2, out_a.string().c_str(), 0,
                             &summary) == LMG_OK);
  CHECK(summary.total == 10);
  CHECK(summary.accepted >= 8);
  CHECK(summary.unreadable == 0);
  lmg_gate_summary summary_b{};
  REQUIRE(lmg_gate_directory(stats, (dir / "gate").string().c_str(), mm_per_px, &lbp, &ransac,
                             &gate, 3, 0.05, 9, 1, out_b.string().c_str(), 0,
                             &summary_b) == LMG_OK);
  CHECK(read_file(out_a) == read_file(out_b));

  lmg_gate_summary unused{};
  CHECK(lmg_gate_directory(stats, (dir / "no_such_dir").string().c_str(), mm_per_px, &lbp,
                           &ransac, &gate, 3, 0.05, 9, 1, out_b.string().c_str(), 0,
                           &unused) == LMG_ERR_IO);
}

TEST_CASE("evaluate through the C API") {
  lmg_dataset* gt = nullptr;
  lmg_dataset* pred = nullptr;
  REQUIRE(lmg_dataset_create(2, LMG_UNIT_MILLIMETERS, &gt) == LMG_OK);
  REQUIRE(lmg_dataset_create(2, LMG_UNIT_MILLIMETERS, &pred) == LMG_OK);
  const double g[4] = {0, 0, 10, 0};
  const double p[4] = {3, 0, 10, 5};
  CHECK(lmg_dataset_add_shape(gt, "x", g) == LMG_OK);
  CHECK(lmg_dataset_add_shape(pred, "x", p) == LMG_OK);

  const double radii[4] = {2, 4, 10, 20};
  double pe_mean = 0, pe_sd = 0;
  size_t counts[4] = {9, 9, 9, 9};
  REQUIRE(lmg_evaluate(pred, gt, radii, 4, &pe_mean, &pe_sd, counts) == LMG_OK);
  CHECK(pe_mean == 4.0);
  CHECK(pe_sd == 1.0);
  CHECK(counts[0] == 2);
  CHECK(counts[1] == 1);
  CHECK(counts[2] == 0);
  CHECK(counts[3] == 0);

  lmg_dataset_free(gt);
  lmg_dataset_free(pred);
}

TEST_CASE("null-argument and error-path discipline") {
  CHECK(lmg_dataset_load(nullptr, 0, nullptr) == LMG_ERR_INVALID_ARGUMENT);
  CHECK(std::string(lmg_last_error()).size() > 0);
  lmg_schedule* schedule = nullptr;
  CHECK(lmg_schedule_make(0, 1e-4, 0.02, &schedule) == LMG_ERR_INVALID_ARGUMENT);
  CHECK(lmg_fixture_generate(nullptr, 1, LMG_CORRUPTION_NONE, 0, 256, 256, 1.0, 30.0) ==
        LMG_ERR_INVALID_ARGUMENT);
}

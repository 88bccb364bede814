/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "landmark_gate.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <string>

#include "lmg/core.hpp"
#include "lmg/diffusion.hpp"
#include "lmg/fixture.hpp"
#include "lmg/gate.hpp"
#include "lmg/heatmap.hpp"
#include "lmg/mrf.hpp"
#include "lmg/pipeline.hpp"
#include "lmg/shapestats.hpp"
#include "lmg/ssm.hpp"

struct lmg_dataset {
  lmg::Dataset value;
};
struct lmg_heatmap {
  lmg::Heatmap value;
};
struct lmg_stats {
  lmg::TrainStats value;
};
struct lmg_schedule {
  lmg::Schedule value;
};
struct lmg_predictor {
  std::unique_ptr<lmg::NoisePredictor> value;
};

namespace {

thread_local std::string g_last_error;

lmg_status map_code(lmg::errc code) {
  switch (code) {
    case lmg::errc::io_error: return LMG_ERR_IO;
    case lmg::errc::parse_error: return LMG_ERR_PARSE;
    case lmg::errc::invalid_argument: return LMG_ERR_INVALID_ARGUMENT;
    case lmg::errc::landmark_count_mismatch: return LMG_ERR_LANDMARK_COUNT_MISMATCH;
    case lmg::errc::nonfinite_coordinate: return LMG_ERR_NONFINITE_COORDINATE;
    case lmg::errc::degenerate_input: return LMG_ERR_DEGENERATE_INPUT;
    case lmg::errc::unsupported_format: return LMG_ERR_UNSUPPORTED_FORMAT;
    case lmg::errc::schema_violation: return LMG_ERR_SCHEMA_VIOLATION;
    case lmg::errc::match_failed: return LMG_ERR_MATCH_FAILED;
    case lmg::errc::search_space_too_large: return LMG_ERR_SEARCH_SPACE_TOO_LARGE;
    case lmg::errc::empty_input: return LMG_ERR_EMPTY_INPUT;
    case lmg::errc::out_of_range: return LMG_ERR_OUT_OF_RANGE;
    case lmg::errc::dimension_mismatch: return LMG_ERR_DIMENSION_MISMATCH;
  }
  return LMG_ERR_INTERNAL;
}

template <typename Fn>
lmg_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return LMG_OK;
  } catch (const lmg::error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LMG_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return LMG_ERR_INTERNAL;
  }
}

void require(bool condition, const char* message) {
  if (!condition) lmg::fail(lmg::errc::invalid_argument, message);
}

lmg::Shape shape_from_buffer(const double* xy, size_t num_landmarks, lmg::Unit unit) {
  require(xy != nullptr, "coordinate buffer is null");
  lmg::Shape s;
  s.unit = unit;
  s.points.reserve(num_landmarks);
  for (size_t k = 0; k < num_landmarks; ++k) s.points.push_back({xy[2 * k], xy[2 * k + 1]});
  return s;
}

void shape_to_buffer(const lmg::Shape& s, double* xy) {
  for (size_t k = 0; k < s.size(); ++k) {
    xy[2 * k] = s.points[k].x;
    xy[2 * k + 1] = s.points[k].y;
  }
}

lmg::LbpParams to_lbp(const lmg_lbp_params* p) {
  lmg::LbpParams out;
  if (p) {
    out.max_iterations = p->max_iterations;
    out.damping = p->damping;
    out.tolerance = p->tolerance;
  }
  return out;
}

lmg::RansacParams to_ransac(const lmg_ransac_params* p) {
  lmg::RansacParams out;
  if (p) {
    out.iterations = p->iterations;
    out.inlier_threshold_mm = p->inlier_threshold_mm;
    out.min_inliers = p->min_inliers;
    out.seed = p->seed;
  }
  return out;
}

lmg::GateConfig to_gate(const lmg_gate_params* p) {
  lmg::GateConfig out;
  if (p) {
    out.coincidence_exempt_a = p->exempt_a;
    out.coincidence_exempt_b = p->exempt_b;
    out.coincidence_tolerance_mm = p->coincidence_tolerance_mm;
    out.wrist_distance_limit_mm = p->wrist_distance_limit_mm;
    require(p->wrist_region != nullptr || p->wrist_region_len == 0,
            "wrist_region is null with non-zero length");
    out.wrist_region.assign(p->wrist_region, p->wrist_region + p->wrist_region_len);
  }
  return out;
}

}  // namespace

extern "C" {

const char* lmg_version(void) { return "1.0.0"; }

const char* lmg_status_name(lmg_status status) {
  switch (status) {
    case LMG_OK: return "ok";
    case LMG_ERR_IO: return "io_error";
    case LMG_ERR_PARSE: return "parse_error";
    case LMG_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case LMG_ERR_LANDMARK_COUNT_MISMATCH: return "landmark_count_mismatch";
    case LMG_ERR_NONFINITE_COORDINATE: return "nonfinite_coordinate";
    case LMG_ERR_DEGENERATE_INPUT: return "degenerate_input";
    case LMG_ERR_UNSUPPORTED_FORMAT: return "unsupported_format";
    case LMG_ERR_SCHEMA_VIOLATION: return "schema_violation";
    case LMG_ERR_MATCH_FAILED: return "match_failed";
    case LMG_ERR_SEARCH_SPACE_TOO_LARGE: return "search_space_too_large";
    case LMG_ERR_EMPTY_INPUT: return "empty_input";
    case LMG_ERR_OUT_OF_RANGE: return "out_of_range";
    case LMG_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
    case LMG_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* lmg_last_error(void) { return g_last_error.c_str(); }

/* ---- datasets --------------------------------------------------------- */

lmg_status lmg_dataset_load(const char* path, size_t expected_landmarks, lmg_dataset** out) {
  return guarded([&] {
    require(path && out, "path/out must not be null");
    auto handle = std::make_unique<lmg_dataset>();
    handle->value = lmg::parse_annotations(path, expected_landmarks);
    *out = handle.release();
  });
}

lmg_status lmg_dataset_save(const lmg_dataset* dataset, const char* path) {
  return guarded([&] {
    require(dataset && path, "dataset/path must not be null");
    lmg::write_annotations(path, dataset->value);
  });
}

lmg_status lmg_dataset_create(size_t num_landmarks, lmg_unit unit, lmg_dataset** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    require(num_landmarks >= 2, "need at least 2 landmarks");
    auto handle = std::make_unique<lmg_dataset>();
    handle->value.num_landmarks = num_landmarks;
    handle->value.unit =
        unit == LMG_UNIT_MILLIMETERS ? lmg::Unit::Millimeters : lmg::Unit::Pixels;
    *out = handle.release();
  });
}

lmg_status lmg_dataset_add_shape(lmg_dataset* dataset, const char* id, const double* xy) {
  return guarded([&] {
    require(dataset && id && xy, "dataset/id/xy must not be null");
    lmg::Shape s = shape_from_buffer(xy, dataset->value.num_landmarks, dataset->value.unit);
    lmg::check_finite(s, "lmg_dataset_add_shape");
    dataset->value.ids.emplace_back(id);
    dataset->value.shapes.push_back(std::move(s));
  });
}

void lmg_dataset_free(lmg_dataset* dataset) { delete dataset; }

size_t lmg_dataset_size(const lmg_dataset* dataset) {
  return dataset ? dataset->value.shapes.size() : 0;
}

size_t lmg_dataset_landmarks(const lmg_dataset* dataset) {
  return dataset ? dataset->value.num_landmarks : 0;
}

lmg_unit lmg_dataset_unit(const lmg_dataset* dataset) {
  return dataset && dataset->value.unit == lmg::Unit::Pixels ? LMG_UNIT_PIXELS
                                                             : LMG_UNIT_MILLIMETERS;
}

const char* lmg_dataset_id(const lmg_dataset* dataset, size_t index) {
  if (!dataset || index >= dataset->value.ids.size()) return nullptr;
  return dataset->value.ids[index].c_str();
}

lmg_status lmg_dataset_shape(const lmg_dataset* dataset, size_t index, double* xy) {
  return guarded([&] {
    require(dataset && xy, "dataset/xy must not be null");
    if (index >= dataset->value.shapes.size())
      lmg::fail(lmg::errc::out_of_range, "shape index out of range");
    shape_to_buffer(dataset->value.shapes[index], xy);
  });
}

void lmg_dataset_image_size(const lmg_dataset* dataset, int* width, int* height) {
  if (width) *width = dataset ? dataset->value.image_width : 0;
  if (height) *height = dataset ? dataset->value.image_height : 0;
}

lmg_status lmg_dataset_pixels_to_mm(const lmg_dataset* dataset, double mm_per_px,
                                    lmg_dataset** out) {
  return guarded([&] {
    require(dataset && out, "dataset/out must not be null");
    auto handle = std::make_unique<lmg_dataset>();
    handle->value = dataset->value;
    handle->value.unit = lmg::Unit::Millimeters;
    for (auto& shape : handle->value.shapes) shape = lmg::pixels_to_mm(shape, mm_per_px);
    *out = handle.release();
  });
}

/* ---- heatmaps ---------------------------------------------------------- */

lmg_status lmg_heatmap_render(const double* xy_px, size_t num_landmarks, int width, int height,
                              double sigma, lmg_heatmap** out, size_t* clipped_count) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    lmg::Shape shape = num_landmarks
                           ? shape_from_buffer(xy_px, num_landmarks, lmg::Unit::Pixels)
                           : lmg::Shape{{}, lmg::Unit::Pixels};
    lmg::RenderResult r = lmg::render(shape, width, height, sigma);
    if (clipped_count) *clipped_count = r.clipped.size();
    auto handle = std::make_unique<lmg_heatmap>();
    handle->value = std::move(r.heatmap);
    *out = handle.release();
  });
}

lmg_status lmg_heatmap_load_pgm(const char* path, lmg_heatmap** out) {
  return guarded([&] {
    require(path && out, "path/out must not be null");
    auto handle = std::make_unique<lmg_heatmap>();
    handle->value = lmg::load_pgm(path);
    *out = handle.release();
  });
}

lmg_status lmg_heatmap_save_pgm(const lmg_heatmap* heatmap, const char* path) {
  return guarded([&] {
    require(heatmap && path, "heatmap/path must not be null");
    lmg::save_pgm(path, heatmap->value);
  });
}

void lmg_heatmap_free(lmg_heatmap* heatmap) { delete heatmap; }

int lmg_heatmap_width(const lmg_heatmap* heatmap) { return heatmap ? heatmap->value.width : 0; }
int lmg_heatmap_height(const lmg_heatmap* heatmap) { return heatmap ? heatmap->value.height : 0; }

lmg_status lmg_heatmap_values(const lmg_heatmap* heatmap, double* values) {
  return guarded([&] {
    require(heatmap && values, "heatmap/values must not be null");
    std::memcpy(values, heatmap->value.values.data(),
                heatmap->value.values.size() * sizeof(double));
  });
}

lmg_status lmg_heatmap_extract(const lmg_heatmap* heatmap, size_t count, int window,
                               double min_value, double* out_xy, double* out_value,
                               size_t* out_found) {
  return guarded([&] {
    require(heatmap && out_xy && out_value && out_found, "null argument");
    const auto candidates = lmg::extract_candidates(heatmap->value, count, window, min_value);
    *out_found = candidates.size();
    for (size_t k = 0; k < candidates.size(); ++k) {
      out_xy[2 * k] = candidates[k].position.x;
      out_xy[2 * k + 1] = candidates[k].position.y;
      out_value[k] = candidates[k].peak_value;
    }
  });
}

lmg_status lmg_heatmap_diffuse(const lmg_heatmap* heatmap, const lmg_schedule* schedule, size_t t,
                               uint64_t seed, lmg_heatmap** out) {
  return guarded([&] {
    require(heatmap && schedule && out, "heatmap/schedule/out must not be null");
    const std::vector<double> model = lmg::to_model_range(heatmap->value.values);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> eps(model.size());
    for (auto& v : eps) v = normal(rng);
    std::vector<double> noisy = lmg::forward_sample(model, t, eps, schedule->value);
    for (auto& v : noisy) v = std::clamp(v, -1.0, 1.0);
    auto handle = std::make_unique<lmg_heatmap>();
    handle->value.width = heatmap->value.width;
    handle->value.height = heatmap->value.height;
    handle->value.values = lmg::from_model_range(noisy);
    *out = handle.release();
  });
}

/* ---- stats -------------------------------------------------------------- */

lmg_status lmg_stats_fit(const lmg_dataset* annotations, size_t wrist_a, size_t wrist_b,
                         double wrist_width_mm, const char* topology_path, double unary_sigma_mm,
                         double variance_fraction, lmg_stats** out) {
  return guarded([&] {
    require(annotations && out, "annotations/out must not be null");
    const lmg::Dataset& raw = annotations->value;
    lmg::NormalizationSpec norm{wrist_a, wrist_b, wrist_width_mm};

    lmg::Dataset mm = raw;
    mm.unit = lmg::Unit::Millimeters;
    for (auto& shape : mm.shapes) shape = lmg::normalize_to_wrist(shape, norm).shape;

    lmg::Topology topology;
    if (topology_path != nullptr) {
      topology = lmg::load_topology(topology_path, mm.num_landmarks);
    } else {
      // interim means just for the MST; fit_stats recomputes them
      std::vector<lmg::Point2> means(mm.num_landmarks);
      for (size_t k = 0; k < mm.num_landmarks; ++k) {
        double sx = 0.0, sy = 0.0;
        for (const auto& shape : mm.shapes) {
          sx += shape.points[k].x;
          sy += shape.points[k].y;
        }
        means[k] = {sx / static_cast<double>(mm.shapes.size()),
                    sy / static_cast<double>(mm.shapes.size())};
      }
      topology = lmg::default_topology(means);
    }

    auto handle = std::make_unique<lmg_stats>();
    handle->value = lmg::fit_stats(mm, topology, unary_sigma_mm, norm, variance_fraction);
    *out = handle.release();
  });
}

lmg_status lmg_stats_load(const char* path, lmg_stats** out) {
  return guarded([&] {
    require(path && out, "path/out must not be null");
    auto handle = std::make_unique<lmg_stats>();
    handle->value = lmg::load_stats(path);
    *out = handle.release();
  });
}

lmg_status lmg_stats_save(const lmg_stats* stats, const char* path) {
  return guarded([&] {
    require(stats && path, "stats/path must not be null");
    lmg::save_stats(path, stats->value);
  });
}

void lmg_stats_free(lmg_stats* stats) { delete stats; }

size_t lmg_stats_landmarks(const lmg_stats* stats) {
  return stats ? stats->value.num_landmarks : 0;
}

size_t lmg_stats_num_edges(const lmg_stats* stats) {
  return stats ? stats->value.edge_stats.size() : 0;
}

double lmg_stats_unary_sigma(const lmg_stats* stats) {
  return stats ? stats->value.unary_sigma : 0.0;
}

size_t lmg_stats_ssm_modes(const lmg_stats* stats) {
  return stats ? stats->value.ssm.num_modes() : 0;
}

lmg_status lmg_stats_mean(const lmg_stats* stats, size_t landmark, double* x, double* y) {
  return guarded([&] {
    require(stats && x && y, "stats/x/y must not be null");
    if (landmark >= stats->value.num_landmarks)
      lmg::fail(lmg::errc::out_of_range, "landmark index out of range");
    *x = stats->value.landmark_means[landmark].x;
    *y = stats->value.landmark_means[landmark].y;
  });
}

lmg_status lmg_stats_edge(const lmg_stats* stats, size_t edge, size_t* i, size_t* j, double* t_dof,
                          double* t_loc, double* t_scale, double* mean_distance) {
  return guarded([&] {
    require(stats != nullptr, "stats must not be null");
    if (edge >= stats->value.edge_stats.size())
      lmg::fail(lmg::errc::out_of_range, "edge index out of range");
    const lmg::EdgeStats& es = stats->value.edge_stats[edge];
    if (i) *i = es.i;
    if (j) *j = es.j;
    if (t_dof) *t_dof = es.t_dof;
    if (t_loc) *t_loc = es.t_loc;
    if (t_scale) *t_scale = es.t_scale;
    if (mean_distance) *mean_distance = es.mean_distance;
  });
}

/* ---- matching + gate ------------------------------------------------------ */

void lmg_lbp_params_default(lmg_lbp_params* params) {
  if (!params) return;
  const lmg::LbpParams d;
  params->max_iterations = d.max_iterations;
  params->damping = d.damping;
  params->tolerance = d.tolerance;
}

void lmg_ransac_params_default(lmg_ransac_params* params) {
  if (!params) return;
  const lmg::RansacParams d;
  params->iterations = d.iterations;
  params->inlier_threshold_mm = d.inlier_threshold_mm;
  params->min_inliers = d.min_inliers;
  params->seed = d.seed;
}

void lmg_gate_params_default(lmg_gate_params* params) {
  if (!params) return;
  const lmg::GateConfig d;
  params->exempt_a = d.coincidence_exempt_a;
  params->exempt_b = d.coincidence_exempt_b;
  params->coincidence_tolerance_mm = d.coincidence_tolerance_mm;
  params->wrist_region = nullptr;
  params->wrist_region_len = 0;
  params->wrist_distance_limit_mm = d.wrist_distance_limit_mm;
}

lmg_status lmg_match_heatmap(const lmg_stats* stats, const lmg_heatmap* heatmap, double mm_per_px,
                             const lmg_lbp_params* params, double* out_xy_mm,
                             lmg_match_diag* diag) {
  return guarded([&] {
    require(stats && heatmap && out_xy_mm, "stats/heatmap/out must not be null");
    const lmg::TrainStats& ts = stats->value;
    const auto px_candidates = lmg::extract_candidates(heatmap->value, ts.num_landmarks);
    if (px_candidates.empty())
      lmg::fail(lmg::errc::empty_input, "no candidates above threshold");
    std::vector<lmg::Candidate> mm;
    mm.reserve(px_candidates.size());
    for (const auto& c : px_candidates) {
      if (!(mm_per_px > 0.0)) lmg::fail(lmg::errc::invalid_argument, "mm_per_px must be positive");
      mm.push_back({{c.position.x * mm_per_px, c.position.y * mm_per_px}, c.peak_value});
    }
    const lmg::FactorGraph graph = lmg::build_graph(mm, ts);
    const lmg::Labeling labeling = lmg::lbp_map(graph, to_lbp(params));
    for (size_t node = 0; node < ts.num_landmarks; ++node) {
      out_xy_mm[2 * node] = mm[labeling.assignment[node]].position.x;
      out_xy_mm[2 * node + 1] = mm[labeling.assignment[node]].position.y;
    }
    if (diag) {
      diag->energy = lmg::energy(graph, labeling);
      diag->converged = labeling.converged ? 1 : 0;
      diag->iterations = labeling.iterations;
      diag->num_candidates = mm.size();
    }
  });
}

lmg_status lmg_ssm_match(const lmg_stats* stats, const double* labeled_xy_mm, size_t num_landmarks,
                         const lmg_ransac_params* params, double* out_scale, double* out_rotation,
                         double* out_translation_xy, int* inlier_mask, double* residuals,
                         double* transformed_xy) {
  return guarded([&] {
    require(stats && labeled_xy_mm, "stats/labeled must not be null");
    const lmg::Shape labeled =
        shape_from_buffer(labeled_xy_mm, num_landmarks, lmg::Unit::Millimeters);
    const lmg::MatchResult match =
        lmg::ransac_match(stats->value.ssm.mean_shape, labeled, to_ransac(params));
    if (out_scale) *out_scale = match.transform.scale;
    if (out_rotation) *out_rotation = match.transform.rotation;
    if (out_translation_xy) {
      out_translation_xy[0] = match.transform.translation.x;
      out_translation_xy[1] = match.transform.translation.y;
    }
    for (size_t k = 0; k < num_landmarks; ++k) {
      if (inlier_mask) inlier_mask[k] = match.inlier_mask[k] ? 1 : 0;
      if (residuals) residuals[k] = match.residuals[k];
      if (transformed_xy) {
        transformed_xy[2 * k] = match.transformed_mean.points[k].x;
        transformed_xy[2 * k + 1] = match.transformed_mean.points[k].y;
      }
    }
  });
}

lmg_status lmg_ssm_project(const lmg_stats* stats, const double* aligned_xy, size_t num_landmarks,
                           double* out_b) {
  return guarded([&] {
    require(stats && aligned_xy && out_b, "stats/shape/out must not be null");
    const lmg::Shape shape =
        shape_from_buffer(aligned_xy, num_landmarks, lmg::Unit::Millimeters);
    const std::vector<double> b = lmg::project(shape, stats->value.ssm);
    std::memcpy(out_b, b.data(), b.size() * sizeof(double));
  });
}

lmg_status lmg_ssm_reconstruct(const lmg_stats* stats, const double* b, size_t num_modes,
                               double* out_xy) {
  return guarded([&] {
    require(stats && out_xy, "stats/out must not be null");
    require(b != nullptr || num_modes == 0, "b is null with non-zero length");
    const lmg::Shape shape =
        lmg::reconstruct(std::span<const double>(b, num_modes), stats->value.ssm);
    shape_to_buffer(shape, out_xy);
  });
}

lmg_status lmg_gate_check(const lmg_stats* stats, const double* labeled_xy_mm,
                          size_t num_landmarks, double mm_per_px, const lmg_ransac_params* ransac,
                          const lmg_gate_params* gate, lmg_gate_decision* out) {
  return guarded([&] {
    require(stats && labeled_xy_mm && out, "stats/labeled/out must not be null");
    const lmg::Shape labeled =
        shape_from_buffer(labeled_xy_mm, num_landmarks, lmg::Unit::Millimeters);
    lmg::GateConfig config = to_gate(gate);
    if (!(config.coincidence_tolerance_mm > 0.0)) {
      require(mm_per_px > 0.0, "mm_per_px must be positive for the default tolerance");
      config.coincidence_tolerance_mm = mm_per_px;
    }
    std::optional<lmg::MatchResult> match;
    try {
      match = lmg::ransac_match(stats->value.ssm.mean_shape, labeled, to_ransac(ransac));
    } catch (const lmg::error& e) {
      if (e.code() != lmg::errc::match_failed) throw;
    }
    const lmg::GateDecision decision =
        lmg::check_constraints(labeled, match ? &*match : nullptr, config);
    out->accepted = decision.accepted ? 1 : 0;
    out->match_failed = match ? 0 : 1;
    out->num_violations = decision.violations.size();
  });
}

lmg_status lmg_gate_directory(const lmg_stats* stats, const char* heatmap_dir, double mm_per_px,
                              const lmg_lbp_params* lbp, const lmg_ransac_params* ransac,
                              const lmg_gate_params* gate, int extract_window,
                              double extract_min_value, uint64_t seed, int jobs,
                              const char* out_jsonl, int include_timings,
                              lmg_gate_summary* summary) {
  return guarded([&] {
    require(stats && heatmap_dir && out_jsonl, "stats/dir/out must not be null");
    lmg::PipelineConfig config;
    config.mm_per_px = mm_per_px;
    config.gate = to_gate(gate);
    config.lbp = to_lbp(lbp);
    config.ransac = to_ransac(ransac);
    config.extract_window = extract_window;
    config.extract_min_value = extract_min_value;
    config.seed = seed;
    config.jobs = jobs;

    const auto [verdicts, gate_summary] =
        lmg::gate_directory(heatmap_dir, stats->value, config);
    lmg::write_verdicts_jsonl(out_jsonl, verdicts, gate_summary, include_timings != 0);
    if (summary) {
      summary->total = gate_summary.total;
      summary->accepted = gate_summary.accepted;
      summary->unreadable = gate_summary.unreadable;
      summary->acceptance_rate = gate_summary.acceptance_rate;
    }
  });
}

/* ---- evaluation ------------------------------------------------------------ */

lmg_status lmg_evaluate(const lmg_dataset* predictions, const lmg_dataset* ground_truth,
                        const double* radii_mm, size_t num_radii, double* out_pe_mean,
                        double* out_pe_sd, size_t* out_counts) {
  return guarded([&] {
    require(predictions && ground_truth, "datasets must not be null");
    require(radii_mm != nullptr || num_radii == 0, "radii buffer is null");
    const lmg::EvalReport report =
        lmg::evaluate(predictions->value.shapes, ground_truth->value.shapes,
                      std::span<const double>(radii_mm, num_radii));
    if (out_pe_mean) *out_pe_mean = report.pe_mean_mm;
    if (out_pe_sd) *out_pe_sd = report.pe_sd_mm;
    if (out_counts)
      for (size_t k = 0; k < report.outliers.size(); ++k) out_counts[k] = report.outliers[k].second;
  });
}

/* ---- diffusion --------------------------------------------------------------- */

lmg_status lmg_schedule_make(size_t timesteps, double beta_start, double beta_end,
                             lmg_schedule** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    auto handle = std::make_unique<lmg_schedule>();
    handle->value = lmg::make_schedule(timesteps, beta_start, beta_end);
    *out = handle.release();
  });
}

void lmg_schedule_free(lmg_schedule* schedule) { delete schedule; }

size_t lmg_schedule_timesteps(const lmg_schedule* schedule) {
  return schedule ? schedule->value.timesteps() : 0;
}

lmg_status lmg_schedule_beta(const lmg_schedule* schedule, size_t t, double* out) {
  return guarded([&] {
    require(schedule && out, "schedule/out must not be null");
    *out = schedule->value.beta(t);
  });
}

lmg_status lmg_schedule_alpha_bar(const lmg_schedule* schedule, size_t t, double* out) {
  return guarded([&] {
    require(schedule && out, "schedule/out must not be null");
    *out = schedule->value.alpha_bar(t);
  });
}

lmg_status lmg_predictor_gaussian(const double* mu, const double* cov_row_major, size_t dim,
                                  const lmg_schedule* schedule, lmg_predictor** out) {
  return guarded([&] {
    require(mu && cov_row_major && schedule && out, "null argument");
    auto handle = std::make_unique<lmg_predictor>();
    handle->value = std::make_unique<lmg::AnalyticGaussianPredictor>(
        std::vector<double>(mu, mu + dim),
        std::vector<double>(cov_row_major, cov_row_major + dim * dim), schedule->value);
    *out = handle.release();
  });
}

lmg_status lmg_predictor_gaussian_load(const char* path, const lmg_schedule* schedule,
                                       lmg_predictor** out) {
  return guarded([&] {
    require(path && schedule && out, "null argument");
    auto handle = std::make_unique<lmg_predictor>();
    handle->value = std::make_unique<lmg::AnalyticGaussianPredictor>(
        lmg::load_gaussian_oracle(path, schedule->value));
    *out = handle.release();
  });
}

lmg_status lmg_predictor_zero(lmg_predictor** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    auto handle = std::make_unique<lmg_predictor>();
    handle->value = std::make_unique<lmg::ZeroPredictor>();
    *out = handle.release();
  });
}

void lmg_predictor_free(lmg_predictor* predictor) { delete predictor; }

lmg_status lmg_sample(const lmg_predictor* predictor, const lmg_schedule* schedule, size_t dim,
                      size_t count, uint64_t seed, double* out) {
  return guarded([&] {
    require(predictor && schedule && out, "null argument");
    std::mt19937_64 rng(seed);
    for (size_t s = 0; s < count; ++s) {
      const std::vector<double> x = lmg::sample(*predictor->value, dim, schedule->value, rng);
      std::memcpy(out + s * dim, x.data(), dim * sizeof(double));
    }
  });
}

lmg_status lmg_forward_sample(const lmg_schedule* schedule, size_t t, const double* x0,
                              const double* eps, size_t dim, double* out) {
  return guarded([&] {
    require(schedule && x0 && eps && out, "null argument");
    const std::vector<double> x = lmg::forward_sample(
        std::span<const double>(x0, dim), t, std::span<const double>(eps, dim), schedule->value);
    std::memcpy(out, x.data(), dim * sizeof(double));
  });
}

lmg_status lmg_ddpm_loss(const lmg_predictor* predictor, const lmg_schedule* schedule, size_t t,
                         const double* x0, const double* eps, size_t dim, double* out_loss) {
  return guarded([&] {
    require(predictor && schedule && x0 && eps && out_loss, "null argument");
    *out_loss = lmg::ddpm_loss(*predictor->value, std::span<const double>(x0, dim), t,
                               std::span<const double>(eps, dim), schedule->value);
  });
}

/* ---- fixtures ------------------------------------------------------------------ */

lmg_status lmg_fixture_generate(const char* out_dir, size_t count, lmg_corruption corruption,
                                uint64_t seed, int width, int height, double sigma,
                                double displace_mm) {
  return guarded([&] {
    require(out_dir != nullptr, "out_dir must not be null");
    lmg::FixtureParams params;
    params.count = count;
    params.seed = seed;
    params.width = width;
    params.height = height;
    params.sigma = sigma;
    params.displace_mm = displace_mm;
    switch (corruption) {
      case LMG_CORRUPTION_NONE: params.corruption = lmg::Corruption::None; break;
      case LMG_CORRUPTION_DISPLACED: params.corruption = lmg::Corruption::Displaced; break;
      case LMG_CORRUPTION_COINCIDENT: params.corruption = lmg::Corruption::Coincident; break;
      case LMG_CORRUPTION_MISSING: params.corruption = lmg::Corruption::Missing; break;
      default: lmg::fail(lmg::errc::invalid_argument, "unknown corruption mode");
    }
    lmg::generate_fixture(out_dir, params);
  });
}

} /* extern "C" */

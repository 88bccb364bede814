/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 *
 * Public C API of the landmark-gate shared library. All objects are opaque
 * handles released with the matching *_free call; every fallible function
 * returns an lmg_status, with a thread-local message available through
 * lmg_last_error(). Coordinate buffers are row-major (x0, y0, x1, y1, ...).
 */
#ifndef LANDMARK_GATE_H
#define LANDMARK_GATE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LMG_API __declspec(dllexport)
#else
#define LMG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lmg_status {
  LMG_OK = 0,
  LMG_ERR_IO = 1,
  LMG_ERR_PARSE = 2,
  LMG_ERR_INVALID_ARGUMENT = 3,
  LMG_ERR_LANDMARK_COUNT_MISMATCH = 4,
  LMG_ERR_NONFINITE_COORDINATE = 5,
  LMG_ERR_DEGENERATE_INPUT = 6,
  LMG_ERR_UNSUPPORTED_FORMAT = 7,
  LMG_ERR_SCHEMA_VIOLATION = 8,
  LMG_ERR_MATCH_FAILED = 9,
  LMG_ERR_SEARCH_SPACE_TOO_LARGE = 10,
  LMG_ERR_EMPTY_INPUT = 11,
  LMG_ERR_OUT_OF_RANGE = 12,
  LMG_ERR_DIMENSION_MISMATCH = 13,
  LMG_ERR_INTERNAL = 99
} lmg_status;

typedef enum lmg_unit { LMG_UNIT_MILLIMETERS = 0, LMG_UNIT_PIXELS = 1 } lmg_unit;

typedef enum lmg_corruption {
  LMG_CORRUPTION_NONE = 0,
  LMG_CORRUPTION_DISPLACED = 1,
  LMG_CORRUPTION_COINCIDENT = 2,
  LMG_CORRUPTION_MISSING = 3
} lmg_corruption;

LMG_API const char* lmg_version(void);
LMG_API const char* lmg_status_name(lmg_status status);
/* Message of the most recent failure on this thread; empty string if none. */
LMG_API const char* lmg_last_error(void);

/* ---- datasets (annotation files) ------------------------------------- */

typedef struct lmg_dataset lmg_dataset;

LMG_API lmg_status lmg_dataset_load(const char* path, size_t expected_landmarks,
                                    lmg_dataset** out);
LMG_API lmg_status lmg_dataset_save(const lmg_dataset* dataset, const char* path);
LMG_API lmg_status lmg_dataset_create(size_t num_landmarks, lmg_unit unit, lmg_dataset** out);
LMG_API lmg_status lmg_dataset_add_shape(lmg_dataset* dataset, const char* id, const double* xy);
LMG_API void lmg_dataset_free(lmg_dataset* dataset);

LMG_API size_t lmg_dataset_size(const lmg_dataset* dataset);
LMG_API size_t lmg_dataset_landmarks(const lmg_dataset* dataset);
LMG_API lmg_unit lmg_dataset_unit(const lmg_dataset* dataset);
LMG_API const char* lmg_dataset_id(const lmg_dataset* dataset, size_t index);
/* xy must hold 2 * landmarks doubles. */
LMG_API lmg_status lmg_dataset_shape(const lmg_dataset* dataset, size_t index, double* xy);
/* 0/0 when the annotation header carried no size. */
LMG_API void lmg_dataset_image_size(const lmg_dataset* dataset, int* width, int* height);
/* New dataset with every coordinate scaled by mm_per_px and unit set to mm. */
LMG_API lmg_status lmg_dataset_pixels_to_mm(const lmg_dataset* dataset, double mm_per_px,
                                            lmg_dataset** out);

/* ---- heatmaps --------------------------------------------------------- */

typedef struct lmg_heatmap lmg_heatmap;

LMG_API lmg_status lmg_heatmap_render(const double* xy_px, size_t num_landmarks, int width,
                                      int height, double sigma, lmg_heatmap** out,
                                      size_t* clipped_count);
LMG_API lmg_status lmg_heatmap_load_pgm(const char* path, lmg_heatmap** out);
LMG_API lmg_status lmg_heatmap_save_pgm(const lmg_heatmap* heatmap, const char* path);
LMG_API void lmg_heatmap_free(lmg_heatmap* heatmap);

LMG_API int lmg_heatmap_width(const lmg_heatmap* heatmap);
LMG_API int lmg_heatmap_height(const lmg_heatmap* heatmap);
/* values must hold width * height doubles, row-major. */
LMG_API lmg_status lmg_heatmap_values(const lmg_heatmap* heatmap, double* values);

/* Up to `count` local maxima; *out_found reports how many were written.
 * out_xy holds 2 * count doubles, out_value holds count doubles. */
LMG_API lmg_status lmg_heatmap_extract(const lmg_heatmap* heatmap, size_t count, int window,
                                       double min_value, double* out_xy, double* out_value,
                                       size_t* out_found);

/* Forward-noise the heatmap at timestep t through the [-1,1] model range,
 * clip, and return a valid heatmap. */
typedef struct lmg_schedule lmg_schedule;
LMG_API lmg_status lmg_heatmap_diffuse(const lmg_heatmap* heatmap, const lmg_schedule* schedule,
                                       size_t t, uint64_t seed, lmg_heatmap** out);

/* ---- training statistics ---------------------------------------------- */

typedef struct lmg_stats lmg_stats;

/* Fits landmark means, per-edge t-distributions and the embedded SSM after
 * wrist-normalizing every shape. topology_path NULL means the Euclidean MST
 * of the landmark means. */
LMG_API lmg_status lmg_stats_fit(const lmg_dataset* annotations, size_t wrist_a, size_t wrist_b,
                                 double wrist_width_mm, const char* topology_path,
                                 double unary_sigma_mm, double variance_fraction,
                                 lmg_stats** out);
LMG_API lmg_status lmg_stats_load(const char* path, lmg_stats** out);
LMG_API lmg_status lmg_stats_save(const lmg_stats* stats, const char* path);
LMG_API void lmg_stats_free(lmg_stats* stats);

LMG_API size_t lmg_stats_landmarks(const lmg_stats* stats);
LMG_API size_t lmg_stats_num_edges(const lmg_stats* stats);
LMG_API double lmg_stats_unary_sigma(const lmg_stats* stats);
LMG_API size_t lmg_stats_ssm_modes(const lmg_stats* stats);
LMG_API lmg_status lmg_stats_mean(const lmg_stats* stats, size_t landmark, double* x, double* y);
LMG_API lmg_status lmg_stats_edge(const lmg_stats* stats, size_t edge, size_t* i, size_t* j,
                                  double* t_dof, double* t_loc, double* t_scale,
                                  double* mean_distance);

/* ---- MRF matching ------------------------------------------------------ */

typedef struct lmg_lbp_params {
  size_t max_iterations;
  double damping;
  double tolerance;
} lmg_lbp_params;

typedef struct lmg_match_diag {
  double energy;
  int converged;
  size_t iterations;
  size_t num_candidates;
} lmg_match_diag;

LMG_API void lmg_lbp_params_default(lmg_lbp_params* params);

/* Extract candidates, build the factor graph, run LBP; writes the labeled
 * shape in millimeters into out_xy_mm (2 * landmarks doubles). */
LMG_API lmg_status lmg_match_heatmap(const lmg_stats* stats, const lmg_heatmap* heatmap,
                                     double mm_per_px, const lmg_lbp_params* params,
                                     double* out_xy_mm, lmg_match_diag* diag);

/* ---- SSM + gate --------------------------------------------------------- */

typedef struct lmg_ransac_params {
  size_t iterations;
  double inlier_threshold_mm;
  size_t min_inliers; /* 0 = ceil(L/2) */
  uint64_t seed;
} lmg_ransac_params;

typedef struct lmg_gate_params {
  size_t exempt_a;
  size_t exempt_b;
  double coincidence_tolerance_mm; /* <= 0: one heatmap pixel in mm */
  const size_t* wrist_region;
  size_t wrist_region_len;
  double wrist_distance_limit_mm;
} lmg_gate_params;

typedef struct lmg_gate_decision {
  int accepted;
  int match_failed;
  size_t num_violations;
} lmg_gate_decision;

LMG_API void lmg_ransac_params_default(lmg_ransac_params* params);
LMG_API void lmg_gate_params_default(lmg_gate_params* params);

/* RANSAC-match the stats' SSM mean shape to a labeled configuration; optional
 * outputs may be NULL. inlier_mask holds L ints, residuals L doubles,
 * transformed_xy 2L doubles. Fails with LMG_ERR_MATCH_FAILED when consensus
 * is below min_inliers. */
LMG_API lmg_status lmg_ssm_match(const lmg_stats* stats, const double* labeled_xy_mm,
                                 size_t num_landmarks, const lmg_ransac_params* params,
                                 double* out_scale, double* out_rotation,
                                 double* out_translation_xy, int* inlier_mask, double* residuals,
                                 double* transformed_xy);

/* Shape-space coordinates of a shape aligned to the SSM frame: b = P^T (x - mean).
 * out_b must hold lmg_stats_ssm_modes(stats) doubles. */
LMG_API lmg_status lmg_ssm_project(const lmg_stats* stats, const double* aligned_xy,
                                   size_t num_landmarks, double* out_b);
/* x = mean + P b; out_xy must hold 2 * landmarks doubles. */
LMG_API lmg_status lmg_ssm_reconstruct(const lmg_stats* stats, const double* b, size_t num_modes,
                                       double* out_xy);

/* Apply both acceptance constraints to a labeled + matched configuration. */
LMG_API lmg_status lmg_gate_check(const lmg_stats* stats, const double* labeled_xy_mm,
                                  size_t num_landmarks, double mm_per_px,
                                  const lmg_ransac_params* ransac, const lmg_gate_params* gate,
                                  lmg_gate_decision* out);

typedef struct lmg_gate_summary {
  size_t total;
  size_t accepted;
  size_t unreadable;
  double acceptance_rate;
} lmg_gate_summary;

/* Gate every *.pgm under heatmap_dir and stream JSON-lines verdicts plus a
 * summary record to out_jsonl. Unreadable heatmaps are reported per image and
 * counted in summary->unreadable. */
LMG_API lmg_status lmg_gate_directory(const lmg_stats* stats, const char* heatmap_dir,
                                      double mm_per_px, const lmg_lbp_params* lbp,
                                      const lmg_ransac_params* ransac,
                                      const lmg_gate_params* gate, int extract_window,
                                      double extract_min_value, uint64_t seed, int jobs,
                                      const char* out_jsonl, int include_timings,
                                      lmg_gate_summary* summary);

/* ---- evaluation --------------------------------------------------------- */

/* Pooled point-to-point error and per-radius outlier counts (distance > r).
 * out_counts holds num_radii values. */
LMG_API lmg_status lmg_evaluate(const lmg_dataset* predictions, const lmg_dataset* ground_truth,
                                const double* radii_mm, size_t num_radii, double* out_pe_mean,
                                double* out_pe_sd, size_t* out_counts);

/* ---- diffusion ----------------------------------------------------------- */

LMG_API lmg_status lmg_schedule_make(size_t timesteps, double beta_start, double beta_end,
                                     lmg_schedule** out);
LMG_API void lmg_schedule_free(lmg_schedule* schedule);
LMG_API size_t lmg_schedule_timesteps(const lmg_schedule* schedule);
LMG_API lmg_status lmg_schedule_beta(const lmg_schedule* schedule, size_t t, double* out);
LMG_API lmg_status lmg_schedule_alpha_bar(const lmg_schedule* schedule, size_t t, double* out);

typedef struct lmg_predictor lmg_predictor;

LMG_API lmg_status lmg_predictor_gaussian(const double* mu, const double* cov_row_major,
                                          size_t dim, const lmg_schedule* schedule,
                                          lmg_predictor** out);
/* Text format: "dim <n>", "mu <n values>", "cov" then n rows of n values. */
LMG_API lmg_status lmg_predictor_gaussian_load(const char* path, const lmg_schedule* schedule,
                                               lmg_predictor** out);
LMG_API lmg_status lmg_predictor_zero(lmg_predictor** out);
LMG_API void lmg_predictor_free(lmg_predictor* predictor);

/* count full reverse chains; out holds count * dim doubles, row per sample. */
LMG_API lmg_status lmg_sample(const lmg_predictor* predictor, const lmg_schedule* schedule,
                              size_t dim, size_t count, uint64_t seed, double* out);

LMG_API lmg_status lmg_forward_sample(const lmg_schedule* schedule, size_t t, const double* x0,
                                      const double* eps, size_t dim, double* out);

LMG_API lmg_status lmg_ddpm_loss(const lmg_predictor* predictor, const lmg_schedule* schedule,
                                 size_t t, const double* x0, const double* eps, size_t dim,
                                 double* out_loss);

/* ---- synthetic fixtures --------------------------------------------------- */

LMG_API lmg_status lmg_fixture_generate(const char* out_dir, size_t count,
                                        lmg_corruption corruption, uint64_t seed, int width,
                                        int height, double sigma, double displace_mm);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LANDMARK_GATE_H */

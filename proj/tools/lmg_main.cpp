/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 *
 * lmg: command line front end over the landmark_gate C API.
 */
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "landmark_gate.h"

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitPartial = 2;

struct FatalError {
  std::string message;
};

void check(lmg_status status, const std::string& context) {
  if (status != LMG_OK)
    throw FatalError{context + ": " + lmg_status_name(status) + ": " + lmg_last_error()};
}

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<size_t> parse_index_list(const std::string& text, const char* what) {
  std::vector<size_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    size_t value = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
      throw FatalError{std::string(what) + ": bad index '" + tok + "'"};
    out.push_back(value);
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw FatalError{std::string(what) + ": bad value '" + tok + "'"};
    }
  }
  return out;
}

/* Config files mirror the stats text format: "landmark-gate-config v1" header
 * then "key value" lines. Values fill in any option the user did not pass. */
std::map<std::string, std::string> load_config(const std::string& path) {
  std::map<std::string, std::string> out;
  if (path.empty()) return out;
  std::ifstream in(path);
  if (!in) throw FatalError{"cannot open config file '" + path + "'"};
  std::string line;
  if (!std::getline(in, line) || line.rfind("landmark-gate-config", 0) != 0)
    throw FatalError{"'" + path + "' is not a landmark-gate-config file"};
  while (std::getline(in, line)) {
    std::istringstream iss(line);
    std::string key, value;
    if (!(iss >> key)) continue;
    if (key[0] == '#') continue;
    std::getline(iss, value);
    const auto start = value.find_first_not_of(" \t");
    out[key] = start == std::string::npos ? "" : value.substr(start);
  }
  return out;
}

struct ConfigView {
  const std::map<std::string, std::string>* kv = nullptr;

  template <typename T>
  void fill(const CLI::Option* opt, const char* key, T& target) const {
    if (!kv || (opt && opt->count() > 0)) return;
    auto it = kv->find(key);
    if (it == kv->end()) return;
    std::istringstream iss(it->second);
    if (!(iss >> target)) throw FatalError{std::string("config: bad value for ") + key};
  }

  void fill_string(const CLI::Option* opt, const char* key, std::string& target) const {
    if (!kv || (opt && opt->count() > 0)) return;
    auto it = kv->find(key);
    if (it != kv->end()) target = it->second;
  }
};

template <typename T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, decltype([](T* p) { Free(p); })>;

using DatasetHandle = Handle<lmg_dataset, lmg_dataset_free>;
using HeatmapHandle = Handle<lmg_heatmap, lmg_heatmap_free>;
using StatsHandle = Handle<lmg_stats, lmg_stats_free>;
using ScheduleHandle = Handle<lmg_schedule, lmg_schedule_free>;
using PredictorHandle = Handle<lmg_predictor, lmg_predictor_free>;

DatasetHandle load_dataset(const std::string& path, size_t expected_landmarks) {
  lmg_dataset* raw = nullptr;
  check(lmg_dataset_load(path.c_str(), expected_landmarks, &raw), "loading '" + path + "'");
  return DatasetHandle(raw);
}

StatsHandle load_stats(const std::string& path) {
  lmg_stats* raw = nullptr;
  check(lmg_stats_load(path.c_str(), &raw), "loading stats '" + path + "'");
  return StatsHandle(raw);
}

HeatmapHandle load_heatmap(const std::string& path) {
  lmg_heatmap* raw = nullptr;
  check(lmg_heatmap_load_pgm(path.c_str(), &raw), "loading heatmap '" + path + "'");
  return HeatmapHandle(raw);
}

ScheduleHandle make_schedule(size_t timesteps, double beta_start, double beta_end) {
  lmg_schedule* raw = nullptr;
  check(lmg_schedule_make(timesteps, beta_start, beta_end, &raw), "building schedule");
  return ScheduleHandle(raw);
}

std::ostream& open_output(std::ofstream& file, const std::string& path, const char* what) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw FatalError{std::string("cannot write ") + what + " '" + path + "'"};
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"landmark-gate: heatmap landmark matching, plausibility gating and DDPM math"};
  app.require_subcommand(1);
  app.fallthrough();  // accept --seed/--jobs/--config after the subcommand too

  std::string config_path;
  uint64_t seed = 0;
  int jobs = 1;
  app.add_option("--config", config_path, "config file (landmark-gate-config v1 format)");
  auto* seed_opt = app.add_option("--seed", seed, "seed for every stochastic step");
  auto* jobs_opt = app.add_option("--jobs", jobs, "worker threads for directory gating");

  std::map<std::string, std::string> config_kv;
  ConfigView cfg{&config_kv};
  int exit_code = kExitOk;

  // callbacks run after parsing, so option values (including --config) are set
  const auto load_cfg = [&] {
    config_kv = load_config(config_path);
    cfg.fill(seed_opt, "seed", seed);
    cfg.fill(jobs_opt, "jobs", jobs);
  };

  // ---- fit ----------------------------------------------------------------
  auto* fit = app.add_subcommand("fit", "fit training statistics from annotations");
  struct {
    std::string annotations, topology = "auto", out;
    size_t wrist_a = 0, wrist_b = 1;
    double wrist_width = 50.0, unary_sigma = 25.0, variance_fraction = 0.95;
  } fit_args;
  fit->add_option("--annotations", fit_args.annotations, "annotation file")->required();
  fit->add_option("--topology", fit_args.topology, "edge-list file or 'auto' (Euclidean MST)");
  fit->add_option("--out", fit_args.out, "output stats file")->required();
  fit->add_option("--wrist-a", fit_args.wrist_a, "first wrist landmark index");
  fit->add_option("--wrist-b", fit_args.wrist_b, "second wrist landmark index");
  fit->add_option("--wrist-width", fit_args.wrist_width, "wrist width in mm");
  fit->add_option("--unary-sigma", fit_args.unary_sigma, "unary Gaussian sigma in mm");
  fit->add_option("--variance-fraction", fit_args.variance_fraction, "SSM retained variance");
  fit->callback([&] {
    load_cfg();
    auto dataset = load_dataset(fit_args.annotations, 0);
    lmg_stats* raw = nullptr;
    const char* topology =
        fit_args.topology == "auto" ? nullptr : fit_args.topology.c_str();
    check(lmg_stats_fit(dataset.get(), fit_args.wrist_a, fit_args.wrist_b, fit_args.wrist_width,
                        topology, fit_args.unary_sigma, fit_args.variance_fraction, &raw),
          "fitting stats");
    StatsHandle stats(raw);
    check(lmg_stats_save(stats.get(), fit_args.out.c_str()), "saving stats");
    std::cout << "fitted " << lmg_stats_landmarks(stats.get()) << " landmarks, "
              << lmg_stats_num_edges(stats.get()) << " edges, " << lmg_stats_ssm_modes(stats.get())
              << " ssm modes -> " << fit_args.out << "\n";
  });

  // ---- render ---------------------------------------------------------------
  auto* render = app.add_subcommand("render", "render Gaussian heatmaps from annotations");
  struct {
    std::string annotations, out_dir;
    int width = 0, height = 0;
    double sigma = 1.0;
  } render_args;
  render->add_option("--annotations", render_args.annotations, "annotation file (pixel units)")
      ->required();
  render->add_option("--out-dir", render_args.out_dir, "output directory")->required();
  render->add_option("--width", render_args.width, "grid width (default: annotation header)");
  render->add_option("--height", render_args.height, "grid height (default: annotation header)");
  render->add_option("--sigma", render_args.sigma, "peak standard deviation in px");
  render->callback([&] {
    load_cfg();
    auto dataset = load_dataset(render_args.annotations, 0);
    if (lmg_dataset_unit(dataset.get()) != LMG_UNIT_PIXELS)
      throw FatalError{"render needs pixel-unit annotations"};
    int width = render_args.width, height = render_args.height;
    if (width <= 0 || height <= 0) {
      lmg_dataset_image_size(dataset.get(), &width, &height);
      if (width <= 0 || height <= 0)
        throw FatalError{"annotation header has no size=; pass --width/--height"};
    }
    fs::create_directories(render_args.out_dir);
    const size_t landmarks = lmg_dataset_landmarks(dataset.get());
    std::vector<double> xy(2 * landmarks);
    size_t total_clipped = 0;
    for (size_t i = 0; i < lmg_dataset_size(dataset.get()); ++i) {
      check(lmg_dataset_shape(dataset.get(), i, xy.data()), "reading shape");
      lmg_heatmap* raw = nullptr;
      size_t clipped = 0;
      check(lmg_heatmap_render(xy.data(), landmarks, width, height, render_args.sigma, &raw,
                               &clipped),
            "rendering");
      HeatmapHandle heatmap(raw);
      total_clipped += clipped;
      const fs::path out =
          fs::path(render_args.out_dir) / (std::string(lmg_dataset_id(dataset.get(), i)) + ".pgm");
      check(lmg_heatmap_save_pgm(heatmap.get(), out.string().c_str()), "saving heatmap");
    }
    std::cout << "rendered " << lmg_dataset_size(dataset.get()) << " heatmaps ("
              << total_clipped << " clipped landmarks) -> " << render_args.out_dir << "\n";
  });

  // ---- match ------------------------------------------------------------------
  auto* match = app.add_subcommand("match", "label one heatmap with the MRF");
  struct {
    std::string stats, heatmap, out, diag;
    double scale = 0.0;
    lmg_lbp_params lbp;
  } match_args;
  lmg_lbp_params_default(&match_args.lbp);
  auto* match_stats = match->add_option("--stats", match_args.stats, "stats file");
  match->add_option("--heatmap", match_args.heatmap, "16-bit PGM heatmap")->required();
  auto* match_scale = match->add_option("--scale", match_args.scale, "mm per pixel");
  match->add_option("--out", match_args.out, "labeled shape output ('-' = stdout)");
  match->add_option("--diag", match_args.diag, "JSON-lines diagnostics output");
  auto* match_iter = match->add_option("--max-iter", match_args.lbp.max_iterations, "LBP cap");
  auto* match_damp = match->add_option("--damping", match_args.lbp.damping, "LBP damping");
  auto* match_tol = match->add_option("--tol", match_args.lbp.tolerance, "LBP tolerance");
  match->callback([&] {
    load_cfg();
    cfg.fill_string(match_stats, "stats", match_args.stats);
    if (match_args.stats.empty()) throw FatalError{"--stats is required"};
    cfg.fill(match_scale, "mm_per_px", match_args.scale);
    cfg.fill(match_iter, "lbp_max_iterations", match_args.lbp.max_iterations);
    cfg.fill(match_damp, "lbp_damping", match_args.lbp.damping);
    cfg.fill(match_tol, "lbp_tolerance", match_args.lbp.tolerance);
    if (!(match_args.scale > 0)) throw FatalError{"--scale (mm per pixel) is required"};

    auto stats = load_stats(match_args.stats);
    auto heatmap = load_heatmap(match_args.heatmap);
    const size_t landmarks = lmg_stats_landmarks(stats.get());
    std::vector<double> xy(2 * landmarks);
    lmg_match_diag diag{};
    check(lmg_match_heatmap(stats.get(), heatmap.get(), match_args.scale, &match_args.lbp,
                            xy.data(), &diag),
          "matching");

    const std::string id = fs::path(match_args.heatmap).stem().string();
    lmg_dataset* raw = nullptr;
    check(lmg_dataset_create(landmarks, LMG_UNIT_MILLIMETERS, &raw), "building output");
    DatasetHandle labeled(raw);
    check(lmg_dataset_add_shape(labeled.get(), id.c_str(), xy.data()), "building output");
    if (match_args.out.empty() || match_args.out == "-") {
      std::cout << "L=" << landmarks << " unit=mm\n" << id;
      for (double v : xy) std::cout << ' ' << fmt_double(v);
      std::cout << "\n";
    } else {
      check(lmg_dataset_save(labeled.get(), match_args.out.c_str()), "saving labeled shape");
    }

    ordered_json record;
    record["id"] = id;
    record["energy"] = diag.energy;
    record["converged"] = diag.converged != 0;
    record["iterations"] = diag.iterations;
    record["candidates"] = diag.num_candidates;
    if (!match_args.diag.empty()) {
      std::ofstream out(match_args.diag, std::ios::binary);
      if (!out) throw FatalError{"cannot write diagnostics '" + match_args.diag + "'"};
      out << record.dump() << "\n";
    } else {
      std::cerr << record.dump() << "\n";
    }
  });

  // ---- gate ----------------------------------------------------------------------
  auto* gate = app.add_subcommand("gate", "gate a directory of generated heatmaps");
  struct {
    std::string stats, heatmaps, out, wrist_region, exempt = "2,3";
    double scale = 0.0, limit = 16.0, coincidence = 0.0;
    lmg_lbp_params lbp;
    lmg_ransac_params ransac;
    int window = 3;
    double min_value = 0.05;
    bool timings = false;
  } gate_args;
  lmg_lbp_params_default(&gate_args.lbp);
  lmg_ransac_params_default(&gate_args.ransac);
  auto* gate_stats = gate->add_option("--stats", gate_args.stats, "stats file");
  auto* gate_dir = gate->add_option("--heatmaps", gate_args.heatmaps, "directory of PGM heatmaps");
  auto* gate_scale = gate->add_option("--scale", gate_args.scale, "mm per pixel");
  auto* gate_region =
      gate->add_option("--wrist-region", gate_args.wrist_region, "wrist landmark indices i,j,...");
  gate->add_option("--out", gate_args.out, "JSON-lines report")->required();
  auto* gate_limit =
      gate->add_option("--limit-mm", gate_args.limit, "constraint (ii) distance limit");
  auto* gate_exempt = gate->add_option("--exempt", gate_args.exempt, "coincidence-exempt pair i,j");
  auto* gate_coin = gate->add_option("--coincidence-mm", gate_args.coincidence,
                                     "constraint (i) tolerance (default: one pixel)");
  auto* gate_window = gate->add_option("--window", gate_args.window, "maxima window radius px");
  auto* gate_minv = gate->add_option("--min-value", gate_args.min_value, "maxima floor");
  auto* gate_riter =
      gate->add_option("--ransac-iters", gate_args.ransac.iterations, "RANSAC iterations");
  auto* gate_rthresh = gate->add_option("--ransac-thresh-mm", gate_args.ransac.inlier_threshold_mm,
                                        "RANSAC inlier threshold");
  auto* gate_rmin =
      gate->add_option("--min-inliers", gate_args.ransac.min_inliers, "RANSAC minimum consensus");
  auto* gate_iter = gate->add_option("--max-iter", gate_args.lbp.max_iterations, "LBP cap");
  auto* gate_damp = gate->add_option("--damping", gate_args.lbp.damping, "LBP damping");
  auto* gate_tol = gate->add_option("--tol", gate_args.lbp.tolerance, "LBP tolerance");
  gate->add_flag("--timings", gate_args.timings, "include per-stage milliseconds in the report");
  gate->callback([&] {
    load_cfg();
    cfg.fill_string(gate_stats, "stats", gate_args.stats);
    cfg.fill_string(gate_dir, "heatmap_dir", gate_args.heatmaps);
    if (gate_args.stats.empty()) throw FatalError{"--stats is required"};
    if (gate_args.heatmaps.empty()) throw FatalError{"--heatmaps is required"};
    cfg.fill(gate_scale, "mm_per_px", gate_args.scale);
    cfg.fill_string(gate_region, "wrist_region", gate_args.wrist_region);
    cfg.fill(gate_limit, "wrist_distance_limit", gate_args.limit);
    cfg.fill_string(gate_exempt, "coincidence_exempt", gate_args.exempt);
    cfg.fill(gate_coin, "coincidence_tolerance", gate_args.coincidence);
    cfg.fill(gate_window, "extract_window", gate_args.window);
    cfg.fill(gate_minv, "extract_min_value", gate_args.min_value);
    cfg.fill(gate_riter, "ransac_iterations", gate_args.ransac.iterations);
    cfg.fill(gate_rthresh, "ransac_threshold_mm", gate_args.ransac.inlier_threshold_mm);
    cfg.fill(gate_rmin, "ransac_min_inliers", gate_args.ransac.min_inliers);
    cfg.fill(gate_iter, "lbp_max_iterations", gate_args.lbp.max_iterations);
    cfg.fill(gate_damp, "lbp_damping", gate_args.lbp.damping);
    cfg.fill(gate_tol, "lbp_tolerance", gate_args.lbp.tolerance);
    if (!(gate_args.scale > 0)) throw FatalError{"--scale (mm per pixel) is required"};
    if (gate_args.wrist_region.empty())
      throw FatalError{"--wrist-region is required (no default exists)"};

    const auto region = parse_index_list(gate_args.wrist_region, "--wrist-region");
    const auto exempt = parse_index_list(gate_args.exempt, "--exempt");
    if (exempt.size() != 2) throw FatalError{"--exempt needs exactly two indices"};

    lmg_gate_params gate_params;
    lmg_gate_params_default(&gate_params);
    gate_params.exempt_a = exempt[0];
    gate_params.exempt_b = exempt[1];
    gate_params.coincidence_tolerance_mm = gate_args.coincidence;
    gate_params.wrist_region = region.data();
    gate_params.wrist_region_len = region.size();
    gate_params.wrist_distance_limit_mm = gate_args.limit;

    auto stats = load_stats(gate_args.stats);
    lmg_gate_summary summary{};
    check(lmg_gate_directory(stats.get(), gate_args.heatmaps.c_str(), gate_args.scale,
                             &gate_args.lbp, &gate_args.ransac, &gate_params, gate_args.window,
                             gate_args.min_value, seed, jobs, gate_args.out.c_str(),
                             gate_args.timings ? 1 : 0, &summary),
          "gating");
    std::cout << "gated " << summary.total << " images: accepted " << summary.accepted << " ("
              << fmt_double(summary.acceptance_rate) << "), unreadable " << summary.unreadable
              << " -> " << gate_args.out << "\n";
    if (summary.unreadable > 0) exit_code = kExitPartial;
  });

  // ---- eval -----------------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "localization metrics: PE and outlier counts");
  struct {
    std::string pred, gt, radii = "2,4,10,20", out;
    double pred_scale = 0.0, gt_scale = 0.0;
  } eval_args;
  eval->add_option("--pred", eval_args.pred, "predicted annotations")->required();
  eval->add_option("--gt", eval_args.gt, "ground-truth annotations")->required();
  eval->add_option("--radii", eval_args.radii, "outlier radii in mm");
  eval->add_option("--out", eval_args.out, "report output ('-' = stdout)");
  eval->add_option("--mm-per-px-pred", eval_args.pred_scale, "convert px predictions to mm");
  eval->add_option("--mm-per-px-gt", eval_args.gt_scale, "convert px ground truth to mm");
  eval->callback([&] {
    load_cfg();
    auto pred = load_dataset(eval_args.pred, 0);
    auto gt = load_dataset(eval_args.gt, 0);
    const auto convert = [](DatasetHandle& ds, double scale) {
      if (scale > 0) {
        lmg_dataset* raw = nullptr;
        check(lmg_dataset_pixels_to_mm(ds.get(), scale, &raw), "converting to mm");
        ds.reset(raw);
      }
    };
    convert(pred, eval_args.pred_scale);
    convert(gt, eval_args.gt_scale);
    if (lmg_dataset_unit(pred.get()) != lmg_dataset_unit(gt.get()))
      throw FatalError{"prediction and ground-truth units differ; use --mm-per-px-*"};

    const auto radii = parse_double_list(eval_args.radii, "--radii");
    double pe_mean = 0, pe_sd = 0;
    std::vector<size_t> counts(radii.size(), 0);
    check(lmg_evaluate(pred.get(), gt.get(), radii.data(), radii.size(), &pe_mean, &pe_sd,
                       counts.data()),
          "evaluating");

    std::ofstream file;
    std::ostream& out = open_output(file, eval_args.out, "report");
    out << "landmark-gate-eval v1\n";
    out << "images " << lmg_dataset_size(pred.get()) << "\n";
    out << "landmarks " << lmg_dataset_landmarks(pred.get()) << "\n";
    out << "pe_mean " << fmt_double(pe_mean) << "\n";
    out << "pe_sd " << fmt_double(pe_sd) << "\n";
    for (size_t k = 0; k < radii.size(); ++k)
      out << "outliers " << fmt_double(radii[k]) << " " << counts[k] << "\n";
  });

  // ---- sample ---------------------------------------------------------------------
  auto* sample = app.add_subcommand("sample", "draw reverse-diffusion samples");
  struct {
    size_t timesteps = 800;
    double beta_start = 1e-4, beta_end = 0.02;
    size_t dim = 0, count = 1;
    std::string oracle, out;
  } sample_args;
  sample->add_option("--timesteps", sample_args.timesteps, "diffusion steps");
  sample->add_option("--beta-start", sample_args.beta_start, "first beta");
  sample->add_option("--beta-end", sample_args.beta_end, "last beta");
  sample->add_option("--dim", sample_args.dim, "sample dimension")->required();
  sample->add_option("--oracle-gaussian", sample_args.oracle, "mu/cov text file")->required();
  sample->add_option("--count", sample_args.count, "number of samples");
  sample->add_option("--out", sample_args.out, "output ('-' = stdout)");
  sample->callback([&] {
    load_cfg();
    auto schedule =
        make_schedule(sample_args.timesteps, sample_args.beta_start, sample_args.beta_end);
    lmg_predictor* raw = nullptr;
    check(lmg_predictor_gaussian_load(sample_args.oracle.c_str(), schedule.get(), &raw),
          "loading oracle");
    PredictorHandle predictor(raw);
    std::vector<double> samples(sample_args.count * sample_args.dim);
    check(lmg_sample(predictor.get(), schedule.get(), sample_args.dim, sample_args.count, seed,
                     samples.data()),
          "sampling");
    std::ofstream file;
    std::ostream& out = open_output(file, sample_args.out, "samples");
    for (size_t s = 0; s < sample_args.count; ++s) {
      for (size_t k = 0; k < sample_args.dim; ++k)
        out << (k ? " " : "") << fmt_double(samples[s * sample_args.dim + k]);
      out << "\n";
    }
  });

  // ---- diffuse ----------------------------------------------------------------------
  auto* diffuse = app.add_subcommand("diffuse", "forward-noise a heatmap at timestep t");
  struct {
    size_t t = 0, timesteps = 800;
    double beta_start = 1e-4, beta_end = 0.02;
    std::string in, out;
  } diffuse_args;
  diffuse->add_option("--t", diffuse_args.t, "timestep")->required();
  diffuse->add_option("--in", diffuse_args.in, "input PGM")->required();
  diffuse->add_option("--out", diffuse_args.out, "output PGM")->required();
  diffuse->add_option("--timesteps", diffuse_args.timesteps, "diffusion steps");
  diffuse->add_option("--beta-start", diffuse_args.beta_start, "first beta");
  diffuse->add_option("--beta-end", diffuse_args.beta_end, "last beta");
  diffuse->callback([&] {
    load_cfg();
    auto schedule =
        make_schedule(diffuse_args.timesteps, diffuse_args.beta_start, diffuse_args.beta_end);
    auto heatmap = load_heatmap(diffuse_args.in);
    lmg_heatmap* raw = nullptr;
    check(lmg_heatmap_diffuse(heatmap.get(), schedule.get(), diffuse_args.t, seed, &raw),
          "diffusing");
    HeatmapHandle noisy(raw);
    check(lmg_heatmap_save_pgm(noisy.get(), diffuse_args.out.c_str()), "saving heatmap");
  });

  // ---- fixture -----------------------------------------------------------------------
  auto* fixture = app.add_subcommand("fixture", "generate a synthetic annotated heatmap set");
  struct {
    size_t n = 10;
    std::string corruption = "none", out_dir;
    int width = 256, height = 256;
    double sigma = 1.0, displace_mm = 30.0;
  } fixture_args;
  fixture->add_option("--n", fixture_args.n, "number of images");
  fixture->add_option("--corruption", fixture_args.corruption,
                      "none|displaced|coincident|missing");
  fixture->add_option("--out-dir", fixture_args.out_dir, "output directory")->required();
  fixture->add_option("--width", fixture_args.width, "grid width");
  fixture->add_option("--height", fixture_args.height, "grid height");
  fixture->add_option("--sigma", fixture_args.sigma, "heatmap sigma px");
  fixture->add_option("--displace-mm", fixture_args.displace_mm, "displacement magnitude");
  fixture->callback([&] {
    load_cfg();
    lmg_corruption corruption = LMG_CORRUPTION_NONE;
    if (fixture_args.corruption == "none") corruption = LMG_CORRUPTION_NONE;
    else if (fixture_args.corruption == "displaced") corruption = LMG_CORRUPTION_DISPLACED;
    else if (fixture_args.corruption == "coincident") corruption = LMG_CORRUPTION_COINCIDENT;
    else if (fixture_args.corruption == "missing") corruption = LMG_CORRUPTION_MISSING;
    else throw FatalError{"unknown corruption '" + fixture_args.corruption + "'"};
    check(lmg_fixture_generate(fixture_args.out_dir.c_str(), fixture_args.n, corruption, seed,
                               fixture_args.width, fixture_args.height, fixture_args.sigma,
                               fixture_args.displace_mm),
          "generating fixture");
    std::cout << "wrote " << fixture_args.n << " " << fixture_args.corruption
              << " images -> " << fixture_args.out_dir << "\n";
  });

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      return app.exit(e) == 0 ? kExitOk : kExitFatal;
    }
  } catch (const FatalError& e) {
    std::cerr << "error: " << e.message << "\n";
    return kExitFatal;
  }
  return exit_code;
}

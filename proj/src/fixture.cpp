/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "lmg/fixture.hpp"

#include <cmath>
#include <fstream>
#include <algorithm>
#include <numbers>
#include <random>

#include "lmg/heatmap.hpp"
#include "lmg/shapestats.hpp"

namespace lmg {

const char* corruption_name(Corruption c) {
  switch (c) {
    case Corruption::None: return "none";
    case Corruption::Displaced: return "displaced";
    case Corruption::Coincident: return "coincident";
    case Corruption::Missing: return "missing";
  }
  return "unknown";
}

Corruption parse_corruption(const std::string& name) {
  if (name == "none") return Corruption::None;
  if (name == "displaced") return Corruption::Displaced;
  if (name == "coincident") return Corruption::Coincident;
  if (name == "missing") return Corruption::Missing;
  fail(errc::invalid_argument, "unknown corruption mode '" + name + "'");
}

namespace {

// Stylized left hand in a 256x256 frame: wrist pair at the bottom, the close
// palm pair (2,3), palm center, five fingertips and two knuckles.
constexpr Point2 kBase[12] = {
    {100.0, 220.0},  // 0 wrist left
    {156.0, 220.0},  // 1 wrist right
    {112.0, 188.0},  // 2 palm a (exempt pair)
    {116.0, 188.0},  // 3 palm b, 4 px from palm a
    {128.0, 168.0},  // 4 palm center
    {56.0, 128.0},   // 5 thumb tip
    {88.0, 64.0},    // 6 index tip
    {120.0, 40.0},   // 7 middle tip
    {150.0, 52.0},   // 8 ring tip
    {178.0, 76.0},   // 9 pinky tip
    {104.0, 120.0},  // 10 index knuckle
    {152.0, 122.0},  // 11 ring knuckle
};

// Hand-mesh topology for the family: wrist bar, palm triangle, knuckle bar,
// finger chains and bracing edges, so every node is held by at least two
// distance constraints. A lone MST edge per node lets the matcher park a node
// on whichever blob happens to reproduce that one distance.
constexpr std::pair<std::size_t, std::size_t> kTopology[21] = {
    {0, 1}, {0, 2}, {1, 3},  {2, 3},  {2, 4},  {3, 4},  {0, 5},
    {2, 5}, {5, 10}, {4, 10}, {4, 11}, {10, 11}, {6, 10}, {7, 10},
    {7, 11}, {8, 11}, {9, 11}, {5, 6}, {6, 7},  {7, 8},  {8, 9},
};

// Smooth variation fields, zero at the wrist row so the wrist width is
// constant across the family.
double height_weight(const Point2& p) { return (220.0 - p.y) / 180.0; }

std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ull * (index + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

FixtureLayout fixture_layout() { return FixtureLayout{}; }

Shape fixture_shape(std::uint64_t seed, std::size_t index) {
  std::mt19937_64 rng(mix(seed, index));
  std::normal_distribution<double> normal(0.0, 1.0);
  // magnitudes sized so edge distances stay within a few mm of the family
  // means; the binary distance cost decays per millimeter
  const double spread = 3.0 * normal(rng);
  const double length = 3.0 * normal(rng);
  const double sway = 2.0 * normal(rng);

  Shape shape;
  shape.unit = Unit::Pixels;
  shape.points.reserve(12);
  for (const Point2& base : kBase) {
    const double w = height_weight(base);
    const double dx = spread * w * (base.x - 128.0) / 90.0 + sway * w;
    const double dy = -length * w;
    shape.points.push_back({base.x + dx, base.y + dy});
  }
  return shape;
}

FixtureResult generate_fixture(const std::filesystem::path& out_dir, const FixtureParams& params) {
  if (params.count < 1) fail(errc::invalid_argument, "fixture: count must be >= 1");
  if (params.width < 64 || params.height < 64)
    fail(errc::invalid_argument, "fixture: grid must be at least 64x64");
  std::filesystem::create_directories(out_dir);

  const FixtureLayout layout = fixture_layout();
  FixtureResult result;

  Dataset annotations;
  annotations.num_landmarks = layout.num_landmarks;
  annotations.unit = Unit::Pixels;
  annotations.image_width = params.width;
  annotations.image_height = params.height;

  for (std::size_t index = 0; index < params.count; ++index) {
    Shape shape = fixture_shape(params.seed, index);
    std::mt19937_64 rng(mix(params.seed ^ 0xc0ffee, index));
    std::size_t skip_render = layout.num_landmarks;  // past-the-end = render all

    switch (params.corruption) {
      case Corruption::None:
        break;
      case Corruption::Displaced: {
        const std::size_t target =
            layout.wrist_region[rng() % layout.wrist_region.size()];
        const double angle =
            std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
        const double magnitude_px = params.displace_mm / layout.mm_per_px();
        shape.points[target].x += magnitude_px * std::cos(angle);
        shape.points[target].y += magnitude_px * std::sin(angle);
        break;
      }
      case Corruption::Coincident:
        // collapse the index fingertip onto the middle fingertip (non-exempt)
        shape.points[7] = shape.points[6];
        break;
      case Corruption::Missing: {
        constexpr std::size_t tips[5] = {5, 6, 7, 8, 9};
        skip_render = tips[rng() % 5];
        break;
      }
    }

    Shape rendered = shape;
    if (skip_render < layout.num_landmarks)
      rendered.points.erase(rendered.points.begin() + static_cast<std::ptrdiff_t>(skip_render));

    const RenderResult render_result = render(rendered, params.width, params.height, params.sigma);
    char name[32];
    std::snprintf(name, sizeof(name), "img_%04zu", index);
    const std::filesystem::path pgm = out_dir / (std::string(name) + ".pgm");
    save_pgm(pgm, render_result.heatmap);
    result.heatmaps.push_back(pgm);

    annotations.ids.emplace_back(name);
    annotations.shapes.push_back(std::move(shape));
  }

  result.annotations = out_dir / "annotations.txt";
  write_annotations(result.annotations, annotations);

  Topology topology;
  topology.edges.assign(std::begin(kTopology), std::end(kTopology));
  std::sort(topology.edges.begin(), topology.edges.end());
  save_topology(out_dir / "topology.txt", topology);

  // gate-relevant constants for this family, so downstream commands can be
  // driven without guessing
  std::ofstream cfg(out_dir / "fixture_config.txt", std::ios::binary);
  cfg << "landmark-gate-fixture v1\n";
  cfg << "corruption " << corruption_name(params.corruption) << "\n";
  cfg << "count " << params.count << "\n";
  cfg << "seed " << params.seed << "\n";
  cfg << "sigma " << format_double(params.sigma) << "\n";
  cfg << "displace_mm " << format_double(params.displace_mm) << "\n";
  cfg << "mm_per_px " << format_double(layout.mm_per_px()) << "\n";
  cfg << "wrist_pair " << layout.wrist_a << " " << layout.wrist_b << "\n";
  cfg << "wrist_region";
  for (std::size_t k = 0; k < layout.wrist_region.size(); ++k)
    cfg << (k ? "," : " ") << layout.wrist_region[k];
  cfg << "\n";
  cfg << "coincidence_exempt " << layout.exempt_a << " " << layout.exempt_b << "\n";
  return result;
}

}  // namespace lmg

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
#include <vector>

#include "lmg/core.hpp"

namespace lmg {

enum class Corruption { None, Displaced, Coincident, Missing };

const char* corruption_name(Corruption c);
Corruption parse_corruption(const std::string& name);

struct FixtureParams {
  std::size_t count = 10;
  Corruption corruption = Corruption::None;
  std::uint64_t seed = 0;
  int width = 256;
  int height = 256;
  double sigma = 1.0;
  double displace_mm = 30.0;  // magnitude for Corruption::Displaced
};

/// Deterministic 12-landmark hand-like family: a fixed base configuration plus
/// three smooth Gaussian-weighted variation modes that vanish at the wrist, so
/// the wrist width is constant across the family.
struct FixtureLayout {
  std::size_t num_landmarks = 12;
  std::size_t wrist_a = 0;
  std::size_t wrist_b = 1;
  std::size_t exempt_a = 2;          // palm pair in very close proximity
  std::size_t exempt_b = 3;
  std::vector<std::size_t> wrist_region{0, 1, 4};
  double wrist_width_px = 56.0;
  double mm_per_px() const { return 50.0 / wrist_width_px; }
};

FixtureLayout fixture_layout();

/// The i-th clean shape of the family for a given seed (pixel units).
Shape fixture_shape(std::uint64_t seed, std::size_t index);

struct FixtureResult {
  std::filesystem::path annotations;           // all rendered-from shapes, pixel units
  std::vector<std::filesystem::path> heatmaps; // one PGM per image, input order
};

/// Writes annotations.txt, fixture_config.txt and <index>.pgm heatmaps into
/// out_dir. Fixed seed => byte-identical files. Corruptions: Displaced moves
/// one wrist-region landmark by displace_mm, Coincident collapses the two
/// index/middle fingertips onto one coordinate, Missing renders one fingertip
/// blob short while keeping it in the annotations.
FixtureResult generate_fixture(const std::filesystem::path& out_dir, const FixtureParams& params);

}  // namespace lmg

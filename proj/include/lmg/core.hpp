#pragma once
/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lmg/error.hpp"

namespace lmg {

enum class Unit { Millimeters, Pixels };

const char* unit_name(Unit u);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point2& a, const Point2& b);

/// Ordered landmark list. The index IS the landmark identity: points[i] is
/// landmark i in every shape of a dataset.
struct Shape {
  std::vector<Point2> points;
  Unit unit = Unit::Pixels;

  std::size_t size() const { return points.size(); }
};

/// Which landmark pair spans the wrist and the physical width assigned to it.
struct NormalizationSpec {
  std::size_t wrist_a = 0;
  std::size_t wrist_b = 1;
  double target_width_mm = 50.0;
};

struct Dataset {
  std::vector<std::string> ids;
  std::vector<Shape> shapes;
  int image_width = 0;   // 0 = unknown
  int image_height = 0;  // 0 = unknown
  std::size_t num_landmarks = 0;
  Unit unit = Unit::Pixels;
};

struct NormalizedShape {
  Shape shape;        // millimeters
  double scale = 1.0; // target_width / original wrist distance
};

/// Uniform scaling about the coordinate origin so that the wrist pair ends up
/// exactly target_width_mm apart.
NormalizedShape normalize_to_wrist(const Shape& shape, const NormalizationSpec& spec);

Shape pixels_to_mm(const Shape& px, double mm_per_px);
Shape mm_to_pixels(const Shape& mm, double mm_per_px);

/// Annotation text format:
///   L=<count> unit=<mm|px> [size=<w>x<h>]
///   <id> <x0> <y0> <x1> <y1> ...
/// expected_landmarks = 0 accepts whatever the header declares.
Dataset parse_annotations(const std::filesystem::path& path, std::size_t expected_landmarks);
void write_annotations(const std::filesystem::path& path, const Dataset& dataset);

/// Shortest decimal string that parses back to the identical double.
std::string format_double(double v);
double parse_double(std::string_view text, const char* what = "number");

void check_finite(const Shape& shape, const char* what);

}  // namespace lmg

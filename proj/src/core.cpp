/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "lmg/core.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lmg {

const char* errc_name(errc code) {
  switch (code) {
    case errc::io_error: return "io_error";
    case errc::parse_error: return "parse_error";
    case errc::invalid_argument: return "invalid_argument";
    case errc::landmark_count_mismatch: return "landmark_count_mismatch";
    case errc::nonfinite_coordinate: return "nonfinite_coordinate";
    case errc::degenerate_input: return "degenerate_input";
    case errc::unsupported_format: return "unsupported_format";
    case errc::schema_violation: return "schema_violation";
    case errc::match_failed: return "match_failed";
    case errc::search_space_too_large: return "search_space_too_large";
    case errc::empty_input: return "empty_input";
    case errc::out_of_range: return "out_of_range";
    case errc::dimension_mismatch: return "dimension_mismatch";
  }
  return "unknown";
}

const char* unit_name(Unit u) { return u == Unit::Millimeters ? "mm" : "px"; }

double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, const char* what) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    fail(errc::parse_error, std::string("invalid ") + what + " '" + std::string(text) + "'");
  return v;
}

void check_finite(const Shape& shape, const char* what) {
  for (const auto& p : shape.points)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      fail(errc::nonfinite_coordinate, std::string(what) + ": non-finite coordinate");
}

NormalizedShape normalize_to_wrist(const Shape& shape, const NormalizationSpec& spec) {
  const std::size_t n = shape.size();
  if (n < 2) fail(errc::invalid_argument, "normalize_to_wrist: shape needs at least 2 landmarks");
  if (spec.wrist_a >= n || spec.wrist_b >= n || spec.wrist_a == spec.wrist_b)
    fail(errc::invalid_argument, "normalize_to_wrist: wrist indices must be distinct and < L");
  if (!(spec.target_width_mm > 0.0))
    fail(errc::invalid_argument, "normalize_to_wrist: target width must be positive");
  check_finite(shape, "normalize_to_wrist");
  const double width = distance(shape.points[spec.wrist_a], shape.points[spec.wrist_b]);
  if (width == 0.0) fail(errc::degenerate_input, "normalize_to_wrist: wrist landmarks coincide");

  NormalizedShape out;
  out.scale = spec.target_width_mm / width;
  out.shape.unit = Unit::Millimeters;
  out.shape.points.reserve(n);
  for (const auto& p : shape.points) out.shape.points.push_back({p.x * out.scale, p.y * out.scale});
  return out;
}

Shape pixels_to_mm(const Shape& px, double mm_per_px) {
  if (!(mm_per_px > 0.0)) fail(errc::invalid_argument, "pixels_to_mm: scale must be positive");
  Shape out;
  out.unit = Unit::Millimeters;
  out.points.reserve(px.size());
  for (const auto& p : px.points) out.points.push_back({p.x * mm_per_px, p.y * mm_per_px});
  return out;
}

Shape mm_to_pixels(const Shape& mm, double mm_per_px) {
  if (!(mm_per_px > 0.0)) fail(errc::invalid_argument, "mm_to_pixels: scale must be positive");
  Shape out;
  out.unit = Unit::Pixels;
  out.points.reserve(mm.size());
  for (const auto& p : mm.points) out.points.push_back({p.x / mm_per_px, p.y / mm_per_px});
  return out;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

[[noreturn]] void fail_line(errc code, const std::filesystem::path& path, std::size_t line_no,
                            const std::string& message) {
  fail(code, path.string() + ":" + std::to_string(line_no) + ": " + message);
}

}  // namespace

Dataset parse_annotations(const std::filesystem::path& path, std::size_t expected_landmarks) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open annotation file '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line))
    fail_line(errc::parse_error, path, 1, "missing header line");

  Dataset ds;
  bool have_l = false, have_unit = false;
  for (auto tok : split_ws(line)) {
    if (tok.rfind("L=", 0) == 0) {
      double v = parse_double(tok.substr(2), "landmark count");
      if (v < 2 || v != std::floor(v)) fail_line(errc::parse_error, path, 1, "bad landmark count");
      ds.num_landmarks = static_cast<std::size_t>(v);
      have_l = true;
    } else if (tok.rfind("unit=", 0) == 0) {
      auto u = tok.substr(5);
      if (u == "mm") ds.unit = Unit::Millimeters;
      else if (u == "px") ds.unit = Unit::Pixels;
      else fail_line(errc::parse_error, path, 1, "unit must be mm or px");
      have_unit = true;
    } else if (tok.rfind("size=", 0) == 0) {
      auto rest = tok.substr(5);
      auto x = rest.find('x');
      if (x == std::string_view::npos) fail_line(errc::parse_error, path, 1, "bad size token");
      ds.image_width = static_cast<int>(parse_double(rest.substr(0, x), "image width"));
      ds.image_height = static_cast<int>(parse_double(rest.substr(x + 1), "image height"));
    } else {
      fail_line(errc::parse_error, path, 1, "unrecognized header token '" + std::string(tok) + "'");
    }
  }
  if (!have_l || !have_unit) fail_line(errc::parse_error, path, 1, "header needs L= and unit=");
  if (expected_landmarks != 0 && ds.num_landmarks != expected_landmarks)
    fail_line(errc::landmark_count_mismatch, path, 1,
              "file declares L=" + std::to_string(ds.num_landmarks) + ", expected " +
                  std::to_string(expected_landmarks));

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != 1 + 2 * ds.num_landmarks)
      fail_line(errc::landmark_count_mismatch, path, line_no,
                "record has " + std::to_string((toks.size() - 1) / 2) + " landmarks, expected " +
                    std::to_string(ds.num_landmarks));
    Shape s;
    s.unit = ds.unit;
    s.points.reserve(ds.num_landmarks);
    for (std::size_t k = 0; k < ds.num_landmarks; ++k) {
      double x, y;
      try {
        x = parse_double(toks[1 + 2 * k], "coordinate");
        y = parse_double(toks[2 + 2 * k], "coordinate");
      } catch (const error& e) {
        fail_line(e.code(), path, line_no, e.what());
      }
      if (!std::isfinite(x) || !std::isfinite(y))
        fail_line(errc::nonfinite_coordinate, path, line_no, "non-finite coordinate");
      s.points.push_back({x, y});
    }
    ds.ids.emplace_back(toks[0]);
    ds.shapes.push_back(std::move(s));
  }
  return ds;
}

void write_annotations(const std::filesystem::path& path, const Dataset& dataset) {
  if (dataset.ids.size() != dataset.shapes.size())
    fail(errc::invalid_argument, "write_annotations: ids and shapes differ in length");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot write annotation file '" + path.string() + "'");

  out << "L=" << dataset.num_landmarks << " unit=" << unit_name(dataset.unit);
  if (dataset.image_width > 0 && dataset.image_height > 0)
    out << " size=" << dataset.image_width << "x" << dataset.image_height;
  out << "\n";

  for (std::size_t i = 0; i < dataset.shapes.size(); ++i) {
    const Shape& s = dataset.shapes[i];
    if (s.size() != dataset.num_landmarks)
      fail(errc::landmark_count_mismatch, "write_annotations: shape " + std::to_string(i) +
                                              " has wrong landmark count");
    out << dataset.ids[i];
    for (const auto& p : s.points) out << ' ' << format_double(p.x) << ' ' << format_double(p.y);
    out << "\n";
  }
  if (!out) fail(errc::io_error, "failed writing '" + path.string() + "'");
}

}  // namespace lmg

/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "lmg/heatmap.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>

namespace lmg {

RenderResult render(const Shape& shape_px, int width, int height, double sigma) {
  if (width <= 0 || height <= 0) fail(errc::invalid_argument, "render: grid must be non-empty");
  if (!(sigma > 0.0)) fail(errc::invalid_argument, "render: sigma must be positive");
  if (shape_px.unit != Unit::Pixels)
    fail(errc::invalid_argument, "render: shape must be in pixel units");
  check_finite(shape_px, "render");

  RenderResult result;
  result.heatmap.width = width;
  result.heatmap.height = height;
  result.heatmap.values.assign(static_cast<std::size_t>(width) * height, 0.0);

  const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);
  // exp(-d^2/(2s^2)) underflows to exactly +0 once the argument passes ~-746,
  // so restricting each landmark to this box is bit-identical to a full sweep.
  const double reach = sigma * std::sqrt(2.0 * 746.0);

  for (std::size_t i = 0; i < shape_px.size(); ++i) {
    const Point2& p = shape_px.points[i];
    if (p.x < 0.0 || p.x > width - 1 || p.y < 0.0 || p.y > height - 1) result.clipped.push_back(i);
    const int x0 = std::max(0, static_cast<int>(std::ceil(p.x - reach)));
    const int x1 = std::min(width - 1, static_cast<int>(std::floor(p.x + reach)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(p.y - reach)));
    const int y1 = std::min(height - 1, static_cast<int>(std::floor(p.y + reach)));
    for (int y = y0; y <= y1; ++y) {
      const double dy = y - p.y;
      double* row = result.heatmap.values.data() + static_cast<std::size_t>(y) * width;
      for (int x = x0; x <= x1; ++x) {
        const double dx = x - p.x;
        const double v = std::exp(-(dx * dx + dy * dy) * inv_two_sigma_sq);
        if (v > row[x]) row[x] = v;
      }
    }
  }
  return result;
}

std::vector<Candidate> extract_candidates(const Heatmap& h, std::size_t count, int window,
                                          double min_value) {
  if (count < 1) fail(errc::invalid_argument, "extract_candidates: count must be >= 1");
  if (window < 1) fail(errc::invalid_argument, "extract_candidates: window must be >= 1");
  if (h.width <= 0 || h.height <= 0 ||
      h.values.size() != static_cast<std::size_t>(h.width) * h.height)
    fail(errc::invalid_argument, "extract_candidates: malformed heatmap");

  std::vector<Candidate> found;
  for (int y = 0; y < h.height; ++y) {
    for (int x = 0; x < h.width; ++x) {
      const double v = h.at(x, y);
      if (v < min_value) continue;
      bool is_max = true;
      const int qy0 = std::max(0, y - window), qy1 = std::min(h.height - 1, y + window);
      const int qx0 = std::max(0, x - window), qx1 = std::min(h.width - 1, x + window);
      for (int qy = qy0; qy <= qy1 && is_max; ++qy) {
        for (int qx = qx0; qx <= qx1; ++qx) {
          if (qx == x && qy == y) continue;
          const double qv = h.at(qx, qy);
          // exact ties: the earliest row-major pixel of a plateau wins
          if (qv > v || (qv == v && (qy < y || (qy == y && qx < x)))) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) found.push_back({{static_cast<double>(x), static_cast<double>(y)}, v});
    }
  }

  std::stable_sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
    if (a.peak_value != b.peak_value) return a.peak_value > b.peak_value;
    if (a.position.y != b.position.y) return a.position.y < b.position.y;
    return a.position.x < b.position.x;
  });
  if (found.size() > count) found.resize(count);
  return found;
}

std::vector<double> to_model_range(std::span<const double> values01) {
  std::vector<double> out;
  out.reserve(values01.size());
  for (double v : values01) {
    if (!(v >= 0.0 && v <= 1.0))
      fail(errc::out_of_range, "to_model_range: value " + format_double(v) + " outside [0,1]");
    out.push_back(2.0 * v - 1.0);
  }
  return out;
}

std::vector<double> from_model_range(std::span<const double> values_pm1) {
  std::vector<double> out;
  out.reserve(values_pm1.size());
  for (double v : values_pm1) {
    if (!(v >= -1.0 && v <= 1.0))
      fail(errc::out_of_range, "from_model_range: value " + format_double(v) + " outside [-1,1]");
    out.push_back((v + 1.0) / 2.0);
  }
  return out;
}

void save_pgm(const std::filesystem::path& path, const Heatmap& h) {
  if (h.width <= 0 || h.height <= 0 ||
      h.values.size() != static_cast<std::size_t>(h.width) * h.height)
    fail(errc::invalid_argument, "save_pgm: malformed heatmap");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot write '" + path.string() + "'");
  out << "P5\n" << h.width << " " << h.height << "\n65535\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(h.width) * 2);
  for (int y = 0; y < h.height; ++y) {
    for (int x = 0; x < h.width; ++x) {
      const double v = h.at(x, y);
      if (!(v >= 0.0 && v <= 1.0))
        fail(errc::out_of_range, "save_pgm: value outside [0,1]");
      const auto q = static_cast<std::uint16_t>(std::lround(v * 65535.0));
      row[2 * x] = static_cast<unsigned char>(q >> 8);  // big-endian per PNM
      row[2 * x + 1] = static_cast<unsigned char>(q & 0xff);
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!out) fail(errc::io_error, "failed writing '" + path.string() + "'");
}

namespace {

int read_pnm_int(std::istream& in, const std::filesystem::path& path) {
  // skips whitespace and '#' comments per the PNM grammar
  int c = in.get();
  while (c == '#' || std::isspace(c)) {
    if (c == '#')
      while (c != '\n' && c != EOF) c = in.get();
    c = in.get();
  }
  int value = 0;
  bool any = false;
  while (std::isdigit(c)) {
    value = value * 10 + (c - '0');
    any = true;
    c = in.get();
  }
  if (!any) fail(errc::unsupported_format, "malformed PGM header in '" + path.string() + "'");
  return value;
}

}  // namespace

Heatmap load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open '" + path.string() + "'");
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '5')
    fail(errc::unsupported_format, "'" + path.string() + "' is not a binary PGM");
  const int width = read_pnm_int(in, path);
  const int height = read_pnm_int(in, path);
  const int maxval = read_pnm_int(in, path);
  if (maxval != 65535)
    fail(errc::unsupported_format, "'" + path.string() + "': expected 16-bit PGM (maxval 65535)");
  if (width <= 0 || height <= 0)
    fail(errc::unsupported_format, "'" + path.string() + "': empty grid");

  Heatmap h;
  h.width = width;
  h.height = height;
  h.values.resize(static_cast<std::size_t>(width) * height);
  std::vector<unsigned char> raw(h.values.size() * 2);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size()))
    fail(errc::unsupported_format, "'" + path.string() + "': truncated pixel data");
  for (std::size_t i = 0; i < h.values.size(); ++i) {
    const unsigned q = (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];
    h.values[i] = q / 65535.0;
  }
  return h;
}

}  // namespace lmg

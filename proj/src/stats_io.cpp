/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 *
 * Versioned structured-text serialization of TrainStats:
 *
 *   landmark-gate-stats v1
 *   landmarks <L>
 *   unary_sigma <mm>
 *   normalization <wrist_a> <wrist_b> <target_width_mm>
 *   means            (L lines "<x> <y>")
 *   topology <E>     (E lines "<i> <j>")
 *   edges            (E lines "<i> <j> <dof> <loc> <scale> <mean_distance>")
 *   ssm_mean         (L lines "<x> <y>")
 *   ssm_modes <t>    (t lines of 2L values)
 *   ssm_eigenvalues  (one line of t values, omitted when t = 0)
 *   ssm_total_variance <v>
 *   end
 */
#include <cmath>
#include <fstream>
#include <sstream>

#include "lmg/shapestats.hpp"

namespace lmg {

namespace {

constexpr const char* kMagic = "landmark-gate-stats v1";

class LineReader {
public:
  LineReader(std::istream& in, std::string path) : in_(in), path_(std::move(path)) {}

  std::string next(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
    }
    fail(errc::schema_violation, path_ + ": truncated stats file, expected " + std::string(what));
  }

  [[noreturn]] void violation(const std::string& message) const {
    fail(errc::schema_violation, path_ + ":" + std::to_string(line_no_) + ": " + message);
  }

private:
  std::istream& in_;
  std::string path_;
  std::size_t line_no_ = 0;
};

std::vector<double> parse_doubles(const std::string& line, std::size_t expected, LineReader& r,
                                  const char* what) {
  std::istringstream iss(line);
  std::vector<double> out;
  std::string tok;
  while (iss >> tok) {
    try {
      out.push_back(parse_double(tok, what));
    } catch (const error& e) {
      r.violation(e.what());
    }
  }
  if (out.size() != expected)
    r.violation(std::string(what) + ": expected " + std::to_string(expected) + " values, got " +
                std::to_string(out.size()));
  return out;
}

std::string keyword_line(const std::string& line, const char* key, LineReader& r) {
  if (line.rfind(key, 0) != 0) r.violation("expected '" + std::string(key) + "' section");
  return line.substr(std::string(key).size());
}

}  // namespace

void save_stats(const std::filesystem::path& path, const TrainStats& stats) {
  if (stats.edge_stats.size() != stats.topology.edges.size())
    fail(errc::schema_violation, "save_stats: edge_stats does not cover the topology");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot write stats file '" + path.string() + "'");

  out << kMagic << "\n";
  out << "landmarks " << stats.num_landmarks << "\n";
  out << "unary_sigma " << format_double(stats.unary_sigma) << "\n";
  out << "normalization " << stats.normalization.wrist_a << " " << stats.normalization.wrist_b
      << " " << format_double(stats.normalization.target_width_mm) << "\n";

  out << "means\n";
  for (const auto& p : stats.landmark_means)
    out << format_double(p.x) << " " << format_double(p.y) << "\n";

  out << "topology " << stats.topology.edges.size() << "\n";
  for (const auto& [i, j] : stats.topology.edges) out << i << " " << j << "\n";

  out << "edges\n";
  for (const auto& e : stats.edge_stats)
    out << e.i << " " << e.j << " " << format_double(e.t_dof) << " " << format_double(e.t_loc)
        << " " << format_double(e.t_scale) << " " << format_double(e.mean_distance) << "\n";

  out << "ssm_mean\n";
  for (const auto& p : stats.ssm.mean_shape.points)
    out << format_double(p.x) << " " << format_double(p.y) << "\n";

  out << "ssm_modes " << stats.ssm.num_modes() << "\n";
  for (const auto& mode : stats.ssm.eigenvectors) {
    for (std::size_t k = 0; k < mode.size(); ++k) out << (k ? " " : "") << format_double(mode[k]);
    out << "\n";
  }
  if (stats.ssm.num_modes() > 0) {
    out << "ssm_eigenvalues";
    for (double v : stats.ssm.eigenvalues) out << " " << format_double(v);
    out << "\n";
  }
  out << "ssm_total_variance " << format_double(stats.ssm.total_variance) << "\n";
  out << "end\n";
  if (!out) fail(errc::io_error, "failed writing '" + path.string() + "'");
}

TrainStats load_stats(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open stats file '" + path.string() + "'");
  LineReader r(in, path.string());

  if (r.next("magic") != kMagic)
    fail(errc::unsupported_format, path.string() + ": not a '" + kMagic + "' file");

  TrainStats stats;
  {
    const auto v = parse_doubles(keyword_line(r.next("landmarks"), "landmarks", r), 1, r, "landmarks");
    if (v[0] < 2 || v[0] != std::floor(v[0])) r.violation("landmark count must be an integer >= 2");
    stats.num_landmarks = static_cast<std::size_t>(v[0]);
  }
  {
    const auto v =
        parse_doubles(keyword_line(r.next("unary_sigma"), "unary_sigma", r), 1, r, "unary_sigma");
    if (!(v[0] > 0.0)) r.violation("unary_sigma must be positive");
    stats.unary_sigma = v[0];
  }
  {
    const auto v = parse_doubles(keyword_line(r.next("normalization"), "normalization", r), 3, r,
                                 "normalization");
    stats.normalization.wrist_a = static_cast<std::size_t>(v[0]);
    stats.normalization.wrist_b = static_cast<std::size_t>(v[1]);
    stats.normalization.target_width_mm = v[2];
    if (stats.normalization.wrist_a == stats.normalization.wrist_b ||
        stats.normalization.wrist_a >= stats.num_landmarks ||
        stats.normalization.wrist_b >= stats.num_landmarks || !(v[2] > 0.0))
      r.violation("bad normalization spec");
  }

  keyword_line(r.next("means"), "means", r);
  stats.landmark_means.resize(stats.num_landmarks);
  for (auto& p : stats.landmark_means) {
    const auto v = parse_doubles(r.next("mean coordinate"), 2, r, "mean coordinate");
    p = {v[0], v[1]};
  }

  std::size_t num_edges = 0;
  {
    const auto v = parse_doubles(keyword_line(r.next("topology"), "topology", r), 1, r, "topology");
    num_edges = static_cast<std::size_t>(v[0]);
  }
  for (std::size_t e = 0; e < num_edges; ++e) {
    const auto v = parse_doubles(r.next("topology edge"), 2, r, "topology edge");
    stats.topology.edges.push_back(
        {static_cast<std::size_t>(v[0]), static_cast<std::size_t>(v[1])});
  }
  try {
    validate_topology(stats.topology, stats.num_landmarks);
  } catch (const error& e) {
    fail(errc::schema_violation, path.string() + ": " + e.what());
  }

  keyword_line(r.next("edges"), "edges", r);
  for (std::size_t e = 0; e < num_edges; ++e) {
    const auto v = parse_doubles(r.next("edge stats"), 6, r, "edge stats");
    EdgeStats es;
    es.i = static_cast<std::size_t>(v[0]);
    es.j = static_cast<std::size_t>(v[1]);
    es.t_dof = v[2];
    es.t_loc = v[3];
    es.t_scale = v[4];
    es.mean_distance = v[5];
    if (es.i != stats.topology.edges[e].first || es.j != stats.topology.edges[e].second)
      r.violation("edge stats must cover the topology edges in order");
    if (!(es.t_dof > 0.0) || !(es.t_scale > 0.0) || !(es.mean_distance > 0.0))
      r.violation("edge stats out of domain");
    stats.edge_stats.push_back(es);
  }

  keyword_line(r.next("ssm_mean"), "ssm_mean", r);
  stats.ssm.mean_shape.unit = Unit::Millimeters;
  stats.ssm.mean_shape.points.resize(stats.num_landmarks);
  for (auto& p : stats.ssm.mean_shape.points) {
    const auto v = parse_doubles(r.next("ssm mean coordinate"), 2, r, "ssm mean coordinate");
    p = {v[0], v[1]};
  }

  std::size_t num_modes = 0;
  {
    const auto v =
        parse_doubles(keyword_line(r.next("ssm_modes"), "ssm_modes", r), 1, r, "ssm_modes");
    num_modes = static_cast<std::size_t>(v[0]);
  }
  stats.ssm.eigenvectors.resize(num_modes);
  for (auto& mode : stats.ssm.eigenvectors)
    mode = parse_doubles(r.next("ssm mode"), 2 * stats.num_landmarks, r, "ssm mode");
  if (num_modes > 0) {
    stats.ssm.eigenvalues = parse_doubles(
        keyword_line(r.next("ssm_eigenvalues"), "ssm_eigenvalues", r), num_modes, r,
        "ssm_eigenvalues");
    for (std::size_t m = 1; m < num_modes; ++m)
      if (stats.ssm.eigenvalues[m] > stats.ssm.eigenvalues[m - 1])
        r.violation("ssm eigenvalues must be descending");
  }
  {
    const auto v = parse_doubles(keyword_line(r.next("ssm_total_variance"), "ssm_total_variance", r),
                                 1, r, "ssm_total_variance");
    stats.ssm.total_variance = v[0];
  }
  if (r.next("end") != "end") r.violation("missing 'end' marker");
  return stats;
}

}  // namespace lmg

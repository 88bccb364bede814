/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cmath>
#include <random>

#include <doctest.h>

#include "lmg/heatmap.hpp"
#include "test_util.hpp"

using namespace lmg;

namespace {

Shape px_shape(std::initializer_list<Point2> pts) {
  Shape s;
  s.unit = Unit::Pixels;
  s.points = pts;
  return s;
}

}  // namespace

TEST_CASE("render evaluates the Gaussian peak formula") {
  const auto r = render(px_shape({{5, 5}}), 16, 16, 1.0);
  CHECK(r.clipped.empty());
  CHECK(r.heatmap.at(5, 5) == 1.0);
  CHECK(r.heatmap.at(6, 5) == std::exp(-0.5));
  CHECK(r.heatmap.at(6, 5) == doctest::Approx(0.6065306597126334).epsilon(1e-12));
  CHECK(r.heatmap.at(6, 6) == std::exp(-1.0));
}

TEST_CASE("render of an empty shape is all zeros") {
  const auto r = render(px_shape({}), 8, 4, 1.0);
  for (double v : r.heatmap.values) CHECK(v == 0.0);
}

TEST_CASE("render combines overlapping peaks with max") {
  // two landmarks 2 px apart: the midpoint sees two equal terms exp(-0.5)
  const auto r = render(px_shape({{4, 5}, {6, 5}}), 16, 16, 1.0);
  CHECK(r.heatmap.at(5, 5) == std::exp(-0.5));
  CHECK(r.heatmap.at(4, 5) == 1.0);
  for (double v : r.heatmap.values) CHECK(v <= 1.0);
}

TEST_CASE("render warns and clips landmarks outside the grid") {
  const auto r = render(px_shape({{-3, 2}, {4, 4}}), 8, 8, 1.0);
  REQUIRE(r.clipped.size() == 1);
  CHECK(r.clipped[0] == 0);
  CHECK(r.heatmap.at(4, 4) == 1.0);
  // the outside peak still contributes its in-grid tail
  CHECK(r.heatmap.at(0, 2) == std::exp(-4.5));
}

TEST_CASE("render rejects bad arguments") {
  CHECK_THROWS_AS(render(px_shape({{1, 1}}), 8, 8, 0.0), error);
  CHECK_THROWS_AS(render(px_shape({{1, 1}}), 0, 8, 1.0), error);
  Shape mm = px_shape({{1, 1}});
  mm.unit = Unit::Millimeters;
  CHECK_THROWS_AS(render(mm, 8, 8, 1.0), error);
}

TEST_CASE("render is equivariant under integer shifts") {
  // dyadic fractions keep p+shift exactly representable
  const Shape base = px_shape({{6.25, 7.125}, {12.75, 4.5}});
  Shape shifted = base;
  for (auto& p : shifted.points) {
    p.x += 3;
    p.y += 2;
  }
  const Heatmap a = render(base, 24, 24, 1.0).heatmap;
  const Heatmap b = render(shifted, 24, 24, 1.0).heatmap;
  for (int y = 0; y + 2 < 24; ++y)
    for (int x = 0; x + 3 < 24; ++x) CHECK(a.at(x, y) == b.at(x + 3, y + 2));
}

TEST_CASE("model range mapping") {
  SUBCASE("affine endpoints") {
    const std::vector<double> v{0.0, 1.0, 0.5};
    const auto w = to_model_range(v);
    CHECK(w[0] == -1.0);
    CHECK(w[1] == 1.0);
    CHECK(w[2] == 0.0);
  }
  SUBCASE("roundtrip on dyadic grids is bit-exact") {
    std::mt19937_64 rng(23);
    std::vector<double> v(4096);
    for (auto& x : v) x = static_cast<double>(rng() % 65537) / 65536.0;
    const auto w = to_model_range(v);
    const auto back = from_model_range(w);
    for (std::size_t k = 0; k < v.size(); ++k) CHECK(back[k] == v[k]);
  }
  SUBCASE("roundtrip on arbitrary values loses at most the forward rounding") {
    // the affine map can round once near -1, bounded by 2^-54 after the halve
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 4096; ++k) {
      const double v = u(rng);
      const double back = from_model_range(to_model_range(std::vector<double>{v}))[0];
      CHECK(std::abs(back - v) <= std::ldexp(1.0, -54));
    }
  }
  SUBCASE("out of range is rejected") {
    CHECK_THROWS_AS(to_model_range(std::vector<double>{1.5}), error);
    CHECK_THROWS_AS(to_model_range(std::vector<double>{-0.1}), error);
    CHECK_THROWS_AS(from_model_range(std::vector<double>{1.5}), error);
  }
  SUBCASE("clipped diffusion output maps back into [0,1]") {
    const std::vector<double> noisy{-1.0, -0.33, 0.0, 0.97, 1.0};
    for (double v : from_model_range(noisy)) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("extract_candidates basics") {
  SUBCASE("roundtrip against render") {
    const Shape s = px_shape({{8, 8}, {24, 9}, {10, 26}});
    const auto heat = render(s, 40, 40, 1.0).heatmap;
    const auto cands = extract_candidates(heat, 3, 3, 0.05);
    REQUIRE(cands.size() == 3);
    for (const auto& p : s.points) {
      bool hit = false;
      for (const auto& c : cands)
        hit = hit || (std::abs(c.position.x - p.x) <= 0.5 && std::abs(c.position.y - p.y) <= 0.5);
      CHECK(hit);
    }
  }
  SUBCASE("all-zero heatmap gives nothing") {
    Heatmap h{16, 16, std::vector<double>(256, 0.0)};
    CHECK(extract_candidates(h, 5, 3, 0.05).empty());
  }
  SUBCASE("fewer maxima than requested") {
    const auto heat = render(px_shape({{8, 8}}), 24, 24, 1.0).heatmap;
    CHECK(extract_candidates(heat, 5, 3, 0.05).size() == 1);
  }
  SUBCASE("exact plateaus keep the earliest row-major pixel") {
    Heatmap h{8, 8, std::vector<double>(64, 0.0)};
    h.at(3, 4) = 0.7;
    h.at(4, 4) = 0.7;
    const auto cands = extract_candidates(h, 4, 2, 0.05);
    REQUIRE(cands.size() == 1);
    CHECK(cands[0].position.x == 3.0);
    CHECK(cands[0].position.y == 4.0);
  }
  SUBCASE("sorted by value, ties by row-major position") {
    Heatmap h{16, 16, std::vector<double>(256, 0.0)};
    h.at(12, 2) = 0.5;
    h.at(3, 9) = 0.5;
    h.at(9, 13) = 0.9;
    const auto cands = extract_candidates(h, 5, 2, 0.05);
    REQUIRE(cands.size() == 3);
    CHECK(cands[0].peak_value == 0.9);
    CHECK(cands[1].position.y == 2.0);
    CHECK(cands[2].position.y == 9.0);
  }
  SUBCASE("argument validation") {
    Heatmap h{4, 4, std::vector<double>(16, 0.0)};
    CHECK_THROWS_AS(extract_candidates(h, 0, 3, 0.05), error);
    CHECK_THROWS_AS(extract_candidates(h, 1, 0, 0.05), error);
  }
}

TEST_CASE("extract_candidates is deterministic and recovers separated shapes") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(8.0, 56.0);
  for (int trial = 0; trial < 20; ++trial) {
    // rejection-sample a shape with pairwise distances > 4 sigma
    Shape s;
    s.unit = Unit::Pixels;
    while (s.points.size() < 6) {
      const Point2 p{u(rng), u(rng)};
      bool ok = true;
      for (const auto& q : s.points) ok = ok && distance(p, q) > 6.0;
      if (ok) s.points.push_back(p);
    }
    const auto heat = render(s, 64, 64, 1.0).heatmap;
    const auto a = extract_candidates(heat, 6, 3, 0.05);
    const auto b = extract_candidates(heat, 6, 3, 0.05);
    REQUIRE(a.size() == 6);
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k].position.x == b[k].position.x);
      CHECK(a[k].position.y == b[k].position.y);
    }
    for (const auto& p : s.points) {
      double best = 1e9;
      for (const auto& c : a)
        best = std::min(best, std::max(std::abs(c.position.x - p.x), std::abs(c.position.y - p.y)));
      CHECK(best <= 0.5);
    }
  }
}

TEST_CASE("16-bit PGM roundtrip") {
  const auto dir = test::temp_dir("heatmap_pgm");
  const auto heat = render(px_shape({{5.2, 7.8}, {20, 11}}), 32, 24, 1.0).heatmap;
  save_pgm(dir / "a.pgm", heat);
  const Heatmap back = load_pgm(dir / "a.pgm");
  REQUIRE(back.width == 32);
  REQUIRE(back.height == 24);
  for (std::size_t k = 0; k < heat.values.size(); ++k) {
    const double q = std::lround(heat.values[k] * 65535.0) / 65535.0;
    CHECK(back.values[k] == q);
  }
  save_pgm(dir / "b.pgm", back);
  CHECK(test::read_file(dir / "a.pgm") == test::read_file(dir / "b.pgm"));
}

TEST_CASE("PGM loader rejects foreign input") {
  const auto dir = test::temp_dir("heatmap_pgm_bad");
  test::write_file(dir / "bad.pgm", "P2\n2 2\n255\n0 0 0 0\n");
  try {
    load_pgm(dir / "bad.pgm");
    FAIL("expected unsupported_format");
  } catch (const error& e) {
    CHECK(e.code() == errc::unsupported_format);
  }
  test::write_file(dir / "short.pgm", std::string("P5\n4 4\n65535\n\0\0", 14));
  CHECK_THROWS_AS(load_pgm(dir / "short.pgm"), error);
  test::write_file(dir / "8bit.pgm", std::string("P5\n1 1\n255\n\0", 12));
  CHECK_THROWS_AS(load_pgm(dir / "8bit.pgm"), error);
  CHECK_THROWS_AS(load_pgm(dir / "missing.pgm"), error);
}

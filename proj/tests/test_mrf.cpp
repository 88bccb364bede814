/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cmath>
#include <random>

#include <doctest.h>

#include "lmg/mrf.hpp"
#include "lmg/tdist.hpp"
#include "test_util.hpp"

using namespace lmg;

namespace {

TrainStats two_node_stats() {
  TrainStats stats;
  stats.num_landmarks = 2;
  stats.unary_sigma = 25.0;
  stats.landmark_means = {{0, 0}, {30, 0}};
  stats.topology.edges = {{0, 1}};
  stats.edge_stats = {{0, 1, 5.0, 30.0, 2.0, 30.0}};
  return stats;
}

}  // namespace

TEST_CASE("unary_scores formula") {
  TrainStats stats = two_node_stats();
  SUBCASE("candidate at the mean with peak 1") {
    const std::vector<Candidate> c{{{0, 0}, 1.0}};
    CHECK(unary_scores(c, 0, stats)[0] == 1.0);
  }
  SUBCASE("one sigma away") {
    const std::vector<Candidate> c{{{25, 0}, 1.0}};
    CHECK(unary_scores(c, 0, stats)[0] == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(unary_scores(c, 0, stats)[0] == doctest::Approx(0.6065306597126334).epsilon(1e-12));
  }
  SUBCASE("zero peak value kills the score") {
    const std::vector<Candidate> c{{{0, 0}, 0.0}};
    CHECK(unary_scores(c, 0, stats)[0] == 0.0);
  }
  SUBCASE("node out of range") {
    const std::vector<Candidate> c{{{0, 0}, 1.0}};
    CHECK_THROWS_AS(unary_scores(c, 7, stats), error);
  }
}

TEST_CASE("binary_scores formula") {
  const EdgeStats es{0, 1, 5.0, 30.0, 2.0, 30.0};
  SUBCASE("at the training distance: mode pdf plus 2") {
    const std::vector<Candidate> a{{{0, 0}, 1.0}};
    const std::vector<Candidate> b{{{30, 0}, 1.0}};
    const double expected = 0.1898033449112472 + 2.0;
    CHECK(binary_scores(a, b, es)[0] == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("score vanishes at long range") {
    const std::vector<Candidate> a{{{0, 0}, 1.0}};
    const std::vector<Candidate> b{{{5000, 0}, 1.0}};
    CHECK(binary_scores(a, b, es)[0] < 1e-10);
  }
  SUBCASE("matrix shape is |a| x |b|") {
    std::vector<Candidate> a(3, {{0, 0}, 1.0});
    std::vector<Candidate> b(4, {{30, 0}, 1.0});
    const auto m = binary_scores(a, b, es);
    CHECK(m.size() == 12);
  }
}

TEST_CASE("build_graph") {
  TrainStats stats = two_node_stats();
  SUBCASE("single candidate, two nodes, one edge") {
    const std::vector<Candidate> pool{{{10, 0}, 0.8}};
    const FactorGraph g = build_graph(pool, stats);
    CHECK(g.num_nodes() == 2);
    REQUIRE(g.pairwise.size() == 1);
    CHECK(g.pairwise[0].size() == 1);
    CHECK(g.unary[0].size() == 1);
  }
  SUBCASE("pool at the landmark means makes own-mean candidates win") {
    const std::vector<Candidate> pool{{{0, 0}, 1.0}, {{30, 0}, 1.0}};
    const FactorGraph g = build_graph(pool, stats);
    for (std::size_t node = 0; node < 2; ++node) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < pool.size(); ++k)
        if (g.unary[node][k] > g.unary[node][best]) best = k;
      CHECK(best == node);
    }
  }
  SUBCASE("empty pool is rejected") {
    CHECK_THROWS_AS(build_graph(std::vector<Candidate>{}, stats), error);
  }
}

TEST_CASE("energy sums selected scores") {
  FactorGraph g;
  g.candidates = {{{{0, 0}, 1.0}, {{1, 0}, 1.0}}};
  g.unary = {{0.25, 0.5}};

  SUBCASE("single node is just the unary") {
    CHECK(energy(g, std::vector<std::size_t>{1}) == 0.5);
    CHECK(energy(g, std::vector<std::size_t>{0}) == 0.25);
  }
  SUBCASE("two nodes and one edge add the pairwise entry") {
    g.candidates.push_back({{{5, 0}, 1.0}, {{6, 0}, 1.0}, {{7, 0}, 1.0}});
    g.unary.push_back({1.0, 2.0, 3.0});
    g.topology.edges = {{0, 1}};
    g.pairwise = {{10, 20, 30, 40, 50, 60}};  // 2x3 row-major
    CHECK(energy(g, std::vector<std::size_t>{0, 0}) == 0.25 + 1.0 + 10.0);
    CHECK(energy(g, std::vector<std::size_t>{1, 2}) == 0.5 + 3.0 + 60.0);
  }
  SUBCASE("bad assignment is rejected") {
    CHECK_THROWS_AS(energy(g, std::vector<std::size_t>{7}), error);
    CHECK_THROWS_AS(energy(g, std::vector<std::size_t>{0, 0}), error);
  }
}

TEST_CASE("brute_force_map") {
  SUBCASE("single node argmax") {
    FactorGraph g;
    g.candidates = {{{{0, 0}, 1}, {{1, 0}, 1}, {{2, 0}, 1}}};
    g.unary = {{0.1, 0.9, 0.4}};
    CHECK(brute_force_map(g).assignment == std::vector<std::size_t>{1});
  }
  SUBCASE("2x2 enumeration by hand") {
    FactorGraph g;
    g.candidates = {{{{0, 0}, 1}, {{1, 0}, 1}}, {{{2, 0}, 1}, {{3, 0}, 1}}};
    g.unary = {{1.0, 2.0}, {1.0, 0.5}};
    g.topology.edges = {{0, 1}};
    g.pairwise = {{0.0, 3.0, 1.0, 0.0}};
    // energies: (0,0)=2, (0,1)=4.5, (1,0)=4, (1,1)=2.5 -> argmax (0,1)
    const Labeling best = brute_force_map(g);
    CHECK(best.assignment == std::vector<std::size_t>{0, 1});
    CHECK(energy(g, best) == 4.5);
  }
  SUBCASE("search space guard") {
    FactorGraph g;
    const std::vector<Candidate> pool(10, {{0, 0}, 1.0});
    for (int i = 0; i < 12; ++i) {
      g.candidates.push_back(pool);
      g.unary.push_back(std::vector<double>(10, 1.0));
      if (i > 0) g.topology.edges.push_back({static_cast<std::size_t>(i - 1),
                                             static_cast<std::size_t>(i)});
    }
    g.pairwise.assign(11, std::vector<double>(100, 1.0));
    try {
      brute_force_map(g);
      FAIL("expected search_space_too_large");
    } catch (const error& e) {
      CHECK(e.code() == errc::search_space_too_large);
    }
  }
}

TEST_CASE("lbp_map basics") {
  SUBCASE("single node converges immediately to the unary argmax") {
    FactorGraph g;
    g.candidates = {{{{0, 0}, 1}, {{1, 0}, 1}, {{2, 0}, 1}}};
    g.unary = {{0.2, 0.1, 0.8}};
    const Labeling l = lbp_map(g);
    CHECK(l.assignment == std::vector<std::size_t>{2});
    CHECK(l.converged);
    CHECK(l.iterations == 1);
  }
  SUBCASE("all-equal scores break ties to all-zero") {
    FactorGraph g;
    for (int i = 0; i < 3; ++i) {
      g.candidates.push_back({{{0, 0}, 1}, {{1, 0}, 1}});
      g.unary.push_back({0.5, 0.5});
    }
    g.topology.edges = {{0, 1}, {1, 2}};
    g.pairwise.assign(2, std::vector<double>(4, 1.0));
    const Labeling l = lbp_map(g);
    CHECK(l.assignment == std::vector<std::size_t>{0, 0, 0});
    CHECK(brute_force_map(g).assignment == l.assignment);
  }
  SUBCASE("parameter validation") {
    FactorGraph g;
    g.candidates = {{{{0, 0}, 1}}};
    g.unary = {{1.0}};
    LbpParams p;
    p.damping = 1.0;
    CHECK_THROWS_AS(lbp_map(g, p), error);
    p = LbpParams{};
    p.tolerance = 0.0;
    CHECK_THROWS_AS(lbp_map(g, p), error);
    p = LbpParams{};
    p.max_iterations = 0;
    CHECK_THROWS_AS(lbp_map(g, p), error);
  }
}

TEST_CASE("lbp_map equals brute force on random trees") {
  std::mt19937_64 rng(424242);
  // tight tolerance resolves random near-ties between labelings
  LbpParams params;
  params.tolerance = 1e-12;
  params.max_iterations = 2000;
  for (int trial = 0; trial < 300; ++trial) {
    const FactorGraph g = test::random_graph(rng, test::GraphTopology::RandomTree);
    const Labeling exact = brute_force_map(g);
    const Labeling approx = lbp_map(g, params);
    CHECK(approx.converged);
    REQUIRE(approx.assignment == exact.assignment);
    CHECK(energy(g, approx) == energy(g, exact));
  }
}

TEST_CASE("lbp_map dominates random labelings on loopy graphs") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 30; ++trial) {
    const FactorGraph g = test::random_graph(rng, test::GraphTopology::SingleCycle);
    const Labeling approx = lbp_map(g);
    const double lbp_energy = energy(g, approx);
    for (int r = 0; r < 1000; ++r) {
      std::vector<std::size_t> a(g.num_nodes());
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = rng() % g.candidates[i].size();
      CHECK(lbp_energy >= energy(g, a));
    }
  }
}

TEST_CASE("non-convergence is reported, never thrown") {
  std::mt19937_64 rng(606);
  const FactorGraph g = test::random_graph(rng, test::GraphTopology::SingleCycle, 6, 4);
  LbpParams starved;
  starved.max_iterations = 1;
  starved.tolerance = 1e-300;
  const Labeling l = lbp_map(g, starved);
  CHECK(!l.converged);
  CHECK(l.iterations == 1);
  CHECK(l.assignment.size() == g.num_nodes());
}

TEST_CASE("lbp_map is deterministic") {
  std::mt19937_64 rng(5150);
  const FactorGraph g = test::random_graph(rng, test::GraphTopology::SingleCycle);
  const Labeling a = lbp_map(g);
  const Labeling b = lbp_map(g);
  CHECK(a.assignment == b.assignment);
  CHECK(a.iterations == b.iterations);
  CHECK(a.converged == b.converged);
}

TEST_CASE("messages stay finite for production-style scores") {
  std::mt19937_64 rng(991);
  for (int trial = 0; trial < 20; ++trial) {
    const FactorGraph g = test::random_graph(rng, test::GraphTopology::SingleCycle, 6, 4);
    const Labeling l = lbp_map(g);
    CHECK(std::isfinite(energy(g, l)));
  }
}

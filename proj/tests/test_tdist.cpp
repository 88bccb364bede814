/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cmath>
#include <random>

#include <doctest.h>

#include "lmg/error.hpp"
#include "lmg/tdist.hpp"

using namespace lmg;

namespace {

std::vector<double> sample_t(double dof, double loc, double scale, std::size_t n,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::gamma_distribution<double> chi2(dof / 2.0, 2.0);
  std::vector<double> out(n);
  for (auto& x : out) x = loc + scale * normal(rng) / std::sqrt(chi2(rng) / dof);
  return out;
}

double normal_loglik(std::span<const double> xs, double mean, double sd) {
  double ll = 0.0;
  for (double x : xs)
    ll += -0.5 * std::log(2.0 * M_PI) - std::log(sd) - 0.5 * (x - mean) * (x - mean) / (sd * sd);
  return ll;
}

}  // namespace

TEST_CASE("t_pdf matches the closed form at the mode") {
  // dof=5, scale=2 at the location
  CHECK(t_pdf(0.0, 5.0, 0.0, 2.0) == doctest::Approx(0.1898033449112472).epsilon(1e-12));
  CHECK(t_pdf(30.0, 5.0, 30.0, 2.0) == doctest::Approx(0.1898033449112472).epsilon(1e-12));
  // dof=1 is Cauchy: pdf(0) = 1/pi
  CHECK(t_pdf(0.0, 1.0, 0.0, 1.0) == doctest::Approx(1.0 / M_PI).epsilon(1e-12));
  CHECK_THROWS_AS(t_pdf(0.0, 0.0, 0.0, 1.0), error);
  CHECK_THROWS_AS(t_pdf(0.0, 1.0, 0.0, 0.0), error);
}

TEST_CASE("fit_t_mle recovers planted parameters within 10%") {
  const auto xs = sample_t(5.0, 30.0, 2.0, 10000, 1234);
  const TFit fit = fit_t_mle(xs);
  CHECK(fit.dof == doctest::Approx(5.0).epsilon(0.10));
  CHECK(fit.loc == doctest::Approx(30.0).epsilon(0.10));
  CHECK(fit.scale == doctest::Approx(2.0).epsilon(0.10));
}

TEST_CASE("fit_t_mle on constant data uses the scale floor") {
  const std::vector<double> xs(10, 42.0);
  const TFit fit = fit_t_mle(xs);
  CHECK(fit.dof == 100.0);
  CHECK(fit.loc == 42.0);
  CHECK(fit.scale == 1e-3);
}

TEST_CASE("fit_t_mle caps the dof on effectively normal data") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> normal(10.0, 3.0);
  std::vector<double> xs(5000);
  for (auto& x : xs) x = normal(rng);
  const TFit fit = fit_t_mle(xs);
  CHECK(fit.dof == 100.0);
  CHECK(fit.loc == doctest::Approx(10.0).epsilon(0.05));
  CHECK(fit.scale == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("fitted likelihood dominates the capped start point") {
  // the profile search must never fall below the effectively-normal member
  // evaluated at the moment estimates
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const auto xs = sample_t(4.0, -3.0, 1.5, 2000, seed);
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size());

    const TFit fit = fit_t_mle(xs);
    double start_ll = 0.0;
    for (double x : xs) start_ll += t_logpdf(x, 100.0, mean, std::sqrt(var));
    CHECK(fit.log_likelihood >= start_ll);
  }
}

TEST_CASE("fitted t beats the moment normal on heavy-tailed data") {
  const auto xs = sample_t(3.0, 12.0, 2.0, 8000, 99);
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());

  const TFit fit = fit_t_mle(xs);
  CHECK(fit.log_likelihood > normal_loglik(xs, mean, std::sqrt(var)));
}

TEST_CASE("fit_t_mle input validation") {
  CHECK_THROWS_AS(fit_t_mle(std::vector<double>{1.0}), error);
  CHECK_THROWS_AS(fit_t_mle(std::vector<double>{1.0, std::nan("")}), error);
}

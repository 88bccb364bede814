#pragma once
/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cstddef>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include "lmg/error.hpp"

namespace lmg {

/// Timestep table for the forward process. Timesteps are 1-based: betas[t-1]
/// is beta_t, alpha_bars[t-1] is the running product of alphas through t.
struct Schedule {
  std::vector<double> betas;
  std::vector<double> alphas;
  std::vector<double> alpha_bars;

  std::size_t timesteps() const { return betas.size(); }
  double beta(std::size_t t) const;
  double alpha(std::size_t t) const;
  double alpha_bar(std::size_t t) const;
};

/// Linear schedule, endpoints inclusive; T = 1 degenerates to beta_start.
Schedule make_schedule(std::size_t timesteps, double beta_start = 1e-4, double beta_end = 0.02);

/// Estimates the noise component of a noisy sample. The trained network in the
/// original setting; an analytic oracle here.
class NoisePredictor {
public:
  virtual ~NoisePredictor() = default;
  virtual std::vector<double> predict(std::span<const double> x_t, std::size_t t) const = 0;
};

class ZeroPredictor final : public NoisePredictor {
public:
  std::vector<double> predict(std::span<const double> x_t, std::size_t) const override {
    return std::vector<double>(x_t.size(), 0.0);
  }
};

/// Exact posterior-mean noise predictor for x0 ~ N(mu, cov):
///   E[x0 | x_t] = mu + sqrt(ab) cov (ab cov + (1-ab) I)^-1 (x_t - sqrt(ab) mu)
///   predict(x_t, t) = (x_t - sqrt(ab) E[x0|x_t]) / sqrt(1-ab),  ab = alpha_bar_t.
/// This minimizes the expected training loss over all predictors for Gaussian
/// data. Per-timestep gain matrices are precomputed with a 1e-12 ridge.
class AnalyticGaussianPredictor final : public NoisePredictor {
public:
  AnalyticGaussianPredictor(std::vector<double> mu, std::vector<double> cov_row_major,
                            const Schedule& schedule);

  std::vector<double> predict(std::span<const double> x_t, std::size_t t) const override;
  std::size_t dimension() const { return mu_.size(); }

private:
  std::vector<double> mu_;
  std::vector<double> sqrt_ab_;                 // per t
  std::vector<std::vector<double>> gain_;       // per t, dim x dim row-major
};

/// Loads "dim <n> / mu <n values> / cov <n rows of n values>" text.
AnalyticGaussianPredictor load_gaussian_oracle(const std::filesystem::path& path,
                                               const Schedule& schedule);

enum class ReverseVariance { Beta, BetaTilde };

/// x_t = sqrt(ab_t) x0 + sqrt(1 - ab_t) eps (the closed-form marginal).
std::vector<double> forward_sample(std::span<const double> x0, std::size_t t,
                                   std::span<const double> eps, const Schedule& schedule);

/// One forward chain step: sqrt(1-beta_t) x_prev + sqrt(beta_t) z.
std::vector<double> forward_step(std::span<const double> x_prev, std::size_t t,
                                 const Schedule& schedule, std::mt19937_64& rng);

/// mean = (x_t - beta_t/sqrt(1-ab_t) predict(x_t,t)) / sqrt(alpha_t);
/// adds sqrt(var_t) noise for t > 1, none at t = 1.
std::vector<double> reverse_step(const NoisePredictor& predictor, std::span<const double> x_t,
                                 std::size_t t, const Schedule& schedule, std::mt19937_64& rng,
                                 ReverseVariance variance = ReverseVariance::Beta);

/// Full reverse chain from x_T ~ N(0, I).
std::vector<double> sample(const NoisePredictor& predictor, std::size_t dim,
                           const Schedule& schedule, std::mt19937_64& rng,
                           ReverseVariance variance = ReverseVariance::Beta);

/// |eps - predict(forward_sample(x0, t, eps), t)|^2
double ddpm_loss(const NoisePredictor& predictor, std::span<const double> x0, std::size_t t,
                 std::span<const double> eps, const Schedule& schedule);

}  // namespace lmg

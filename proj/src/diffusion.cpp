/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "lmg/diffusion.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>

#include "lmg/core.hpp"

namespace lmg {

namespace {

void check_timestep(const Schedule& schedule, std::size_t t, const char* what) {
  if (t < 1 || t > schedule.timesteps())
    fail(errc::out_of_range, std::string(what) + ": timestep " + std::to_string(t) +
                                 " outside [1, " + std::to_string(schedule.timesteps()) + "]");
}

void check_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) fail(errc::dimension_mismatch, std::string(what) + ": dimension mismatch");
}

std::vector<double> draw_normal(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> z(dim);
  for (auto& v : z) v = normal(rng);
  return z;
}

}  // namespace

double Schedule::beta(std::size_t t) const {
  check_timestep(*this, t, "Schedule::beta");
  return betas[t - 1];
}

double Schedule::alpha(std::size_t t) const {
  check_timestep(*this, t, "Schedule::alpha");
  return alphas[t - 1];
}

double Schedule::alpha_bar(std::size_t t) const {
  check_timestep(*this, t, "Schedule::alpha_bar");
  return alpha_bars[t - 1];
}

Schedule make_schedule(std::size_t timesteps, double beta_start, double beta_end) {
  if (timesteps < 1) fail(errc::invalid_argument, "make_schedule: need at least 1 timestep");
  if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0))
    fail(errc::invalid_argument, "make_schedule: need 0 < beta_start <= beta_end < 1");

  Schedule s;
  s.betas.resize(timesteps);
  s.alphas.resize(timesteps);
  s.alpha_bars.resize(timesteps);
  double product = 1.0;
  for (std::size_t t = 0; t < timesteps; ++t) {
    s.betas[t] = timesteps == 1 ? beta_start
                                : beta_start + (beta_end - beta_start) * static_cast<double>(t) /
                                                   static_cast<double>(timesteps - 1);
    s.alphas[t] = 1.0 - s.betas[t];
    product *= s.alphas[t];
    s.alpha_bars[t] = product;
  }
  return s;
}

std::vector<double> forward_sample(std::span<const double> x0, std::size_t t,
                                   std::span<const double> eps, const Schedule& schedule) {
  check_timestep(schedule, t, "forward_sample");
  check_same_dim(x0.size(), eps.size(), "forward_sample");
  const double ab = schedule.alpha_bar(t);
  const double signal = std::sqrt(ab);
  const double noise = std::sqrt(1.0 - ab);
  std::vector<double> out(x0.size());
  for (std::size_t k = 0; k < x0.size(); ++k) out[k] = signal * x0[k] + noise * eps[k];
  return out;
}

std::vector<double> forward_step(std::span<const double> x_prev, std::size_t t,
                                 const Schedule& schedule, std::mt19937_64& rng) {
  check_timestep(schedule, t, "forward_step");
  const double beta = schedule.beta(t);
  const double keep = std::sqrt(1.0 - beta);
  const double noise = std::sqrt(beta);
  const std::vector<double> z = draw_normal(x_prev.size(), rng);
  std::vector<double> out(x_prev.size());
  for (std::size_t k = 0; k < x_prev.size(); ++k) out[k] = keep * x_prev[k] + noise * z[k];
  return out;
}

std::vector<double> reverse_step(const NoisePredictor& predictor, std::span<const double> x_t,
                                 std::size_t t, const Schedule& schedule, std::mt19937_64& rng,
                                 ReverseVariance variance) {
  check_timestep(schedule, t, "reverse_step");
  const std::vector<double> eps_hat = predictor.predict(x_t, t);
  check_same_dim(x_t.size(), eps_hat.size(), "reverse_step: predictor output");
  for (double v : eps_hat)
    if (!std::isfinite(v))
      fail(errc::nonfinite_coordinate, "reverse_step: predictor returned non-finite value");

  const double alpha = schedule.alpha(t);
  const double ab = schedule.alpha_bar(t);
  const double coef = schedule.beta(t) / std::sqrt(1.0 - ab);
  const double inv_sqrt_alpha = 1.0 / std::sqrt(alpha);

  std::vector<double> out(x_t.size());
  for (std::size_t k = 0; k < x_t.size(); ++k)
    out[k] = inv_sqrt_alpha * (x_t[k] - coef * eps_hat[k]);

  if (t > 1) {
    double var = schedule.beta(t);
    if (variance == ReverseVariance::BetaTilde) {
      const double ab_prev = schedule.alpha_bar(t - 1);
      var = (1.0 - ab_prev) / (1.0 - ab) * schedule.beta(t);
    }
    const double sd = std::sqrt(var);
    const std::vector<double> z = draw_normal(x_t.size(), rng);
    for (std::size_t k = 0; k < x_t.size(); ++k) out[k] += sd * z[k];
  }
  return out;
}

std::vector<double> sample(const NoisePredictor& predictor, std::size_t dim,
                           const Schedule& schedule, std::mt19937_64& rng,
                           ReverseVariance variance) {
  if (dim < 1) fail(errc::invalid_argument, "sample: dimension must be >= 1");
  std::vector<double> x = draw_normal(dim, rng);
  for (std::size_t t = schedule.timesteps(); t >= 1; --t)
    x = reverse_step(predictor, x, t, schedule, rng, variance);
  return x;
}

double ddpm_loss(const NoisePredictor& predictor, std::span<const double> x0, std::size_t t,
                 std::span<const double> eps, const Schedule& schedule) {
  const std::vector<double> x_t = forward_sample(x0, t, eps, schedule);
  const std::vector<double> eps_hat = predictor.predict(x_t, t);
  check_same_dim(eps.size(), eps_hat.size(), "ddpm_loss: predictor output");
  double loss = 0.0;
  for (std::size_t k = 0; k < eps.size(); ++k)
    loss += (eps[k] - eps_hat[k]) * (eps[k] - eps_hat[k]);
  return loss;
}

AnalyticGaussianPredictor::AnalyticGaussianPredictor(std::vector<double> mu,
                                                     std::vector<double> cov_row_major,
                                                     const Schedule& schedule)
    : mu_(std::move(mu)) {
  const std::size_t dim = mu_.size();
  if (dim == 0) fail(errc::invalid_argument, "analytic predictor: empty mean");
  if (cov_row_major.size() != dim * dim)
    fail(errc::dimension_mismatch, "analytic predictor: covariance is not dim x dim");

  Eigen::MatrixXd cov(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) cov(r, c) = cov_row_major[r * dim + c];
  if (!cov.isApprox(cov.transpose(), 1e-9))
    fail(errc::invalid_argument, "analytic predictor: covariance must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.eigenvalues().minCoeff() < -1e-9)
    fail(errc::invalid_argument, "analytic predictor: covariance must be positive semidefinite");

  const std::size_t timesteps = schedule.timesteps();
  sqrt_ab_.resize(timesteps);
  gain_.resize(timesteps);
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(dim, dim);
  for (std::size_t t = 1; t <= timesteps; ++t) {
    const double ab = schedule.alpha_bar(t);
    sqrt_ab_[t - 1] = std::sqrt(ab);
    // gain = sqrt(ab) cov (ab cov + (1 - ab) I)^-1, with a ridge floor
    const Eigen::MatrixXd regularized = ab * cov + (1.0 - ab + 1e-12) * identity;
    const Eigen::MatrixXd gain = sqrt_ab_[t - 1] * regularized.ldlt().solve(cov).transpose();
    gain_[t - 1].resize(dim * dim);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) gain_[t - 1][r * dim + c] = gain(r, c);
  }
}

std::vector<double> AnalyticGaussianPredictor::predict(std::span<const double> x_t,
                                                       std::size_t t) const {
  const std::size_t dim = mu_.size();
  check_same_dim(x_t.size(), dim, "analytic predictor");
  if (t < 1 || t > gain_.size())
    fail(errc::out_of_range, "analytic predictor: timestep out of schedule range");

  const double sqrt_ab = sqrt_ab_[t - 1];
  const double noise_scale = std::sqrt(1.0 - sqrt_ab * sqrt_ab);
  const std::vector<double>& gain = gain_[t - 1];

  std::vector<double> centered(dim), posterior_mean(dim), eps(dim);
  for (std::size_t k = 0; k < dim; ++k) centered[k] = x_t[k] - sqrt_ab * mu_[k];
  for (std::size_t r = 0; r < dim; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < dim; ++c) acc += gain[r * dim + c] * centered[c];
    posterior_mean[r] = mu_[r] + acc;
  }
  for (std::size_t k = 0; k < dim; ++k)
    eps[k] = (x_t[k] - sqrt_ab * posterior_mean[k]) / noise_scale;
  return eps;
}

AnalyticGaussianPredictor load_gaussian_oracle(const std::filesystem::path& path,
                                               const Schedule& schedule) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open oracle file '" + path.string() + "'");
  std::string keyword;
  std::size_t dim = 0;
  if (!(in >> keyword >> dim) || keyword != "dim" || dim == 0)
    fail(errc::parse_error, path.string() + ": expected 'dim <n>'");
  if (!(in >> keyword) || keyword != "mu")
    fail(errc::parse_error, path.string() + ": expected 'mu <values>'");
  std::vector<double> mu(dim);
  for (auto& v : mu)
    if (!(in >> v)) fail(errc::parse_error, path.string() + ": truncated mu row");
  if (!(in >> keyword) || keyword != "cov")
    fail(errc::parse_error, path.string() + ": expected 'cov' section");
  std::vector<double> cov(dim * dim);
  for (auto& v : cov)
    if (!(in >> v)) fail(errc::parse_error, path.string() + ": truncated covariance");
  return AnalyticGaussianPredictor(std::move(mu), std::move(cov), schedule);
}

}  // namespace lmg

/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "lmg/tdist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "lmg/error.hpp"

namespace lmg {

double t_logpdf(double x, double dof, double loc, double scale) {
  if (!(dof > 0.0) || !(scale > 0.0))
    fail(errc::invalid_argument, "t_logpdf: dof and scale must be positive");
  const double z = (x - loc) / scale;
  return std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
         0.5 * std::log(dof * std::numbers::pi) - std::log(scale) -
         0.5 * (dof + 1.0) * std::log1p(z * z / dof);
}

double t_pdf(double x, double dof, double loc, double scale) {
  return std::exp(t_logpdf(x, dof, loc, scale));
}

namespace {

struct ProfileFit {
  double loc = 0.0;
  double scale = 0.0;
  double log_likelihood = 0.0;
};

double log_likelihood_at(std::span<const double> xs, double dof, double loc, double scale) {
  double ll = 0.0;
  for (double x : xs) ll += t_logpdf(x, dof, loc, scale);
  return ll;
}

/// EM for (loc, scale) at fixed dof, started at the moment estimates. EM is
/// monotone in the likelihood, so the result never falls below the start.
ProfileFit profile_fit(std::span<const double> xs, double dof, double start_loc,
                       double start_scale, double scale_floor) {
  const std::size_t n = xs.size();
  double loc = start_loc;
  double var = std::max(start_scale, scale_floor);
  var *= var;
  double prev_ll = log_likelihood_at(xs, dof, loc, std::sqrt(var));
  std::vector<double> w(n);
  for (std::size_t it = 0; it < 500; ++it) {
    double wsum = 0.0, wx = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double z2 = (xs[k] - loc) * (xs[k] - loc) / var;
      w[k] = (dof + 1.0) / (dof + z2);
      wsum += w[k];
      wx += w[k] * xs[k];
    }
    loc = wx / wsum;
    double wss = 0.0;
    for (std::size_t k = 0; k < n; ++k) wss += w[k] * (xs[k] - loc) * (xs[k] - loc);
    var = std::max(wss / static_cast<double>(n), scale_floor * scale_floor);
    const double ll = log_likelihood_at(xs, dof, loc, std::sqrt(var));
    if (std::abs(ll - prev_ll) <= 1e-8 * (std::abs(prev_ll) + 1.0)) {
      prev_ll = ll;
      break;
    }
    prev_ll = ll;
  }
  return {loc, std::sqrt(var), prev_ll};
}

}  // namespace

TFit fit_t_mle(std::span<const double> samples, double dof_min, double dof_max,
               double scale_floor) {
  if (samples.size() < 2) fail(errc::invalid_argument, "fit_t_mle: need at least 2 samples");
  if (!(dof_min > 0.0 && dof_max >= dof_min))
    fail(errc::invalid_argument, "fit_t_mle: bad dof bounds");
  for (double x : samples)
    if (!std::isfinite(x)) fail(errc::nonfinite_coordinate, "fit_t_mle: non-finite sample");

  const std::size_t n = samples.size();
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var /= static_cast<double>(n);
  const double sd = std::sqrt(var);

  if (sd <= scale_floor) {
    // constant data: effectively-normal spike at the mean
    TFit out{dof_max, mean, scale_floor, 0.0};
    out.log_likelihood = log_likelihood_at(samples, out.dof, out.loc, out.scale);
    return out;
  }

  const auto profile = [&](double dof) { return profile_fit(samples, dof, mean, sd, scale_floor); };

  // coarse log-spaced sweep, then golden-section refinement of the bracket
  const int grid = 17;
  double best_dof = dof_min;
  double best_ll = -std::numeric_limits<double>::infinity();
  std::vector<double> grid_dofs(grid);
  for (int g = 0; g < grid; ++g) {
    const double f = static_cast<double>(g) / (grid - 1);
    grid_dofs[g] = dof_min * std::pow(dof_max / dof_min, f);
  }
  int best_g = 0;
  for (int g = 0; g < grid; ++g) {
    const double ll = profile(grid_dofs[g]).log_likelihood;
    if (ll > best_ll) {
      best_ll = ll;
      best_dof = grid_dofs[g];
      best_g = g;
    }
  }

  double lo = grid_dofs[std::max(0, best_g - 1)];
  double hi = grid_dofs[std::min(grid - 1, best_g + 1)];
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - golden * (b - a), x2 = a + golden * (b - a);
  double f1 = profile(x1).log_likelihood, f2 = profile(x2).log_likelihood;
  for (int it = 0; it < 80 && (b - a) > 1e-6 * b; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - golden * (b - a);
      f1 = profile(x1).log_likelihood;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + golden * (b - a);
      f2 = profile(x2).log_likelihood;
    }
  }
  std::vector<double> finalists{best_dof, 0.5 * (a + b)};
  // a boundary optimum must be reported as the bound itself
  if (best_g == 0) finalists.push_back(dof_min);
  if (best_g == grid - 1) finalists.push_back(dof_max);
  best_ll = -std::numeric_limits<double>::infinity();
  for (double dof : finalists) {
    const double ll = profile(dof).log_likelihood;
    if (ll > best_ll) {
      best_ll = ll;
      best_dof = dof;
    }
  }

  const ProfileFit fit = profile(best_dof);
  return {best_dof, fit.loc, std::max(fit.scale, scale_floor), fit.log_likelihood};
}

}  // namespace lmg

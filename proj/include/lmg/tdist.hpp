#pragma once
/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cstddef>
#include <span>

namespace lmg {

double t_logpdf(double x, double dof, double loc, double scale);
double t_pdf(double x, double dof, double loc, double scale);

struct TFit {
  double dof = 0.0;
  double loc = 0.0;
  double scale = 0.0;
  double log_likelihood = 0.0;
};

/// Location-scale Student-t maximum likelihood. (loc, scale) by EM at fixed
/// dof (stop: relative log-likelihood change < 1e-8 or 500 iterations), dof by
/// coarse grid plus golden-section refinement of the profile likelihood on
/// [dof_min, dof_max]. A boundary optimum reports the bound itself.
TFit fit_t_mle(std::span<const double> samples, double dof_min = 1.0, double dof_max = 100.0,
               double scale_floor = 1e-3);

}  // namespace lmg

#pragma once

#include <cstdint>
#include <functional>

#include "crftiw/types.hpp"

namespace crftiw::sindex {

struct FitOptions {
  /// Kernel bandwidth; <= 0 selects sd(index) * n^(-1/5), recomputed for every
  /// candidate index direction during optimization.
  double bandwidth = 0.0;
  /// Freeze the automatic bandwidth at the initial direction instead of
  /// recomputing it per candidate.
  bool freeze_bandwidth = false;
  /// Exclude observation i from its own Nadaraya-Watson sum.
  bool leave_one_out = false;
  int restarts = 8;
  std::uint64_t seed = 0;
  int max_iterations = 400;
};

/// Fitted single-index regression: unit-norm index direction, Gaussian-kernel
/// link trained on the pooled centered responses of all feature columns.
struct IndexFit {
  Vec gamma;        // unit norm, first (unconstrained) component >= 0
  double bandwidth = 0.0;
  Vec index;        // X * gamma
  Mat centered;     // n x (J+1) centered responses
  Vec pooled;       // row means of `centered`; the shared link's responses
  Mat covariates;   // n x d
  double loss = 0.0;
  FitOptions options;
};

struct CovariateEffect {
  Vec mu;                      // positive, sample mean 1
  double normalization = 1.0;  // mean of exp(link) before rescaling
};

/// Subtract column means. Throws EmptyInput for fewer than two rows.
Mat center_features(const Mat& features);

/// Nadaraya-Watson estimate of column `column` of the fit's centered
/// responses at index value u, under index direction `gamma` (bandwidth
/// follows the fit's options for that direction).
double nw_estimate(const IndexFit& fit, const Vec& gamma, double u, Index column);

/// The fitted shared link at an arbitrary index value (all training points).
double link_at(const IndexFit& fit, double u);

/// Link values at the training points, honoring the leave-one-out option.
Vec fitted_values(const IndexFit& fit);

IndexFit fit_gamma(const Mat& features, const Mat& covariates, const FitOptions& opts = {});

/// Same fit with component `zero_index` pinned to exactly zero; the remaining
/// components live on the unit sphere of dimension d-1.
IndexFit fit_gamma_constrained(const Mat& features, const Mat& covariates, Index zero_index,
                               const FitOptions& opts = {});

/// Pooled squared loss of the fit's responses under an arbitrary candidate
/// direction, using the fit's bandwidth policy.
double loss_at(const IndexFit& fit, const Vec& gamma);

/// Centered responses minus the fitted link, one shared link for all columns.
Mat residuals(const IndexFit& fit);

/// exp(link) at the training points, rescaled to sample mean one.
CovariateEffect covariate_effect(const IndexFit& fit);

/// exp(link) evaluated at arbitrary covariate rows, rescaled so the returned
/// effects have sample mean one. Throws EmptyNeighborhood when an index value
/// falls outside the kernel's reach.
CovariateEffect covariate_effect(const IndexFit& fit, const Mat& covariates);

/// Divide each curve (row) by its region's effect. Throws NonPositiveEffect.
Mat adjust_curves(const Mat& curves, const Vec& effect);

/// link(x' gamma) - link(x'' gamma): the log odds ratio between two
/// covariate profiles.
double log_odds(const IndexFit& fit, const Vec& x, const Vec& x_prime);

/// Mean squared pairwise-difference error between fitted and true link
/// values; additive constants cancel.
double link_error(const Vec& fitted, const Vec& truth);
double link_error(const IndexFit& fit, const std::function<double(double)>& true_link,
                  const Vec& true_gamma, const Mat& covariates);

}  // namespace crftiw::sindex

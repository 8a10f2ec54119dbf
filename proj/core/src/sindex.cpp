#include "crftiw/sindex.hpp"

#include <cmath>
#include <limits>

#include "crftiw/errors.hpp"
#include "crftiw/optimize.hpp"
#include "crftiw/rng.hpp"

namespace crftiw::sindex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gaussian kernel up to the 1/sqrt(2*pi) constant, which cancels in the
// Nadaraya-Watson ratio.
double kernel(double t) { return std::exp(-0.5 * t * t); }

double index_sd(const Vec& index) {
  const auto n = index.size();
  const double mean = index.mean();
  double ss = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double d = index[i] - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(n - 1));
}

// Bandwidth for a candidate index: sd * n^(-1/5), or the fixed override.
double bandwidth_for(const Vec& index, const FitOptions& opts) {
  if (opts.bandwidth > 0.0) return opts.bandwidth;
  const double sd = index_sd(index);
  if (!(sd > 0.0)) throw DegenerateCovariates("index values are constant; bandwidth undefined");
  return sd * std::pow(static_cast<double>(index.size()), -0.2);
}

// NW ratio at u over the given responses; `exclude` drops one observation
// (pass -1 to keep all). Throws if every kernel weight underflows.
double nw_ratio(const Vec& index, const Vec& responses, double u, double h, Index exclude) {
  double num = 0.0, den = 0.0;
  for (Index i = 0; i < index.size(); ++i) {
    if (i == exclude) continue;
    const double w = kernel((u - index[i]) / h);
    num += w * responses[i];
    den += w;
  }
  if (den < 1e-300) throw EmptyNeighborhood("no kernel mass at index value");
  return num / den;
}

// Pooled squared loss for a candidate direction. Because all columns share
// the one link, the link is NW on the row-mean responses.
double pooled_loss(const Mat& centered, const Vec& pooled, const Mat& covariates, const Vec& gamma,
                   double h, bool leave_one_out) {
  const Vec index = covariates * gamma;
  const Index n = centered.rows();
  double loss = 0.0;
  for (Index i = 0; i < n; ++i) {
    double fit;
    try {
      fit = nw_ratio(index, pooled, index[i], h, leave_one_out ? i : Index{-1});
    } catch (const EmptyNeighborhood&) {
      return kInf;
    }
    for (Index j = 0; j < centered.cols(); ++j) {
      const double r = centered(i, j) - fit;
      loss += r * r;
    }
  }
  return loss;
}

// Spherical angles <-> unit vector. d-1 angles parameterize the sphere;
// gamma[0] = cos(a0), gamma[k] = sin(a0)..sin(a_{k-1}) cos(a_k).
Vec from_angles(const Vec& angles) {
  const Index d = angles.size() + 1;
  Vec g(d);
  double sines = 1.0;
  for (Index k = 0; k < angles.size(); ++k) {
    g[k] = sines * std::cos(angles[k]);
    sines *= std::sin(angles[k]);
  }
  g[d - 1] = sines;
  return g;
}

Vec to_angles(const Vec& gamma) {
  const Index d = gamma.size();
  Vec angles(d - 1);
  double tail = gamma.squaredNorm();
  for (Index k = 0; k < d - 1; ++k) {
    const double r = std::sqrt(std::max(tail, 0.0));
    angles[k] = r > 0.0 ? std::acos(std::clamp(gamma[k] / r, -1.0, 1.0)) : 0.0;
    tail -= gamma[k] * gamma[k];
  }
  return angles;
}

// Flip sign so the first component of largest magnitude is positive,
// resolving the +/- ambiguity of the index direction.
void canonicalize_sign(Vec& gamma) {
  for (Index k = 0; k < gamma.size(); ++k) {
    if (std::abs(gamma[k]) > 1e-12) {
      if (gamma[k] < 0.0) gamma = -gamma;
      return;
    }
  }
}

void check_inputs(const Mat& features, const Mat& covariates) {
  if (features.rows() < 2) throw EmptyInput("need at least two regions");
  if (features.rows() != covariates.rows())
    throw LengthMismatch("features and covariates disagree on region count");
  if (!features.allFinite() || !covariates.allFinite())
    throw NonFiniteInput("non-finite entries in regression input");
  for (Index j = 0; j < covariates.cols(); ++j) {
    const double mean = covariates.col(j).mean();
    if ((covariates.col(j).array() - mean).abs().maxCoeff() < 1e-12)
      throw DegenerateCovariates("covariate column has zero variance");
  }
}

// Core fit on an explicit optimization dimension; `embed` lifts the reduced
// direction into full coordinates (identity for the unconstrained fit).
IndexFit fit_core(const Mat& features, const Mat& covariates, const FitOptions& opts,
                  const std::function<Vec(const Vec&)>& embed, Index reduced_dim) {
  check_inputs(features, covariates);

  IndexFit fit;
  fit.options = opts;
  fit.covariates = covariates;
  fit.centered = center_features(features);
  fit.pooled = fit.centered.rowwise().mean();

  const Index n = covariates.rows();

  if (reduced_dim == 1) {
    Vec g = embed((Vec(1) << 1.0).finished());
    canonicalize_sign(g);
    fit.gamma = g;
    fit.index = covariates * g;
    fit.bandwidth = bandwidth_for(fit.index, opts);
    fit.loss = pooled_loss(fit.centered, fit.pooled, covariates, g, fit.bandwidth,
                           opts.leave_one_out);
    return fit;
  }

  // Frozen bandwidth comes from the equal-weight diagonal start.
  double frozen = 0.0;
  if (opts.freeze_bandwidth && opts.bandwidth <= 0.0) {
    const Vec start = embed(Vec::Constant(reduced_dim, 1.0 / std::sqrt(double(reduced_dim))));
    frozen = bandwidth_for(covariates * start, opts);
  }

  auto loss_of = [&](const Vec& angles) -> double {
    const Vec g = embed(from_angles(angles));
    const Vec index = covariates * g;
    double h;
    if (opts.bandwidth > 0.0) {
      h = opts.bandwidth;
    } else if (opts.freeze_bandwidth) {
      h = frozen;
    } else {
      const double sd = index_sd(index);
      if (!(sd > 0.0)) return kInf;
      h = sd * std::pow(static_cast<double>(n), -0.2);
    }
    return pooled_loss(fit.centered, fit.pooled, covariates, g, h, opts.leave_one_out);
  };

  optimize::NelderMeadOptions nm;
  nm.max_iterations = opts.max_iterations;

  Rng rng(Rng::derive(opts.seed, 0x5e11));
  Vec best_angles;
  double best = kInf;
  for (int r = 0; r < std::max(1, opts.restarts); ++r) {
    Vec start(reduced_dim);
    if (r == 0) {
      start.setConstant(1.0 / std::sqrt(static_cast<double>(reduced_dim)));
    } else {
      for (Index k = 0; k < reduced_dim; ++k) start[k] = rng.normal();
      const double nrm = start.norm();
      if (nrm < 1e-12) continue;
      start /= nrm;
    }
    const auto res = optimize::nelder_mead(loss_of, to_angles(start), nm);
    if (res.value < best) {
      best = res.value;
      best_angles = res.x;
    }
  }
  if (!std::isfinite(best)) throw OptimizerFailure("no restart produced a finite loss");

  Vec g = embed(from_angles(best_angles));
  canonicalize_sign(g);
  fit.gamma = g;
  fit.index = covariates * g;
  fit.bandwidth = opts.bandwidth > 0.0 ? opts.bandwidth
                  : opts.freeze_bandwidth ? frozen
                                          : bandwidth_for(fit.index, opts);
  fit.loss = pooled_loss(fit.centered, fit.pooled, covariates, g, fit.bandwidth,
                         opts.leave_one_out);
  return fit;
}

}  // namespace

Mat center_features(const Mat& features) {
  if (features.rows() < 2) throw EmptyInput("need at least two regions to center");
  if (!features.allFinite()) throw NonFiniteInput("non-finite feature entries");
  return features.rowwise() - features.colwise().mean();
}

double nw_estimate(const IndexFit& fit, const Vec& gamma, double u, Index column) {
  if (column < 0 || column >= fit.centered.cols()) throw EmptyInput("column out of range");
  const Vec index = fit.covariates * gamma;
  const double h = fit.options.bandwidth > 0.0 ? fit.options.bandwidth
                                               : bandwidth_for(index, fit.options);
  return nw_ratio(index, fit.centered.col(column), u, h, -1);
}

double link_at(const IndexFit& fit, double u) {
  return nw_ratio(fit.index, fit.pooled, u, fit.bandwidth, -1);
}

Vec fitted_values(const IndexFit& fit) {
  const Index n = fit.index.size();
  Vec out(n);
  for (Index i = 0; i < n; ++i)
    out[i] = nw_ratio(fit.index, fit.pooled, fit.index[i], fit.bandwidth,
                      fit.options.leave_one_out ? i : Index{-1});
  return out;
}

IndexFit fit_gamma(const Mat& features, const Mat& covariates, const FitOptions& opts) {
  if (covariates.cols() < 1) throw EmptyInput("need at least one covariate");
  auto identity = [](const Vec& g) { return g; };
  return fit_core(features, covariates, opts, identity, covariates.cols());
}

IndexFit fit_gamma_constrained(const Mat& features, const Mat& covariates, Index zero_index,
                               const FitOptions& opts) {
  const Index d = covariates.cols();
  if (zero_index < 0 || zero_index >= d) throw EmptyInput("constraint index out of range");
  if (d < 2) throw EmptyInput("constrained fit needs at least two covariates");
  auto embed = [d, zero_index](const Vec& g) {
    Vec full = Vec::Zero(d);
    Index k = 0;
    for (Index j = 0; j < d; ++j)
      if (j != zero_index) full[j] = g[k++];
    return full;
  };
  return fit_core(features, covariates, opts, embed, d - 1);
}

double loss_at(const IndexFit& fit, const Vec& gamma) {
  if (gamma.size() != fit.covariates.cols())
    throw LengthMismatch("candidate direction dimension mismatch");
  const Vec index = fit.covariates * gamma;
  const double h = fit.options.bandwidth > 0.0 ? fit.options.bandwidth
                   : fit.options.freeze_bandwidth ? fit.bandwidth
                                                  : bandwidth_for(index, fit.options);
  return pooled_loss(fit.centered, fit.pooled, fit.covariates, gamma, h,
                     fit.options.leave_one_out);
}

Mat residuals(const IndexFit& fit) {
  const Vec fitted = fitted_values(fit);
  return fit.centered.colwise() - fitted;
}

CovariateEffect covariate_effect(const IndexFit& fit) {
  const Vec fitted = fitted_values(fit);
  CovariateEffect eff;
  eff.mu = fitted.array().exp();
  eff.normalization = eff.mu.mean();
  if (!(eff.normalization > 0.0)) throw NonPositiveEffect("effect normalization is not positive");
  eff.mu /= eff.normalization;
  return eff;
}

CovariateEffect covariate_effect(const IndexFit& fit, const Mat& covariates) {
  if (covariates.rows() == 0) throw EmptyInput("no covariate rows to evaluate");
  if (covariates.cols() != fit.gamma.size())
    throw LengthMismatch("covariate dimension does not match the fitted index");
  CovariateEffect eff;
  eff.mu.resize(covariates.rows());
  for (Index i = 0; i < covariates.rows(); ++i)
    eff.mu[i] = std::exp(link_at(fit, covariates.row(i).dot(fit.gamma)));
  eff.normalization = eff.mu.mean();
  if (!(eff.normalization > 0.0)) throw NonPositiveEffect("effect normalization is not positive");
  eff.mu /= eff.normalization;
  return eff;
}

Mat adjust_curves(const Mat& curves, const Vec& effect) {
  if (curves.rows() != effect.size())
    throw LengthMismatch("curve count does not match effect length");
  if ((effect.array() <= 0.0).any()) throw NonPositiveEffect("effect values must be positive");
  return curves.array().colwise() / effect.array();
}

double log_odds(const IndexFit& fit, const Vec& x, const Vec& x_prime) {
  if (x.size() != fit.gamma.size() || x_prime.size() != fit.gamma.size())
    throw LengthMismatch("covariate profile dimension mismatch");
  return link_at(fit, x.dot(fit.gamma)) - link_at(fit, x_prime.dot(fit.gamma));
}

double link_error(const Vec& fitted, const Vec& truth) {
  if (fitted.size() != truth.size()) throw LengthMismatch("fitted/truth length mismatch");
  const Index n = fitted.size();
  if (n == 0) throw EmptyInput("empty link comparison");
  double total = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k) {
      const double d = (fitted[i] - fitted[k]) - (truth[i] - truth[k]);
      total += d * d;
    }
  return total / (static_cast<double>(n) * static_cast<double>(n));
}

double link_error(const IndexFit& fit, const std::function<double(double)>& true_link,
                  const Vec& true_gamma, const Mat& covariates) {
  const Index n = covariates.rows();
  Vec fitted(n), truth(n);
  for (Index i = 0; i < n; ++i) {
    fitted[i] = link_at(fit, covariates.row(i).dot(fit.gamma));
    truth[i] = true_link(covariates.row(i).dot(true_gamma));
  }
  return link_error(fitted, truth);
}

}  // namespace crftiw::sindex

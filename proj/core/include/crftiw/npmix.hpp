#pragma once

#include <cstdint>
#include <vector>

#include "crftiw/types.hpp"

namespace crftiw::npmix {

struct KmeansResult {
  std::vector<int> labels;  // n entries in [0, k)
  Mat centers;              // k x d
  double wcss = 0.0;
};

/// Lloyd's algorithm with k-means++ seeding, best of `restarts` runs.
KmeansResult kmeans(const Mat& data, int k, int restarts = 10, std::uint64_t seed = 0,
                    int max_iterations = 100);

struct MixtureOptions {
  Vec bandwidths;               // empty selects sd_j * n^(-1/5) per column
  int grid_size = 512;
  double grid_pad = 3.0;        // grid spans data range +/- pad * bandwidth
  int max_iterations = 500;
  double tol = 1e-8;            // |loglik change| convergence threshold
  double density_floor = 1e-12;
  double soft_weight = 0.9;     // posterior mass on a point's k-means cluster
  int reseed_attempts = 5;      // restarts allowed after a component empties
  std::uint64_t seed = 0;
  int kmeans_restarts = 10;
};

/// One per-component, per-feature density on a fixed grid.
struct MixtureModel {
  int n_components = 0;
  Vec weights;                        // L mixing proportions
  std::vector<Vec> grids;             // J+1 grids, grid_size points each
  std::vector<Vec> grid_steps;        // trapezoid quadrature weights per grid
  std::vector<std::vector<Vec>> densities;  // [component][feature] on the grid
  Vec bandwidths;                     // J+1 per-feature kernel bandwidths
  double grid_pad = 3.0;              // evaluation tolerance beyond grid ends
};

struct MixtureFit {
  MixtureModel model;
  Mat posteriors;           // n x L
  std::vector<int> labels;  // map rule, ids in 1..L
  double loglik = 0.0;
  std::vector<double> loglik_trace;  // one entry per iteration
  int iterations = 0;
  bool converged = false;
};

/// Column bandwidths sd_j * n^(-1/5).
Vec kde_bandwidths(const Mat& data);

/// Kernel-smoothed density value exp{ sum_k c_k (1/h)K((x-u_k)/h) ln g(u_k) }
/// by trapezoid quadrature; Gaussian kernel. Throws GridMismatch when x lies
/// more than `range_tolerance` beyond either grid end.
double smooth_density(const Vec& grid, const Vec& quad_weights, const Vec& density, double x,
                      double h, double range_tolerance);

/// Log of the smoothed joint density of one observation under one component.
double component_log_density(const MixtureModel& model, int component, const Vec& x);

/// Smoothed log-likelihood of a dataset under a fitted model.
double smoothed_loglik(const MixtureModel& model, const Mat& data);

/// Responsibility matrix t_il, rows normalized in log space.
Mat posteriors(const MixtureModel& model, const Mat& data);

/// Posterior component probabilities for one observation.
Vec posterior(const MixtureModel& model, const Vec& x);

/// Argmax rule; ties go to the lowest component index. Labels are 1-based.
std::vector<int> map_assign(const Mat& posteriors);

/// Smoothed-likelihood EM for the conditionally independent nonparametric
/// mixture. Rows of `data` are observations, columns features.
MixtureFit fit_mixture(const Mat& data, int n_components, const MixtureOptions& opts = {});

/// Elbow rule on log-likelihoods for L = 1..L_max: the smallest L whose gain
/// to L+1 drops below `threshold`, L_max when no gain does.
int select_l(const std::vector<double>& logliks, double threshold = 15.0);

struct SelectionResult {
  int selected = 0;
  std::vector<double> logliks;  // indexed by L - 1, L = 1..max_components
  std::vector<MixtureFit> fits;
};

SelectionResult select_n_components(const Mat& data, int max_components, double threshold = 15.0,
                                    const MixtureOptions& opts = {});

}  // namespace crftiw::npmix

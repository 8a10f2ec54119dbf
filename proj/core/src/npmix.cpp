#include "crftiw/npmix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crftiw/errors.hpp"
#include "crftiw/rng.hpp"

namespace crftiw::npmix {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

double gauss(double t) { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }

std::vector<int> assign_labels(const Mat& data, const Mat& centers) {
  std::vector<int> labels(static_cast<std::size_t>(data.rows()));
  for (Index i = 0; i < data.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (Index c = 0; c < centers.rows(); ++c) {
      const double d = (data.row(i) - centers.row(c)).squaredNorm();
      if (d < best) {
        best = d;
        arg = static_cast<int>(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = arg;
  }
  return labels;
}

KmeansResult kmeans_once(const Mat& data, int k, Rng& rng, int max_iterations) {
  const Index n = data.rows();
  Mat centers(k, data.cols());

  // k-means++ seeding.
  centers.row(0) = data.row(static_cast<Index>(rng.uniform_int(static_cast<std::uint64_t>(n))));
  Vec dist2 = (data.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = dist2.sum();
    Index pick;
    if (total > 0.0) {
      double target = rng.uniform() * total, cum = 0.0;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        cum += dist2[i];
        if (cum >= target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Index>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    }
    centers.row(c) = data.row(pick);
    for (Index i = 0; i < n; ++i)
      dist2[i] = std::min(dist2[i], (data.row(i) - centers.row(c)).squaredNorm());
  }

  std::vector<int> labels = assign_labels(data, centers);
  for (int iter = 0; iter < max_iterations; ++iter) {
    Mat sums = Mat::Zero(k, data.cols());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(labels[static_cast<std::size_t>(i)]);
      sums.row(static_cast<Index>(c)) += data.row(i);
      ++counts[c];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      } else {
        // Revive an empty cluster with the point farthest from its center.
        Index far = 0;
        double worst = -1.0;
        for (Index i = 0; i < n; ++i) {
          const double d =
              (data.row(i) - centers.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
          if (d > worst) {
            worst = d;
            far = i;
          }
        }
        centers.row(c) = data.row(far);
      }
    }
    std::vector<int> next = assign_labels(data, centers);
    const bool stable = next == labels;
    labels = std::move(next);
    if (stable) break;
  }

  KmeansResult res;
  res.labels = std::move(labels);
  res.centers = std::move(centers);
  for (Index i = 0; i < n; ++i)
    res.wcss +=
        (data.row(i) - res.centers.row(res.labels[static_cast<std::size_t>(i)])).squaredNorm();
  return res;
}

struct Workspace {
  std::vector<Mat> kernels;  // per feature: n x m matrix of (1/h)K((x-u)/h)
  MixtureModel model;
};

Workspace make_workspace(const Mat& data, int n_components, const MixtureOptions& opts) {
  Workspace ws;
  ws.model.n_components = n_components;
  ws.model.grid_pad = opts.grid_pad;
  if (opts.bandwidths.size() == 0) {
    ws.model.bandwidths = kde_bandwidths(data);
  } else {
    if (opts.bandwidths.size() != data.cols())
      throw LengthMismatch("bandwidth count does not match feature count");
    if ((opts.bandwidths.array() <= 0.0).any())
      throw NumericalUnderflow("bandwidths must be positive");
    ws.model.bandwidths = opts.bandwidths;
  }

  const Index n = data.rows(), p = data.cols();
  const int m = opts.grid_size;
  if (m < 2) throw EmptyInput("grid needs at least two points");

  ws.model.grids.resize(static_cast<std::size_t>(p));
  ws.model.grid_steps.resize(static_cast<std::size_t>(p));
  ws.kernels.resize(static_cast<std::size_t>(p));
  for (Index j = 0; j < p; ++j) {
    const double h = ws.model.bandwidths[j];
    const double lo = data.col(j).minCoeff() - opts.grid_pad * h;
    const double hi = data.col(j).maxCoeff() + opts.grid_pad * h;
    Vec grid = Vec::LinSpaced(m, lo, hi);
    const double dx = (hi - lo) / static_cast<double>(m - 1);
    Vec steps = Vec::Constant(m, dx);
    steps[0] = steps[m - 1] = dx / 2.0;

    Mat kern(n, m);
    for (Index i = 0; i < n; ++i)
      for (int g = 0; g < m; ++g) kern(i, g) = gauss((data(i, j) - grid[g]) / h) / h;

    ws.model.grids[static_cast<std::size_t>(j)] = std::move(grid);
    ws.model.grid_steps[static_cast<std::size_t>(j)] = std::move(steps);
    ws.kernels[static_cast<std::size_t>(j)] = std::move(kern);
  }

  ws.model.densities.assign(static_cast<std::size_t>(n_components),
                            std::vector<Vec>(static_cast<std::size_t>(p)));
  ws.model.weights = Vec::Constant(n_components, 1.0 / n_components);
  return ws;
}

// Weight and density update from posteriors; returns the smallest weight.
double m_step(Workspace& ws, const Mat& posts, const MixtureOptions& opts) {
  auto& model = ws.model;
  const auto p = static_cast<Index>(ws.kernels.size());
  model.weights = posts.colwise().mean();
  for (int l = 0; l < model.n_components; ++l) {
    const double mass = posts.col(l).sum();
    if (mass <= 0.0) continue;  // caller handles the empty component
    for (Index j = 0; j < p; ++j) {
      Vec g = ws.kernels[static_cast<std::size_t>(j)].transpose() * posts.col(l) / mass;
      const double integral = g.dot(model.grid_steps[static_cast<std::size_t>(j)]);
      if (!(integral > 0.0)) throw NumericalUnderflow("density update integrates to zero");
      g /= integral;
      g = g.cwiseMax(opts.density_floor);
      model.densities[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] = std::move(g);
    }
  }
  return model.weights.minCoeff();
}

// Smoothed log-likelihood and fresh posteriors for the current model, using
// the precomputed kernel matrices.
double e_step(const Workspace& ws, Mat& posts) {
  const auto& model = ws.model;
  const Index n = ws.kernels.front().rows();
  const auto p = static_cast<Index>(ws.kernels.size());
  const int L = model.n_components;

  Mat logf = Mat::Zero(n, L);
  for (int l = 0; l < L; ++l)
    for (Index j = 0; j < p; ++j) {
      const Vec weighted_log = ws.model.grid_steps[static_cast<std::size_t>(j)].cwiseProduct(
          model.densities[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)]
              .array()
              .log()
              .matrix());
      logf.col(l) += ws.kernels[static_cast<std::size_t>(j)] * weighted_log;
    }

  double loglik = 0.0;
  for (Index i = 0; i < n; ++i) {
    Vec row(L);
    for (int l = 0; l < L; ++l) row[l] = std::log(model.weights[l]) + logf(i, l);
    const double mx = row.maxCoeff();
    const double lse = mx + std::log((row.array() - mx).exp().sum());
    loglik += lse;
    for (int l = 0; l < L; ++l) posts(i, l) = std::exp(row[l] - lse);
  }
  return loglik;
}

Mat soft_posteriors(const std::vector<int>& labels, int L, double soft_weight) {
  const auto n = static_cast<Index>(labels.size());
  if (L == 1) return Mat::Ones(n, 1);
  const double off = (1.0 - soft_weight) / static_cast<double>(L - 1);
  Mat post = Mat::Constant(n, L, off);
  for (Index i = 0; i < n; ++i) post(i, labels[static_cast<std::size_t>(i)]) = soft_weight;
  return post;
}

}  // namespace

KmeansResult kmeans(const Mat& data, int k, int restarts, std::uint64_t seed,
                    int max_iterations) {
  if (data.rows() < 1) throw EmptyInput("no observations to cluster");
  if (!data.allFinite()) throw NonFiniteInput("non-finite entries in clustering input");
  if (k < 1 || k > data.rows()) throw InvalidL("cluster count must be in [1, n]");
  KmeansResult best;
  best.wcss = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, restarts); ++r) {
    Rng rng(Rng::derive(seed, 0x6b6d00 + static_cast<std::uint64_t>(r)));
    KmeansResult run = kmeans_once(data, k, rng, max_iterations);
    if (run.wcss < best.wcss) best = std::move(run);
  }
  return best;
}

Vec kde_bandwidths(const Mat& data) {
  const Index n = data.rows();
  if (n < 2) throw TooFewValues("bandwidth selection needs at least two observations");
  Vec h(data.cols());
  for (Index j = 0; j < data.cols(); ++j) {
    const double mean = data.col(j).mean();
    const double sd =
        std::sqrt((data.col(j).array() - mean).square().sum() / static_cast<double>(n - 1));
    if (!(sd > 0.0)) throw DegenerateScale(static_cast<int>(j), "feature column is constant");
    h[j] = sd * std::pow(static_cast<double>(n), -0.2);
  }
  return h;
}

double smooth_density(const Vec& grid, const Vec& quad_weights, const Vec& density, double x,
                      double h, double range_tolerance) {
  if (grid.size() != quad_weights.size() || grid.size() != density.size())
    throw GridMismatch("grid, weights and density lengths disagree");
  if (grid.size() < 2) throw EmptyInput("grid needs at least two points");
  if (!(h > 0.0)) throw NumericalUnderflow("bandwidth must be positive");
  if (x < grid[0] - range_tolerance || x > grid[grid.size() - 1] + range_tolerance)
    throw GridMismatch("evaluation point lies outside the density grid");
  double acc = 0.0;
  for (Index k = 0; k < grid.size(); ++k)
    acc += quad_weights[k] * (gauss((x - grid[k]) / h) / h) * std::log(density[k]);
  return std::exp(acc);
}

double component_log_density(const MixtureModel& model, int component, const Vec& x) {
  if (component < 0 || component >= model.n_components)
    throw InvalidL("component index out of range");
  const auto p = static_cast<Index>(model.grids.size());
  if (x.size() != p) throw GridMismatch("observation dimension does not match model");
  double total = 0.0;
  for (Index j = 0; j < p; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const double h = model.bandwidths[j];
    total += std::log(smooth_density(model.grids[ju], model.grid_steps[ju],
                                     model.densities[static_cast<std::size_t>(component)][ju],
                                     x[j], h, model.grid_pad * h));
  }
  return total;
}

double smoothed_loglik(const MixtureModel& model, const Mat& data) {
  if (data.rows() < 1) throw EmptyInput("no observations to score");
  double total = 0.0;
  for (Index i = 0; i < data.rows(); ++i) {
    Vec row(model.n_components);
    for (int l = 0; l < model.n_components; ++l)
      row[l] = std::log(model.weights[l]) + component_log_density(model, l, data.row(i));
    const double mx = row.maxCoeff();
    total += mx + std::log((row.array() - mx).exp().sum());
  }
  return total;
}

Mat posteriors(const MixtureModel& model, const Mat& data) {
  const int L = model.n_components;
  Mat post(data.rows(), L);
  for (Index i = 0; i < data.rows(); ++i) {
    Vec row(L);
    for (int l = 0; l < L; ++l)
      row[l] = std::log(model.weights[l]) + component_log_density(model, l, data.row(i));
    const double mx = row.maxCoeff();
    const double lse = mx + std::log((row.array() - mx).exp().sum());
    post.row(i) = (row.array() - lse).exp();
  }
  return post;
}

Vec posterior(const MixtureModel& model, const Vec& x) {
  const int L = model.n_components;
  Vec row(L);
  for (int l = 0; l < L; ++l)
    row[l] = std::log(model.weights[l]) + component_log_density(model, l, x);
  const double mx = row.maxCoeff();
  const double lse = mx + std::log((row.array() - mx).exp().sum());
  return (row.array() - lse).exp();
}

std::vector<int> map_assign(const Mat& posteriors) {
  std::vector<int> labels(static_cast<std::size_t>(posteriors.rows()));
  for (Index i = 0; i < posteriors.rows(); ++i) {
    Index arg = 0;
    for (Index l = 1; l < posteriors.cols(); ++l)
      if (posteriors(i, l) > posteriors(i, arg)) arg = l;  // ties keep the lower index
    labels[static_cast<std::size_t>(i)] = static_cast<int>(arg) + 1;
  }
  return labels;
}

MixtureFit fit_mixture(const Mat& data, int n_components, const MixtureOptions& opts) {
  if (data.rows() < 2) throw EmptyInput("mixture fit needs at least two observations");
  if (!data.allFinite()) throw NonFiniteInput("non-finite entries in mixture input");
  if (n_components < 1 || n_components > data.rows())
    throw InvalidL("component count must be in [1, n]");

  for (int attempt = 0;; ++attempt) {
    Workspace ws = make_workspace(data, n_components, opts);
    const auto km = kmeans(data, n_components, opts.kmeans_restarts,
                           Rng::derive(opts.seed, static_cast<std::uint64_t>(attempt)), 100);
    Mat posts = soft_posteriors(km.labels, n_components, opts.soft_weight);

    MixtureFit fit;
    bool empty = false;
    double prev = -std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
      const double min_weight = m_step(ws, posts, opts);
      if (min_weight < 1e-8) {
        empty = true;
        break;
      }
      const double loglik = e_step(ws, posts);
      fit.loglik_trace.push_back(loglik);
      fit.loglik = loglik;
      fit.iterations = iter;
      if (iter > 1 && std::abs(loglik - prev) < opts.tol) {
        fit.converged = true;
        break;
      }
      prev = loglik;
    }
    if (empty) {
      if (attempt + 1 >= opts.reseed_attempts)
        throw EmptyComponent("component weight vanished in every reseed attempt");
      continue;
    }

    fit.model = std::move(ws.model);
    fit.posteriors = std::move(posts);
    fit.labels = map_assign(fit.posteriors);
    return fit;
  }
}

int select_l(const std::vector<double>& logliks, double threshold) {
  if (logliks.size() < 2) throw TooFewValues("elbow rule needs log-likelihoods for L = 1, 2, ...");
  const int l_max = static_cast<int>(logliks.size());
  for (int l = 1; l < l_max; ++l) {
    const double gain =
        logliks[static_cast<std::size_t>(l)] - logliks[static_cast<std::size_t>(l - 1)];
    if (gain < threshold) return l;
  }
  return l_max;
}

SelectionResult select_n_components(const Mat& data, int max_components, double threshold,
                                    const MixtureOptions& opts) {
  if (max_components < 2) throw InvalidL("need at least two candidate component counts");
  SelectionResult res;
  for (int L = 1; L <= max_components; ++L) {
    res.fits.push_back(fit_mixture(data, L, opts));
    res.logliks.push_back(res.fits.back().loglik);
  }
  res.selected = select_l(res.logliks, threshold);
  return res;
}

}  // namespace crftiw::npmix

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "crftiw/errors.hpp"
#include "crftiw/rng.hpp"
#include "crftiw/sindex.hpp"
#include "crftiw/wavelet.hpp"
#include "doctest.h"

using crftiw::Index;
using crftiw::Mat;
using crftiw::Rng;
using crftiw::Vec;
namespace si = crftiw::sindex;

namespace {

Mat random_matrix(Index rows, Index cols, Rng& rng) {
  Mat m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

// A fit whose training state is hand-planted rather than estimated.
si::IndexFit toy_fit(const Mat& covariates, const Mat& responses, double bandwidth) {
  si::IndexFit fit;
  fit.covariates = covariates;
  fit.centered = responses;
  fit.pooled = responses.rowwise().mean();
  fit.gamma = Vec::Ones(covariates.cols()) / std::sqrt(double(covariates.cols()));
  fit.options.bandwidth = bandwidth;
  fit.bandwidth = bandwidth;
  fit.index = covariates * fit.gamma;
  return fit;
}

}  // namespace

TEST_CASE("center_features hand cases") {
  Mat one_col(2, 1);
  one_col << 1, 3;
  const Mat c1 = si::center_features(one_col);
  CHECK(c1(0, 0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(c1(1, 0) == doctest::Approx(1.0).epsilon(1e-15));

  Mat two(2, 2);
  two << 1, 4, 3, 6;
  const Mat c2 = si::center_features(two);
  CHECK(c2(0, 0) == doctest::Approx(-1.0));
  CHECK(c2(0, 1) == doctest::Approx(-1.0));
  CHECK(c2(1, 0) == doctest::Approx(1.0));
  CHECK(c2(1, 1) == doctest::Approx(1.0));

  Rng rng(3);
  const Mat big = si::center_features(random_matrix(50, 4, rng));
  CHECK(big.colwise().mean().cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(si::center_features(Mat::Ones(1, 3)), crftiw::EmptyInput);
}

TEST_CASE("nadaraya-watson hand value") {
  Mat x(2, 1), y(2, 1);
  x << 0, 1;
  y << 0, 1;
  const auto fit = toy_fit(x, y, 1.0);
  // K(0)*0 + K(1)*1 over K(0)+K(1) = exp(-1/2)/(1+exp(-1/2)).
  CHECK(si::nw_estimate(fit, Vec::Ones(1), 0.0, 0) ==
        doctest::Approx(0.37754066879814546).epsilon(1e-14));
}

TEST_CASE("nadaraya-watson basic identities") {
  Rng rng(5);
  Mat x = random_matrix(20, 1, rng);
  const Mat y = Mat::Constant(20, 1, 4.2);
  const auto fit = toy_fit(x, y, 0.7);
  CHECK(si::nw_estimate(fit, Vec::Ones(1), 0.3, 0) == doctest::Approx(4.2).epsilon(1e-12));

  Mat xs(2, 1), ys(2, 1);
  xs << -1, 1;  // symmetric about 0
  ys << 3, 7;
  const auto fit2 = toy_fit(xs, ys, 1.3);
  CHECK(si::nw_estimate(fit2, Vec::Ones(1), 0.0, 0) == doctest::Approx(5.0).epsilon(1e-12));

  CHECK_THROWS_AS(si::nw_estimate(fit2, Vec::Ones(1), 1e9, 0), crftiw::EmptyNeighborhood);
}

TEST_CASE("one covariate forces gamma = [1]") {
  Rng rng(7);
  const Mat x = random_matrix(30, 1, rng);
  const Mat y = random_matrix(30, 3, rng);
  const auto fit = si::fit_gamma(y, x);
  REQUIRE(fit.gamma.size() == 1);
  CHECK(fit.gamma[0] == 1.0);
  CHECK(fit.bandwidth > 0.0);
}

TEST_CASE("noiseless squared link recovers the true direction") {
  Rng rng(11);
  const Index n = 200;
  const Mat x = random_matrix(n, 2, rng);
  const Vec truth = Vec::Constant(2, 1.0 / std::numbers::sqrt2);
  Mat y(n, 1);
  for (Index i = 0; i < n; ++i) {
    const double a = x.row(i).dot(truth);
    y(i, 0) = a * a;
  }
  const auto fit = si::fit_gamma(y, x);
  CHECK(std::abs(fit.gamma.norm() - 1.0) < 1e-10);
  CHECK(fit.gamma[0] > 0.0);
  const double angle = std::acos(std::clamp(std::abs(fit.gamma.dot(truth)), 0.0, 1.0));
  CHECK(angle < 0.05);

  // Fine grid search over the half-sphere as an independent optimum check.
  double grid_best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 721; ++k) {
    const double theta = std::numbers::pi * k / 721.0;
    Vec g(2);
    g << std::cos(theta), std::sin(theta);
    grid_best = std::min(grid_best, si::loss_at(fit, g));
  }
  CHECK(fit.loss <= grid_best + 1e-6 * (1.0 + std::abs(grid_best)));
}

TEST_CASE("optimized loss beats random directions") {
  Rng rng(13);
  const Index n = 80;
  const Mat x = random_matrix(n, 3, rng);
  Mat y(n, 2);
  for (Index i = 0; i < n; ++i) {
    const double a = x(i, 0) * 0.8 + x(i, 1) * 0.6;
    y(i, 0) = a * a + 0.1 * rng.normal();
    y(i, 1) = a * a + 0.1 * rng.normal();
  }
  const auto fit = si::fit_gamma(y, x);
  Rng dirs(99);
  for (int k = 0; k < 64; ++k) {
    Vec g(3);
    for (Index j = 0; j < 3; ++j) g[j] = dirs.normal();
    g /= g.norm();
    CHECK(fit.loss <= si::loss_at(fit, g) + 1e-9);
  }
}

TEST_CASE("degenerate covariates are rejected") {
  Rng rng(17);
  Mat x = random_matrix(20, 2, rng);
  x.col(1).setConstant(2.0);
  const Mat y = random_matrix(20, 2, rng);
  CHECK_THROWS_AS(si::fit_gamma(y, x), crftiw::DegenerateCovariates);
}

TEST_CASE("constrained fit pins one coordinate to zero") {
  Rng rng(19);
  const Index n = 60;
  {
    const Mat x = random_matrix(n, 2, rng);
    Mat y(n, 1);
    for (Index i = 0; i < n; ++i) y(i, 0) = std::sin(x(i, 0));
    const auto fit = si::fit_gamma_constrained(y, x, 1);
    REQUIRE(fit.gamma.size() == 2);
    CHECK(fit.gamma[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.gamma[1] == 0.0);
  }
  {
    const Mat x = random_matrix(n, 3, rng);
    Mat y(n, 1);
    for (Index i = 0; i < n; ++i) y(i, 0) = x(i, 0) * x(i, 0);  // gamma* = [1,0,0]
    const auto full = si::fit_gamma(y, x);
    const auto constrained = si::fit_gamma_constrained(y, x, 0);
    CHECK(constrained.gamma[0] == 0.0);
    CHECK(std::abs(constrained.gamma.norm() - 1.0) < 1e-10);
    CHECK(constrained.loss > full.loss);
  }
}

TEST_CASE("fitted link plus residuals reconstructs the centered features") {
  Rng rng(23);
  const Mat x = random_matrix(40, 2, rng);
  const Mat y = random_matrix(40, 4, rng);
  const auto fit = si::fit_gamma(y, x);
  const Mat resid = si::residuals(fit);
  const Vec fitted = si::fitted_values(fit);
  const Mat rebuilt = resid.colwise() + fitted;
  CHECK((rebuilt - fit.centered).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("independent covariates leave features nearly untouched") {
  Rng rng(29);
  const Index n = 200;
  const Mat x = random_matrix(n, 2, rng);
  const Mat y = random_matrix(n, 3, rng);  // no relation to x
  const auto fit = si::fit_gamma(y, x);
  const Vec fitted = si::fitted_values(fit);
  const double fitted_sd = std::sqrt(fitted.squaredNorm() / double(n));
  CHECK(fitted_sd < 0.5);  // responses have unit scale; the link stays near zero
}

TEST_CASE("covariate effect is normalized to mean one") {
  Rng rng(31);
  const Mat x = random_matrix(50, 2, rng);
  Mat y(50, 2);
  for (Index i = 0; i < 50; ++i) {
    const double a = x.row(i).sum() / std::numbers::sqrt2;
    y(i, 0) = 0.3 * a * a + 0.05 * rng.normal();
    y(i, 1) = 0.3 * a * a + 0.05 * rng.normal();
  }
  const auto fit = si::fit_gamma(y, x);
  const auto effect = si::covariate_effect(fit);
  CHECK((effect.mu.array() > 0.0).all());
  CHECK(effect.mu.mean() == doctest::Approx(1.0).epsilon(1e-10));

  // Constant responses give a flat link, hence a unit effect everywhere.
  const auto flat = si::fit_gamma(Mat::Ones(50, 2) * 2.5, x);
  const auto flat_effect = si::covariate_effect(flat);
  CHECK((flat_effect.mu.array() - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("covariate effect evaluates at arbitrary profiles") {
  Rng rng(53);
  const Mat x = random_matrix(60, 2, rng);
  Mat y(60, 2);
  for (Index i = 0; i < 60; ++i) {
    const double a = x.row(i).sum() / std::numbers::sqrt2;
    y(i, 0) = 0.4 * a * a;
    y(i, 1) = 0.4 * a * a;
  }
  const auto fit = si::fit_gamma(y, x);

  // On the training covariates the overload agrees with the one-argument form.
  const auto train = si::covariate_effect(fit);
  const auto same = si::covariate_effect(fit, x);
  CHECK((train.mu - same.mu).cwiseAbs().maxCoeff() < 1e-12);

  // A subset renormalizes to its own mean but keeps the effect ratios.
  const Mat head = x.topRows(10);
  const auto sub = si::covariate_effect(fit, head);
  CHECK(sub.mu.mean() == doctest::Approx(1.0).epsilon(1e-10));
  for (Index i = 1; i < 10; ++i)
    CHECK(sub.mu[i] / sub.mu[0] == doctest::Approx(train.mu[i] / train.mu[0]).epsilon(1e-10));

  CHECK_THROWS_AS(si::covariate_effect(fit, Mat(0, 2)), crftiw::EmptyInput);
  CHECK_THROWS_AS(si::covariate_effect(fit, Mat::Ones(3, 5)), crftiw::LengthMismatch);
}

TEST_CASE("adjust_curves divides rows by the effect") {
  Mat curves(2, 4);
  curves << 2, 4, 6, 8, 1, 2, 3, 4;
  Vec ones = Vec::Ones(2);
  CHECK((si::adjust_curves(curves, ones) - curves).cwiseAbs().maxCoeff() == 0.0);

  Vec eff(2);
  eff << 2.0, 1.0;
  const Mat adj = si::adjust_curves(curves, eff);
  CHECK(adj(0, 3) == doctest::Approx(4.0));
  CHECK(adj(1, 3) == doctest::Approx(4.0));

  Vec bad(2);
  bad << 1.0, -0.5;
  CHECK_THROWS_AS(si::adjust_curves(curves, bad), crftiw::NonPositiveEffect);
}

TEST_CASE("adjustment commutes with log features") {
  Rng rng(37);
  Mat curves(3, 32);
  for (Index i = 0; i < 3; ++i)
    for (Index t = 0; t < 32; ++t) curves(i, t) = rng.normal();
  Vec eff(3);
  eff << 0.5, 1.0, 2.0;
  const auto filter = crftiw::wavelet::WaveletFilter::symmlet8();
  const Mat feat_adjusted = crftiw::wavelet::featurize_ti_all(si::adjust_curves(curves, eff), filter);
  const Mat feat_raw = crftiw::wavelet::featurize_ti_all(curves, filter);
  for (Index i = 0; i < 3; ++i)
    CHECK((feat_adjusted.row(i).array() - feat_raw.row(i).array() + std::log(eff[i]))
              .abs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("log odds identities") {
  Rng rng(41);
  const Index n = 100;
  const Mat x = random_matrix(n, 2, rng);
  Mat y(n, 1);
  for (Index i = 0; i < n; ++i) y(i, 0) = x.row(i).sum() + 0.05 * rng.normal();
  const auto fit = si::fit_gamma(y, x);

  const Vec a = x.row(3).transpose(), b = x.row(7).transpose();
  CHECK(si::log_odds(fit, a, a) == 0.0);
  CHECK(si::log_odds(fit, a, b) == doctest::Approx(-si::log_odds(fit, b, a)).epsilon(1e-12));

  // Monotone link: the sign of the odds follows the sign of the index gap.
  int checked = 0;
  for (Index i = 0; i + 1 < 20; i += 2) {
    const Vec xi = x.row(i).transpose(), xk = x.row(i + 1).transpose();
    const double gap = (xi - xk).dot(fit.gamma);
    if (std::abs(gap) < 0.5) continue;
    CHECK(si::log_odds(fit, xi, xk) * gap > 0.0);
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("pairwise link error") {
  Vec same(3);
  same << 0.2, -0.4, 1.0;
  CHECK(si::link_error(same, same) == 0.0);
  const Vec offset = same.array() + 5.0;
  CHECK(si::link_error(offset, same) < 1e-24);

  Vec fitted(2), truth(2);
  fitted << 0.0, 0.3;
  truth << 0.0, 0.0;
  CHECK(si::link_error(fitted, truth) == doctest::Approx(0.045).epsilon(1e-15));

  Vec short_vec(1);
  CHECK_THROWS_AS(si::link_error(fitted, short_vec), crftiw::LengthMismatch);
}

TEST_CASE("bandwidth options change the fit policy") {
  Rng rng(43);
  const Mat x = random_matrix(50, 2, rng);
  Mat y(50, 1);
  for (Index i = 0; i < 50; ++i) y(i, 0) = std::tanh(x.row(i).sum()) + 0.1 * rng.normal();

  si::FitOptions fixed;
  fixed.bandwidth = 0.9;
  const auto fit_fixed = si::fit_gamma(y, x, fixed);
  CHECK(fit_fixed.bandwidth == 0.9);

  si::FitOptions frozen;
  frozen.freeze_bandwidth = true;
  const auto fit_frozen = si::fit_gamma(y, x, frozen);
  CHECK(fit_frozen.bandwidth > 0.0);

  si::FitOptions loo;
  loo.leave_one_out = true;
  const auto fit_loo = si::fit_gamma(y, x, loo);
  CHECK(std::abs(fit_loo.gamma.norm() - 1.0) < 1e-10);
}

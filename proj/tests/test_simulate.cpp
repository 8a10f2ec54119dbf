#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "crftiw/errors.hpp"
#include "crftiw/rng.hpp"
#include "crftiw/simulate.hpp"
#include "crftiw/wavelet.hpp"
#include "doctest.h"

using crftiw::Index;
using crftiw::Mat;
using crftiw::Rng;
using crftiw::Vec;
namespace sim = crftiw::simulate;

TEST_CASE("component means are clipped sinusoids") {
  CHECK(sim::component_mean(1, 256, 256, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sim::component_mean(1, 64, 64, 0.3) == doctest::Approx(1.0).epsilon(1e-15));

  // sin hits zero at t = 0.4 T and stays clipped through the negative arc.
  CHECK(std::abs(sim::component_mean(1, 4, 10, 0.3)) < 1e-15);
  for (Index t = 5; t <= 7; ++t) CHECK(sim::component_mean(1, t, 10, 0.3) == 0.0);
  for (Index t = 1; t <= 64; ++t) CHECK(sim::component_mean(1, t, 64, 0.3) >= 0.0);

  CHECK_THROWS_AS(sim::component_mean(0, 1, 64, 0.3), crftiw::InvalidScenario);
  CHECK_THROWS_AS(sim::component_mean(4, 1, 64, 0.3), crftiw::InvalidScenario);
}

TEST_CASE("second class scales the first by 1 + separation") {
  const Vec u1 = sim::component_curve(1, 64, 0.3);
  const Vec u2 = sim::component_curve(2, 64, 0.3);
  CHECK((u2 - 1.3 * u1).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("vanishing separation collapses all classes onto the first") {
  const Vec u1 = sim::component_curve(1, 128, 0.0);
  const Vec u2 = sim::component_curve(2, 128, 0.0);
  const Vec u3 = sim::component_curve(3, 128, 0.0);
  CHECK((u2 - u1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((u3 - u1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("third class bends amplitude only past the midpoint") {
  const Index T = 64;
  const double varsigma = 0.3;
  for (Index t = 1; t <= T; ++t) {
    const double a = (2 * t > T) ? 1.3 : 1.0;
    const double raw = a * std::sin(2.2 * std::numbers::pi * double(t) / double(T));
    CHECK(sim::component_mean(3, t, T, varsigma) == (raw > 0.0 ? raw : 0.0));
  }
}

TEST_CASE("noise path determinism and marginal scale") {
  const Vec a = sim::gen_noise(100, std::uint64_t{42});
  const Vec b = sim::gen_noise(100, std::uint64_t{42});
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a - sim::gen_noise(100, std::uint64_t{43})).cwiseAbs().maxCoeff() > 0.0);

  // First entries over many seeded paths have sd 0.2.
  const int paths = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < paths; ++s) {
    const double e0 = sim::gen_noise(1, std::uint64_t(s))[0];
    sum += e0;
    sum_sq += e0 * e0;
  }
  const double mean = sum / paths;
  const double sd = std::sqrt(sum_sq / paths - mean * mean);
  CHECK(std::abs(sd - 0.2) < 0.01);
  CHECK(std::abs(mean) < 0.01);

  CHECK_THROWS_AS(sim::gen_noise(0, std::uint64_t{1}), crftiw::EmptySeries);
}

TEST_CASE("noise recursion standardizes to unit normals") {
  const Index T = 100000;
  const Vec eps = sim::gen_noise(T, std::uint64_t{7});
  double sum = 0.0, sum_sq = 0.0;
  for (Index t = 1; t < T; ++t) {
    const double z = eps[t] / (0.2 + 0.2 * eps[t - 1] * eps[t - 1]);
    sum += z;
    sum_sq += z * z;
  }
  const double n = double(T - 1);
  const double mean = sum / n;
  const double sd = std::sqrt(sum_sq / n - mean * mean);
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(sd - 1.0) < 0.02);
}

TEST_CASE("link carries the covariate effect only in scenarios 1 and 2") {
  sim::ScenarioConfig cfg;
  cfg.varsigma = 0.3;
  for (int s : {1, 2}) {
    cfg.scenario = s;
    CHECK(sim::nu_value(cfg, 1.0) == doctest::Approx(1.0));
    CHECK(sim::nu_value(cfg, 0.0) == doctest::Approx(0.7));
    CHECK(sim::nu_value(cfg, 2.0) == doctest::Approx(1.9));
  }
  cfg.scenario = 3;
  CHECK(sim::nu_value(cfg, 5.0) == 1.0);

  CHECK(sim::has_covariate_effect(1));
  CHECK(sim::has_covariate_effect(2));
  CHECK(!sim::has_covariate_effect(3));
  CHECK(sim::has_shifts(1));
  CHECK(!sim::has_shifts(2));
  CHECK(sim::has_shifts(3));
}

TEST_CASE("link averages to one over standard normal indices") {
  sim::ScenarioConfig cfg;
  cfg.scenario = 1;
  Rng rng(2026);
  const int draws = 100000;
  double sum = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double a = (rng.normal() + rng.normal()) / std::numbers::sqrt2;
    sum += sim::nu_value(cfg, a);
  }
  CHECK(std::abs(sum / draws - 1.0) < 0.02);
}

TEST_CASE("shift semantics") {
  Vec base(4);
  base << 1, 2, 3, 4;

  const Vec delayed = sim::apply_shift(base, 1, sim::ShiftMode::kCircular);
  CHECK(delayed[0] == 4.0);
  CHECK(delayed[1] == 1.0);
  CHECK(delayed[2] == 2.0);
  CHECK(delayed[3] == 3.0);

  const Vec padded = sim::apply_shift(base, 2, sim::ShiftMode::kPadded);
  CHECK(padded[0] == 0.0);
  CHECK(padded[1] == 0.0);
  CHECK(padded[2] == 1.0);
  CHECK(padded[3] == 2.0);

  for (auto mode : {sim::ShiftMode::kCircular, sim::ShiftMode::kPadded})
    CHECK((sim::apply_shift(base, 0, mode) - base).cwiseAbs().maxCoeff() == 0.0);

  // Circular delays compose modulo T.
  const Vec twice = sim::apply_shift(sim::apply_shift(base, 3, sim::ShiftMode::kCircular), 2,
                                     sim::ShiftMode::kCircular);
  const Vec direct = sim::apply_shift(base, (3 + 2) % 4, sim::ShiftMode::kCircular);
  CHECK((twice - direct).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(sim::apply_shift(base, 4, sim::ShiftMode::kCircular), crftiw::InvalidScenario);
  CHECK_THROWS_AS(sim::apply_shift(base, -1, sim::ShiftMode::kCircular), crftiw::InvalidScenario);
}

TEST_CASE("replicates are pure functions of the config") {
  sim::ScenarioConfig cfg;
  cfg.scenario = 1;
  cfg.n = 30;
  cfg.T = 64;
  cfg.delta = 16;
  cfg.seed = 99;
  const auto a = sim::gen_replicate(cfg);
  const auto b = sim::gen_replicate(cfg);
  CHECK((a.curves - b.curves).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.covariates - b.covariates).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.labels == b.labels);
  CHECK(a.shifts == b.shifts);

  cfg.seed = 100;
  const auto c = sim::gen_replicate(cfg);
  CHECK((a.curves - c.curves).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("label frequencies match the multinomial") {
  sim::ScenarioConfig cfg;
  cfg.scenario = 2;
  cfg.n = 10000;
  cfg.T = 8;
  cfg.delta = 2;
  cfg.seed = 5;
  const auto rep = sim::gen_replicate(cfg);
  double freq[3] = {0, 0, 0};
  for (int z : rep.labels) {
    REQUIRE(z >= 1);
    REQUIRE(z <= 3);
    freq[z - 1] += 1.0 / cfg.n;
  }
  CHECK(std::abs(freq[0] - 0.50) < 0.02);
  CHECK(std::abs(freq[1] - 0.25) < 0.02);
  CHECK(std::abs(freq[2] - 0.25) < 0.02);
}

TEST_CASE("shifts appear only in scenarios 1 and 3") {
  sim::ScenarioConfig cfg;
  cfg.n = 2000;
  cfg.T = 256;
  cfg.delta = 50;
  cfg.seed = 17;

  cfg.scenario = 2;
  const auto rep2 = sim::gen_replicate(cfg);
  for (Index d : rep2.shifts) CHECK(d == 0);

  for (int s : {1, 3}) {
    cfg.scenario = s;
    const auto rep = sim::gen_replicate(cfg);
    double shifted = 0.0;
    for (Index d : rep.shifts) {
      CHECK((d == 0 || d == 50));
      if (d == 50) shifted += 1.0 / cfg.n;
    }
    CHECK(std::abs(shifted - 0.5) < 0.05);
  }
}

TEST_CASE("noiseless scenario 2 factorizes exactly") {
  sim::ScenarioConfig cfg;
  cfg.scenario = 2;
  cfg.n = 40;
  cfg.T = 64;
  cfg.seed = 23;
  cfg.noise = false;
  const auto rep = sim::gen_replicate(cfg);
  Vec means[3];
  for (int c = 1; c <= 3; ++c) means[c - 1] = sim::component_curve(c, cfg.T, cfg.varsigma);
  for (Index i = 0; i < cfg.n; ++i) {
    const double mu = sim::nu_value(cfg, rep.covariates.row(i).dot(rep.true_gamma));
    const Vec expected = mu * means[rep.labels[size_t(i)] - 1];
    CHECK((rep.curves.row(i).transpose() - expected).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("circular shifts leave translation-invariant features unchanged") {
  sim::ScenarioConfig cfg;
  cfg.scenario = 3;
  cfg.n = 20;
  cfg.T = 64;
  cfg.delta = 16;
  cfg.seed = 31;
  cfg.noise = false;
  const auto rep = sim::gen_replicate(cfg);

  const auto filter = crftiw::wavelet::WaveletFilter::symmlet8();
  Mat unshifted(cfg.n, cfg.T);
  for (Index i = 0; i < cfg.n; ++i)
    unshifted.row(i) = sim::component_curve(rep.labels[size_t(i)], cfg.T, cfg.varsigma);
  const Mat feat_shifted = crftiw::wavelet::featurize_ti_all(rep.curves, filter);
  const Mat feat_plain = crftiw::wavelet::featurize_ti_all(unshifted, filter);
  CHECK((feat_shifted - feat_plain).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("padded shifts zero-fill the onset") {
  sim::ScenarioConfig cfg;
  cfg.scenario = 3;
  cfg.n = 50;
  cfg.T = 64;
  cfg.delta = 12;
  cfg.seed = 37;
  cfg.noise = false;
  cfg.shift_mode = sim::ShiftMode::kPadded;
  const auto rep = sim::gen_replicate(cfg);
  int shifted_rows = 0;
  for (Index i = 0; i < cfg.n; ++i) {
    if (rep.shifts[size_t(i)] == 0) continue;
    ++shifted_rows;
    CHECK(rep.curves.row(i).head(12).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(shifted_rows > 0);
}

TEST_CASE("config validation") {
  sim::ScenarioConfig cfg;
  cfg.T = 32;

  auto broken = cfg;
  broken.scenario = 0;
  CHECK_THROWS_AS(sim::gen_replicate(broken), crftiw::InvalidScenario);
  broken = cfg;
  broken.n = 0;
  CHECK_THROWS_AS(sim::gen_replicate(broken), crftiw::NonPositivePopulation);
  broken = cfg;
  broken.T = 100;
  CHECK_THROWS_AS(sim::gen_replicate(broken), crftiw::NonDyadicLength);
  broken = cfg;
  broken.varsigma = 0.0;
  CHECK_THROWS_AS(sim::gen_replicate(broken), crftiw::InvalidScenario);
  broken = cfg;
  broken.varsigma = 1.0;
  CHECK_THROWS_AS(sim::gen_replicate(broken), crftiw::InvalidScenario);
  broken = cfg;
  broken.delta = 32;
  CHECK_THROWS_AS(sim::gen_replicate(broken), crftiw::InvalidScenario);
  broken = cfg;
  broken.shift_prob = 1.5;
  CHECK_THROWS_AS(sim::gen_replicate(broken), crftiw::InvalidScenario);
}

#include "crftiw/simulate.hpp"

#include <cmath>
#include <numbers>

#include "crftiw/errors.hpp"
#include "crftiw/wavelet.hpp"

namespace crftiw::simulate {

namespace {

void check_config(const ScenarioConfig& cfg) {
  if (cfg.scenario < 1 || cfg.scenario > 3) throw InvalidScenario("scenario must be 1, 2 or 3");
  if (cfg.n < 1) throw NonPositivePopulation("sample size must be positive");
  if (!wavelet::is_dyadic(cfg.T)) throw NonDyadicLength("curve length must be dyadic");
  if (!(cfg.varsigma > 0.0 && cfg.varsigma < 1.0))
    throw InvalidScenario("separation parameter must lie in (0, 1)");
  if (cfg.delta < 0 || cfg.delta >= cfg.T)
    throw InvalidScenario("shift must lie in [0, T)");
  if (!(cfg.shift_prob >= 0.0 && cfg.shift_prob <= 1.0))
    throw InvalidScenario("shift probability must lie in [0, 1]");
}

int draw_label(Rng& rng) {
  const double u = rng.uniform();
  if (u < 0.5) return 1;
  if (u < 0.75) return 2;
  return 3;
}

}  // namespace

double component_mean(int component, Index t, Index T, double varsigma) {
  if (component < 1 || component > 3) throw InvalidScenario("class id must be 1, 2 or 3");
  double a, b;
  switch (component) {
    case 1:
      a = 1.0;
      b = 2.5;
      break;
    case 2:
      a = 1.0 + varsigma;
      b = 2.5;
      break;
    default:
      a = 1.0 + (2 * t > T ? varsigma : 0.0);
      b = 2.5 - varsigma;
      break;
  }
  const double r = a * std::sin(b * std::numbers::pi * static_cast<double>(t) /
                                static_cast<double>(T));
  return r > 0.0 ? r : 0.0;
}

Vec component_curve(int component, Index T, double varsigma) {
  Vec u(T);
  for (Index t = 1; t <= T; ++t) u[t - 1] = component_mean(component, t, T, varsigma);
  return u;
}

Vec gen_noise(Index T, Rng& rng) {
  if (T < 1) throw EmptySeries("noise path needs at least one step");
  Vec eps(T);
  eps[0] = 0.2 * rng.normal();
  for (Index t = 1; t < T; ++t) eps[t] = (0.2 + 0.2 * eps[t - 1] * eps[t - 1]) * rng.normal();
  return eps;
}

Vec gen_noise(Index T, std::uint64_t seed) {
  Rng rng(seed);
  return gen_noise(T, rng);
}

bool has_covariate_effect(int scenario) { return scenario == 1 || scenario == 2; }

bool has_shifts(int scenario) { return scenario == 1 || scenario == 3; }

double nu_value(const ScenarioConfig& config, double a) {
  if (!has_covariate_effect(config.scenario)) return 1.0;
  return 1.0 + config.varsigma * (a * a - 1.0);
}

Vec apply_shift(const Vec& base, Index delta, ShiftMode mode) {
  const Index T = base.size();
  if (delta < 0 || delta >= T) throw InvalidScenario("shift must lie in [0, T)");
  Vec out(T);
  if (mode == ShiftMode::kCircular) {
    for (Index t = 0; t < T; ++t) out[t] = base[((t - delta) % T + T) % T];
  } else {
    out.setZero();
    for (Index t = delta; t < T; ++t) out[t] = base[t - delta];
  }
  return out;
}

Replicate gen_replicate(const ScenarioConfig& config) {
  check_config(config);

  Replicate rep;
  rep.config = config;
  rep.curves.resize(config.n, config.T);
  rep.covariates.resize(config.n, 2);
  rep.labels.resize(static_cast<std::size_t>(config.n));
  rep.shifts.resize(static_cast<std::size_t>(config.n));
  rep.true_gamma = Vec::Constant(2, 1.0 / std::numbers::sqrt2);

  Vec means[3];
  for (int c = 1; c <= 3; ++c) means[c - 1] = component_curve(c, config.T, config.varsigma);

  Rng rng(Rng::derive(config.seed, 0x51));
  for (Index i = 0; i < config.n; ++i) {
    const int z = draw_label(rng);
    rep.labels[static_cast<std::size_t>(i)] = z;
    rep.covariates(i, 0) = rng.normal();
    rep.covariates(i, 1) = rng.normal();

    Index delta = 0;
    if (has_shifts(config.scenario) && rng.uniform() < config.shift_prob) delta = config.delta;
    rep.shifts[static_cast<std::size_t>(i)] = delta;

    Vec base = means[z - 1];
    if (config.noise) base += gen_noise(config.T, rng);
    const double mu = nu_value(config, rep.covariates.row(i).dot(rep.true_gamma));
    rep.curves.row(i) = mu * apply_shift(base, delta, config.shift_mode);
  }
  return rep;
}

}  // namespace crftiw::simulate

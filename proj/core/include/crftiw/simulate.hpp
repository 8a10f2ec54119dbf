#pragma once

#include <cstdint>
#include <vector>

#include "crftiw/rng.hpp"
#include "crftiw/types.hpp"

namespace crftiw::simulate {

enum class ShiftMode { kCircular, kPadded };

struct ScenarioConfig {
  int scenario = 1;          // 1: shifts+covariates, 2: covariates, 3: shifts
  Index n = 100;
  Index T = 256;
  double varsigma = 0.3;
  Index delta = 50;          // shift magnitude, applied with probability 1/2
  double shift_prob = 0.5;
  std::uint64_t seed = 0;
  ShiftMode shift_mode = ShiftMode::kCircular;
  bool noise = true;
};

struct Replicate {
  Mat curves;                 // n x T
  Mat covariates;             // n x 2
  std::vector<int> labels;    // class ids in {1,2,3}
  std::vector<Index> shifts;  // applied delays
  Vec true_gamma;             // [1/sqrt(2), 1/sqrt(2)]
  ScenarioConfig config;
};

/// Clipped sinusoid mean of class `component` at time t (1-based, t in 1..T).
double component_mean(int component, Index t, Index T, double varsigma);

/// The full mean curve (t = 1..T) of one class.
Vec component_curve(int component, Index T, double varsigma);

/// Heteroscedastic noise path: sd 0.2 at t=1, then 0.2 + 0.2 * prev^2.
Vec gen_noise(Index T, Rng& rng);
Vec gen_noise(Index T, std::uint64_t seed);

/// Scenario link nu(a): 1 + varsigma (a^2 - 1) when the scenario carries a
/// covariate effect, identically 1 otherwise.
double nu_value(const ScenarioConfig& config, double a);
bool has_covariate_effect(int scenario);
bool has_shifts(int scenario);

/// Delay a curve by `delta` samples, wrapping around or zero-padding.
Vec apply_shift(const Vec& base, Index delta, ShiftMode mode);

Replicate gen_replicate(const ScenarioConfig& config);

}  // namespace crftiw::simulate

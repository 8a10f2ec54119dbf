#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crftiw/evaluate.hpp"
#include "crftiw/npmix.hpp"
#include "crftiw/sindex.hpp"
#include "crftiw/types.hpp"

namespace crftiw::pipeline {

/// Trailing moving average; positions with fewer than `window` predecessors
/// average over the available prefix.
Vec preprocess_ma(const Vec& series, Index window);

/// Counts rescaled to a rate per million inhabitants.
Vec normalize_rate(const Vec& counts, double population);

struct PipelineConfig {
  std::string curves_path;
  std::string covariates_path;
  std::string output_dir = ".";
  std::string wavelet = "sym8";
  double bandwidth = 0.0;   // regression bandwidth override; 0 = automatic
  int n_components = 0;     // fixed component count; 0 = elbow selection
  int l_max = 6;            // selection range upper end
  double tau = 15.0;        // elbow threshold
  std::uint64_t seed = 0;
  std::string method = "crftiw";  // crftiw | noTI | noCov | adjustFirst
  bool truncate_to_dyadic = false;
};

struct PipelineResult {
  int n_components = 0;
  double loglik = 0.0;
  std::vector<int> labels;  // 1-based
  std::optional<Vec> gamma;
  std::vector<std::string> artifacts;  // paths written, in write order
};

/// Run the full three-step procedure on CSV inputs and write features,
/// residuals, index-fit report, partition, log-likelihood table and cluster
/// summary into the output directory. Failures carry the stage name.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace crftiw::pipeline

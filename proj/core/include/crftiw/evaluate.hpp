#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crftiw/npmix.hpp"
#include "crftiw/simulate.hpp"
#include "crftiw/sindex.hpp"
#include "crftiw/types.hpp"

namespace crftiw::evaluate {

using Partition = std::vector<int>;

/// Pair-counting adjusted Rand index. Both degenerate-trivial partitions
/// (max index equal to expected index) score 1.
double ari(const Partition& p, const Partition& q);

enum class Method { kCrftiw, kNoTi, kNoCov, kAdjustFirst };

std::string method_name(Method method);
Method method_from_name(const std::string& name);
const std::vector<Method>& all_methods();

struct VariantOptions {
  std::uint64_t seed = 0;  // drives the regression restarts and mixture init
  sindex::FitOptions fit;
  npmix::MixtureOptions mixture;
};

struct VariantResult {
  Partition labels;  // cluster ids in 1..L
  npmix::MixtureFit mixture;
  std::optional<sindex::IndexFit> fit;  // absent for the no-covariate ablation
  std::optional<Vec> effect;            // raw-scale mean-one effect (adjustFirst)
};

/// Run one method on a simulated replicate with the component count fixed.
VariantResult run_variant(Method method, const simulate::Replicate& replicate, int L,
                          const VariantOptions& opts = {});

struct Scores {
  double ari = 0.0;
  double gamma1_err = 0.0;  // |gamma_hat_1 - gamma_1|; NaN without a fit
  double link_err = 0.0;    // pairwise-difference link error; NaN without a fit
};

Scores score_variant(Method method, const VariantResult& result,
                     const simulate::Replicate& replicate);

struct BenchmarkRow {
  int scenario = 0;
  Index n = 0;
  int replica = 0;
  std::string method;
  double ari = 0.0;
  double gamma1_err = 0.0;
  double link_err = 0.0;
  double seconds = 0.0;
};

struct BenchmarkOptions {
  std::vector<int> scenarios = {1, 2, 3};
  std::vector<Index> sizes = {50, 100, 250};
  int replicas = 10;
  std::vector<Method> methods = all_methods();
  std::uint64_t seed = 0;
  int n_components = 3;  // the true component count in the simulation design
  Index T = 256;
  Index delta = 50;
  simulate::ShiftMode shift_mode = simulate::ShiftMode::kCircular;
  bool measure_time = true;  // false pins the seconds column to 0 for
                             // byte-identical reruns
  VariantOptions variant;
};

/// Full factorial scenario x size x replica x method run. Cell failures are
/// recorded as NaN scores, never fatal. All methods see the same replicate.
std::vector<BenchmarkRow> benchmark(const BenchmarkOptions& opts);

struct SummaryRow {
  int scenario = 0;
  Index n = 0;
  std::string method;
  std::string metric;  // ari | gamma1_err | link_err | seconds
  Index count = 0;     // non-NaN cells behind the quartiles
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

/// Boxplot-ready per-(scenario, n, method) quartiles of every metric; NaN
/// cells are dropped, metrics with no finite cells are omitted.
std::vector<SummaryRow> summarize_benchmark(const std::vector<BenchmarkRow>& rows);

struct ClusterSummaryRow {
  int cluster = 0;  // 1-based after ordering by mean adjusted total
  Index count = 0;
  double proportion = 0.0;
  double total_mean = 0.0;
  double total_sd = 0.0;
  double effect_mean = 0.0;
  double effect_sd = 0.0;
};

/// Per-cluster statistics with clusters relabeled in increasing order of the
/// mean adjusted total.
std::vector<ClusterSummaryRow> cluster_summary(const Partition& partition, const Mat& curves,
                                               const Vec& effect);

}  // namespace crftiw::evaluate

#include "crftiw/evaluate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "crftiw/errors.hpp"
#include "crftiw/rng.hpp"
#include "crftiw/wavelet.hpp"

namespace crftiw::evaluate {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double comb2(double k) { return k * (k - 1.0) / 2.0; }

// Standardize labels to dense 0-based codes in order of first appearance.
std::vector<int> dense_codes(const Partition& p, int& n_codes) {
  std::map<int, int> remap;
  std::vector<int> codes(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(p[i], static_cast<int>(remap.size()));
    codes[i] = it->second;
  }
  n_codes = static_cast<int>(remap.size());
  return codes;
}

sindex::FitOptions seeded_fit(const VariantOptions& opts) {
  sindex::FitOptions f = opts.fit;
  if (f.seed == 0) f.seed = Rng::derive(opts.seed, 0xf17);
  return f;
}

npmix::MixtureOptions seeded_mixture(const VariantOptions& opts) {
  npmix::MixtureOptions m = opts.mixture;
  if (m.seed == 0) m.seed = Rng::derive(opts.seed, 0x313);
  return m;
}

}  // namespace

double ari(const Partition& p, const Partition& q) {
  if (p.size() != q.size()) throw LengthMismatch("partitions differ in length");
  if (p.empty()) throw EmptyInput("cannot score empty partitions");

  int np = 0, nq = 0;
  const auto cp = dense_codes(p, np);
  const auto cq = dense_codes(q, nq);

  Mat table = Mat::Zero(np, nq);
  for (std::size_t i = 0; i < cp.size(); ++i) table(cp[i], cq[i]) += 1.0;

  double sum_cells = 0.0;
  for (Index a = 0; a < table.rows(); ++a)
    for (Index b = 0; b < table.cols(); ++b) sum_cells += comb2(table(a, b));
  double sum_rows = 0.0;
  for (Index a = 0; a < table.rows(); ++a) sum_rows += comb2(table.row(a).sum());
  double sum_cols = 0.0;
  for (Index b = 0; b < table.cols(); ++b) sum_cols += comb2(table.col(b).sum());

  const double pairs = comb2(static_cast<double>(p.size()));
  const double expected = sum_rows * sum_cols / pairs;
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (std::abs(max_index - expected) < 1e-12) return 1.0;  // both partitions trivial
  return (sum_cells - expected) / (max_index - expected);
}

std::string method_name(Method method) {
  switch (method) {
    case Method::kCrftiw: return "crftiw";
    case Method::kNoTi: return "noTI";
    case Method::kNoCov: return "noCov";
    case Method::kAdjustFirst: return "adjustFirst";
  }
  throw InvalidScenario("unknown method");
}

Method method_from_name(const std::string& name) {
  for (Method m : all_methods())
    if (method_name(m) == name) return m;
  throw InvalidScenario("unknown method name: " + name);
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = {Method::kCrftiw, Method::kNoTi, Method::kNoCov,
                                              Method::kAdjustFirst};
  return methods;
}

VariantResult run_variant(Method method, const simulate::Replicate& replicate, int L,
                          const VariantOptions& opts) {
  const auto filter = wavelet::WaveletFilter::symmlet8();
  const auto fit_opts = seeded_fit(opts);
  const auto mix_opts = seeded_mixture(opts);

  VariantResult res;
  switch (method) {
    case Method::kCrftiw:
    case Method::kNoTi: {
      const Mat features = method == Method::kCrftiw
                               ? wavelet::featurize_ti_all(replicate.curves, filter)
                               : wavelet::featurize_dwt_all(replicate.curves, filter);
      res.fit = sindex::fit_gamma(features, replicate.covariates, fit_opts);
      const Mat resid = sindex::residuals(*res.fit);
      res.mixture = npmix::fit_mixture(resid, L, mix_opts);
      break;
    }
    case Method::kNoCov: {
      const Mat features = wavelet::featurize_ti_all(replicate.curves, filter);
      res.mixture = npmix::fit_mixture(sindex::center_features(features), L, mix_opts);
      break;
    }
    case Method::kAdjustFirst: {
      // Regression of the raw time-mean on the covariates, then division of
      // the curves by the resulting mean-one effect.
      const Mat means = replicate.curves.rowwise().mean();
      res.fit = sindex::fit_gamma(means, replicate.covariates, fit_opts);
      // fitted_values works on the centered response; undo the centering to
      // recover the raw-scale regression of the time-mean on the covariates.
      Vec fitted = sindex::fitted_values(*res.fit).array() + means.mean();
      if ((fitted.array() <= 0.0).any())
        throw NonPositiveEffect("raw-scale fitted effect is not positive");
      fitted /= fitted.mean();
      res.effect = fitted;
      const Mat adjusted = sindex::adjust_curves(replicate.curves, fitted);
      res.mixture = npmix::fit_mixture(wavelet::featurize_ti_all(adjusted, filter), L, mix_opts);
      break;
    }
  }
  res.labels = res.mixture.labels;  // already 1-based map labels
  return res;
}

Scores score_variant(Method method, const VariantResult& result,
                     const simulate::Replicate& replicate) {
  Scores s;
  Partition truth(replicate.labels.begin(), replicate.labels.end());
  s.ari = ari(result.labels, truth);
  s.gamma1_err = kNaN;
  s.link_err = kNaN;
  if (!result.fit) return s;

  s.gamma1_err = std::abs(result.fit->gamma[0] - replicate.true_gamma[0]);

  const Index n = replicate.covariates.rows();
  Vec true_index(n);
  for (Index i = 0; i < n; ++i)
    true_index[i] = replicate.covariates.row(i).dot(replicate.true_gamma);

  if (method == Method::kAdjustFirst) {
    // Raw scale on both sides: the mean-one effect against nu itself.
    Vec truth_link(n);
    for (Index i = 0; i < n; ++i) truth_link[i] = simulate::nu_value(replicate.config, true_index[i]);
    s.link_err = sindex::link_error(*result.effect, truth_link);
  } else {
    // The feature regression estimates ln mu up to an additive constant that
    // the pairwise-difference error cancels.
    Vec truth_link(n);
    for (Index i = 0; i < n; ++i)
      truth_link[i] = std::log(simulate::nu_value(replicate.config, true_index[i]));
    s.link_err = sindex::link_error(sindex::fitted_values(*result.fit), truth_link);
  }
  return s;
}

std::vector<BenchmarkRow> benchmark(const BenchmarkOptions& opts) {
  if (opts.replicas < 1) throw EmptyInput("need at least one replica");
  std::vector<BenchmarkRow> rows;
  for (int scenario : opts.scenarios) {
    const std::uint64_t s_seed = Rng::derive(opts.seed, static_cast<std::uint64_t>(scenario));
    for (Index n : opts.sizes) {
      const std::uint64_t n_seed = Rng::derive(s_seed, static_cast<std::uint64_t>(n));
      for (int replica = 0; replica < opts.replicas; ++replica) {
        simulate::ScenarioConfig config;
        config.scenario = scenario;
        config.n = n;
        config.T = opts.T;
        config.delta = opts.delta;
        config.shift_mode = opts.shift_mode;
        config.seed = Rng::derive(n_seed, static_cast<std::uint64_t>(replica));
        const auto replicate = simulate::gen_replicate(config);

        VariantOptions vopts = opts.variant;
        vopts.seed = Rng::derive(config.seed, 0xeb);
        for (Method method : opts.methods) {
          BenchmarkRow row;
          row.scenario = scenario;
          row.n = n;
          row.replica = replica;
          row.method = method_name(method);
          const auto start = std::chrono::steady_clock::now();
          try {
            const auto result = run_variant(method, replicate, opts.n_components, vopts);
            const auto scores = score_variant(method, result, replicate);
            row.ari = scores.ari;
            row.gamma1_err = scores.gamma1_err;
            row.link_err = scores.link_err;
          } catch (const Error&) {
            row.ari = kNaN;
            row.gamma1_err = kNaN;
            row.link_err = kNaN;
          }
          const auto stop = std::chrono::steady_clock::now();
          row.seconds = opts.measure_time
                            ? std::chrono::duration<double>(stop - start).count()
                            : 0.0;
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

std::vector<SummaryRow> summarize_benchmark(const std::vector<BenchmarkRow>& rows) {
  // Type-7 quantile of a sorted sample.
  auto quantile = [](const std::vector<double>& sorted, double p) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
  };

  std::map<std::tuple<int, Index, std::string>, std::vector<const BenchmarkRow*>> cells;
  for (const auto& row : rows) cells[{row.scenario, row.n, row.method}].push_back(&row);

  std::vector<SummaryRow> out;
  for (const auto& [key, cell] : cells) {
    const auto& [scenario, n, method] = key;
    const std::pair<std::string, double BenchmarkRow::*> metrics[] = {
        {"ari", &BenchmarkRow::ari},
        {"gamma1_err", &BenchmarkRow::gamma1_err},
        {"link_err", &BenchmarkRow::link_err},
        {"seconds", &BenchmarkRow::seconds},
    };
    for (const auto& [name, member] : metrics) {
      std::vector<double> values;
      for (const BenchmarkRow* row : cell)
        if (std::isfinite(row->*member)) values.push_back(row->*member);
      if (values.empty()) continue;
      std::sort(values.begin(), values.end());
      SummaryRow s;
      s.scenario = scenario;
      s.n = n;
      s.method = method;
      s.metric = name;
      s.count = static_cast<Index>(values.size());
      s.q1 = quantile(values, 0.25);
      s.median = quantile(values, 0.5);
      s.q3 = quantile(values, 0.75);
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<ClusterSummaryRow> cluster_summary(const Partition& partition, const Mat& curves,
                                               const Vec& effect) {
  if (partition.empty()) throw EmptyCluster("empty partition has no clusters");
  if (static_cast<Index>(partition.size()) != curves.rows() ||
      curves.rows() != effect.size())
    throw LengthMismatch("partition, curves and effect sizes disagree");

  const Vec totals = curves.rowwise().sum();

  std::map<int, std::vector<Index>> groups;
  for (std::size_t i = 0; i < partition.size(); ++i)
    groups[partition[i]].push_back(static_cast<Index>(i));

  struct Stat {
    Index count;
    double total_mean, total_sd, effect_mean, effect_sd;
  };
  auto moments = [](const Vec& values, const std::vector<Index>& idx) {
    double mean = 0.0;
    for (Index i : idx) mean += values[i];
    mean /= static_cast<double>(idx.size());
    double ss = 0.0;
    for (Index i : idx) ss += (values[i] - mean) * (values[i] - mean);
    const double sd = idx.size() > 1 ? std::sqrt(ss / static_cast<double>(idx.size() - 1)) : 0.0;
    return std::pair{mean, sd};
  };

  std::vector<Stat> stats;
  for (const auto& [label, idx] : groups) {
    const auto [tm, ts] = moments(totals, idx);
    const auto [em, es] = moments(effect, idx);
    stats.push_back({static_cast<Index>(idx.size()), tm, ts, em, es});
  }
  std::sort(stats.begin(), stats.end(),
            [](const Stat& a, const Stat& b) { return a.total_mean < b.total_mean; });

  std::vector<ClusterSummaryRow> rows;
  const double n = static_cast<double>(partition.size());
  int next = 1;
  for (const auto& st : stats) {
    ClusterSummaryRow row;
    row.cluster = next++;
    row.count = st.count;
    row.proportion = static_cast<double>(st.count) / n;
    row.total_mean = st.total_mean;
    row.total_sd = st.total_sd;
    row.effect_mean = st.effect_mean;
    row.effect_sd = st.effect_sd;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace crftiw::evaluate

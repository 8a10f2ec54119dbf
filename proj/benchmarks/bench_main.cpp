#include <benchmark/benchmark.h>

#include "crftiw/npmix.hpp"
#include "crftiw/rng.hpp"
#include "crftiw/simulate.hpp"
#include "crftiw/sindex.hpp"
#include "crftiw/wavelet.hpp"

using crftiw::Index;
using crftiw::Mat;
using crftiw::Rng;
using crftiw::Vec;

namespace {

Vec random_curve(Index t, Rng& rng) {
  Vec w(t);
  for (Index i = 0; i < t; ++i) w[i] = rng.normal();
  return w;
}

crftiw::simulate::Replicate replicate(Index n) {
  crftiw::simulate::ScenarioConfig config;
  config.scenario = 2;
  config.n = n;
  config.T = 256;
  config.seed = 11;
  return crftiw::simulate::gen_replicate(config);
}

void bm_featurize_ti(benchmark::State& state) {
  const auto f = crftiw::wavelet::WaveletFilter::symmlet8();
  Rng rng(3);
  const Vec w = random_curve(state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(crftiw::wavelet::featurize_ti(w, f));
}
BENCHMARK(bm_featurize_ti)->Arg(64)->Arg(256)->Arg(1024);

void bm_dwt_forward(benchmark::State& state) {
  const auto f = crftiw::wavelet::WaveletFilter::symmlet8();
  Rng rng(4);
  const Index t = state.range(0);
  const Vec w = random_curve(t, rng);
  const int levels = crftiw::wavelet::dyadic_levels(t);
  for (auto _ : state) benchmark::DoNotOptimize(crftiw::wavelet::dwt_forward(w, f, levels));
}
BENCHMARK(bm_dwt_forward)->Arg(256)->Arg(1024);

void bm_index_loss(benchmark::State& state) {
  const auto rep = replicate(state.range(0));
  const Mat features =
      crftiw::wavelet::featurize_ti_all(rep.curves, crftiw::wavelet::WaveletFilter::symmlet8());
  crftiw::sindex::FitOptions opts;
  opts.restarts = 1;
  opts.max_iterations = 1;
  const auto fit = crftiw::sindex::fit_gamma(features, rep.covariates, opts);
  for (auto _ : state) benchmark::DoNotOptimize(crftiw::sindex::loss_at(fit, rep.true_gamma));
}
BENCHMARK(bm_index_loss)->Arg(50)->Arg(250);

void bm_index_fit(benchmark::State& state) {
  const auto rep = replicate(state.range(0));
  const Mat features =
      crftiw::wavelet::featurize_ti_all(rep.curves, crftiw::wavelet::WaveletFilter::symmlet8());
  for (auto _ : state)
    benchmark::DoNotOptimize(crftiw::sindex::fit_gamma(features, rep.covariates));
}
BENCHMARK(bm_index_fit)->Arg(100)->Unit(benchmark::kMillisecond);

void bm_mixture_fit(benchmark::State& state) {
  const Index n = state.range(0);
  Rng rng(7);
  Mat data(n, 2);
  for (Index i = 0; i < n; ++i) {
    const int c = static_cast<int>(i) % 3;
    data(i, 0) = 2.0 * c + rng.normal();
    data(i, 1) = -1.5 * c + rng.normal();
  }
  crftiw::npmix::MixtureOptions opts;
  opts.seed = 19;
  for (auto _ : state) benchmark::DoNotOptimize(crftiw::npmix::fit_mixture(data, 3, opts));
}
BENCHMARK(bm_mixture_fit)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

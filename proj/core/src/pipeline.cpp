#include "crftiw/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <tuple>

#include "crftiw/csv.hpp"
#include "crftiw/errors.hpp"
#include "crftiw/rng.hpp"
#include "crftiw/wavelet.hpp"

namespace crftiw::pipeline {

namespace {

namespace fs = std::filesystem;

template <typename F>
auto stage(const std::string& name, F&& body) {
  try {
    return body();
  } catch (const PipelineError&) {
    throw;
  } catch (const Error& e) {
    throw PipelineError(name, e.what());
  } catch (const std::exception& e) {
    throw PipelineError(name, e.what());
  }
}

Mat truncate_to_dyadic(const Mat& curves) {
  Index pow2 = 1;
  while (pow2 * 2 <= curves.cols()) pow2 *= 2;
  // Keep the most recent dyadic-length window.
  return curves.rightCols(pow2);
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

}  // namespace

Vec preprocess_ma(const Vec& series, Index window) {
  if (series.size() == 0) throw EmptySeries("cannot average an empty series");
  if (window < 1) throw EmptySeries("window must be at least 1");
  Vec out(series.size());
  double running = 0.0;
  for (Index t = 0; t < series.size(); ++t) {
    running += series[t];
    if (t >= window) running -= series[t - window];
    out[t] = running / static_cast<double>(std::min(window, t + 1));
  }
  return out;
}

Vec normalize_rate(const Vec& counts, double population) {
  if (!(population > 0.0)) throw NonPositivePopulation("population must be positive");
  return counts * (1e6 / population);
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  PipelineResult result;

  // load
  auto [curve_ids, curves, cov_table] = stage("load", [&] {
    const auto curves_in = csv::read_table(config.curves_path);
    const auto covs_in = csv::read_table(config.covariates_path);
    if (curves_in.ids != covs_in.ids)
      throw IoError("curve and covariate region ids disagree");
    return std::tuple{curves_in.ids, curves_in.values, covs_in};
  });

  // preprocess
  const Mat prepared = stage("preprocess", [&]() -> Mat {
    if (config.truncate_to_dyadic && !wavelet::is_dyadic(curves.cols()))
      return truncate_to_dyadic(curves);
    return curves;
  });

  // features
  const auto filter = stage("features", [&] { return wavelet::WaveletFilter::by_name(config.wavelet); });
  const bool use_ti = config.method != "noTI";
  if (config.method != "crftiw" && config.method != "noTI" && config.method != "noCov" &&
      config.method != "adjustFirst")
    throw PipelineError("features", "unknown method variant: " + config.method);

  sindex::FitOptions fit_opts;
  fit_opts.bandwidth = config.bandwidth;
  fit_opts.seed = Rng::derive(config.seed, 0xf17);

  std::optional<sindex::IndexFit> fit;
  Vec effect;                 // per-region multiplicative effect, mean one
  Mat features;               // extracted features fed downstream
  Mat cluster_input;          // what the mixture sees

  if (config.method == "adjustFirst") {
    stage("regress", [&] {
      const Mat means = prepared.rowwise().mean();
      fit = sindex::fit_gamma(means, cov_table.values, fit_opts);
      // undo the response centering to get the raw-scale regression back
      Vec fitted = sindex::fitted_values(*fit).array() + means.mean();
      if ((fitted.array() <= 0.0).any())
        throw NonPositiveEffect("raw-scale fitted effect is not positive");
      effect = fitted / fitted.mean();
      return 0;
    });
    features = stage("features", [&] {
      const Mat adjusted = sindex::adjust_curves(prepared, effect);
      return wavelet::featurize_ti_all(adjusted, filter);
    });
    cluster_input = features;
  } else {
    features = stage("features", [&] {
      return use_ti ? wavelet::featurize_ti_all(prepared, filter)
                    : wavelet::featurize_dwt_all(prepared, filter);
    });
    if (config.method == "noCov") {
      cluster_input = stage("regress", [&] { return sindex::center_features(features); });
      effect = Vec::Ones(prepared.rows());
    } else {
      stage("regress", [&] {
        fit = sindex::fit_gamma(features, cov_table.values, fit_opts);
        cluster_input = sindex::residuals(*fit);
        effect = sindex::covariate_effect(*fit).mu;
        return 0;
      });
    }
  }

  // cluster
  npmix::MixtureOptions mix_opts;
  mix_opts.seed = Rng::derive(config.seed, 0x313);
  std::vector<double> logliks;
  npmix::MixtureFit mixture = stage("cluster", [&] {
    if (config.n_components > 0) {
      auto fit_l = npmix::fit_mixture(cluster_input, config.n_components, mix_opts);
      logliks.push_back(fit_l.loglik);
      return fit_l;
    }
    auto selection = npmix::select_n_components(cluster_input, config.l_max, config.tau, mix_opts);
    logliks = selection.logliks;
    return std::move(selection.fits[static_cast<std::size_t>(selection.selected - 1)]);
  });

  result.n_components = mixture.model.n_components;
  result.loglik = mixture.loglik;
  result.labels = mixture.labels;
  if (fit) result.gamma = fit->gamma;

  // report
  stage("report", [&] {
    fs::create_directories(config.output_dir);
    const Index j_cols = features.cols();

    csv::Table feat{curve_ids, csv::indexed_names("y", j_cols, 0), features};
    const auto features_path = join(config.output_dir, "features.csv");
    csv::write_table(features_path, feat);
    result.artifacts.push_back(features_path);

    csv::Table resid{curve_ids, csv::indexed_names("r", cluster_input.cols(), 0), cluster_input};
    const auto resid_path = join(config.output_dir, "residuals.csv");
    csv::write_table(resid_path, resid);
    result.artifacts.push_back(resid_path);

    const auto report_path = join(config.output_dir, "indexfit.txt");
    {
      std::ofstream out(report_path);
      if (!out) throw IoError("cannot write " + report_path);
      out << "method: " << config.method << '\n';
      if (fit) {
        out << "gamma:";
        for (Index k = 0; k < fit->gamma.size(); ++k)
          out << ' ' << csv::format_double(fit->gamma[k]);
        out << '\n';
        out << "bandwidth: " << csv::format_double(fit->bandwidth) << '\n';
        out << "pooled_loss: " << csv::format_double(fit->loss) << '\n';
        out << "region,index,effect\n";
        for (Index i = 0; i < fit->index.size(); ++i)
          out << curve_ids[static_cast<std::size_t>(i)] << ','
              << csv::format_double(fit->index[i]) << ',' << csv::format_double(effect[i])
              << '\n';
      } else {
        out << "no covariate adjustment in this variant\n";
      }
    }
    result.artifacts.push_back(report_path);

    csv::PartitionTable part{curve_ids, mixture.labels, mixture.posteriors};
    const auto part_path = join(config.output_dir, "partition.csv");
    csv::write_partition(part_path, part);
    result.artifacts.push_back(part_path);

    const auto loglik_path = join(config.output_dir, "loglik_by_l.csv");
    {
      std::ofstream out(loglik_path);
      if (!out) throw IoError("cannot write " + loglik_path);
      out << "L,loglik,gain,selected\n";
      const int l_start = config.n_components > 0 ? config.n_components : 1;
      for (std::size_t k = 0; k < logliks.size(); ++k) {
        const int l = l_start + static_cast<int>(k);
        out << l << ',' << csv::format_double(logliks[k]) << ',';
        if (k > 0) out << csv::format_double(logliks[k] - logliks[k - 1]);
        else out << "nan";
        out << ',' << (l == result.n_components ? 1 : 0) << '\n';
      }
    }
    result.artifacts.push_back(loglik_path);

    const auto summary_path = join(config.output_dir, "cluster_summary.csv");
    const Mat adjusted = sindex::adjust_curves(prepared, effect);
    csv::write_cluster_summary(summary_path,
                               evaluate::cluster_summary(mixture.labels, adjusted, effect));
    result.artifacts.push_back(summary_path);
    return 0;
  });

  return result;
}

}  // namespace crftiw::pipeline

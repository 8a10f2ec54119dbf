// Command-line front end: every pipeline step is independently invokable and
// all numeric output goes through the shared CSV layer.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crftiw/csv.hpp"
#include "crftiw/errors.hpp"
#include "crftiw/evaluate.hpp"
#include "crftiw/npmix.hpp"
#include "crftiw/pipeline.hpp"
#include "crftiw/rng.hpp"
#include "crftiw/simulate.hpp"
#include "crftiw/sindex.hpp"
#include "crftiw/wavelet.hpp"

namespace fs = std::filesystem;
using crftiw::Index;
using crftiw::Mat;
using crftiw::Vec;

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) { fs::create_directories(dir); }

// Shared plumbing: every subcommand that writes files takes --output-dir,
// defaulting to $CRFTIW_OUTPUT_DIR and then the working directory.
void add_output_dir(CLI::App* cmd, std::string& out) {
  cmd->add_option("-o,--output-dir", out, "directory for written files")
      ->envname("CRFTIW_OUTPUT_DIR")
      ->capture_default_str();
}

void add_config_file(CLI::App* cmd, std::string& path) {
  cmd->add_option("--config", path, "flat key=value config file; flags override it");
}

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t");
  if (begin == std::string::npos) return {};
  const auto end = text.find_last_not_of(" \t");
  return text.substr(begin, end - begin + 1);
}

// Flat `key = value` config support: every key is rewritten as --key=value and
// appended to the argument list unless the same option already appears on the
// command line, so explicit flags always win. CLI11's own set_config is not
// used because it ignores config options attached to subcommands.
std::vector<std::string> inject_config_args(const CLI::App& app,
                                            std::vector<std::string> args) {
  // The first bare token names the subcommand.
  std::string sub_name;
  for (const auto& arg : args)
    if (!arg.empty() && arg[0] != '-') {
      sub_name = arg;
      break;
    }
  if (sub_name.empty()) return args;
  const auto subs =
      app.get_subcommands([&](const CLI::App* s) { return s->get_name() == sub_name; });
  if (subs.size() != 1) return args;
  const CLI::App* sub = subs.front();

  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;

  std::ifstream in(config_path);
  if (!in) throw crftiw::IoError("cannot open config file " + config_path);
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config") continue;
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);

    const CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr)
      throw crftiw::IoError("unknown key '" + key + "' in config file " + config_path);
    // Skip the key when any spelling of the option was given explicitly.
    bool given = false;
    std::vector<std::string> spellings;
    for (const auto& lname : opt->get_lnames()) spellings.push_back("--" + lname);
    for (const auto& sname : opt->get_snames()) spellings.push_back("-" + sname);
    for (const auto& arg : args)
      for (const auto& spelling : spellings)
        if (arg == spelling || arg.rfind(spelling + "=", 0) == 0) given = true;
    if (!given) args.push_back("--" + key + "=" + value);
  }
  return args;
}

std::vector<std::string> region_ids(Index n) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) ids.push_back("r" + std::to_string(i));
  return ids;
}

crftiw::simulate::ShiftMode parse_shift_mode(const std::string& name) {
  if (name == "circular") return crftiw::simulate::ShiftMode::kCircular;
  if (name == "padded") return crftiw::simulate::ShiftMode::kPadded;
  throw crftiw::InvalidScenario("shift mode must be circular or padded: " + name);
}

struct SimulateArgs {
  crftiw::simulate::ScenarioConfig config;
  std::string shift_mode = "circular";
  bool no_noise = false;
  std::string output_dir = ".";
};

int run_simulate(const SimulateArgs& args) {
  auto config = args.config;
  config.shift_mode = parse_shift_mode(args.shift_mode);
  config.noise = !args.no_noise;
  const auto rep = crftiw::simulate::gen_replicate(config);

  ensure_dir(args.output_dir);
  const auto ids = region_ids(config.n);
  crftiw::csv::write_table(join_path(args.output_dir, "curves.csv"),
                           {ids, crftiw::csv::indexed_names("t", config.T, 1), rep.curves});
  crftiw::csv::write_table(join_path(args.output_dir, "covariates.csv"),
                           {ids, {"x1", "x2"}, rep.covariates});
  crftiw::csv::PartitionTable truth;
  truth.ids = ids;
  truth.labels = rep.labels;
  truth.posteriors.resize(config.n, 0);
  crftiw::csv::write_partition(join_path(args.output_dir, "truth.csv"), truth);
  Mat shifts(config.n, 1);
  for (Index i = 0; i < config.n; ++i)
    shifts(i, 0) = static_cast<double>(rep.shifts[static_cast<std::size_t>(i)]);
  crftiw::csv::write_table(join_path(args.output_dir, "shifts.csv"), {ids, {"shift"}, shifts});
  std::cout << "wrote curves.csv, covariates.csv, truth.csv, shifts.csv to " << args.output_dir
            << '\n';
  return 0;
}

struct PreprocessArgs {
  std::string curves_path;
  std::string populations_path;  // optional region,population table
  Index window = 7;
  std::string output_dir = ".";
};

int run_preprocess(const PreprocessArgs& args) {
  auto table = crftiw::csv::read_table(args.curves_path);

  if (!args.populations_path.empty()) {
    const auto pops = crftiw::csv::read_table(args.populations_path);
    if (pops.ids != table.ids)
      throw crftiw::IoError("population region ids do not match the curves");
    for (Index i = 0; i < table.values.rows(); ++i) {
      const Vec row = table.values.row(i);
      table.values.row(i) = crftiw::pipeline::normalize_rate(row, pops.values(i, 0));
    }
  }
  for (Index i = 0; i < table.values.rows(); ++i) {
    const Vec row = table.values.row(i);
    table.values.row(i) = crftiw::pipeline::preprocess_ma(row, args.window);
  }

  ensure_dir(args.output_dir);
  const auto out_path = join_path(args.output_dir, "preprocessed.csv");
  crftiw::csv::write_table(out_path, table);
  std::cout << "wrote " << out_path << '\n';
  return 0;
}

struct FeaturesArgs {
  std::string curves_path;
  std::string wavelet = "sym8";
  bool plain_dwt = false;
  std::string output_dir = ".";
};

int run_features(const FeaturesArgs& args) {
  const auto table = crftiw::csv::read_table(args.curves_path);
  const auto filter = crftiw::wavelet::WaveletFilter::by_name(args.wavelet);
  const Mat features = args.plain_dwt
                           ? crftiw::wavelet::featurize_dwt_all(table.values, filter)
                           : crftiw::wavelet::featurize_ti_all(table.values, filter);
  ensure_dir(args.output_dir);
  const auto out_path = join_path(args.output_dir, "features.csv");
  crftiw::csv::write_table(
      out_path, {table.ids, crftiw::csv::indexed_names("y", features.cols(), 0), features});
  std::cout << "wrote " << out_path << '\n';
  return 0;
}

struct RegressArgs {
  std::string features_path;
  std::string covariates_path;
  double bandwidth = 0.0;
  bool leave_one_out = false;
  int constrain_zero = -1;  // covariate index forced out of the fit
  std::uint64_t seed = 0;
  std::string output_dir = ".";
};

int run_regress(const RegressArgs& args) {
  const auto features = crftiw::csv::read_table(args.features_path);
  const auto covariates = crftiw::csv::read_table(args.covariates_path);
  if (features.ids != covariates.ids)
    throw crftiw::IoError("feature and covariate region ids disagree");

  crftiw::sindex::FitOptions opts;
  opts.bandwidth = args.bandwidth;
  opts.leave_one_out = args.leave_one_out;
  opts.seed = args.seed != 0 ? args.seed : crftiw::Rng::derive(0, 0xf17);

  const auto fit = args.constrain_zero >= 0
                       ? crftiw::sindex::fit_gamma_constrained(
                             features.values, covariates.values, args.constrain_zero, opts)
                       : crftiw::sindex::fit_gamma(features.values, covariates.values, opts);
  const Mat resid = crftiw::sindex::residuals(fit);
  const auto effect = crftiw::sindex::covariate_effect(fit);

  ensure_dir(args.output_dir);
  const auto resid_path = join_path(args.output_dir, "residuals.csv");
  crftiw::csv::write_table(
      resid_path, {features.ids, crftiw::csv::indexed_names("r", resid.cols(), 0), resid});

  const auto report_path = join_path(args.output_dir, "indexfit.txt");
  {
    std::ofstream out(report_path);
    if (!out) throw crftiw::IoError("cannot write " + report_path);
    out << "gamma:";
    for (Index k = 0; k < fit.gamma.size(); ++k)
      out << ' ' << crftiw::csv::format_double(fit.gamma[k]);
    out << '\n';
    out << "bandwidth: " << crftiw::csv::format_double(fit.bandwidth) << '\n';
    out << "pooled_loss: " << crftiw::csv::format_double(fit.loss) << '\n';
    out << "region,index,effect\n";
    for (Index i = 0; i < fit.index.size(); ++i)
      out << features.ids[static_cast<std::size_t>(i)] << ','
          << crftiw::csv::format_double(fit.index[i]) << ','
          << crftiw::csv::format_double(effect.mu[i]) << '\n';
  }

  std::cout << "gamma:";
  for (Index k = 0; k < fit.gamma.size(); ++k) std::cout << ' ' << fit.gamma[k];
  std::cout << "\npooled_loss: " << fit.loss << '\n'
            << "wrote " << resid_path << " and " << report_path << '\n';
  return 0;
}

struct ClusterArgs {
  std::string input_path;
  int n_components = 0;  // 0 selects by the elbow rule
  int l_max = 6;
  double tau = 15.0;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
};

int run_cluster(const ClusterArgs& args) {
  const auto table = crftiw::csv::read_table(args.input_path);
  crftiw::npmix::MixtureOptions opts;
  opts.seed = args.seed != 0 ? args.seed : crftiw::Rng::derive(0, 0x313);

  std::vector<double> logliks;
  crftiw::npmix::MixtureFit fit;
  int l_start = 1;
  if (args.n_components > 0) {
    fit = crftiw::npmix::fit_mixture(table.values, args.n_components, opts);
    logliks.push_back(fit.loglik);
    l_start = args.n_components;
  } else {
    auto selection =
        crftiw::npmix::select_n_components(table.values, args.l_max, args.tau, opts);
    logliks = selection.logliks;
    fit = std::move(selection.fits[static_cast<std::size_t>(selection.selected - 1)]);
  }

  ensure_dir(args.output_dir);
  const auto part_path = join_path(args.output_dir, "partition.csv");
  crftiw::csv::write_partition(part_path, {table.ids, fit.labels, fit.posteriors});

  const auto loglik_path = join_path(args.output_dir, "loglik_by_l.csv");
  {
    std::ofstream out(loglik_path);
    if (!out) throw crftiw::IoError("cannot write " + loglik_path);
    out << "L,loglik,gain,selected\n";
    for (std::size_t k = 0; k < logliks.size(); ++k) {
      const int l = l_start + static_cast<int>(k);
      out << l << ',' << crftiw::csv::format_double(logliks[k]) << ',';
      if (k > 0)
        out << crftiw::csv::format_double(logliks[k] - logliks[k - 1]);
      else
        out << "nan";
      out << ',' << (l == fit.model.n_components ? 1 : 0) << '\n';
    }
  }

  std::cout << "L: " << fit.model.n_components << "\nloglik: " << fit.loglik << "\nwrote "
            << part_path << " and " << loglik_path << '\n';
  return 0;
}

struct SelectLArgs {
  std::string input_path;
  double tau = 15.0;
};

// Accepts either the cluster subcommand's loglik_by_l.csv or a bare list with
// one log-likelihood per line.
int run_select_l(const SelectLArgs& args) {
  std::ifstream in(args.input_path);
  if (!in) throw crftiw::IoError("cannot open " + args.input_path);
  std::vector<double> values;
  std::string line;
  bool csv_layout = false;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first && line.rfind("L,loglik", 0) == 0) {
      csv_layout = true;
      first = false;
      continue;
    }
    first = false;
    if (csv_layout) {
      std::stringstream ss(line);
      std::string cell;
      std::getline(ss, cell, ',');  // L
      std::getline(ss, cell, ',');  // loglik
      values.push_back(crftiw::csv::parse_double(cell, args.input_path));
    } else {
      values.push_back(crftiw::csv::parse_double(line, args.input_path));
    }
  }
  const int selected = crftiw::npmix::select_l(values, args.tau);
  std::cout << selected << '\n';
  return 0;
}

struct PipelineArgs {
  crftiw::pipeline::PipelineConfig config;
};

int run_cli_pipeline(const PipelineArgs& args) {
  const auto result = crftiw::pipeline::run_pipeline(args.config);
  std::cout << "L: " << result.n_components << "\nloglik: " << result.loglik << '\n';
  if (result.gamma) {
    std::cout << "gamma:";
    for (Index k = 0; k < result.gamma->size(); ++k) std::cout << ' ' << (*result.gamma)[k];
    std::cout << '\n';
  }
  for (const auto& artifact : result.artifacts) std::cout << "wrote " << artifact << '\n';
  return 0;
}

struct BenchmarkArgs {
  std::vector<int> scenarios = {1, 2, 3};
  std::vector<Index> sizes = {50, 100, 250};
  int replicas = 10;
  std::vector<std::string> methods = {"crftiw", "noTI", "noCov", "adjustFirst"};
  std::uint64_t seed = 0;
  int n_components = 3;
  Index T = 256;
  Index delta = 50;
  std::string shift_mode = "circular";
  bool no_timing = false;
  std::string output_dir = ".";
};

int run_benchmark(const BenchmarkArgs& args) {
  crftiw::evaluate::BenchmarkOptions opts;
  opts.scenarios = args.scenarios;
  opts.sizes = args.sizes;
  opts.replicas = args.replicas;
  opts.methods.clear();
  for (const auto& name : args.methods)
    opts.methods.push_back(crftiw::evaluate::method_from_name(name));
  opts.seed = args.seed;
  opts.n_components = args.n_components;
  opts.T = args.T;
  opts.delta = args.delta;
  opts.shift_mode = parse_shift_mode(args.shift_mode);
  opts.measure_time = !args.no_timing;

  const auto rows = crftiw::evaluate::benchmark(opts);
  ensure_dir(args.output_dir);
  const auto rows_path = join_path(args.output_dir, "benchmark.csv");
  crftiw::csv::write_benchmark(rows_path, rows);
  const auto summary_path = join_path(args.output_dir, "benchmark_summary.csv");
  crftiw::csv::write_benchmark_summary(summary_path,
                                       crftiw::evaluate::summarize_benchmark(rows));
  std::cout << rows.size() << " cells\nwrote " << rows_path << " and " << summary_path << '\n';
  return 0;
}

struct AriArgs {
  std::string first_path;
  std::string second_path;
};

int run_ari(const AriArgs& args) {
  const auto a = crftiw::csv::read_partition(args.first_path);
  const auto b = crftiw::csv::read_partition(args.second_path);
  if (a.ids.size() != b.ids.size())
    throw crftiw::LengthMismatch("partitions cover different region counts");
  // Align the second partition on the first's region order.
  std::vector<int> aligned(a.ids.size());
  for (std::size_t i = 0; i < a.ids.size(); ++i) {
    if (a.ids[i] == b.ids[i]) {
      aligned[i] = b.labels[i];
      continue;
    }
    const auto it = std::find(b.ids.begin(), b.ids.end(), a.ids[i]);
    if (it == b.ids.end())
      throw crftiw::IoError("region " + a.ids[i] + " missing from " + args.second_path);
    aligned[i] = b.labels[static_cast<std::size_t>(it - b.ids.begin())];
  }
  std::cout << crftiw::csv::format_double(crftiw::evaluate::ari(a.labels, aligned)) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shifted-curve clustering toolkit"};
  app.require_subcommand(1);
  std::string config_path;  // shared sink; only one subcommand parses per run

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "generate a synthetic replicate");
  sim_cmd->add_option("--scenario", sim.config.scenario, "1: shifts+covariates, 2: covariates, 3: shifts")
      ->capture_default_str();
  sim_cmd->add_option("-n,--n", sim.config.n, "sample size")->capture_default_str();
  sim_cmd->add_option("-T,--length", sim.config.T, "curve length (dyadic)")->capture_default_str();
  sim_cmd->add_option("--varsigma", sim.config.varsigma, "separation parameter in (0,1)")
      ->capture_default_str();
  sim_cmd->add_option("--delta", sim.config.delta, "shift magnitude")->capture_default_str();
  sim_cmd->add_option("--shift-prob", sim.config.shift_prob, "probability of a shift")
      ->capture_default_str();
  sim_cmd->add_option("--seed", sim.config.seed, "RNG seed")->capture_default_str();
  sim_cmd->add_option("--shift-mode", sim.shift_mode, "circular | padded")->capture_default_str();
  sim_cmd->add_flag("--no-noise", sim.no_noise, "disable the heteroscedastic noise");
  add_output_dir(sim_cmd, sim.output_dir);
  add_config_file(sim_cmd, config_path);

  PreprocessArgs pre;
  auto* pre_cmd = app.add_subcommand("preprocess", "rate normalization and moving average");
  pre_cmd->add_option("--curves", pre.curves_path, "raw curves CSV")->required();
  pre_cmd->add_option("--populations", pre.populations_path,
                      "region,population CSV enabling per-million normalization");
  pre_cmd->add_option("--window", pre.window, "trailing moving-average window")
      ->capture_default_str();
  add_output_dir(pre_cmd, pre.output_dir);
  add_config_file(pre_cmd, config_path);

  FeaturesArgs feat;
  auto* feat_cmd = app.add_subcommand("features", "wavelet log-norm feature extraction");
  feat_cmd->add_option("--curves", feat.curves_path, "curves CSV")->required();
  feat_cmd->add_option("--wavelet", feat.wavelet, "sym8 | haar")->capture_default_str();
  feat_cmd->add_flag("--plain-dwt", feat.plain_dwt,
                     "use the non-invariant transform instead of the shift-invariant one");
  add_output_dir(feat_cmd, feat.output_dir);
  add_config_file(feat_cmd, config_path);

  RegressArgs reg;
  auto* reg_cmd = app.add_subcommand("regress", "single-index fit of features on covariates");
  reg_cmd->add_option("--features", reg.features_path, "features CSV")->required();
  reg_cmd->add_option("--covariates", reg.covariates_path, "covariates CSV")->required();
  reg_cmd->add_option("--bandwidth", reg.bandwidth, "kernel bandwidth; 0 = automatic")
      ->capture_default_str();
  reg_cmd->add_flag("--leave-one-out", reg.leave_one_out, "exclude self in the kernel average");
  reg_cmd->add_option("--constrain-zero", reg.constrain_zero,
                      "covariate index (0-based) forced to zero, for nested-fit comparisons");
  reg_cmd->add_option("--seed", reg.seed, "RNG seed")->capture_default_str();
  add_output_dir(reg_cmd, reg.output_dir);
  add_config_file(reg_cmd, config_path);

  ClusterArgs clu;
  auto* clu_cmd = app.add_subcommand("cluster", "nonparametric mixture on residual features");
  clu_cmd->add_option("--input", clu.input_path, "residuals or features CSV")->required();
  clu_cmd->add_option("-L,--n-components", clu.n_components, "component count; 0 = elbow rule")
      ->capture_default_str();
  clu_cmd->add_option("--l-max", clu.l_max, "largest candidate L")->capture_default_str();
  clu_cmd->add_option("--tau", clu.tau, "elbow threshold")->capture_default_str();
  clu_cmd->add_option("--seed", clu.seed, "RNG seed")->capture_default_str();
  add_output_dir(clu_cmd, clu.output_dir);
  add_config_file(clu_cmd, config_path);

  SelectLArgs sel;
  auto* sel_cmd = app.add_subcommand("select-l", "elbow rule on a log-likelihood sequence");
  sel_cmd->add_option("--input", sel.input_path,
                      "loglik_by_l.csv or a file with one log-likelihood per line")
      ->required();
  sel_cmd->add_option("--tau", sel.tau, "elbow threshold")->capture_default_str();
  add_config_file(sel_cmd, config_path);

  PipelineArgs pipe;
  auto* pipe_cmd = app.add_subcommand("pipeline", "full three-step run on CSV inputs");
  pipe_cmd->add_option("--curves", pipe.config.curves_path, "curves CSV")->required();
  pipe_cmd->add_option("--covariates", pipe.config.covariates_path, "covariates CSV")->required();
  pipe_cmd->add_option("--wavelet", pipe.config.wavelet, "sym8 | haar")->capture_default_str();
  pipe_cmd->add_option("--bandwidth", pipe.config.bandwidth, "regression bandwidth; 0 = automatic")
      ->capture_default_str();
  pipe_cmd->add_option("-L,--n-components", pipe.config.n_components,
                       "component count; 0 = elbow rule")
      ->capture_default_str();
  pipe_cmd->add_option("--l-max", pipe.config.l_max, "largest candidate L")->capture_default_str();
  pipe_cmd->add_option("--tau", pipe.config.tau, "elbow threshold")->capture_default_str();
  pipe_cmd->add_option("--seed", pipe.config.seed, "RNG seed")->capture_default_str();
  pipe_cmd->add_option("--method", pipe.config.method, "crftiw | noTI | noCov | adjustFirst")
      ->capture_default_str();
  pipe_cmd->add_flag("--truncate-to-dyadic", pipe.config.truncate_to_dyadic,
                     "keep the latest dyadic-length window when T is not a power of two");
  add_output_dir(pipe_cmd, pipe.config.output_dir);
  add_config_file(pipe_cmd, config_path);

  BenchmarkArgs bench;
  auto* bench_cmd = app.add_subcommand("benchmark", "factorial simulation study");
  bench_cmd->add_option("--scenarios", bench.scenarios, "scenario ids")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--sizes", bench.sizes, "sample sizes")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--replicas", bench.replicas, "replicas per cell")->capture_default_str();
  bench_cmd->add_option("--methods", bench.methods, "method names")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "RNG seed")->capture_default_str();
  bench_cmd->add_option("-L,--n-components", bench.n_components, "mixture size per fit")
      ->capture_default_str();
  bench_cmd->add_option("-T,--length", bench.T, "curve length")->capture_default_str();
  bench_cmd->add_option("--delta", bench.delta, "shift magnitude")->capture_default_str();
  bench_cmd->add_option("--shift-mode", bench.shift_mode, "circular | padded")
      ->capture_default_str();
  bench_cmd->add_flag("--no-timing", bench.no_timing,
                      "pin the seconds column to zero for byte-identical reruns");
  add_output_dir(bench_cmd, bench.output_dir);
  add_config_file(bench_cmd, config_path);

  AriArgs ari_args;
  auto* ari_cmd = app.add_subcommand("ari", "adjusted Rand index between two partition CSVs");
  ari_cmd->add_option("first", ari_args.first_path, "partition CSV")->required();
  ari_cmd->add_option("second", ari_args.second_path, "partition CSV")->required();
  add_config_file(ari_cmd, config_path);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = inject_config_args(app, args);
  } catch (const crftiw::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sim_cmd->parsed()) return run_simulate(sim);
    if (pre_cmd->parsed()) return run_preprocess(pre);
    if (feat_cmd->parsed()) return run_features(feat);
    if (reg_cmd->parsed()) return run_regress(reg);
    if (clu_cmd->parsed()) return run_cluster(clu);
    if (sel_cmd->parsed()) return run_select_l(sel);
    if (pipe_cmd->parsed()) return run_cli_pipeline(pipe);
    if (bench_cmd->parsed()) return run_benchmark(bench);
    if (ari_cmd->parsed()) return run_ari(ari_args);
  } catch (const crftiw::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

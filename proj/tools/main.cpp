#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bayup/coverage.hpp"
#include "bayup/fisher.hpp"
#include "bayup/inference.hpp"
#include "bayup/io.hpp"
#include "bayup/models.hpp"

namespace {

namespace fs = std::filesystem;
using namespace bayup;

constexpr int exit_ok = 0;
constexpr int exit_config_error = 2;
constexpr int exit_numeric_error = 3;
constexpr int exit_io_error = 4;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<long long> trials;
  int threads = 0;
  std::string formats = "csv,svg";
};

bool wants_svg(const CommonOpts& opts) {
  return opts.formats.find("svg") != std::string::npos;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::ios_base::failure("write failed for " + path.string());
}

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read config file " + path);
  nlohmann::json config;
  in >> config;
  return config;
}

void emit_coverage(const CommonOpts& opts, const CoverageReport& report,
                   const std::string& stem) {
  const fs::path dir(opts.out_dir);
  fs::create_directories(dir);
  write_file(dir / (stem + ".csv"), io::coverage_csv(report));
}

void print_ranking(const std::string& heading, const std::vector<CoverageReport>& reports) {
  std::cout << heading << " (best probability matching first):\n";
  for (std::size_t idx : compare_reports(reports)) {
    const auto& r = reports[idx];
    std::cout << "  " << r.label << ": mad=" << r.mean_abs_deviation
              << " tail_below_5=" << r.tail_below_5
              << " tail_above_95=" << r.tail_above_95 << '\n';
  }
}

Model example1_model_a() {
  return GaussianTransformModel(Transform::make_identity(), 1.0);
}
Model example1_model_b() {
  return GaussianTransformModel(Transform::make_cube(), 1.0);
}

CoverageConfig example1_base(const CommonOpts& opts) {
  CoverageConfig config;
  config.true_theta.kind = TrueThetaRule::Kind::uniform;
  config.true_theta.low = 0.5;
  config.true_theta.high = 1.5;
  config.num_trials = opts.trials.value_or(20000);
  config.seed = opts.seed.value_or(20130812);
  config.grid = GridSpec{-3.0, 3.0, 2001};
  config.threads = opts.threads;
  return config;
}

int cmd_example1(const CommonOpts& opts) {
  const Model a = example1_model_a();
  const Model b = example1_model_b();

  auto run = [&](std::vector<Model> experiments, PriorStrategy prior,
                 const std::string& label) {
    CoverageConfig config = example1_base(opts);
    config.experiments = std::move(experiments);
    config.prior = std::move(prior);
    config.label = label;
    return run_coverage(config);
  };

  const CoverageReport a_alone = run({a}, PriorStrategy::combined_jeffreys(), "A alone, uniform prior");
  const CoverageReport b_alone = run({b}, PriorStrategy::combined_jeffreys(), "B alone, theta^2 prior");
  const CoverageReport comb_uniform =
      run({a, b}, PriorStrategy::from_model(a), "combined, uniform prior");
  const CoverageReport comb_theta2 =
      run({a, b}, PriorStrategy::from_model(b), "combined, theta^2 prior");
  const CoverageReport comb_jeffreys =
      run({a, b}, PriorStrategy::combined_jeffreys(), "combined, combined-Jeffreys prior");

  emit_coverage(opts, a_alone, "example1_A_alone");
  emit_coverage(opts, b_alone, "example1_B_alone");
  emit_coverage(opts, comb_uniform, "example1_combined_uniform");
  emit_coverage(opts, comb_theta2, "example1_combined_theta2");
  emit_coverage(opts, comb_jeffreys, "example1_combined_jeffreys");
  if (wants_svg(opts)) {
    write_file(fs::path(opts.out_dir) / "example1_panel_b.svg",
               io::coverage_svg({comb_uniform, comb_theta2, comb_jeffreys},
                                "Coverage, combined experiments (parameter and its cube)"));
  }
  print_ranking("example1 combined-experiment priors",
                {comb_uniform, comb_theta2, comb_jeffreys});
  return exit_ok;
}

CoverageConfig example2_base(const CommonOpts& opts) {
  CoverageConfig config;
  config.true_theta.kind = TrueThetaRule::Kind::value_grid;
  config.true_theta.low = 0.01;
  config.true_theta.high = 0.11;
  config.true_theta.num_values = 100;
  config.true_theta.trials_per_value = 2000;
  if (opts.trials) {
    const long long per_value = (*opts.trials + 99) / 100;
    config.true_theta.trials_per_value = std::max<long long>(1, per_value);
  }
  config.seed = opts.seed.value_or(20130812);
  config.grid.num_points = 2001;
  config.threads = opts.threads;
  return config;
}

int cmd_example2(const CommonOpts& opts) {
  const Model binom = BinomialModel(40);
  const Model negbinom = NegativeBinomialModel(2);

  auto run = [&](std::vector<Model> experiments, PriorStrategy prior,
                 const std::string& label) {
    CoverageConfig config = example2_base(opts);
    config.experiments = std::move(experiments);
    config.prior = std::move(prior);
    config.label = label;
    return run_coverage(config);
  };

  const CoverageReport bin_matched =
      run({binom}, PriorStrategy::combined_jeffreys(), "binomial, matched prior");
  const CoverageReport bin_swapped =
      run({binom}, PriorStrategy::from_model(negbinom), "binomial, swapped prior");
  const CoverageReport nb_matched =
      run({negbinom}, PriorStrategy::combined_jeffreys(), "negbinomial, matched prior");
  const CoverageReport nb_swapped =
      run({negbinom}, PriorStrategy::from_model(binom), "negbinomial, swapped prior");
  const CoverageReport comb_bin_prior =
      run({binom, negbinom}, PriorStrategy::from_model(binom), "combined, binomial prior");
  const CoverageReport comb_nb_prior = run({binom, negbinom}, PriorStrategy::from_model(negbinom),
                                           "combined, negbinomial prior");
  const CoverageReport comb_jeffreys = run({binom, negbinom}, PriorStrategy::combined_jeffreys(),
                                           "combined, combined-Jeffreys prior");

  emit_coverage(opts, bin_matched, "example2_binomial_matched");
  emit_coverage(opts, bin_swapped, "example2_binomial_swapped");
  emit_coverage(opts, nb_matched, "example2_negbinomial_matched");
  emit_coverage(opts, nb_swapped, "example2_negbinomial_swapped");
  emit_coverage(opts, comb_bin_prior, "example2_combined_binomial_prior");
  emit_coverage(opts, comb_nb_prior, "example2_combined_negbinomial_prior");
  emit_coverage(opts, comb_jeffreys, "example2_combined_jeffreys");
  if (wants_svg(opts)) {
    write_file(fs::path(opts.out_dir) / "example2_panel_a.svg",
               io::coverage_svg({bin_matched, bin_swapped, nb_matched, nb_swapped},
                                "Coverage, single Bernoulli experiments"));
    write_file(fs::path(opts.out_dir) / "example2_panel_b.svg",
               io::coverage_svg({comb_bin_prior, comb_nb_prior, comb_jeffreys},
                                "Coverage, combined Bernoulli experiments"));
  }
  print_ranking("example2 panel (a)", {bin_matched, bin_swapped, nb_matched, nb_swapped});
  print_ranking("example2 panel (b)", {comb_bin_prior, comb_nb_prior, comb_jeffreys});
  return exit_ok;
}

int cmd_coverage(const CommonOpts& opts) {
  CoverageConfig config = io::parse_coverage_config(load_config(opts.config_path));
  if (opts.seed) config.seed = *opts.seed;
  if (opts.trials) config.num_trials = *opts.trials;
  if (opts.threads > 0) config.threads = opts.threads;
  const CoverageReport report = run_coverage(config);
  emit_coverage(opts, report, "coverage");
  if (wants_svg(opts)) {
    write_file(fs::path(opts.out_dir) / "coverage.svg",
               io::coverage_svg({report}, "Coverage"));
  }
  print_ranking("coverage", {report});
  return exit_ok;
}

int cmd_posterior(const CommonOpts& opts) {
  const io::PosteriorRequest request = io::parse_posterior_config(load_config(opts.config_path));
  bool any_bernoulli = false;
  for (const auto& [model, obs] : request.experiments)
    any_bernoulli = any_bernoulli || is_bernoulli_model(model);

  ParameterGrid grid = request.has_grid
                           ? ParameterGrid(request.grid.lower, request.grid.upper,
                                           request.grid.num_points)
                           : (any_bernoulli
                                  ? bernoulli_grid(request.grid.num_points)
                                  : auto_widen_grid(request.experiments, request.grid.lower,
                                                    request.grid.upper,
                                                    request.grid.num_points));

  FisherCurve fisher = FisherCurve::zero(grid);
  if (request.prior.combined) {
    for (const auto& [model, obs] : request.experiments)
      fisher = combine_fisher(fisher, analytic_fisher(model, grid));
  } else {
    fisher = analytic_fisher(*request.prior.designated, grid);
  }
  const PriorCurve prior = jeffreys_prior(fisher);

  std::vector<double> loglik(grid.num_points, 0.0);
  for (const auto& [model, obs] : request.experiments)
    for (int i = 0; i < grid.num_points; ++i)
      loglik[i] += log_likelihood(model, obs, grid.point(i));

  const PosteriorCurve post = posterior_from(grid, loglik, prior.values);
  fs::create_directories(opts.out_dir);
  write_file(fs::path(opts.out_dir) / "posterior.csv",
             io::posterior_csv(grid, prior.values, post));
  return exit_ok;
}

int cmd_fisher_table(const CommonOpts& opts) {
  const io::FisherTableRequest request =
      io::parse_fisher_table_config(load_config(opts.config_path));
  const ParameterGrid grid(request.grid.lower, request.grid.upper, request.grid.num_points);
  fs::create_directories(opts.out_dir);
  write_file(fs::path(opts.out_dir) / "fisher_table.csv",
             io::fisher_table_csv(request.model, grid));
  return exit_ok;
}

void add_common_flags(CLI::App* cmd, CommonOpts& opts, bool needs_config) {
  if (needs_config)
    cmd->add_option("--config", opts.config_path, "JSON run configuration")->required();
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "RNG seed");
  cmd->add_option("--trials", opts.trials, "override the number of Monte Carlo trials");
  cmd->add_option("--threads", opts.threads, "worker threads (0 = machine parallelism)");
  cmd->add_option("--formats", opts.formats, "comma-separated subset of csv,svg");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential Bayesian inference with cumulative likelihood and Fisher "
               "information records, plus a frequentist coverage harness"};
  app.require_subcommand(1);

  CommonOpts opts;
  CLI::App* example1 = app.add_subcommand("example1", "parameter-and-its-cube reproduction");
  CLI::App* example2 = app.add_subcommand("example2", "Bernoulli-trials reproduction");
  CLI::App* coverage = app.add_subcommand("coverage", "coverage run from a JSON config");
  CLI::App* posterior = app.add_subcommand("posterior", "posterior curve from a JSON config");
  CLI::App* fisher = app.add_subcommand("fisher-table", "Fisher table from a JSON config");
  add_common_flags(example1, opts, false);
  add_common_flags(example2, opts, false);
  add_common_flags(coverage, opts, true);
  add_common_flags(posterior, opts, true);
  add_common_flags(fisher, opts, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (example1->parsed()) return cmd_example1(opts);
    if (example2->parsed()) return cmd_example2(opts);
    if (coverage->parsed()) return cmd_coverage(opts);
    if (posterior->parsed()) return cmd_posterior(opts);
    if (fisher->parsed()) return cmd_fisher_table(opts);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return exit_io_error;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return exit_numeric_error;
  }
  return exit_ok;
}

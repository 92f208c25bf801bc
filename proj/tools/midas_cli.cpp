// Batch entry point: scenario grids, asymptotic diagnostics and CSV fitting.
//
//   midas_cli run <config.cfg>      mode comes from the config file
//   midas_cli fit --low y.csv --high x.csv --jmax 9 [...]
//
// Exit codes: 0 success, 1 config/validation error, 2 numerical failure,
// 3 I/O error.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "midas/diagnostics.hpp"
#include "midas/errors.hpp"
#include "midas/io.hpp"
#include "midas/monte_carlo.hpp"
#include "midas/run_config.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

int run_simulate(const midas::RunConfig& cfg) {
  const std::vector<midas::Scenario> grid = midas::expand_grid(cfg);
  std::cerr << "simulate: " << grid.size() << " scenarios x " << cfg.reps
            << " replications\n";

  const std::vector<midas::MetricsRow> rows = midas::run_grid(
      grid, cfg.threads, [&](int done, int total) {
        std::cerr << "  scenario " << done << "/" << total << " done\n";
      });

  std::filesystem::create_directories(cfg.out_dir);
  midas::write_metrics_csv(rows, cfg.out_dir + "/metrics.csv");
  midas::write_figdata_csv(rows, cfg.out_dir);
  std::cerr << "wrote " << cfg.out_dir << "/metrics.csv\n";

  const bool any_failed = std::any_of(rows.begin(), rows.end(),
                                      [](const midas::MetricsRow& r) { return !r.ok; });
  if (any_failed) {
    std::cerr << "error: a scenario had more than 50% replication failures\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int run_diagnose(const midas::RunConfig& cfg) {
  const int t_plim = *std::max_element(cfg.T.begin(), cfg.T.end());
  const int t_cov = *std::min_element(cfg.T.begin(), cfg.T.end());

  midas::Scenario base;
  base.T = t_plim;
  base.jmax = cfg.jmax.front();
  base.theta2 = cfg.theta.front();
  base.sigma_u2 = cfg.sigma_u2.front();
  base.sigma_v2 = cfg.sigma_v2.front();
  base.p = cfg.p;
  base.m = cfg.m;
  base.sigma_eps2 = cfg.sigma_eps2;
  midas::DgpParams params = midas::scenario_params(base);
  const std::uint64_t seed = cfg.seed.value();

  std::cerr << "diagnose: score limit and plims at T = " << t_plim << "\n";
  const midas::GradientLimitReport gradient =
      midas::naive_gradient_limit(params, seed);

  const midas::PlimReport plim_t = midas::plim_checks(params, seed);
  midas::DgpParams params_4t = params;
  params_4t.T = 4 * t_plim;
  const midas::PlimReport plim_4t = midas::plim_checks(params_4t, seed + 1);
  const double ratio =
      plim_4t.combined_deviation_norm / plim_t.combined_deviation_norm;
  std::cerr << "  plim deviation norms: " << plim_t.combined_deviation_norm
            << " at T, " << plim_4t.combined_deviation_norm << " at 4T (ratio "
            << ratio << ")\n";

  std::vector<std::pair<std::string, midas::CoverageReport>> coverages;
  if (cfg.T.size() >= 2 && cfg.reps >= 2) {
    std::cerr << "diagnose: interval coverage at T = " << t_cov << ", "
              << cfg.reps << " replications\n";
    midas::DgpParams cov_params = params;
    cov_params.T = t_cov;
    const midas::SearchConfig search{cfg.theta_lo, cfg.theta_hi, cfg.gss_iters};
    coverages.emplace_back(
        "corrected", midas::coverage_check(cov_params, cfg.reps, seed,
                                           midas::EstimatorKind::kCorrected,
                                           search, cfg.threads));
    coverages.emplace_back(
        "naive", midas::coverage_check(cov_params, cfg.reps, seed,
                                       midas::EstimatorKind::kNaive, search,
                                       cfg.threads));
  }

  std::filesystem::create_directories(cfg.out_dir);
  midas::write_diagnostics_csv({gradient}, {plim_t, plim_4t}, coverages,
                               cfg.out_dir + "/diagnostics.csv");
  std::cerr << "wrote " << cfg.out_dir << "/diagnostics.csv\n";

  if (!gradient.all_pass || !plim_t.all_pass) {
    std::cerr << "error: a diagnostic check failed its tolerance\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int run_fit(const std::string& low_path, const std::string& high_path, int p,
            int jmax, const midas::MeVariances& me,
            const midas::SearchConfig& search) {
  const midas::MixedSeries series = midas::read_mixed_csv(low_path, high_path);
  std::cerr << "fit: T = " << series.y_obs.size() << ", m = " << series.m << "\n";
  const midas::DesignSet ds = midas::align_mixed(series, p, jmax);
  const midas::FitResult corrected = midas::fit_corrected(ds, me, search);
  const midas::FitResult naive = midas::fit_naive(ds, search);
  midas::print_fit_report(std::cout, corrected, naive, ds, me);
  return kExitOk;
}

int dispatch_config(const std::string& path) {
  const midas::RunConfig cfg = midas::load_config(path);
  switch (cfg.mode) {
    case midas::RunMode::kSimulate:
      return run_simulate(cfg);
    case midas::RunMode::kDiagnose:
      return run_diagnose(cfg);
    case midas::RunMode::kFit: {
      const midas::MeVariances me{cfg.sigma_u2.empty() ? 0.0 : cfg.sigma_u2.front(),
                                  cfg.sigma_v2.empty() ? 0.0 : cfg.sigma_v2.front()};
      return run_fit(cfg.low_csv, cfg.high_csv, cfg.p, cfg.jmax.front(), me,
                     midas::SearchConfig{cfg.theta_lo, cfg.theta_hi, cfg.gss_iters});
    }
  }
  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ADL-MIDAS estimation with measurement-error correction"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "execute a config file (simulate/diagnose/fit)");
  run->add_option("config", config_path, "path to key=value config")->required();

  std::string low_path, high_path;
  int p = 2;
  int jmax = 9;
  double sigma_u2 = 0.0, sigma_v2 = 0.0;
  midas::SearchConfig search;
  CLI::App* fit = app.add_subcommand("fit", "fit CSV data");
  fit->add_option("--low", low_path, "low-frequency CSV (period,value)")->required();
  fit->add_option("--high", high_path, "high-frequency CSV (period,subperiod,value)")
      ->required();
  fit->add_option("--p", p, "autoregressive order");
  fit->add_option("--jmax", jmax, "high-frequency lag count");
  fit->add_option("--sigma-u2", sigma_u2, "low-frequency ME variance");
  fit->add_option("--sigma-v2", sigma_v2, "high-frequency ME variance");
  fit->add_option("--theta-lo", search.theta_lo, "search bracket lower bound");
  fit->add_option("--theta-hi", search.theta_hi, "search bracket upper bound");
  fit->add_option("--gss-iters", search.iterations, "golden-section iterations");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return dispatch_config(config_path);
    return run_fit(low_path, high_path, p, jmax,
                   midas::MeVariances{sigma_u2, sigma_v2}, search);
  } catch (const midas::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const midas::CsvError& e) {
    std::cerr << "error [" << e.kind << "]: " << e.what() << "\n";
    return e.kind == "io" ? kExitIo : kExitConfig;
  } catch (const midas::EstimationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

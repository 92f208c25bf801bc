#include "midas/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "midas/errors.hpp"
#include "midas/parallel.hpp"

namespace midas {

DgpParams scenario_params(const Scenario& sc) {
  DgpParams params;
  params.T = sc.T;
  params.jmax = sc.jmax;
  params.m = sc.m;
  params.theta2 = sc.theta2;
  params.sigma_eps2 = sc.sigma_eps2;
  params.me = MeVariances{sc.sigma_u2, sc.sigma_v2};
  const Eigen::Vector2d base(0.3, 0.2);
  params.rho = Eigen::VectorXd::Zero(sc.p);
  for (int j = 0; j < std::min(sc.p, 2); ++j) params.rho[j] = base[j];
  return params;
}

Eigen::VectorXd scenario_beta(const Scenario& sc) {
  const DgpParams params = scenario_params(sc);
  Eigen::VectorXd beta(sc.p + 2);
  beta[0] = params.a;
  beta.segment(1, sc.p) = params.rho;
  beta[sc.p + 1] = params.b;
  return beta;
}

ReplicationResult run_replication(const Scenario& sc, std::uint64_t rep_index) {
  ReplicationResult out;
  const DgpParams params = scenario_params(sc);
  const SimulatedData data = simulate(params, sc.master_seed, rep_index);

  DesignSet ds;
  try {
    ds = align_mixed(data.observed, sc.p, sc.jmax);
  } catch (const std::exception& e) {
    out.naive_error = e.what();
    out.corrected_error = e.what();
    return out;
  }

  try {
    out.naive = fit_naive(ds, sc.search);
  } catch (const std::exception& e) {
    out.naive_error = e.what();
  }
  try {
    out.corrected = fit_corrected(ds, params.me, sc.search);
  } catch (const std::exception& e) {
    out.corrected_error = e.what();
  }
  return out;
}

ScenarioReplications run_scenario(const Scenario& sc, int threads) {
  if (sc.reps < 1) throw std::invalid_argument("run_scenario: reps must be >= 1");
  ScenarioReplications runs;
  runs.scenario = sc;
  runs.reps.resize(sc.reps);
  parallel_for_index(sc.reps, threads, [&](int i) {
    runs.reps[i] = run_replication(sc, static_cast<std::uint64_t>(i));
  });
  return runs;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double nmedb(const std::vector<Eigen::VectorXd>& estimates,
             const Eigen::VectorXd& truth) {
  if (estimates.empty()) throw std::invalid_argument("nmedb: empty sample");
  Eigen::VectorXd med(truth.size());
  std::vector<double> coord(estimates.size());
  for (Eigen::Index k = 0; k < truth.size(); ++k) {
    for (std::size_t i = 0; i < estimates.size(); ++i) coord[i] = estimates[i][k];
    med[k] = median(coord);
  }
  return (med - truth).norm();
}

double trmed_sem(const std::vector<Eigen::VectorXd>& estimates,
                 const Eigen::VectorXd& truth) {
  if (estimates.empty()) throw std::invalid_argument("trmed_sem: empty sample");
  double trace = 0.0;
  std::vector<double> sq(estimates.size());
  for (Eigen::Index k = 0; k < truth.size(); ++k) {
    for (std::size_t i = 0; i < estimates.size(); ++i) {
      const double dev = estimates[i][k] - truth[k];
      sq[i] = dev * dev;
    }
    trace += median(sq);
  }
  return trace;
}

double medb(const std::vector<double>& estimates, double truth) {
  return std::abs(median(estimates) - truth);
}

MetricsRow aggregate(const ScenarioReplications& runs, EstimatorKind kind) {
  MetricsRow row;
  row.scenario = runs.scenario;
  row.estimator = kind;

  std::vector<Eigen::VectorXd> betas;
  std::vector<double> thetas, sigmas;
  int clamped = 0;
  int failed = 0;
  for (const ReplicationResult& rep : runs.reps) {
    const std::optional<FitResult>& fit =
        kind == EstimatorKind::kNaive ? rep.naive : rep.corrected;
    if (!fit) {
      ++failed;
      continue;
    }
    betas.push_back(fit->beta_hat);
    thetas.push_back(fit->theta_hat);
    sigmas.push_back(fit->sigma_eps2_hat);
    if (fit->clamped_variance) ++clamped;
  }

  const int total = static_cast<int>(runs.reps.size());
  row.failure_rate = total > 0 ? static_cast<double>(failed) / total : 0.0;
  row.clamp_rate =
      betas.empty() ? 0.0 : static_cast<double>(clamped) / betas.size();
  row.ok = row.failure_rate < 0.5 && !betas.empty();
  if (!row.ok) {
    const double nan = std::nan("");
    row.nmedb = row.trmedsem = row.medb_theta = row.medb_sigma2 = nan;
    return row;
  }

  const Eigen::VectorXd truth = scenario_beta(runs.scenario);
  row.nmedb = nmedb(betas, truth);
  row.trmedsem = trmed_sem(betas, truth);
  row.medb_theta = medb(thetas, runs.scenario.theta2);
  row.medb_sigma2 = medb(sigmas, runs.scenario.sigma_eps2);
  return row;
}

std::vector<MetricsRow> run_grid(const std::vector<Scenario>& grid, int threads,
                                 const std::function<void(int, int)>& progress) {
  std::vector<MetricsRow> rows;
  rows.reserve(grid.size() * 2);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const ScenarioReplications runs = run_scenario(grid[i], threads);
    rows.push_back(aggregate(runs, EstimatorKind::kNaive));
    rows.push_back(aggregate(runs, EstimatorKind::kCorrected));
    if (progress) progress(static_cast<int>(i) + 1, static_cast<int>(grid.size()));
  }
  return rows;
}

double bootstrap_se(int n_items, int resamples, std::uint64_t seed,
                    const std::function<double(const std::vector<int>&)>& statistic) {
  if (n_items < 2 || resamples < 2) {
    throw std::invalid_argument("bootstrap_se: need at least 2 items and 2 resamples");
  }
  RngStream rng = RngStream::from(seed, 0, StreamRole::kBootstrap);
  std::vector<double> values(resamples);
  std::vector<int> indices(n_items);
  for (int r = 0; r < resamples; ++r) {
    for (int& idx : indices) {
      idx = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n_items));
    }
    values[r] = statistic(indices);
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= resamples;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (resamples - 1));
}

}  // namespace midas

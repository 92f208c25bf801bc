#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "midas/estimator.hpp"
#include "midas/simulator.hpp"

namespace midas {

// One cell of the simulation grid.
struct Scenario {
  int T = 120;
  int jmax = 9;
  double theta2 = 2.0;
  double sigma_u2 = 0.5;
  double sigma_v2 = 0.5;
  int p = 2;
  int m = 3;
  int reps = 1000;
  std::uint64_t master_seed = 0;
  double sigma_eps2 = 1.0;
  SearchConfig search;
};

// DGP parameters implied by a scenario: study defaults with rho_1 = 0.3,
// rho_2 = 0.2 (truncated or zero-padded when p != 2).
DgpParams scenario_params(const Scenario& sc);

// True coefficient vector (a, rho_1..rho_p, b) of a scenario.
Eigen::VectorXd scenario_beta(const Scenario& sc);

struct ReplicationResult {
  std::optional<FitResult> naive;
  std::optional<FitResult> corrected;
  std::string naive_error;
  std::string corrected_error;
};

// Simulates one dataset and fits both estimators on it. Fit failures are
// recorded, not thrown. Deterministic in (sc.master_seed, rep_index).
ReplicationResult run_replication(const Scenario& sc, std::uint64_t rep_index);

struct ScenarioReplications {
  Scenario scenario;
  std::vector<ReplicationResult> reps;
};

// All replications of one scenario; parallel but schedule-independent.
ScenarioReplications run_scenario(const Scenario& sc, int threads = 0);

enum class EstimatorKind { kNaive, kCorrected };
inline const char* estimator_tag(EstimatorKind k) {
  return k == EstimatorKind::kNaive ? "naive" : "corrected";
}

struct MetricsRow {
  Scenario scenario;
  EstimatorKind estimator = EstimatorKind::kNaive;
  double nmedb = 0.0;
  double trmedsem = 0.0;
  double medb_theta = 0.0;
  double medb_sigma2 = 0.0;
  double clamp_rate = 0.0;
  double failure_rate = 0.0;
  bool ok = true;  // false when more than half the replications failed
};

// Median of a sample; even lengths take the midpoint of the two central
// order statistics.
double median(std::vector<double> values);

// Euclidean norm of the coordinatewise median bias.
double nmedb(const std::vector<Eigen::VectorXd>& estimates,
             const Eigen::VectorXd& truth);

// Trace of the entrywise median of the squared-error matrices; only the
// diagonal survives the trace, so this is the sum over coordinates of the
// median squared error.
double trmed_sem(const std::vector<Eigen::VectorXd>& estimates,
                 const Eigen::VectorXd& truth);

// Absolute deviation of the sample median from the truth.
double medb(const std::vector<double>& estimates, double truth);

// Metrics for one estimator over a scenario's replications. Clamped fits are
// included; errored fits are excluded and show up in failure_rate.
MetricsRow aggregate(const ScenarioReplications& runs, EstimatorKind kind);

// Runs every scenario and emits two rows (naive, corrected) per scenario in
// input order.
std::vector<MetricsRow> run_grid(const std::vector<Scenario>& grid, int threads = 0,
                                 const std::function<void(int, int)>& progress = {});

// Bootstrap standard error of a statistic of replication-level values:
// `statistic` maps a resampled index multiset to the statistic's value.
double bootstrap_se(int n_items, int resamples, std::uint64_t seed,
                    const std::function<double(const std::vector<int>&)>& statistic);

}  // namespace midas

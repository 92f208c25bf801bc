#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "midas/monte_carlo.hpp"
#include "midas/simulator.hpp"

namespace midas {

// Batch-means accumulator: point estimate from the full-sample mean, standard
// error from the spread of batch means, which stays honest under the serial
// dependence the aligned rows carry.
class BatchMeans {
 public:
  BatchMeans(int n_items, int dim, int batches = 100);

  void add(int item_index, const Eigen::VectorXd& value);

  Eigen::VectorXd mean() const;
  Eigen::VectorXd standard_error() const;

 private:
  int n_items_;
  int batches_;
  Eigen::VectorXd total_;
  Eigen::MatrixXd batch_sums_;   // dim x batches
  Eigen::VectorXd batch_count_;
};

// One scalar comparison against a probability limit. Passes when the
// deviation is inside max(rel_tol * |predicted|, 3 * mc_se).
struct ComponentCheck {
  std::string label;
  double empirical = 0.0;
  double predicted = 0.0;
  double mc_se = 0.0;
  bool pass = true;
};

ComponentCheck make_check(std::string label, double empirical, double predicted,
                          double mc_se, double rel_tol);

struct GradientLimitReport {
  std::vector<ComponentCheck> components;  // p+3 eta entries, then sigma2
  bool all_pass = true;
};

// Evaluates the ignored-ME score at the true parameters on one simulated
// dataset of size params.T, scaled by 1/T, against its nonzero probability
// limit. With no measurement error the limit is zero and the empirical score
// must vanish within Monte Carlo noise.
GradientLimitReport naive_gradient_limit(const DgpParams& params,
                                         std::uint64_t master_seed,
                                         double rel_tol = 0.05);

struct PlimCheck {
  std::string name;
  std::vector<ComponentCheck> components;
  double deviation_norm = 0.0;  // ||empirical - target|| over all components
  bool pass = true;
};

struct PlimReport {
  std::vector<PlimCheck> checks;        // xii, xiii, xiv
  double combined_deviation_norm = 0.0;
  bool all_pass = true;
};

// Second-moment limits of the contaminated design: cross moment with the
// composite error, the design Gram matrix against the latent one, and the
// composite error's second moment. The latent design is simulation-only
// ground truth; real fits never see it.
PlimReport plim_checks(const DgpParams& params, std::uint64_t master_seed,
                       double rel_tol = 0.05);

struct CoverageReport {
  std::vector<std::string> labels;   // a, rho_1.., b, theta, sigma_eps2
  std::vector<double> coverage;      // per-coordinate 95%-interval coverage
  int usable_reps = 0;
  int failed_fits = 0;
  int missing_covariance = 0;
};

// Empirical coverage of the plug-in 95% intervals over `reps` replications of
// params. `kind` selects which estimator builds the intervals; the naive one
// uses its own zero-ME covariance plug-in.
CoverageReport coverage_check(const DgpParams& params, int reps,
                              std::uint64_t master_seed,
                              EstimatorKind kind = EstimatorKind::kCorrected,
                              const SearchConfig& search = {}, int threads = 0);

}  // namespace midas

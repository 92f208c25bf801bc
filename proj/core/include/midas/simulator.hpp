#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "midas/design.hpp"
#include "midas/rng.hpp"

namespace midas {

// Generating-process parameters for the simulation study. Defaults are the
// study's fixed values: a = 0, rho = (0.3, 0.2), b = 1, monthly-in-quarterly
// frequency ratio, AR(1) high-frequency series with autocorrelation 0.8.
// The equation-error variance and the AR innovation scale are unit by
// convention; both are configurable.
struct DgpParams {
  double a = 0.0;
  Eigen::VectorXd rho = (Eigen::VectorXd(2) << 0.3, 0.2).finished();
  double b = 1.0;
  double theta2 = 2.0;
  int jmax = 9;
  int m = 3;
  int T = 120;
  double ar_coef = 0.8;
  double ar_innov_sd = 1.0;
  double sigma_eps2 = 1.0;
  MeVariances me;
  int hf_burnin_periods = 200;  // discarded AR(1) spin-up, in low-freq periods
  int lf_burnin = 100;          // discarded leading low-frequency periods

  int p() const { return static_cast<int>(rho.size()); }
};

// AR(1) path of length n: x_t = phi x_{t-1} + e_t, e_t iid N(0, innov_sd^2),
// started at zero with `burnin` discarded draws.
Eigen::VectorXd gen_ar1(int n, double phi, double innov_sd, int burnin,
                        RngStream& rng);

// Low-frequency recursion driven by x_high. The trailing m*(T + lf_burnin)
// entries of x_high are the in-sample periods; anything before them is
// presample history for the deepest lags. Returns the last T values, i.e. the
// series after the burn-in is discarded. The anchor convention matches
// align_mixed exactly.
Eigen::VectorXd gen_low_freq(const Eigen::VectorXd& x_high, const DgpParams& params,
                             RngStream& rng);

// Adds iid Gaussian measurement error to both series; draws nothing for a
// zero variance, so error-free output is bitwise the input.
struct ContaminatedPair {
  Eigen::VectorXd y_obs;
  Eigen::VectorXd x_obs;
};
ContaminatedPair contaminate(const Eigen::VectorXd& z, const Eigen::VectorXd& x,
                             const MeVariances& me, RngStream& rng);

struct SimulatedData {
  MixedSeries observed;      // contaminated series handed to estimators
  Eigen::VectorXd z_latent;  // error-free response, length T
  Eigen::VectorXd x_latent;  // error-free regressor, length m*T
};

// One replication's dataset. Every draw comes from streams addressed by
// (master_seed, replication, role), so the output is a pure function of the
// arguments no matter which thread runs it.
SimulatedData simulate(const DgpParams& params, std::uint64_t master_seed,
                       std::uint64_t replication);

}  // namespace midas

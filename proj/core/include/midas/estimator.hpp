#pragma once

#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "midas/design.hpp"
#include "midas/lag_weights.hpp"

namespace midas {

// Scalar search bracket for the lag-polynomial parameter. The estimation
// restriction is theta2 > 1; the upper bound comfortably exceeds every
// simulated value while keeping the weights numerically tame.
struct SearchConfig {
  double theta_lo = 1.001;
  double theta_hi = 50.0;
  int iterations = 50;
};

struct GoldenResult {
  double theta = 0.0;
  double objective = 0.0;
};

// Golden-section maximization of f on [theta_lo, theta_hi]. Each iteration
// shrinks the bracket by (sqrt(5)-1)/2; evaluation failures (EstimationError)
// count as -inf so the search slides into the feasible sub-interval. Throws
// only if no probe ever evaluates.
GoldenResult golden_section_max(const std::function<double(double)>& f,
                                const SearchConfig& cfg);

// Profile criterion Y'X(t)[X(t)'X(t)]^-1 X(t)'Y of the estimator that ignores
// measurement error. Throws SingularDesignError when the normal matrix has
// condition number above 1e12.
double naive_objective(double theta, const DesignSet& ds);

// Corrected criterion Y'X(t)[X(t)'X(t) - n*Sigma_c]^-1 X(t)'Y, n the design
// row count. Reduces exactly to naive_objective when me is zero. Throws
// CorrectionError when the corrected normal matrix is indefinite beyond
// -1e-8 * ||.|| or its condition number exceeds 1e12.
double corrected_objective(double theta, const DesignSet& ds, const MeVariances& me);

struct FitResult {
  Eigen::VectorXd beta_hat;       // (a, rho_1..rho_p, b)
  double theta_hat = 0.0;
  double sigma_eps2_hat = 0.0;
  double objective = 0.0;
  bool clamped_variance = false;  // sigma_eps2_hat was floored
  // Plug-in asymptotic covariance of (beta, theta, sigma_eps2), size
  // (p+4) x (p+4); absent when the plug-in information matrix is singular.
  std::optional<Eigen::MatrixXd> covariance;
};

// Floor applied to the corrected variance estimate, which can go negative in
// small samples.
inline constexpr double kVarianceFloor = 1e-10;

FitResult fit_naive(const DesignSet& ds, const SearchConfig& cfg = {});

// Corrected-score profile estimator under known ME variances. Identical to
// fit_naive when me is zero.
FitResult fit_corrected(const DesignSet& ds, const MeVariances& me,
                        const SearchConfig& cfg = {});

// (1/T) blockdiag(sigma2 * (D' Qhat D)^-1, 2 * sigma2^2), with
// Qhat = (1/T)(X'X - n * sigma_unrestricted) the plug-in for the clean-design
// second moment. `me` is the error model the estimator believed in: the
// corrected fit's own variances, or (0,0) for the naive fit.
Eigen::MatrixXd asymptotic_covariance(const FitResult& fit, const DesignSet& ds,
                                      const LagWeights& w, const MeVariances& me);

}  // namespace midas

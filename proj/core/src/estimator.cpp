#include "midas/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "midas/errors.hpp"

namespace midas {

namespace {

constexpr double kInvGolden = 0.61803398874989484820;  // (sqrt(5) - 1) / 2
constexpr double kMaxCondition = 1e12;
constexpr double kIndefiniteTol = 1e-8;

// Shared machinery of the two profile criteria: the restricted design at
// theta, its (possibly corrected) normal matrix and right-hand side.
struct CriterionParts {
  LagWeights w;
  Eigen::MatrixXd design;  // X(theta)
  Eigen::MatrixXd normal;  // X'X - n * Sigma_c
  Eigen::VectorXd rhs;     // X'Y
};

CriterionParts build_parts(double theta, const DesignSet& ds, const MeVariances& me) {
  CriterionParts parts;
  parts.w = beta_weights(theta, ds.jmax);
  parts.design = restricted_design(ds, parts.w);
  parts.normal = parts.design.transpose() * parts.design -
                 static_cast<double>(ds.rows()) * sigma_c(parts.w, me, ds.p);
  parts.rhs = parts.design.transpose() * ds.response;
  return parts;
}

// Validates the (corrected) normal matrix and solves normal * x = rhs through
// its eigendecomposition. The matrix is symmetric but need not be positive
// definite once the correction is subtracted, so plain Cholesky is out.
Eigen::VectorXd checked_solve(const CriterionParts& parts, bool corrected) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(parts.normal);
  if (eig.info() != Eigen::Success) {
    throw SingularDesignError("normal matrix eigendecomposition failed");
  }
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double max_abs = ev.cwiseAbs().maxCoeff();
  const double min_abs = ev.cwiseAbs().minCoeff();
  const double condition =
      min_abs > 0.0 ? max_abs / min_abs : std::numeric_limits<double>::infinity();

  if (corrected && ev.minCoeff() < -kIndefiniteTol * max_abs) {
    throw CorrectionError(
        "corrected normal matrix is indefinite (min eigenvalue " +
        std::to_string(ev.minCoeff()) +
        "); ME variances too large for this sample");
  }
  if (!(condition < kMaxCondition)) {
    if (corrected) {
      throw CorrectionError("corrected normal matrix is numerically singular "
                            "(condition number " + std::to_string(condition) + ")");
    }
    throw SingularDesignError("singular design at theta = " +
                                  std::to_string(parts.w.theta2) +
                                  " (condition number " + std::to_string(condition) + ")",
                              condition);
  }

  const Eigen::VectorXd projected = eig.eigenvectors().transpose() * parts.rhs;
  return eig.eigenvectors() * projected.cwiseQuotient(ev);
}

double quadratic_criterion(double theta, const DesignSet& ds, const MeVariances& me) {
  const CriterionParts parts = build_parts(theta, ds, me);
  return parts.rhs.dot(checked_solve(parts, !me.zero()));
}

}  // namespace

GoldenResult golden_section_max(const std::function<double(double)>& f,
                                const SearchConfig& cfg) {
  if (!(cfg.theta_lo > 1.0)) {
    throw std::invalid_argument("golden_section_max: theta_lo must exceed 1");
  }
  if (!(cfg.theta_hi > cfg.theta_lo)) {
    throw std::invalid_argument("golden_section_max: empty bracket");
  }
  if (cfg.iterations < 1) {
    throw std::invalid_argument("golden_section_max: iterations must be >= 1");
  }

  const double kFail = -std::numeric_limits<double>::infinity();
  auto probe = [&](double x) -> double {
    try {
      return f(x);
    } catch (const EstimationError&) {
      // Treat as -inf: the bracket update discards the sub-interval around
      // the failing probe.
      return kFail;
    }
  };

  double lo = cfg.theta_lo;
  double hi = cfg.theta_hi;
  double x1 = hi - kInvGolden * (hi - lo);
  double x2 = lo + kInvGolden * (hi - lo);
  double f1 = probe(x1);
  double f2 = probe(x2);

  for (int it = 0; it < cfg.iterations; ++it) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvGolden * (hi - lo);
      f1 = probe(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvGolden * (hi - lo);
      f2 = probe(x2);
    }
  }

  GoldenResult best;
  if (f1 >= f2) {
    best.theta = x1;
    best.objective = f1;
  } else {
    best.theta = x2;
    best.objective = f2;
  }
  if (best.objective == kFail) {
    throw CorrectionError("golden_section_max: criterion failed on the whole bracket");
  }
  return best;
}

double naive_objective(double theta, const DesignSet& ds) {
  return quadratic_criterion(theta, ds, MeVariances{});
}

double corrected_objective(double theta, const DesignSet& ds, const MeVariances& me) {
  return quadratic_criterion(theta, ds, me);
}

FitResult fit_corrected(const DesignSet& ds, const MeVariances& me,
                        const SearchConfig& cfg) {
  const GoldenResult opt = golden_section_max(
      [&](double theta) { return quadratic_criterion(theta, ds, me); }, cfg);

  const CriterionParts parts = build_parts(opt.theta, ds, me);
  FitResult fit;
  fit.theta_hat = opt.theta;
  fit.objective = opt.objective;
  fit.beta_hat = checked_solve(parts, !me.zero());

  // sigma2 = (1/T) [ ||Y - X b||^2 - n (sigma_u2 + b' Sigma_c b) ], with T the
  // full low-frequency length and n the design row count. The subtraction can
  // undershoot zero in small samples; the floor is recorded, not hidden.
  const Eigen::VectorXd resid = ds.response - parts.design * fit.beta_hat;
  const double n = static_cast<double>(ds.rows());
  const double correction =
      n * (me.sigma_u2 +
           fit.beta_hat.dot(sigma_c(parts.w, me, ds.p) * fit.beta_hat));
  const double raw =
      (resid.squaredNorm() - correction) / static_cast<double>(ds.total_periods);
  fit.clamped_variance = raw < kVarianceFloor;
  fit.sigma_eps2_hat = std::max(raw, kVarianceFloor);

  try {
    fit.covariance = asymptotic_covariance(fit, ds, parts.w, me);
  } catch (const EstimationError&) {
    fit.covariance.reset();
  }
  return fit;
}

FitResult fit_naive(const DesignSet& ds, const SearchConfig& cfg) {
  return fit_corrected(ds, MeVariances{}, cfg);
}

Eigen::MatrixXd asymptotic_covariance(const FitResult& fit, const DesignSet& ds,
                                      const LagWeights& w, const MeVariances& me) {
  const int p = ds.p;
  if (fit.beta_hat.size() != p + 2) {
    throw DimensionError("asymptotic_covariance: beta/design size mismatch");
  }
  const Eigen::MatrixXd d = jacobian_d(fit.beta_hat, w, p);

  // T * Qhat = X'X - n * Sigma; the 1/T factors of Qhat and of the covariance
  // cancel in the eta block.
  const Eigen::MatrixXd scaled_q =
      ds.x_unrestricted.transpose() * ds.x_unrestricted -
      static_cast<double>(ds.rows()) * sigma_unrestricted(me, p, ds.jmax);
  const Eigen::MatrixXd info = d.transpose() * scaled_q * d;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(info);
  if (eig.info() != Eigen::Success) {
    throw SingularDesignError("asymptotic_covariance: eigendecomposition failed");
  }
  const Eigen::VectorXd& ev = eig.eigenvalues();
  if (!(ev.minCoeff() > 0.0) ||
      ev.maxCoeff() / ev.minCoeff() > kMaxCondition) {
    throw SingularDesignError("asymptotic_covariance: D'QD singular or not "
                              "positive definite");
  }

  const int dim = p + 3;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim + 1, dim + 1);
  const Eigen::MatrixXd inv =
      eig.eigenvectors() * ev.cwiseInverse().asDiagonal() *
      eig.eigenvectors().transpose();
  cov.topLeftCorner(dim, dim) = fit.sigma_eps2_hat * inv;
  cov(dim, dim) = 2.0 * fit.sigma_eps2_hat * fit.sigma_eps2_hat /
                  static_cast<double>(ds.total_periods);
  return cov;
}

}  // namespace midas

#include "midas/diagnostics.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "midas/errors.hpp"
#include "midas/lag_weights.hpp"
#include "midas/parallel.hpp"

namespace midas {

BatchMeans::BatchMeans(int n_items, int dim, int batches)
    : n_items_(n_items),
      batches_(std::min(batches, n_items)),
      total_(Eigen::VectorXd::Zero(dim)),
      batch_sums_(Eigen::MatrixXd::Zero(dim, std::min(batches, n_items))),
      batch_count_(Eigen::VectorXd::Zero(std::min(batches, n_items))) {
  if (n_items < 2) throw std::invalid_argument("BatchMeans: need >= 2 items");
}

void BatchMeans::add(int item_index, const Eigen::VectorXd& value) {
  const int b = static_cast<int>(
      static_cast<long>(item_index) * batches_ / n_items_);
  total_ += value;
  batch_sums_.col(b) += value;
  batch_count_[b] += 1.0;
}

Eigen::VectorXd BatchMeans::mean() const { return total_ / n_items_; }

Eigen::VectorXd BatchMeans::standard_error() const {
  const Eigen::VectorXd overall = mean();
  Eigen::VectorXd ss = Eigen::VectorXd::Zero(total_.size());
  int used = 0;
  for (int b = 0; b < batches_; ++b) {
    if (batch_count_[b] < 1.0) continue;
    const Eigen::VectorXd dev = batch_sums_.col(b) / batch_count_[b] - overall;
    ss += dev.cwiseProduct(dev);
    ++used;
  }
  if (used < 2) throw std::invalid_argument("BatchMeans: need >= 2 batches");
  return (ss / (used - 1)).cwiseSqrt() / std::sqrt(static_cast<double>(used));
}

ComponentCheck make_check(std::string label, double empirical, double predicted,
                          double mc_se, double rel_tol) {
  ComponentCheck c;
  c.label = std::move(label);
  c.empirical = empirical;
  c.predicted = predicted;
  c.mc_se = mc_se;
  const double tol = std::max(rel_tol * std::abs(predicted), 3.0 * mc_se);
  c.pass = std::abs(empirical - predicted) <= tol;
  return c;
}

namespace {

struct LimitInputs {
  DesignSet observed;   // contaminated X, Y
  DesignSet latent;     // error-free Psi, Z
  Eigen::VectorXd beta_m;
  Eigen::MatrixXd d;
  Eigen::MatrixXd sigma;      // unrestricted Sigma
  Eigen::VectorXd composite;  // T_tilde = Y - X beta_M
};

LimitInputs prepare_limit_inputs(const DgpParams& params, std::uint64_t seed) {
  const SimulatedData data = simulate(params, seed, 0);
  LimitInputs in;
  in.observed = align_mixed(data.observed, params.p(), params.jmax);
  in.latent = align_mixed(MixedSeries{data.z_latent, data.x_latent, params.m},
                          params.p(), params.jmax);

  const LagWeights w = beta_weights(params.theta2, params.jmax);
  Eigen::VectorXd beta(params.p() + 2);
  beta[0] = params.a;
  beta.segment(1, params.p()) = params.rho;
  beta[params.p() + 1] = params.b;
  in.beta_m = melted_coefficients(beta, w);
  in.d = jacobian_d(beta, w, params.p());
  in.sigma = sigma_unrestricted(params.me, params.p(), params.jmax);
  in.composite = in.observed.response - in.observed.x_unrestricted * in.beta_m;
  return in;
}

}  // namespace

GradientLimitReport naive_gradient_limit(const DgpParams& params,
                                         std::uint64_t master_seed,
                                         double rel_tol) {
  if (params.T < 10000) {
    throw std::invalid_argument("naive_gradient_limit: needs T >= 1e4");
  }
  const LimitInputs in = prepare_limit_inputs(params, master_seed);
  const int n = in.observed.rows();
  const int eta_dim = params.p() + 3;
  const double t = static_cast<double>(params.T);
  const double s2 = params.sigma_eps2;
  const double scale = static_cast<double>(n) / t;

  // Per-row score contributions; batch means give dependence-aware SEs.
  BatchMeans eta_acc(n, eta_dim);
  BatchMeans sq_acc(n, 1);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd xrow = in.observed.x_unrestricted.row(i).transpose();
    eta_acc.add(i, (in.composite[i] / s2) * (in.d.transpose() * xrow));
    sq_acc.add(i, Eigen::VectorXd::Constant(
                      1, 0.5 / (s2 * s2) * in.composite[i] * in.composite[i]));
  }

  const Eigen::VectorXd eta_emp = scale * eta_acc.mean();
  const Eigen::VectorXd eta_se = scale * eta_acc.standard_error();
  const Eigen::VectorXd eta_pred = -(in.d.transpose() * in.sigma * in.beta_m) / s2;

  const double sq_emp = -0.5 / s2 + scale * sq_acc.mean()[0];
  const double sq_se = scale * sq_acc.standard_error()[0];
  const double sq_pred =
      0.5 / (s2 * s2) *
      (params.me.sigma_u2 + in.beta_m.dot(in.sigma * in.beta_m));

  GradientLimitReport report;
  const char* eta_names[] = {"a", "rho", "b", "theta"};
  for (int k = 0; k < eta_dim; ++k) {
    std::string label;
    if (k == 0) label = eta_names[0];
    else if (k <= params.p()) label = "rho" + std::to_string(k);
    else label = eta_names[k - params.p() + 1];
    report.components.push_back(
        make_check(label, eta_emp[k], eta_pred[k], eta_se[k], rel_tol));
  }
  report.components.push_back(
      make_check("sigma_eps2", sq_emp, sq_pred, sq_se, rel_tol));
  for (const ComponentCheck& c : report.components) {
    report.all_pass = report.all_pass && c.pass;
  }
  return report;
}

PlimReport plim_checks(const DgpParams& params, std::uint64_t master_seed,
                       double rel_tol) {
  if (params.T < 10000) {
    throw std::invalid_argument("plim_checks: needs T >= 1e4");
  }
  const LimitInputs in = prepare_limit_inputs(params, master_seed);
  const int n = in.observed.rows();
  const int cols = in.observed.jmax + in.observed.p + 1;
  const double t = static_cast<double>(params.T);
  const double scale = static_cast<double>(n) / t;

  // (xii) cross moment with the composite error.
  BatchMeans cross_acc(n, cols);
  // (xiii) Gram-matrix difference against the latent design, flattened.
  BatchMeans gram_acc(n, cols * cols);
  // (xiv) composite error second moment.
  BatchMeans err_acc(n, 1);

  Eigen::VectorXd gram_flat(cols * cols);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd xrow = in.observed.x_unrestricted.row(i).transpose();
    const Eigen::VectorXd prow = in.latent.x_unrestricted.row(i).transpose();
    cross_acc.add(i, in.composite[i] * xrow);
    const Eigen::MatrixXd diff = xrow * xrow.transpose() - prow * prow.transpose();
    gram_flat = Eigen::Map<const Eigen::VectorXd>(diff.data(), diff.size());
    gram_acc.add(i, gram_flat);
    err_acc.add(i, Eigen::VectorXd::Constant(1, in.composite[i] * in.composite[i]));
  }

  PlimReport report;

  {
    PlimCheck check;
    check.name = "xii";
    const Eigen::VectorXd emp = scale * cross_acc.mean();
    const Eigen::VectorXd se = scale * cross_acc.standard_error();
    const Eigen::VectorXd target = -(in.sigma * in.beta_m);
    for (int k = 0; k < cols; ++k) {
      check.components.push_back(make_check("X'T/T[" + std::to_string(k) + "]",
                                            emp[k], target[k], se[k], rel_tol));
    }
    check.deviation_norm = (emp - target).norm();
    report.checks.push_back(std::move(check));
  }

  {
    PlimCheck check;
    check.name = "xiii";
    const Eigen::VectorXd emp = scale * gram_acc.mean();
    const Eigen::VectorXd se = scale * gram_acc.standard_error();
    const Eigen::VectorXd target =
        Eigen::Map<const Eigen::VectorXd>(in.sigma.data(), in.sigma.size());
    for (int k = 0; k < cols * cols; ++k) {
      check.components.push_back(
          make_check("(X'X - Psi'Psi)/T[" + std::to_string(k / cols) + "," +
                         std::to_string(k % cols) + "]",
                     emp[k], target[k], se[k], rel_tol));
    }
    check.deviation_norm = (emp - target).norm();
    report.checks.push_back(std::move(check));
  }

  {
    PlimCheck check;
    check.name = "xiv";
    const double emp = scale * err_acc.mean()[0];
    const double se = scale * err_acc.standard_error()[0];
    const double target = params.sigma_eps2 + params.me.sigma_u2 +
                          in.beta_m.dot(in.sigma * in.beta_m);
    check.components.push_back(make_check("T'T/T", emp, target, se, rel_tol));
    check.deviation_norm = std::abs(emp - target);
    report.checks.push_back(std::move(check));
  }

  double sq = 0.0;
  for (PlimCheck& check : report.checks) {
    for (const ComponentCheck& c : check.components) {
      check.pass = check.pass && c.pass;
    }
    report.all_pass = report.all_pass && check.pass;
    sq += check.deviation_norm * check.deviation_norm;
  }
  report.combined_deviation_norm = std::sqrt(sq);
  return report;
}

CoverageReport coverage_check(const DgpParams& params, int reps,
                              std::uint64_t master_seed, EstimatorKind kind,
                              const SearchConfig& search, int threads) {
  if (reps < 2) throw std::invalid_argument("coverage_check: reps must be >= 2");
  const int p = params.p();
  const int dim = p + 4;

  Eigen::VectorXd truth(dim);
  truth[0] = params.a;
  truth.segment(1, p) = params.rho;
  truth[p + 1] = params.b;
  truth[p + 2] = params.theta2;
  truth[p + 3] = params.sigma_eps2;

  std::vector<Eigen::ArrayXi> covered(reps);
  std::atomic<int> failed{0};
  std::atomic<int> no_cov{0};

  parallel_for_index(reps, threads, [&](int r) {
    const SimulatedData data = simulate(params, master_seed, r);
    try {
      const DesignSet ds = align_mixed(data.observed, p, params.jmax);
      const FitResult fit = kind == EstimatorKind::kCorrected
                                ? fit_corrected(ds, params.me, search)
                                : fit_naive(ds, search);
      if (!fit.covariance) {
        ++no_cov;
        return;
      }
      Eigen::VectorXd est(dim);
      est.head(p + 2) = fit.beta_hat;
      est[p + 2] = fit.theta_hat;
      est[p + 3] = fit.sigma_eps2_hat;
      Eigen::ArrayXi hit(dim);
      for (int k = 0; k < dim; ++k) {
        const double half = 1.96 * std::sqrt((*fit.covariance)(k, k));
        hit[k] = std::abs(est[k] - truth[k]) <= half ? 1 : 0;
      }
      covered[r] = hit;
    } catch (const EstimationError&) {
      ++failed;
    }
  });

  CoverageReport report;
  report.labels.push_back("a");
  for (int j = 1; j <= p; ++j) report.labels.push_back("rho" + std::to_string(j));
  report.labels.push_back("b");
  report.labels.push_back("theta");
  report.labels.push_back("sigma_eps2");
  report.failed_fits = failed;
  report.missing_covariance = no_cov;

  Eigen::ArrayXi totals = Eigen::ArrayXi::Zero(dim);
  for (const Eigen::ArrayXi& hit : covered) {
    if (hit.size() == dim) {
      totals += hit;
      ++report.usable_reps;
    }
  }
  report.coverage.resize(dim);
  for (int k = 0; k < dim; ++k) {
    report.coverage[k] = report.usable_reps > 0
                             ? static_cast<double>(totals[k]) / report.usable_reps
                             : 0.0;
  }
  return report;
}

}  // namespace midas

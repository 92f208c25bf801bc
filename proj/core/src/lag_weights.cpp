#include "midas/lag_weights.hpp"

#include <cmath>
#include <stdexcept>

#include "midas/errors.hpp"

namespace midas {

double beta_density(double x, double theta1, double theta2) {
  if (!(theta1 > 0.0) || !(theta2 > 0.0)) {
    throw std::domain_error("beta_density: shape parameters must be positive");
  }
  if (!(x >= 0.0) || !(x < 1.0)) {
    throw std::domain_error("beta_density: x must lie in [0, 1)");
  }
  if (x == 0.0) {
    if (theta1 < 1.0) {
      throw std::domain_error("beta_density: x = 0 is a pole for theta1 < 1");
    }
    if (theta1 > 1.0) return 0.0;
    // theta1 == 1: x^0 contributes nothing, fall through
  }
  const double log_b =
      std::lgamma(theta1) + std::lgamma(theta2) - std::lgamma(theta1 + theta2);
  double log_f = (theta2 - 1.0) * std::log1p(-x) - log_b;
  if (x > 0.0) log_f += (theta1 - 1.0) * std::log(x);
  return std::exp(log_f);
}

LagWeights beta_weights(double theta2, int jmax) {
  if (jmax < 1) throw std::domain_error("beta_weights: jmax must be >= 1");
  if (!(theta2 > 0.0)) throw std::domain_error("beta_weights: theta2 must be positive");

  LagWeights w;
  w.theta2 = theta2;
  w.jmax = jmax;

  Eigen::VectorXd f(jmax), dlogf(jmax);
  for (int j = 0; j < jmax; ++j) {
    const double x = static_cast<double>(j) / jmax;
    f[j] = beta_density(x, 1.0, theta2);
    // d log f / d theta2 = log(1-x) - d log B(1, theta2) / d theta2.
    // With theta1 = 1 the digamma difference psi(1+theta2) - psi(theta2)
    // collapses to 1/theta2.
    dlogf[j] = std::log1p(-x) + 1.0 / theta2;
  }
  const double total = f.sum();
  w.weights = f / total;

  // Quotient rule for w_j = f_j / sum_k f_k.
  const double mean_dlogf = w.weights.dot(dlogf);
  w.dweights_dtheta =
      w.weights.cwiseProduct((dlogf.array() - mean_dlogf).matrix());
  return w;
}

Eigen::VectorXd melted_coefficients(const Eigen::VectorXd& beta, const LagWeights& w) {
  const int p = static_cast<int>(beta.size()) - 2;
  if (p < 0 || w.weights.size() != w.jmax) {
    throw DimensionError("melted_coefficients: beta must hold (a, rho_1..rho_p, b)");
  }
  Eigen::VectorXd out(w.jmax + p + 1);
  out.head(p + 1) = beta.head(p + 1);
  out.tail(w.jmax) = beta[p + 1] * w.weights;
  return out;
}

Eigen::MatrixXd jacobian_d(const Eigen::VectorXd& beta, const LagWeights& w, int p) {
  if (beta.size() != p + 2) {
    throw DimensionError("jacobian_d: beta must have length p + 2");
  }
  if (w.jmax < 1 || w.weights.size() != w.jmax ||
      w.dweights_dtheta.size() != w.jmax) {
    throw DimensionError("jacobian_d: malformed lag weights");
  }
  const double b = beta[p + 1];
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(w.jmax + p + 1, p + 3);
  d.topLeftCorner(p + 1, p + 1).setIdentity();
  d.col(p + 1).tail(w.jmax) = w.weights;
  d.col(p + 2).tail(w.jmax) = b * w.dweights_dtheta;
  return d;
}

}  // namespace midas

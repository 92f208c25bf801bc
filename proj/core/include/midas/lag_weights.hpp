#pragma once

#include <Eigen/Dense>

namespace midas {

// Normalized Beta-density lag weights c(0..jmax-1; theta2), evaluated on the
// grid x_j = j/jmax with the first shape parameter fixed at one, together with
// their analytic derivative in theta2. Weights sum to one; the derivative sums
// to zero. For theta2 > 1 the weights decay strictly in the lag index.
struct LagWeights {
  double theta2 = 1.0;
  int jmax = 0;
  Eigen::VectorXd weights;
  Eigen::VectorXd dweights_dtheta;
};

// Beta probability density x^(t1-1) (1-x)^(t2-1) / B(t1, t2) on [0, 1).
// The Beta function is evaluated through log-gamma so large shape parameters
// do not overflow. Throws std::domain_error outside the domain.
double beta_density(double x, double theta1, double theta2);

LagWeights beta_weights(double theta2, int jmax);

// Coefficient vector in unrestricted coordinates:
// (a, rho_1..rho_p, b*c_0, ..., b*c_{jmax-1}).
Eigen::VectorXd melted_coefficients(const Eigen::VectorXd& beta, const LagWeights& w);

// Jacobian of the melted coefficients with respect to (a, rho_1..rho_p, b,
// theta2), evaluated at `beta` and the theta2 baked into `w`.
// Size (jmax+p+1) x (p+3): identity into the (a, rho) block, the weights in
// the b column, b * dweights in the theta column.
Eigen::MatrixXd jacobian_d(const Eigen::VectorXd& beta, const LagWeights& w, int p);

}  // namespace midas

#pragma once

#include <Eigen/Dense>

#include "midas/lag_weights.hpp"

namespace midas {

// One low-frequency response series plus one high-frequency regressor sampled
// m times per low-frequency period. x_obs must hold exactly m entries per
// period of y_obs.
struct MixedSeries {
  Eigen::VectorXd y_obs;
  Eigen::VectorXd x_obs;
  int m = 1;
};

// Known measurement-error variances of the low- and high-frequency series.
// (0, 0) means error-free data.
struct MeVariances {
  double sigma_u2 = 0.0;
  double sigma_v2 = 0.0;
  bool zero() const { return sigma_u2 == 0.0 && sigma_v2 == 0.0; }
};

// Frequency-aligned regression data. Row r explains response[r] by an
// intercept, p lagged responses and the jmax most recent high-frequency
// observations. Lag 0 of the high-frequency block for the response of period
// t+1 is the last high-frequency observation inside period t; the simulator
// uses the same anchor, so estimators see exactly the generating recursion.
//
// Rows whose high-frequency block would reach before the first observation
// are dropped (not zero-padded); dropped_rows records how many.
struct DesignSet {
  Eigen::VectorXd response;        // length rows()
  Eigen::MatrixXd x_unrestricted;  // rows() x (jmax + p + 1)
  int p = 0;
  int jmax = 1;
  int m = 1;
  int total_periods = 0;  // T, the full low-frequency sample length
  int dropped_rows = 0;

  int rows() const { return static_cast<int>(response.size()); }
};

DesignSet align_mixed(const MixedSeries& series, int p, int jmax);

// blockdiag(I_{p+1}, w): embeds restricted coordinates into unrestricted ones.
Eigen::MatrixXd weight_embedding(const LagWeights& w, int p);

// X(theta): first p+1 columns copied, last column is the weighted combination
// of the high-frequency block. Computed as x_unrestricted * weight_embedding
// so the matrix identity holds bitwise.
Eigen::MatrixXd restricted_design(const DesignSet& ds, const LagWeights& w);

// Per-row second-moment matrix of the measurement-error design noise in
// restricted coordinates: blockdiag(0, sigma_u2 * I_p, sigma_v2 * sum_j w_j^2).
Eigen::MatrixXd sigma_c(const LagWeights& w, const MeVariances& me, int p);

// Same limit in unrestricted coordinates: blockdiag(0, sigma_u2 * I_p,
// sigma_v2 * I_jmax).
Eigen::MatrixXd sigma_unrestricted(const MeVariances& me, int p, int jmax);

}  // namespace midas

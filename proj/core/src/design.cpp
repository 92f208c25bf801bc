#include "midas/design.hpp"

#include <algorithm>
#include <string>

#include "midas/errors.hpp"

namespace midas {

DesignSet align_mixed(const MixedSeries& series, int p, int jmax) {
  const int t_total = static_cast<int>(series.y_obs.size());
  if (series.m < 1) throw DimensionError("align_mixed: m must be >= 1");
  if (p < 0) throw DimensionError("align_mixed: p must be >= 0");
  if (jmax < 1) throw DimensionError("align_mixed: jmax must be >= 1");
  if (series.x_obs.size() != static_cast<Eigen::Index>(series.m) * t_total) {
    throw DimensionError(
        "align_mixed: x_obs must hold exactly m observations per period "
        "(got " + std::to_string(series.x_obs.size()) + ", need " +
        std::to_string(static_cast<long>(series.m) * t_total) + ")");
  }

  // Row for response index i (0-based) anchors at x[i*m - 1] and reaches back
  // jmax - 1 further steps, so it is usable iff i*m >= jmax.
  const int min_anchor = (jmax + series.m - 1) / series.m;  // ceil(jmax / m)
  const int first = std::max(p, min_anchor);
  const int n_rows = t_total - first;
  if (n_rows < p + 3) {
    throw InsufficientHistoryError(
        "align_mixed: only " + std::to_string(std::max(n_rows, 0)) +
        " usable rows after dropping rows with insufficient high-frequency "
        "history; need at least " + std::to_string(p + 3));
  }

  DesignSet ds;
  ds.p = p;
  ds.jmax = jmax;
  ds.m = series.m;
  ds.total_periods = t_total;
  ds.dropped_rows = first - p;
  ds.response.resize(n_rows);
  ds.x_unrestricted.resize(n_rows, jmax + p + 1);

  for (int r = 0; r < n_rows; ++r) {
    const int i = first + r;
    ds.response[r] = series.y_obs[i];
    ds.x_unrestricted(r, 0) = 1.0;
    for (int j = 1; j <= p; ++j) {
      ds.x_unrestricted(r, j) = series.y_obs[i - j];
    }
    const int anchor = i * series.m - 1;
    for (int k = 0; k < jmax; ++k) {
      ds.x_unrestricted(r, p + 1 + k) = series.x_obs[anchor - k];
    }
  }
  return ds;
}

Eigen::MatrixXd weight_embedding(const LagWeights& w, int p) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(w.jmax + p + 1, p + 2);
  e.topLeftCorner(p + 1, p + 1).setIdentity();
  e.col(p + 1).tail(w.jmax) = w.weights;
  return e;
}

Eigen::MatrixXd restricted_design(const DesignSet& ds, const LagWeights& w) {
  if (w.jmax != ds.jmax) {
    throw DimensionError("restricted_design: weights built for jmax " +
                         std::to_string(w.jmax) + ", design has " +
                         std::to_string(ds.jmax));
  }
  return ds.x_unrestricted * weight_embedding(w, ds.p);
}

Eigen::MatrixXd sigma_c(const LagWeights& w, const MeVariances& me, int p) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(p + 2, p + 2);
  s.diagonal().segment(1, p).setConstant(me.sigma_u2);
  s(p + 1, p + 1) = me.sigma_v2 * w.weights.squaredNorm();
  return s;
}

Eigen::MatrixXd sigma_unrestricted(const MeVariances& me, int p, int jmax) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(jmax + p + 1, jmax + p + 1);
  s.diagonal().segment(1, p).setConstant(me.sigma_u2);
  s.diagonal().tail(jmax).setConstant(me.sigma_v2);
  return s;
}

}  // namespace midas

#include "midas/simulator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "midas/errors.hpp"
#include "midas/lag_weights.hpp"

namespace midas {

Eigen::VectorXd gen_ar1(int n, double phi, double innov_sd, int burnin,
                        RngStream& rng) {
  if (n < 1) throw std::domain_error("gen_ar1: n must be >= 1");
  if (!(std::abs(phi) < 1.0)) {
    throw std::domain_error("gen_ar1: |phi| must be < 1 for stationarity");
  }
  if (!(innov_sd > 0.0)) throw std::domain_error("gen_ar1: innov_sd must be > 0");
  if (burnin < 0) throw std::domain_error("gen_ar1: burnin must be >= 0");

  double x = 0.0;
  for (int i = 0; i < burnin; ++i) x = phi * x + rng.normal(0.0, innov_sd);
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    x = phi * x + rng.normal(0.0, innov_sd);
    out[i] = x;
  }
  return out;
}

Eigen::VectorXd gen_low_freq(const Eigen::VectorXd& x_high, const DgpParams& params,
                             RngStream& rng) {
  const int p = params.p();
  const int total = params.T + params.lf_burnin;
  if (params.T < 1) throw std::domain_error("gen_low_freq: T must be >= 1");
  if (total <= p) throw std::domain_error("gen_low_freq: sample shorter than p");

  const long offset =
      static_cast<long>(x_high.size()) - static_cast<long>(params.m) * total;
  // First recursion step (index p) anchors at offset + p*m - 1 and reaches
  // jmax - 1 further back.
  if (offset < 0 || offset + static_cast<long>(p) * params.m < params.jmax) {
    throw InsufficientHistoryError(
        "gen_low_freq: x_high too short for jmax = " + std::to_string(params.jmax) +
        "; prepend presample history");
  }

  const LagWeights w = beta_weights(params.theta2, params.jmax);
  const double eps_sd = std::sqrt(params.sigma_eps2);

  Eigen::VectorXd z(total);
  for (int i = 0; i < p; ++i) z[i] = rng.normal(0.0, eps_sd);
  for (int i = p; i < total; ++i) {
    double weighted = 0.0;
    const long anchor = offset + static_cast<long>(i) * params.m - 1;
    for (int k = 0; k < params.jmax; ++k) {
      weighted += w.weights[k] * x_high[anchor - k];
    }
    double value = params.a + params.b * weighted + rng.normal(0.0, eps_sd);
    for (int j = 1; j <= p; ++j) value += params.rho[j - 1] * z[i - j];
    z[i] = value;
  }
  return z.tail(params.T);
}

ContaminatedPair contaminate(const Eigen::VectorXd& z, const Eigen::VectorXd& x,
                             const MeVariances& me, RngStream& rng) {
  ContaminatedPair out{z, x};
  if (me.sigma_u2 > 0.0) {
    const double sd = std::sqrt(me.sigma_u2);
    for (Eigen::Index i = 0; i < out.y_obs.size(); ++i) {
      out.y_obs[i] += rng.normal(0.0, sd);
    }
  }
  if (me.sigma_v2 > 0.0) {
    const double sd = std::sqrt(me.sigma_v2);
    for (Eigen::Index i = 0; i < out.x_obs.size(); ++i) {
      out.x_obs[i] += rng.normal(0.0, sd);
    }
  }
  return out;
}

SimulatedData simulate(const DgpParams& params, std::uint64_t master_seed,
                       std::uint64_t replication) {
  RngStream hf_rng = RngStream::from(master_seed, replication, StreamRole::kHighFreq);
  RngStream lf_rng = RngStream::from(master_seed, replication, StreamRole::kLowFreq);
  RngStream me_rng = RngStream::from(master_seed, replication, StreamRole::kMeasurement);

  const int total = params.T + params.lf_burnin;
  const int presample = (params.jmax + params.m - 1) / params.m;  // whole periods
  const int hf_len = params.m * (total + presample);

  const Eigen::VectorXd x_all =
      gen_ar1(hf_len, params.ar_coef, params.ar_innov_sd,
              params.m * params.hf_burnin_periods, hf_rng);
  const Eigen::VectorXd z = gen_low_freq(x_all, params, lf_rng);

  SimulatedData out;
  out.z_latent = z;
  out.x_latent = x_all.tail(static_cast<Eigen::Index>(params.m) * params.T);
  ContaminatedPair obs = contaminate(out.z_latent, out.x_latent, params.me, me_rng);
  out.observed = MixedSeries{std::move(obs.y_obs), std::move(obs.x_obs), params.m};
  return out;
}

}  // namespace midas

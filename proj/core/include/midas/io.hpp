#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "midas/design.hpp"
#include "midas/diagnostics.hpp"
#include "midas/estimator.hpp"
#include "midas/monte_carlo.hpp"

namespace midas {

// Shortest round-trippable representation at 6 significant digits,
// locale-independent.
std::string format_double(double value, int significant_digits = 6);

// Metrics table, two rows per scenario, deterministic order and bytes.
// Header: T,jmax,theta,sigma_u2,sigma_v2,estimator,NMedB,trMedSEM,medB_theta,
// medB_sigma2,clamp_rate,failure_rate,reps,seed
void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::string& path);

// Figure-ready slices of the metrics table: one file keyed by T, one by jmax.
void write_figdata_csv(const std::vector<MetricsRow>& rows,
                       const std::string& out_dir);

// Diagnostics reports flattened to check/component rows.
void write_diagnostics_csv(const std::vector<GradientLimitReport>& gradients,
                           const std::vector<PlimReport>& plims,
                           const std::vector<std::pair<std::string, CoverageReport>>& coverages,
                           const std::string& path);

// Low-frequency CSV: header "period,value". High-frequency CSV: header
// "period,subperiod,value", m inferred from the subperiod count and required
// constant across periods. Both files must cover the same periods in the same
// order. Throws CsvError with kind "missing-value", "ragged-subperiods",
// "parse" or "io" and the offending line number.
MixedSeries read_mixed_csv(const std::string& low_path, const std::string& high_path);

// Inverse of read_mixed_csv; used to export simulated datasets.
void write_mixed_csv(const MixedSeries& series, const std::string& low_path,
                     const std::string& high_path);

// Human-readable fit report: coefficients with plug-in standard errors, the
// lag-weight profile at theta_hat, and the naive fit for comparison.
void print_fit_report(std::ostream& os, const FitResult& corrected,
                      const FitResult& naive, const DesignSet& ds,
                      const MeVariances& me);

}  // namespace midas

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "midas/monte_carlo.hpp"

namespace midas {

enum class RunMode { kSimulate, kDiagnose, kFit };

// Parsed flat key=value configuration. Grid axes (T, jmax, theta, sigma_u2,
// sigma_v2) may be comma-separated lists and expand to their Cartesian
// product.
struct RunConfig {
  RunMode mode = RunMode::kSimulate;
  std::vector<int> T;
  std::vector<int> jmax;
  std::vector<double> theta;
  std::vector<double> sigma_u2;
  std::vector<double> sigma_v2;
  double sigma_eps2 = 1.0;
  int p = 2;
  int m = 3;
  int reps = 1000;
  std::optional<std::uint64_t> seed;
  double theta_lo = 1.001;
  double theta_hi = 50.0;
  int gss_iters = 50;
  std::string out_dir = ".";
  int threads = 0;  // 0 = all cores
  std::string low_csv;   // fit mode only
  std::string high_csv;  // fit mode only
};

// Parses and validates a config file. Throws ConfigError with the line number
// on parse problems and with the field name on validation problems.
RunConfig load_config(const std::string& path);

// Same parser over an in-memory document (used by tests).
RunConfig parse_config(const std::string& text);

// Cartesian product of the grid axes, T outermost then jmax, theta, sigma_u2,
// sigma_v2 innermost. Every scenario carries the shared seed and search setup.
std::vector<Scenario> expand_grid(const RunConfig& config);

}  // namespace midas

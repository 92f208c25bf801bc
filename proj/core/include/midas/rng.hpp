#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace midas {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Draw consumers within one replication get their own role so that refactoring
// one consumer can never shift the sequence seen by another.
enum class StreamRole : std::uint64_t {
  kHighFreq = 1,
  kLowFreq = 2,
  kMeasurement = 3,
  kBootstrap = 4,
};

// Deterministic random stream addressed by (master_seed, replication, role).
// Gaussian deviates use Box-Muller on raw engine bits, so the output is a pure
// function of the address and does not depend on the standard library's
// distribution implementations.
class RngStream {
 public:
  static RngStream from(std::uint64_t master_seed, std::uint64_t replication,
                        StreamRole role) {
    std::uint64_t s = splitmix64(master_seed);
    s = splitmix64(s ^ (0x9E3779B97F4A7C15ULL * (replication + 1)));
    s = splitmix64(s ^ (0xD1B54A32D192ED03ULL * static_cast<std::uint64_t>(role)));
    return RngStream(s);
  }

  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace midas

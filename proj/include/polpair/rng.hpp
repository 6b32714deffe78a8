#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace polpair {

// Every random quantity in the pipeline draws from a stream derived from one
// top-level seed plus a routing key (subcommand or study tag, width, instance
// index). Streams for different keys are statistically independent, and a
// given key always produces the same stream, so parallel schedules cannot
// change results.
std::uint64_t derive_seed(std::uint64_t seed, const std::string& tag,
                          std::uint64_t width_key = 0,
                          std::uint64_t instance = 0);

// Routing key for a real-valued parameter such as a width in nm.
std::uint64_t stream_key(double value);

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Standard normal via Box-Muller.
  double normal();

  // Poisson sample. Knuth's product method below mean 64, above that a
  // rounded normal approximation clamped at zero; the crossover keeps the
  // product method away from underflow while the approximation error stays
  // far below counting noise.
  long long poisson(double mean);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace polpair

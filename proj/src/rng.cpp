#include "polpair/rng.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace polpair {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// splitmix64 finalizer; full-avalanche mixing of one word.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, const std::string& tag,
                          std::uint64_t width_key, std::uint64_t instance) {
  std::uint64_t h = mix(seed ^ fnv1a(tag));
  h = mix(h ^ width_key);
  h = mix(h ^ instance);
  return h;
}

std::uint64_t stream_key(double value) {
  return std::bit_cast<std::uint64_t>(value);
}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * 3.14159265358979323846 * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

long long RandomStream::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("Poisson mean must be finite and >= 0");
  }
  if (mean == 0.0) return 0;
  if (mean <= 64.0) {
    const double limit = std::exp(-mean);
    long long count = -1;
    double product = 1.0;
    do {
      ++count;
      product *= uniform();
    } while (product > limit);
    return count;
  }
  const long long draw = std::llround(mean + std::sqrt(mean) * normal());
  return draw < 0 ? 0 : draw;
}

}  // namespace polpair

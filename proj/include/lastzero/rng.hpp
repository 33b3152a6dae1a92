#pragma once

#include <cstdint>

namespace lastzero {

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of the stream for one path; depends only on (base_seed, path_index).
constexpr std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t path_index) {
  return mix64(mix64(base_seed + 0x9e3779b97f4a7c15ULL) ^ (path_index * 0xd1b54a32d192ed03ULL + 1));
}

/// Per-path random stream. Every variate is produced by code in this class,
/// so output does not depend on the standard library's distributions.
class PathRng {
 public:
  explicit PathRng(std::uint64_t seed) : state_(seed) {}
  PathRng(std::uint64_t base_seed, std::uint64_t path_index) : state_(stream_seed(base_seed, path_index)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  double exponential(double rate);
  double normal();
  /// Inverse Gaussian with the given mean and shape.
  double inverse_gaussian(double mean, double shape);

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace lastzero

#pragma once

#include <cstdint>
#include <Eigen/Dense>

namespace banditlab {

// Counter-based splittable random stream.
//
// A stream is an immutable 64-bit key; the n-th draw is the SplitMix64
// finalizer applied to key + n*gamma, so draws never depend on shared
// mutable state. child(i) derives a new key from (key, i), which makes
// per-(episode, timestep, purpose) splits reproducible and independent of
// evaluation order or thread scheduling.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(mix(seed + kGamma) ^ mix(stream + kGamma2))) {}

  RngStream child(std::uint64_t index) const {
    RngStream c(0);
    c.key_ = mix(key_ ^ mix(index + kGamma2));
    c.counter_ = 0;
    return c;
  }

  std::uint64_t nextU64() { return mix(key_ + (++counter_) * kGamma); }

  // Uniform on [0, 1) with 53 random bits.
  double nextDouble() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

  // Draws an index from a probability vector (assumed normalized).
  int nextIndex(const Eigen::VectorXd& probs) {
    const double u = nextDouble();
    double acc = 0.0;
    for (int i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return i;
    }
    return static_cast<int>(probs.size()) - 1;
  }

  std::uint64_t key() const { return key_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kGamma2 = 0xBF58476D1CE4E5B9ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace banditlab

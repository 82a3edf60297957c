#pragma once

#include <array>
#include <cstdint>

namespace gkpstab {

// Philox-4x32-10 counter-based generator. Each (seed, stream) pair is an
// independent sequence; identical inputs give identical output on every
// thread, which is what makes the parallel Monte Carlo merges reproducible.
class Philox {
 public:
  Philox(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();

  // Uniform double in [0, 1) with 53 random bits.
  double next_double();

  // Generates one counter block (four 32-bit words).
  static std::array<std::uint32_t, 4> block(
      const std::array<std::uint32_t, 4>& counter,
      const std::array<std::uint32_t, 2>& key);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> out_;
  int have_ = 0;
};

// Standard-normal stream over Philox via Box-Muller.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t stream) : gen_(seed, stream) {}

  double next();

 private:
  Philox gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace gkpstab

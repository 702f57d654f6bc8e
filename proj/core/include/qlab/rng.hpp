#pragma once

#include <cstdint>

namespace qlab {

/// PCG32 (XSH-RR output, 64-bit LCG state). Fixed algorithm so that seeded
/// runs are bit-identical on every platform and standard library.
class Pcg32 {
 public:
  explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 0x14057b7ef767814fULL);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double next_double();

 private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 0;
};

/// SplitMix64 finalizer; used to derive independent per-run seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace qlab

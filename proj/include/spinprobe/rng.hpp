#pragma once

#include <array>
#include <cstdint>

// Counter-based random numbers.  A draw is a pure function of (key, counter),
// so any evaluation order reproduces the same values.
namespace spinprobe::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds.
Counter philox4x32(Counter ctr, Key key) noexcept;

/// Stream of uniforms for one (seed, index) pair; `tag` separates independent uses of the same index.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t index, std::uint32_t tag = 0) noexcept;

  std::uint32_t next_u32() noexcept;
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept;
  double normal() noexcept;

 private:
  void refill() noexcept;

  Key key_;
  Counter ctr_;
  Counter block_{};
  int used_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// Poisson variate with mean `lambda` (>= 0).  Multiplication method below 10, PTRS rejection above.
std::int64_t poisson(double lambda, CounterStream& stream) noexcept;

}  // namespace spinprobe::rng

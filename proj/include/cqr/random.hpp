#pragma once

#include <cstdint>
#include <string_view>

#include "cqr/matrix.hpp"

namespace cqr {

/// Counter-based generator: output k of stream `key` is the SplitMix64
/// finalizer applied to key + (k + 1) * 0x9E3779B97F4A7C15. Normals use the
/// Box-Muller transform on consecutive uniform pairs, cosine branch first.
class CounterRng {
 public:
  static constexpr std::string_view kName = "splitmix64-v1";

  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  /// Derives an independent stream key from a seed and a tuple of indices.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on (0, 1), never exactly 0 or 1.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  double normal() noexcept;

  Vector normal_vector(std::size_t n);
  Matrix normal_matrix(std::size_t rows, std::size_t cols);
  /// (A + A') / 2 with A standard normal.
  Matrix symmetric_normal(std::size_t n);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept;

}  // namespace cqr

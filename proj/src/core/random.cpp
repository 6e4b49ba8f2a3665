#include "cqr/random.hpp"

#include <cmath>
#include <numbers>

namespace cqr {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) noexcept {
  std::uint64_t k = splitmix64_mix(seed + kGolden);
  k = splitmix64_mix(k ^ (a + 1) * kGolden);
  k = splitmix64_mix(k ^ (b + 1) * 0xD1B54A32D192ED03ULL);
  k = splitmix64_mix(k ^ (c + 1) * 0x8CB92BA72F3D8DD7ULL);
  return k;
}

std::uint64_t CounterRng::next_u64() noexcept {
  ++counter_;
  return splitmix64_mix(key_ + counter_ * kGolden);
}

double CounterRng::uniform() noexcept {
  // 53 random bits, offset by half a unit so 0 and 1 are excluded.
  return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  spare_ = rad * std::sin(ang);
  has_spare_ = true;
  return rad * std::cos(ang);
}

Vector CounterRng::normal_vector(std::size_t n) {
  Vector v(n);
  for (double& x : v) x = normal();
  return v;
}

Matrix CounterRng::normal_matrix(std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = normal();
  return m;
}

Matrix CounterRng::symmetric_normal(std::size_t n) {
  return symmetrized(normal_matrix(n, n));
}

}  // namespace cqr

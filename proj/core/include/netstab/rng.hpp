#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace netstab {

// Philox4x64-10 counter-based generator (Salmon et al., SC'11).
using PhiloxCounter = std::array<std::uint64_t, 4>;
using PhiloxKey = std::array<std::uint64_t, 2>;

PhiloxCounter philox4x64(PhiloxCounter ctr, PhiloxKey key) noexcept;

// Named substreams hanging off one master seed.
enum class Stream : std::uint64_t {
  position = 1,
  attribute = 2,
  shock = 3,
  poisson_count = 4,
  replication = 5,
  branching = 6,
  sign_flip = 7,
  monte_carlo = 8,
  instance = 9,
};

// Maps a 64-bit word to (0,1), never returning 0 or 1.
inline double to_open_unit(std::uint64_t x) noexcept {
  return (static_cast<double>(x >> 12) + 0.5) * 0x1.0p-52;
}

// Pure keyed draw: the same (seed, stream, counter) always gives the same words.
inline PhiloxCounter keyed_words(std::uint64_t seed, Stream stream,
                                 const PhiloxCounter& ctr) noexcept {
  return philox4x64(ctr, {seed, static_cast<std::uint64_t>(stream)});
}

// Child seed for replication `index` of `stream`.
std::uint64_t derive_seed(std::uint64_t seed, Stream stream,
                          std::uint64_t index) noexcept;

// Sequential generator over a keyed counter space. Models
// UniformRandomBitGenerator so it can drive std algorithms, but all
// distributions used by the library are implemented below so results do
// not depend on the standard library vendor.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, Stream stream, std::uint64_t sub = 0) noexcept
      : key_{seed, static_cast<std::uint64_t>(stream)}, sub_(sub) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  double uniform() noexcept { return to_open_unit((*this)()); }
  double normal() noexcept;
  double exponential() noexcept;
  std::uint64_t poisson(double mean);
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept;

 private:
  void refill() noexcept;

  PhiloxKey key_;
  std::uint64_t sub_;
  std::uint64_t block_ = 0;
  PhiloxCounter buf_{};
  int pos_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace netstab

#pragma once

#include <cstdint>

namespace unfold {

// PCG64 (setseq XSL-RR 128/64) with an explicit stream id, so parallel chains
// draw from provably disjoint sequences.  Same (seed, stream) gives the same
// byte-for-byte draw sequence on every run.
// Reference: O'Neill, "PCG: A Family of Simple Fast Space-Efficient
// Statistically Good Algorithms for Random Number Generation" (2014),
// https://www.pcg-random.org.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept
      : seed_(seed), stream_id_(stream_id) {
    state_ = 0;
    inc_ = ((static_cast<u128>(stream_id) << 1) | 1u);
    step();
    state_ += seed;
    step();
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() noexcept {
    step();
    const std::uint64_t xored =
        static_cast<std::uint64_t>(state_ >> 64) ^ static_cast<std::uint64_t>(state_);
    const unsigned rot = static_cast<unsigned>(state_ >> 122);
    return (xored >> rot) | (xored << ((64u - rot) & 63u));
  }

  // Uniform on the open interval (0, 1): midpoints of 2^53 equal cells, so the
  // result is never 0 or 1 and inverse-CDF transforms stay finite.
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  // Standard normal by inversion; keeps the stream consumption at exactly one
  // u64 per variate, which the reproducibility contract relies on.
  double normal() noexcept;

  double normal(double mean, double sd) noexcept { return mean + sd * normal(); }

  // Standard exponential by inversion.
  double exponential() noexcept;

 private:
  using u128 = unsigned __int128;

  void step() noexcept { state_ = state_ * multiplier() + inc_; }

  static constexpr u128 multiplier() noexcept {
    return (static_cast<u128>(2549297995355413924ULL) << 64) | 4865540595714422341ULL;
  }

  u128 state_ = 0;
  u128 inc_ = 0;
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
};

}  // namespace unfold

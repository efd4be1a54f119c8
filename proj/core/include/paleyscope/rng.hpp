#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace paleyscope {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
/// Stateless: every output block is a pure function of (counter, key).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key);
};

/// Uniform double in the open interval (0, 1) built from the top 52 bits of (hi, lo).
double uniform_open01(std::uint32_t hi, std::uint32_t lo);

/// Reproducible random source keyed on a 64-bit seed. Draws are addressed by
/// (stream, a, b) so that any draw can be regenerated independently of the
/// order in which others were requested.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  /// Uniform in (0, 1).
  double uniform(std::uint64_t stream, std::uint32_t a, std::uint32_t b = 0) const;

  /// Standard normal via Box-Muller on one Philox block.
  double normal(std::uint64_t stream, std::uint32_t a, std::uint32_t b = 0) const;

 private:
  Philox4x32::Counter block(std::uint64_t stream, std::uint32_t a,
                            std::uint32_t b) const;

  std::uint64_t seed_;
  Philox4x32::Key key_;
};

/// Pairwise (cascade) summation with a fixed split order, so the result does
/// not depend on how callers batch the work.
double pairwise_sum(std::span<const double> values);

}  // namespace paleyscope

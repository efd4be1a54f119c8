#include "paleyscope/rng.hpp"

#include <cmath>
#include <numbers>

namespace paleyscope {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

double uniform_open01(std::uint32_t hi, std::uint32_t lo) {
  // 52 bits so that the half-offset keeps both ends exactly representable.
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 12;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

CounterRng::CounterRng(std::uint64_t seed)
    : seed_(seed),
      key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

Philox4x32::Counter CounterRng::block(std::uint64_t stream, std::uint32_t a,
                                      std::uint32_t b) const {
  return Philox4x32::generate({b, a, static_cast<std::uint32_t>(stream),
                               static_cast<std::uint32_t>(stream >> 32)},
                              key_);
}

double CounterRng::uniform(std::uint64_t stream, std::uint32_t a,
                           std::uint32_t b) const {
  const auto out = block(stream, a, b);
  return uniform_open01(out[0], out[1]);
}

double CounterRng::normal(std::uint64_t stream, std::uint32_t a,
                          std::uint32_t b) const {
  const auto out = block(stream, a, b);
  const double u1 = uniform_open01(out[0], out[1]);
  const double u2 = uniform_open01(out[2], out[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace paleyscope

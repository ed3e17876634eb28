#include "qhaar/rng.hpp"

#include <cmath>

namespace qhaar {
namespace {

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(0xD2511F53u, c[0], hi0, lo0);
    mulhilo(0xCD9E8D57u, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += 0x9E3779B9u;
    k[1] += 0xBB67AE85u;
  }
  return c;
}

GaussianStream::GaussianStream(std::uint64_t seed, std::uint64_t stream_id)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      stream_{static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)} {}

void GaussianStream::refill() {
  const std::array<std::uint32_t, 4> counter = {stream_[0], stream_[1],
                                                static_cast<std::uint32_t>(block_),
                                                static_cast<std::uint32_t>(block_ >> 32)};
  ++block_;
  const auto words = philox4x32(counter, key_);
  // two 53-bit uniforms in (0, 1), then one Box-Muller pair
  const std::uint64_t v0 =
      ((static_cast<std::uint64_t>(words[0]) << 32) | words[1]) >> 11;
  const std::uint64_t v1 =
      ((static_cast<std::uint64_t>(words[2]) << 32) | words[3]) >> 11;
  const double u0 = (static_cast<double>(v0) + 0.5) * 0x1.0p-53;
  const double u1 = (static_cast<double>(v1) + 0.5) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u0));
  pending_[0] = r * std::cos(kTwoPi * u1);
  pending_[1] = r * std::sin(kTwoPi * u1);
  available_ = 2;
}

double GaussianStream::next() {
  if (available_ == 0) refill();
  return pending_[--available_];
}

}  // namespace qhaar

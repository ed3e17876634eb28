#pragma once

#include <array>
#include <cstdint>

namespace qhaar {

// Philox4x32-10 counter-based generator.  A (counter, key) pair maps to four
// 32-bit words; streams never share state, so samples can be generated on any
// number of workers with identical output.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Standard normal variates for one named stream: key = seed, counter = stream
// id plus a running block index.  Box-Muller over 53-bit uniforms; the same
// (seed, stream_id) always yields the same sequence.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t stream_id);

  double next();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> stream_;
  std::uint64_t block_ = 0;
  double pending_[2];
  int available_ = 0;
};

}  // namespace qhaar

// Copyright 2026 The optoforce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OPTOFORCE_RNG_HPP_
#define OPTOFORCE_RNG_HPP_

#include <array>
#include <cmath>
#include <cstdint>

#include "optoforce/constants.hpp"

namespace optoforce::rng {

// Philox4x32-10 counter-based generator.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter c, Key k) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        k[0] += kW0;
        k[1] += kW1;
      }
      const std::uint64_t p0 = std::uint64_t{kM0} * c[0];
      const std::uint64_t p1 = std::uint64_t{kM1} * c[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
    return c;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;
};

// Standard normals for one (seed, stream) pair. Block b of stream s is
// counter (b_lo, b_hi, s_lo, s_hi), so streams never overlap and any
// trajectory can be regenerated on its own.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  double next() {
    if (index_ == 4) refill();
    return buffer_[index_++];
  }

 private:
  // (u + 1/2) 2^-32 lies strictly inside (0, 1).
  static double uniform(std::uint32_t u) { return (u + 0.5) * 0x1p-32; }

  void refill() {
    const Philox4x32::Counter c{static_cast<std::uint32_t>(block_),
                                static_cast<std::uint32_t>(block_ >> 32),
                                static_cast<std::uint32_t>(stream_),
                                static_cast<std::uint32_t>(stream_ >> 32)};
    const auto r = Philox4x32::generate(c, key_);
    ++block_;
    for (int pair = 0; pair < 2; ++pair) {
      const double radius = std::sqrt(-2.0 * std::log(uniform(r[2 * pair])));
      const double phase = constants::two_pi * uniform(r[2 * pair + 1]);
      buffer_[2 * pair] = radius * std::cos(phase);
      buffer_[2 * pair + 1] = radius * std::sin(phase);
    }
    index_ = 0;
  }

  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<double, 4> buffer_{};
  int index_ = 4;
};

}  // namespace optoforce::rng

#endif  // OPTOFORCE_RNG_HPP_

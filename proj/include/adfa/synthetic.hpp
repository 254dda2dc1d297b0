// Copyright (c) 2026 The ADFA Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>

#include "adfa/audio_buffer.hpp"

namespace adfa {

/// 64-bit LCG used for reproducible benchmark input. Each draw advances the
/// state and maps its top 53 bits to [-1, 1).
class NoiseGenerator {
 public:
  static constexpr std::uint64_t kDefaultSeed = 0x5EED;
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ull;
  static constexpr std::uint64_t kIncrement = 1442695040888963407ull;

  explicit NoiseGenerator(std::uint64_t seed = kDefaultSeed) : state_(seed) {}

  double next() {
    state_ = state_ * kMultiplier + kIncrement;
    const double unit = static_cast<double>(state_ >> 11) * 0x1.0p-53;
    return 2.0 * unit - 1.0;
  }

 private:
  std::uint64_t state_;
};

inline AudioBuffer synthetic_noise(double seconds, std::uint32_t sample_rate = 16000,
                                   std::uint64_t seed = NoiseGenerator::kDefaultSeed) {
  AudioBuffer out;
  out.sample_rate = sample_rate;
  const auto n = static_cast<std::size_t>(seconds * static_cast<double>(sample_rate));
  out.samples.resize(n);
  NoiseGenerator gen(seed);
  for (double& s : out.samples) s = gen.next();
  return out;
}

}  // namespace adfa

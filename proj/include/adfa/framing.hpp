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

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "adfa/audio_buffer.hpp"
#include "adfa/error.hpp"

namespace adfa {

enum class WindowKind { kBlackman, kHann, kRectangular };

enum class TailPolicy { kDropPartial, kZeroPadLast };

struct FrameConfig {
  std::size_t frame_len = 1724;
  std::size_t overlap = 128;
  WindowKind window = WindowKind::kBlackman;
  TailPolicy tail_policy = TailPolicy::kDropPartial;

  std::size_t hop() const noexcept { return frame_len - overlap; }

  void validate() const {
    detail::require(frame_len >= 1, "frame length must be at least 1");
    detail::require(overlap < frame_len, "overlap must be smaller than the frame length");
    detail::require(window == WindowKind::kRectangular || frame_len >= 2,
                    "tapering windows need a frame length of at least 2");
  }
};

/// Symmetric window of the given length. Blackman uses 0.42/0.5/0.08, so both
/// endpoints are exactly 0 and an odd-length midpoint is exactly 1.
template <std::floating_point T = double>
std::vector<T> make_window(WindowKind kind, std::size_t length) {
  detail::require(length >= 1, "window length must be at least 1");
  if (kind == WindowKind::kRectangular) return std::vector<T>(length, T{1});
  detail::require(length >= 2, "tapering windows need length >= 2");

  std::vector<T> w(length);
  const double denom = static_cast<double>(length - 1);
  // Evaluate the first half and mirror, which makes symmetry exact.
  for (std::size_t n = 0; n <= (length - 1) / 2; ++n) {
    const double x = 2.0 * std::numbers::pi * static_cast<double>(n) / denom;
    double v = 0.0;
    if (kind == WindowKind::kBlackman) {
      v = 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x);
    } else {
      v = 0.5 - 0.5 * std::cos(x);
    }
    w[n] = static_cast<T>(v);
    w[length - 1 - n] = static_cast<T>(v);
  }
  // The coefficients sum to exactly 0 and 1 mathematically; pin them so
  // rounding in 0.42 - 0.5 + 0.08 does not leak through.
  if (kind == WindowKind::kBlackman) w.front() = w.back() = T{0};
  if (length % 2 == 1) w[length / 2] = T{1};
  return w;
}

inline std::size_t num_frames(std::size_t signal_len, const FrameConfig& config) {
  config.validate();
  const std::size_t hop = config.hop();
  if (config.tail_policy == TailPolicy::kDropPartial) {
    if (signal_len < config.frame_len) return 0;
    return (signal_len - config.frame_len) / hop + 1;
  }
  if (signal_len == 0) return 0;
  const std::size_t rest = signal_len > config.frame_len ? signal_len - config.frame_len : 0;
  return (rest + hop - 1) / hop + 1;
}

/// Writes windowed frame k into out (frame_len values). Samples past the end
/// of the signal read as zero.
template <std::floating_point T>
void extract_frame(std::span<const T> signal, const FrameConfig& config,
                   std::span<const T> window, std::size_t k, std::span<T> out) {
  detail::require(out.size() == config.frame_len && window.size() == config.frame_len,
                  "frame buffer and window must be frame_len long");
  const std::size_t start = k * config.hop();
  for (std::size_t n = 0; n < config.frame_len; ++n) {
    const std::size_t idx = start + n;
    const T x = idx < signal.size() ? signal[idx] : T{0};
    out[n] = x * window[n];
  }
}

template <std::floating_point T>
std::vector<std::vector<T>> frames(std::span<const T> signal, const FrameConfig& config) {
  config.validate();
  const std::vector<T> window = make_window<T>(config.window, config.frame_len);
  const std::size_t count = num_frames(signal.size(), config);
  std::vector<std::vector<T>> out(count, std::vector<T>(config.frame_len));
  for (std::size_t k = 0; k < count; ++k) {
    extract_frame<T>(signal, config, window, k, out[k]);
  }
  return out;
}

inline std::vector<std::vector<double>> frames(const AudioBuffer& signal,
                                               const FrameConfig& config) {
  return frames<double>(std::span<const double>(signal.samples), config);
}

}  // namespace adfa

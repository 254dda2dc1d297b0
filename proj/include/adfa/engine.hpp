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
#include <chrono>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <span>
#include <thread>
#include <vector>

#include "adfa/audio_buffer.hpp"
#include "adfa/basis.hpp"
#include "adfa/error.hpp"
#include "adfa/framing.hpp"

namespace adfa {

/// Bins x frames analysis result. Storage is frame-major: the n_bins values
/// of frame 0 come first, matching the on-disk layout.
template <typename Value>
struct BasicSpectrogram {
  Method method = Method::kAdfa;
  std::size_t n_bins = 0;
  std::size_t n_frames = 0;
  std::vector<Value> data;
  std::vector<double> center_freqs;
  double sample_rate = 0.0;
  std::uint32_t frame_len = 0;
  std::uint32_t hop = 0;

  Value& at(std::size_t bin, std::size_t frame) { return data[frame * n_bins + bin]; }
  const Value& at(std::size_t bin, std::size_t frame) const { return data[frame * n_bins + bin]; }

  std::span<Value> frame(std::size_t k) { return {data.data() + k * n_bins, n_bins}; }
  std::span<const Value> frame(std::size_t k) const { return {data.data() + k * n_bins, n_bins}; }
};

using Spectrogram = BasicSpectrogram<std::complex<double>>;

struct LogPowerSpectrogram : BasicSpectrogram<double> {
  // Not persisted by the binary format, so empty after a read.
  std::optional<double> floor_eps;
};

inline constexpr double kDefaultFloorEps = 1e-30;

/// out[r] = sum_n M(r, n) * frame[n], accumulated in double.
template <std::floating_point T>
void analyze_frame(const AnalysisMatrix& matrix, std::span<const T> frame,
                   std::span<std::complex<double>> out) {
  detail::require(frame.size() == matrix.n_cols(), "frame length does not match matrix columns");
  detail::require(out.size() == matrix.n_bins(), "output length does not match matrix rows");
  for (std::size_t r = 0; r < matrix.n_bins(); ++r) {
    const auto row = matrix.row(r);
    double re = 0.0;
    double im = 0.0;
    for (std::size_t n = 0; n < row.size(); ++n) {
      const double x = static_cast<double>(frame[n]);
      re += row[n].real() * x;
      im += row[n].imag() * x;
    }
    out[r] = {re, im};
  }
}

template <std::floating_point T>
std::vector<std::complex<double>> analyze_frame(const AnalysisMatrix& matrix,
                                                std::span<const T> frame) {
  std::vector<std::complex<double>> out(matrix.n_bins());
  analyze_frame<T>(matrix, frame, out);
  return out;
}

inline std::vector<std::complex<double>> analyze_frame(const AnalysisMatrix& matrix,
                                                       const std::vector<double>& frame) {
  return analyze_frame<double>(matrix, std::span<const double>(frame));
}

namespace detail {

// Runs body(first, last) over [0, count) split into contiguous chunks. Each
// index is processed by exactly one thread, so results do not depend on the
// thread count.
template <typename Body>
void parallel_for_chunks(std::size_t count, unsigned threads, Body&& body) {
  threads = std::max(1u, threads);
  if (threads == 1 || count < 2) {
    body(std::size_t{0}, count);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, count);
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t first = w * chunk;
    const std::size_t last = std::min(count, first + chunk);
    if (first >= last) break;
    pool.emplace_back([&body, first, last] { body(first, last); });
  }
}

// FrameFn(frame_span, out_span) fills one spectrogram column.
template <typename FrameFn>
Spectrogram run_frames(Method method, std::size_t n_bins, std::vector<double> center_freqs,
                       const AudioBuffer& signal, const FrameConfig& config, unsigned threads,
                       FrameFn&& fn) {
  config.validate();
  Spectrogram spec;
  spec.method = method;
  spec.n_bins = n_bins;
  spec.n_frames = num_frames(signal.samples.size(), config);
  spec.data.assign(spec.n_bins * spec.n_frames, {});
  spec.center_freqs = std::move(center_freqs);
  spec.sample_rate = static_cast<double>(signal.sample_rate);
  spec.frame_len = static_cast<std::uint32_t>(config.frame_len);
  spec.hop = static_cast<std::uint32_t>(config.hop());

  const std::vector<double> window = make_window<double>(config.window, config.frame_len);
  const std::span<const double> samples(signal.samples);
  parallel_for_chunks(spec.n_frames, threads, [&](std::size_t first, std::size_t last) {
    std::vector<double> buf(config.frame_len);
    for (std::size_t k = first; k < last; ++k) {
      extract_frame<double>(samples, config, window, k, buf);
      fn(std::span<const double>(buf), spec.frame(k));
    }
  });
  return spec;
}

}  // namespace detail

/// Frames, windows and transforms the whole signal. An input shorter than one
/// frame yields an n_bins x 0 spectrogram.
inline Spectrogram analyze(const AudioBuffer& signal, const AnalysisMatrix& matrix,
                           const FrameConfig& config, unsigned threads = 1) {
  detail::require(matrix.n_cols() == config.frame_len,
                  "matrix columns (" + std::to_string(matrix.n_cols()) +
                      ") do not match frame length (" + std::to_string(config.frame_len) + ")");
  std::vector<double> freqs(matrix.center_freqs().begin(), matrix.center_freqs().end());
  return detail::run_frames(matrix.method(), matrix.n_bins(), std::move(freqs), signal, config,
                            threads,
                            [&matrix](std::span<const double> frame,
                                      std::span<std::complex<double>> out) {
                              analyze_frame<double>(matrix, frame, out);
                            });
}

/// ln(max(|z|^2, floor_eps)) per value.
inline LogPowerSpectrogram log_power(const Spectrogram& spec,
                                     double floor_eps = kDefaultFloorEps) {
  detail::require(floor_eps > 0.0 && std::isfinite(floor_eps), "floor_eps must be positive");
  LogPowerSpectrogram out;
  out.method = spec.method;
  out.n_bins = spec.n_bins;
  out.n_frames = spec.n_frames;
  out.center_freqs = spec.center_freqs;
  out.sample_rate = spec.sample_rate;
  out.frame_len = spec.frame_len;
  out.hop = spec.hop;
  out.floor_eps = floor_eps;
  out.data.resize(spec.data.size());
  std::transform(spec.data.begin(), spec.data.end(), out.data.begin(),
                 [floor_eps](const std::complex<double>& z) {
                   return std::log(std::max(std::norm(z), floor_eps));
                 });
  return out;
}

// ---------------------------------------------------------------------------
// Direct-summation reference path.

/// Everything needed to define one analysis basis without building it.
struct BasisParams {
  Method method = Method::kAdfa;
  std::size_t n_bins = 863;
  std::size_t n_cols = 1724;
  MelConfig mel{};
  CqConfig cq{};
  Normalization normalization = Normalization::kNone;
};

inline AnalysisMatrix build_matrix(const BasisParams& p) {
  switch (p.method) {
    case Method::kDfa:
      detail::require(p.n_bins == p.n_cols, "DFA matrix must be square");
      return build_dfa_matrix(p.n_cols, p.normalization);
    case Method::kAdfa: return build_adfa_matrix(p.n_bins, p.n_cols, p.normalization);
    case Method::kMdfa: return build_mdfa_matrix(p.n_bins, p.n_cols, p.mel, p.normalization);
    case Method::kCqa: return build_cqa_matrix(p.n_bins, p.n_cols, p.cq, p.normalization);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown method");
}

namespace detail {

// Angular frequency of one bin in radians per sample, derived from the
// parameters alone (no shared code with the matrix builders).
inline double oracle_radians_per_sample(const BasisParams& p, std::size_t bin) {
  const double pi = std::numbers::pi;
  const double b = static_cast<double>(bin);
  switch (p.method) {
    case Method::kDfa: return 2.0 * pi * b / static_cast<double>(p.n_cols);
    case Method::kAdfa: return pi * b / static_cast<double>(p.n_bins - 1);
    case Method::kMdfa: {
      if (bin + 1 == p.n_bins) return pi;
      const double nyq = p.mel.sample_rate / 2.0;
      double hz = 0.0;
      if (p.mel.formula == MelFormula::kHtk) {
        const double top = 2595.0 * std::log10(1.0 + nyq / 700.0);
        const double m = top * b / static_cast<double>(p.n_bins - 1);
        hz = 700.0 * (std::pow(10.0, m / 2595.0) - 1.0);
      } else {
        // Slaney: 3 mel per 200 Hz up to 1 kHz (15 mel), then 27 mel per ln(6.4).
        const double per_log = 27.0 / std::log(6.4);
        const double top = nyq < 1000.0 ? nyq * 3.0 / 200.0
                                         : 15.0 + std::log(nyq / 1000.0) * per_log;
        const double m = top * b / static_cast<double>(p.n_bins - 1);
        hz = m < 15.0 ? m * 200.0 / 3.0 : 1000.0 * std::exp((m - 15.0) / per_log);
      }
      return pi * hz / nyq;
    }
    case Method::kCqa: {
      const double a = static_cast<double>(p.n_bins - 1 - bin);
      return pi * std::pow(p.cq.base, -a / static_cast<double>(p.cq.bins_per_octave));
    }
  }
  return 0.0;
}

inline void check_oracle_params(const BasisParams& p) {
  require(p.n_cols >= 1 && p.n_bins >= 1, "dimensions must be positive");
  if (p.method == Method::kDfa) require(p.n_bins == p.n_cols, "DFA must be square");
  if (p.method == Method::kAdfa || p.method == Method::kMdfa) {
    require(p.n_bins >= 2, "ADFA/MDFA need at least 2 bins");
  }
  if (p.method == Method::kMdfa) require(p.mel.sample_rate > 0.0, "sample rate must be positive");
  if (p.method == Method::kCqa) {
    require(p.cq.base > 1.0 && p.cq.bins_per_octave >= 1, "invalid constant-Q parameters");
  }
}

}  // namespace detail

/// One output bin by explicit summation: every term's exponential is
/// evaluated from its angle with sin/cos. No matrix, no recurrence.
template <std::floating_point T>
std::complex<double> direct_eval_oracle(const BasisParams& p, std::span<const T> frame,
                                        std::size_t bin) {
  detail::check_oracle_params(p);
  detail::require(bin < p.n_bins, "bin out of range");
  detail::require(frame.size() == p.n_cols, "frame length does not match n_cols");
  const double w = detail::oracle_radians_per_sample(p, bin);
  double re = 0.0;
  double im = 0.0;
  for (std::size_t n = 0; n < frame.size(); ++n) {
    const double angle = -w * static_cast<double>(n);
    const double x = static_cast<double>(frame[n]);
    re += std::cos(angle) * x;
    im += std::sin(angle) * x;
  }
  const double scale = p.normalization == Normalization::kInvSqrtCols
                           ? 1.0 / std::sqrt(static_cast<double>(p.n_cols))
                           : 1.0;
  return {re * scale, im * scale};
}

inline std::complex<double> direct_eval_oracle(const BasisParams& p,
                                               const std::vector<double>& frame,
                                               std::size_t bin) {
  return direct_eval_oracle<double>(p, std::span<const double>(frame), bin);
}

/// analyze() computed through direct_eval_oracle for every bin of every frame.
inline Spectrogram analyze_naive(const AudioBuffer& signal, const BasisParams& p,
                                 const FrameConfig& config, unsigned threads = 1) {
  detail::check_oracle_params(p);
  detail::require(p.n_cols == config.frame_len, "n_cols does not match frame length");
  std::vector<double> freqs(p.n_bins);
  for (std::size_t b = 0; b < p.n_bins; ++b) {
    const double w = detail::oracle_radians_per_sample(p, b) / std::numbers::pi;
    freqs[b] = p.method == Method::kDfa ? w / 2.0 : w;
  }
  return detail::run_frames(p.method, p.n_bins, std::move(freqs), signal, config, threads,
                            [&p](std::span<const double> frame,
                                 std::span<std::complex<double>> out) {
                              for (std::size_t b = 0; b < out.size(); ++b) {
                                out[b] = direct_eval_oracle<double>(p, frame, b);
                              }
                            });
}

/// Largest |a - b| over matching values; infinity if the shapes differ.
inline double max_abs_difference(const Spectrogram& a, const Spectrogram& b) {
  if (a.n_bins != b.n_bins || a.n_frames != b.n_frames) {
    return std::numeric_limits<double>::infinity();
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
  }
  return worst;
}

struct BenchOptions {
  unsigned repeats = 3;
  unsigned threads = 1;
};

struct BenchReport {
  double matrix_path_seconds = 0.0;  // median, includes building the matrix
  double naive_path_seconds = 0.0;   // median
  double ratio = 0.0;                // naive / matrix
  double max_abs_diff = 0.0;
  double tolerance = 0.0;            // 1e-9 * n_cols
  bool gate_passed = false;
  unsigned repeats = 0;
  std::size_t n_frames = 0;
};

inline double median(std::vector<double> v) {
  detail::require(!v.empty(), "median of empty sequence");
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

/// Times the precomputed-matrix path against analyze_naive over identical
/// work. Timings are only meaningful when gate_passed is true: the two
/// spectrograms must agree within 1e-9 * n_cols.
inline BenchReport bench(const BasisParams& p, const AudioBuffer& signal,
                         const FrameConfig& config, const BenchOptions& opts = {}) {
  detail::require(opts.repeats >= 1, "repeats must be at least 1");
  using Clock = std::chrono::steady_clock;
  const auto seconds = [](Clock::duration d) { return std::chrono::duration<double>(d).count(); };

  std::vector<double> matrix_times;
  std::vector<double> naive_times;
  Spectrogram fast;
  Spectrogram slow;
  for (unsigned i = 0; i < opts.repeats; ++i) {
    const auto t0 = Clock::now();
    const AnalysisMatrix m = build_matrix(p);
    fast = analyze(signal, m, config, opts.threads);
    const auto t1 = Clock::now();
    slow = analyze_naive(signal, p, config, opts.threads);
    const auto t2 = Clock::now();
    matrix_times.push_back(seconds(t1 - t0));
    naive_times.push_back(seconds(t2 - t1));
  }

  BenchReport report;
  report.repeats = opts.repeats;
  report.n_frames = fast.n_frames;
  report.tolerance = 1e-9 * static_cast<double>(p.n_cols);
  report.max_abs_diff = max_abs_difference(fast, slow);
  report.gate_passed = report.max_abs_diff <= report.tolerance;
  report.matrix_path_seconds = median(matrix_times);
  report.naive_path_seconds = median(naive_times);
  report.ratio = report.matrix_path_seconds > 0.0
                     ? report.naive_path_seconds / report.matrix_path_seconds
                     : std::numeric_limits<double>::infinity();
  return report;
}

}  // namespace adfa

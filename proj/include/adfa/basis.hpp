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
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adfa/error.hpp"

namespace adfa {

enum class Method : std::uint8_t { kDfa = 0, kAdfa = 1, kMdfa = 2, kCqa = 3 };

enum class Normalization { kNone, kInvSqrtCols };

enum class MelFormula { kHtk, kSlaney };

inline std::string_view name(Method m) {
  switch (m) {
    case Method::kDfa: return "dfa";
    case Method::kAdfa: return "adfa";
    case Method::kMdfa: return "mdfa";
    case Method::kCqa: return "cqa";
  }
  return "unknown";
}

struct MelConfig {
  double sample_rate = 16000.0;
  MelFormula formula = MelFormula::kHtk;
};

struct CqConfig {
  double base = 2.0;
  int bins_per_octave = 96;
};

/// exp(-i*pi*half_turns), exact at every multiple of a quarter turn so that
/// e.g. a Nyquist row yields exactly -1 at column 1.
inline std::complex<double> unit_phasor(double half_turns) {
  double r = std::fmod(half_turns, 2.0);
  if (r < 0.0) r += 2.0;
  const double q = std::nearbyint(r * 2.0);
  const double t = r - q * 0.5;  // [-0.25, 0.25]
  const double c = std::cos(std::numbers::pi * t);
  const double s = std::sin(std::numbers::pi * t);
  double re = c;
  double im = s;
  switch (static_cast<int>(q) & 3) {
    case 1: re = -s; im = c; break;
    case 2: re = -c; im = -s; break;
    case 3: re = s; im = -c; break;
    default: break;
  }
  return {re, -im};
}

// HTK: m = 2595 log10(1 + f/700). Slaney: linear below 1 kHz, log above.
inline double hz_to_mel(double hz, MelFormula formula = MelFormula::kHtk) {
  if (formula == MelFormula::kHtk) return 2595.0 * std::log10(1.0 + hz / 700.0);
  constexpr double kLinearStep = 200.0 / 3.0;
  constexpr double kBreakHz = 1000.0;
  constexpr double kBreakMel = kBreakHz / kLinearStep;
  const double log_step = std::log(6.4) / 27.0;
  if (hz < kBreakHz) return hz / kLinearStep;
  return kBreakMel + std::log(hz / kBreakHz) / log_step;
}

inline double mel_to_hz(double mel, MelFormula formula = MelFormula::kHtk) {
  if (formula == MelFormula::kHtk) return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
  constexpr double kLinearStep = 200.0 / 3.0;
  constexpr double kBreakHz = 1000.0;
  constexpr double kBreakMel = kBreakHz / kLinearStep;
  const double log_step = std::log(6.4) / 27.0;
  if (mel < kBreakMel) return mel * kLinearStep;
  return kBreakHz * std::exp(log_step * (mel - kBreakMel));
}

/// Complex n_bins x n_cols analysis matrix, stored row-major, immutable once
/// built. Row r holds the consecutive powers of one unit phasor.
///
/// center_freqs are fractions of Nyquist for ADFA, MDFA and CQA. For DFA the
/// matrix spans the whole unit circle, so center_freqs[m] = m/N is in cycles
/// per sample instead.
class AnalysisMatrix {
 public:
  AnalysisMatrix(Method method, Normalization normalization, std::size_t n_bins,
                 std::size_t n_cols, std::vector<std::complex<double>> entries,
                 std::vector<double> center_freqs)
      : method_(method),
        normalization_(normalization),
        n_bins_(n_bins),
        n_cols_(n_cols),
        entries_(std::move(entries)),
        center_freqs_(std::move(center_freqs)) {
    detail::require(n_bins_ >= 1 && n_cols_ >= 1, "matrix dimensions must be positive");
    detail::require(entries_.size() == n_bins_ * n_cols_,
                    "entry count does not match n_bins * n_cols");
    detail::require(center_freqs_.size() == n_bins_,
                    "center_freqs length does not match n_bins");
  }

  Method method() const noexcept { return method_; }
  Normalization normalization() const noexcept { return normalization_; }
  std::size_t n_bins() const noexcept { return n_bins_; }
  std::size_t n_cols() const noexcept { return n_cols_; }

  const std::complex<double>& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * n_cols_ + col];
  }
  std::span<const std::complex<double>> row(std::size_t r) const {
    return {entries_.data() + r * n_cols_, n_cols_};
  }
  std::span<const std::complex<double>> entries() const noexcept { return entries_; }
  std::span<const double> center_freqs() const noexcept { return center_freqs_; }

 private:
  Method method_;
  Normalization normalization_;
  std::size_t n_bins_;
  std::size_t n_cols_;
  std::vector<std::complex<double>> entries_;
  std::vector<double> center_freqs_;
};

namespace detail {

inline double column_scale(Normalization norm, std::size_t n_cols) {
  return norm == Normalization::kInvSqrtCols ? 1.0 / std::sqrt(static_cast<double>(n_cols)) : 1.0;
}

// PhaseFn(row, col) -> half turns; the entry is unit_phasor(PhaseFn(row, col)).
template <typename PhaseFn>
AnalysisMatrix build_matrix(Method method, Normalization norm, std::size_t n_bins,
                            std::size_t n_cols, std::vector<double> center_freqs,
                            PhaseFn&& phase) {
  const double scale = column_scale(norm, n_cols);
  std::vector<std::complex<double>> entries(n_bins * n_cols);
  for (std::size_t r = 0; r < n_bins; ++r) {
    for (std::size_t n = 0; n < n_cols; ++n) {
      entries[r * n_cols + n] = unit_phasor(phase(r, n)) * scale;
    }
  }
  return AnalysisMatrix(method, norm, n_bins, n_cols, std::move(entries),
                        std::move(center_freqs));
}

// Rows on a uniform half-circle grid: exponent a*n reduced modulo the period
// in integers so large columns lose no phase accuracy.
inline double grid_half_turns(std::size_t a, std::size_t n, std::size_t steps_per_half_turn) {
  const std::uint64_t period = 2 * static_cast<std::uint64_t>(steps_per_half_turn);
  const std::uint64_t k = (static_cast<std::uint64_t>(a) % period) *
                          (static_cast<std::uint64_t>(n) % period) % period;
  return static_cast<double>(k) / static_cast<double>(steps_per_half_turn);
}

// Rows with an arbitrary normalized frequency f: f*n half turns.
inline double free_half_turns(double f, std::size_t n) {
  return std::fmod(f * static_cast<double>(n), 2.0);
}

}  // namespace detail

/// N x N Fourier matrix, entry(m, k) = exp(-2*pi*i*m*k/N).
inline AnalysisMatrix build_dfa_matrix(std::size_t n,
                                       Normalization norm = Normalization::kNone) {
  detail::require(n >= 1, "DFA size must be at least 1");
  std::vector<double> freqs(n);
  for (std::size_t m = 0; m < n; ++m) freqs[m] = static_cast<double>(m) / static_cast<double>(n);
  // 2*pi*m*k/N radians = (m*k mod N) / (N/2) half turns.
  return detail::build_matrix(Method::kDfa, norm, n, n, std::move(freqs),
                              [n](std::size_t m, std::size_t k) {
                                const std::uint64_t mk = (static_cast<std::uint64_t>(m) *
                                                          static_cast<std::uint64_t>(k)) % n;
                                return 2.0 * static_cast<double>(mk) / static_cast<double>(n);
                              });
}

/// ADFA matrix with n_bins rows spanning DC..Nyquist evenly. The rows are
/// mutually orthogonal when n_cols == 2 * (n_bins - 1); any other n_cols gives
/// the truncated (or extended) variant used in place of zero padding.
inline AnalysisMatrix build_adfa_matrix(std::size_t n_bins, std::size_t n_cols,
                                        Normalization norm = Normalization::kNone) {
  detail::require(n_bins >= 2, "ADFA needs at least 2 bins");
  detail::require(n_cols >= 1, "ADFA needs at least 1 column");
  const std::size_t steps = n_bins - 1;
  std::vector<double> freqs(n_bins);
  for (std::size_t a = 0; a < n_bins; ++a) {
    freqs[a] = static_cast<double>(a) / static_cast<double>(steps);
  }
  return detail::build_matrix(Method::kAdfa, norm, n_bins, n_cols, std::move(freqs),
                              [steps](std::size_t a, std::size_t n) {
                                return detail::grid_half_turns(a, n, steps);
                              });
}

/// Center frequencies in Hz, uniformly spaced on the mel scale from 0 to
/// fs/2. Both endpoints are pinned exactly.
inline std::vector<double> mel_center_freqs(std::size_t n_bins, const MelConfig& config) {
  detail::require(n_bins >= 2, "mel spacing needs at least 2 bins");
  detail::require(config.sample_rate > 0.0 && std::isfinite(config.sample_rate),
                  "sample rate must be positive");
  const double nyquist = config.sample_rate / 2.0;
  const double top_mel = hz_to_mel(nyquist, config.formula);
  const double steps = static_cast<double>(n_bins - 1);
  std::vector<double> hz(n_bins);
  for (std::size_t a = 0; a < n_bins; ++a) {
    hz[a] = mel_to_hz(static_cast<double>(a) / steps * top_mel, config.formula);
  }
  hz.front() = 0.0;
  hz.back() = nyquist;
  return hz;
}

inline AnalysisMatrix build_mdfa_matrix(std::size_t n_bins, std::size_t n_cols,
                                        const MelConfig& config,
                                        Normalization norm = Normalization::kNone) {
  detail::require(n_cols >= 1, "MDFA needs at least 1 column");
  const std::vector<double> hz = mel_center_freqs(n_bins, config);
  const double nyquist = config.sample_rate / 2.0;
  std::vector<double> freqs(n_bins);
  for (std::size_t a = 0; a < n_bins; ++a) freqs[a] = hz[a] / nyquist;
  freqs.back() = 1.0;
  const std::vector<double> f = freqs;
  return detail::build_matrix(Method::kMdfa, norm, n_bins, n_cols, std::move(freqs),
                              [&f](std::size_t a, std::size_t n) {
                                return detail::free_half_turns(f[a], n);
                              });
}

/// Constant-Q rows: frequency B^(-a/b) of Nyquist for a = n_bins-1 .. 0, so
/// row 0 is the lowest bin and the last row sits exactly at Nyquist.
inline AnalysisMatrix build_cqa_matrix(std::size_t n_bins, std::size_t n_cols,
                                       const CqConfig& config,
                                       Normalization norm = Normalization::kNone) {
  detail::require(n_bins >= 1, "CQA needs at least 1 bin");
  detail::require(n_cols >= 1, "CQA needs at least 1 column");
  detail::require(config.base > 1.0 && std::isfinite(config.base), "CQ base must be > 1");
  detail::require(config.bins_per_octave >= 1, "bins per octave must be >= 1");
  std::vector<double> freqs(n_bins);
  for (std::size_t row = 0; row < n_bins; ++row) {
    const double a = static_cast<double>(n_bins - 1 - row);
    freqs[row] = std::pow(config.base, -a / static_cast<double>(config.bins_per_octave));
  }
  const std::vector<double> f = freqs;
  return detail::build_matrix(Method::kCqa, norm, n_bins, n_cols, std::move(freqs),
                              [&f](std::size_t r, std::size_t n) {
                                return detail::free_half_turns(f[r], n);
                              });
}

struct OrthogonalityReport {
  double max_deviation = 0.0;
  /// False when the matrix shape is outside the proven orthogonal case; the
  /// deviation is still reported.
  bool guaranteed = false;
};

/// max |G - I| over the Gram matrix G = c * M * M^H, where c = 1/n_cols for
/// unnormalized matrices and 1 for InvSqrtCols.
inline OrthogonalityReport verify_orthogonality(const AnalysisMatrix& m) {
  OrthogonalityReport report;
  switch (m.method()) {
    case Method::kDfa: report.guaranteed = true; break;
    case Method::kAdfa: report.guaranteed = m.n_cols() == 2 * (m.n_bins() - 1); break;
    default: report.guaranteed = false; break;
  }
  const double c = m.normalization() == Normalization::kNone
                       ? 1.0 / static_cast<double>(m.n_cols())
                       : 1.0;
  for (std::size_t j = 0; j < m.n_bins(); ++j) {
    const auto rj = m.row(j);
    for (std::size_t k = j; k < m.n_bins(); ++k) {
      const auto rk = m.row(k);
      std::complex<double> acc{};
      for (std::size_t n = 0; n < m.n_cols(); ++n) acc += rj[n] * std::conj(rk[n]);
      const double target = j == k ? 1.0 : 0.0;
      report.max_deviation = std::max(report.max_deviation, std::abs(c * acc - target));
    }
  }
  return report;
}

}  // namespace adfa

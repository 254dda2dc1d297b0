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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Tolerances are fixed here and never tuned at runtime.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "adfa/adfa.hpp"

namespace {

using adfa::AnalysisMatrix;
using adfa::BasisParams;
using adfa::Method;
using C = std::complex<double>;

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit_s;  // 0 means no runtime bound
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<double> noise_frame(std::size_t n, adfa::NoiseGenerator& gen) {
  std::vector<double> v(n);
  for (double& x : v) x = gen.next();
  return v;
}

Outcome orthogonality() {
  double worst = 0.0;
  for (std::size_t n2 : {2u, 5u, 33u, 257u}) {
    const auto rep = adfa::verify_orthogonality(adfa::build_adfa_matrix(n2, 2 * (n2 - 1)));
    if (!rep.guaranteed) return {false, "condition flag unset for N2=" + std::to_string(n2)};
    worst = std::max(worst, rep.max_deviation);
  }
  return {worst < 1e-9, "max |G - I| = " + fmt("%.3e", worst) + " (tol 1e-9)"};
}

Outcome half_spectrum() {
  double worst_ratio = 0.0;
  for (std::size_t n2 : {5u, 33u, 257u}) {
    const std::size_t n1 = 2 * (n2 - 1);
    const AnalysisMatrix a = adfa::build_adfa_matrix(n2, n1);
    const AnalysisMatrix d = adfa::build_dfa_matrix(n1);
    adfa::NoiseGenerator gen(100 + n2);
    for (int f = 0; f < 100; ++f) {
      const auto frame = noise_frame(n1, gen);
      const auto ya = adfa::analyze_frame(a, frame);
      const auto yd = adfa::analyze_frame(d, frame);
      for (std::size_t b = 0; b < n2; ++b) {
        worst_ratio = std::max(worst_ratio, std::abs(ya[b] - yd[b]) / (1e-9 * n1));
      }
    }
  }
  return {worst_ratio < 1.0, "max err / (1e-9*N1) = " + fmt("%.3e", worst_ratio)};
}

Outcome mdfa_structure() {
  const adfa::MelConfig cfg{16000.0, adfa::MelFormula::kHtk};
  const AnalysisMatrix m = adfa::build_mdfa_matrix(863, 1724, cfg);
  const auto f = m.center_freqs();
  if (f.front() != 0.0 || f.back() != 1.0) return {false, "endpoints not exactly 0 and 1"};
  const auto mel = [](double frac) { return 2595.0 * std::log10(1.0 + frac * 8000.0 / 700.0); };
  const double step = mel(1.0) / 862.0;
  double worst = 0.0;
  for (std::size_t a = 0; a + 1 < f.size(); ++a) {
    worst = std::max(worst, std::abs(mel(f[a + 1]) - mel(f[a]) - step));
  }
  return {worst < 1e-9, "endpoints exact; mel step deviation = " + fmt("%.3e", worst) +
                            " (tol 1e-9)"};
}

Outcome cqa_structure() {
  const AnalysisMatrix m = adfa::build_cqa_matrix(863, 1724, {2.0, 96});
  const auto f = m.center_freqs();
  const double ratio = std::pow(2.0, 1.0 / 96.0);
  double worst = 0.0;
  for (std::size_t r = 0; r + 1 < f.size(); ++r) {
    worst = std::max(worst, std::abs(f[r + 1] / f[r] - ratio));
  }
  const bool top = m(862, 1) == C(-1.0, 0.0);
  return {worst < 1e-12 && top, "ratio deviation = " + fmt("%.3e", worst) +
                                    " (tol 1e-12); top bin column 1 == -1: " +
                                    (top ? "yes" : "no")};
}

Outcome oracle_equivalence() {
  double worst_ratio = 0.0;
  for (Method method : {Method::kDfa, Method::kAdfa, Method::kMdfa, Method::kCqa}) {
    BasisParams p;
    p.method = method;
    p.n_cols = 192;
    p.n_bins = method == Method::kDfa ? 192 : 97;
    const AnalysisMatrix m = adfa::build_matrix(p);
    adfa::NoiseGenerator gen(500 + static_cast<int>(method));
    for (int f = 0; f < 100; ++f) {
      const auto frame = noise_frame(p.n_cols, gen);
      const auto fast = adfa::analyze_frame(m, frame);
      for (std::size_t b = 0; b < p.n_bins; ++b) {
        const double err = std::abs(fast[b] - adfa::direct_eval_oracle(p, frame, b));
        worst_ratio = std::max(worst_ratio, err / (1e-9 * 192));
      }
    }
  }
  return {worst_ratio < 1.0, "max err / (1e-9*N1) = " + fmt("%.3e", worst_ratio) +
                                 " over dfa/adfa/mdfa/cqa"};
}

Outcome figure_configuration() {
  const adfa::AudioBuffer audio = adfa::synthetic_noise(1.0, 16000);
  const adfa::FrameConfig cfg;  // 1724 / 128 / Blackman
  const auto dir = std::filesystem::temp_directory_path() / "adfa_acceptance";
  std::filesystem::create_directories(dir);
  std::string detail;
  bool ok = true;
  for (Method method : {Method::kDfa, Method::kAdfa, Method::kMdfa, Method::kCqa}) {
    BasisParams p;
    p.method = method;
    p.n_cols = 1724;
    p.n_bins = method == Method::kDfa ? 1724 : 863;
    const adfa::Spectrogram s = adfa::analyze(audio, adfa::build_matrix(p), cfg);
    ok = ok && s.n_bins == p.n_bins && s.n_frames == 9;
    const auto path = dir / (std::string(adfa::name(method)) + ".spec");
    adfa::write_spectrogram(s, path);
    const auto back = std::get<adfa::Spectrogram>(adfa::read_spectrogram(path));
    const bool exact = back.n_bins == s.n_bins && back.n_frames == s.n_frames &&
                       back.data.size() == s.data.size() &&
                       std::memcmp(back.data.data(), s.data.data(), s.data.size() * sizeof(C)) == 0 &&
                       std::memcmp(back.center_freqs.data(), s.center_freqs.data(),
                                   s.center_freqs.size() * sizeof(double)) == 0;
    ok = ok && exact;
    detail += std::string(adfa::name(method)) + "=" + std::to_string(s.n_bins) + "x" +
              std::to_string(s.n_frames) + (exact ? "" : "(round-trip mismatch)") + " ";
  }
  std::filesystem::remove_all(dir);
  return {ok, detail + "bit-exact round-trip"};
}

Outcome performance() {
  BasisParams p;
  p.method = Method::kCqa;
  p.n_bins = 863;
  p.n_cols = 1724;
  p.cq = {2.0, 96};
  const adfa::AudioBuffer audio = adfa::synthetic_noise(60.0, 16000);
  const adfa::BenchReport r = adfa::bench(p, audio, adfa::FrameConfig{}, {1, 1});
  if (!r.gate_passed) {
    return {false, "correctness gate failed: max diff " + fmt("%.3e", r.max_abs_diff)};
  }
  return {r.ratio >= 2.0, "frames=" + std::to_string(r.n_frames) +
                              " matrix=" + fmt("%.3fs", r.matrix_path_seconds) +
                              " naive=" + fmt("%.3fs", r.naive_path_seconds) +
                              " speedup=" + fmt("%.2fx", r.ratio) + " (need >= 2x)"};
}

Outcome parseval() {
  double worst = 0.0;
  for (std::size_t n : {4u, 16u, 64u}) {
    const AnalysisMatrix m = adfa::build_dfa_matrix(n);
    adfa::NoiseGenerator gen(900 + n);
    for (int t = 0; t < 100; ++t) {
      const auto z = noise_frame(n, gen);
      double in = 0.0;
      for (double x : z) in += x * x;
      double out = 0.0;
      for (const C& v : adfa::analyze_frame(m, z)) out += std::norm(v);
      worst = std::max(worst, std::abs(out - n * in) / (n * in));
    }
  }
  return {worst < 1e-9, "max relative error = " + fmt("%.3e", worst) + " (tol 1e-9)"};
}

Outcome window() {
  bool ok = true;
  double worst_sym = 0.0;
  for (std::size_t len : {3u, 101u, 1723u, 1724u, 1725u}) {
    const auto w = adfa::make_window(adfa::WindowKind::kBlackman, len);
    ok = ok && w.front() == 0.0 && w.back() == 0.0;
    if (len % 2 == 1) ok = ok && w[len / 2] == 1.0;
    for (std::size_t n = 0; n < len; ++n) worst_sym = std::max(worst_sym, std::abs(w[n] - w[len - 1 - n]));
  }
  ok = ok && worst_sym <= 1e-15;
  return {ok, std::string("endpoints/midpoint exact: ") + (ok ? "yes" : "no") +
                  "; symmetry deviation = " + fmt("%.3e", worst_sym)};
}

Outcome tone_localization() {
  const std::size_t n2 = 97;
  const std::size_t n1 = 192;
  const AnalysisMatrix m = adfa::build_adfa_matrix(n2, n1);
  const BasisParams p{Method::kAdfa, n2, n1, {}, {}, adfa::Normalization::kNone};
  std::string detail;
  bool ok = true;
  for (std::size_t k : {1u, 48u, 95u}) {
    std::vector<double> tone(n1);
    for (std::size_t n = 0; n < n1; ++n) {
      tone[n] = std::cos(std::numbers::pi * static_cast<double>(k * n) / static_cast<double>(n2 - 1));
    }
    const auto out = adfa::analyze_frame(m, tone);
    std::size_t peak = 0;
    for (std::size_t b = 1; b < n2; ++b) {
      if (std::abs(out[b]) > std::abs(out[peak])) peak = b;
    }
    const double mag = std::abs(out[k]);
    const double oracle_err = std::abs(out[k] - adfa::direct_eval_oracle(p, tone, k));
    const bool good = peak == k && std::abs(mag - n1 / 2.0) < 1e-6 && oracle_err < 1e-9 * n1;
    ok = ok && good;
    detail += "k=" + std::to_string(k) + ":peak=" + std::to_string(peak) + ",|z|=" +
              fmt("%.9f", mag) + " ";
  }
  return {ok, detail + "(want N1/2 = 96 within 1e-6)"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "orthogonality of ADFA when N1 = 2(N2-1)", 5.0, orthogonality},
      {2, "ADFA equals first N2 DFA bins", 10.0, half_spectrum},
      {3, "MDFA endpoints and uniform mel spacing", 0.0, mdfa_structure},
      {4, "CQA geometric spacing and Nyquist row", 0.0, cqa_structure},
      {5, "matrix path equals direct-summation oracle", 0.0, oracle_equivalence},
      {6, "863-bin / 1724-sample configuration and round-trip", 0.0, figure_configuration},
      {7, "CQA matrix path >= 2x faster than naive path", 300.0, performance},
      {8, "Parseval for the Fourier matrix", 0.0, parseval},
      {9, "Blackman window exactness and symmetry", 0.0, window},
      {10, "pure-tone localization", 0.0, tone_localization},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0.0 && secs >= c.time_limit_s) {
      o.passed = false;
      o.detail += " [runtime limit " + fmt("%.0fs", c.time_limit_s) + " exceeded]";
    }
    std::printf("[%s] criterion %d: %s -- %s (%.2fs)\n", o.passed ? "PASS" : "FAIL", c.id,
                c.title.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.passed) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}

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

// Command-line front end: analyze, matrix, verify, bench.
//
// Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 verification failure.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adfa/adfa.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitVerify = 3;

// A flag failed validation; the message names the flag.
struct UsageError {
  std::string message;
};

void usage_check(bool ok, const std::string& flag, const std::string& what) {
  if (!ok) throw UsageError{flag + ": " + what};
}

struct BasisFlags {
  adfa::Method method = adfa::Method::kAdfa;
  std::size_t bins = 863;
  std::optional<std::size_t> cols;
  std::optional<double> sample_rate;
  adfa::MelFormula mel_formula = adfa::MelFormula::kHtk;
  double cq_base = 2.0;
  int cq_bins_per_octave = 96;
  adfa::Normalization normalization = adfa::Normalization::kNone;
};

struct FrameFlags {
  std::size_t frame_len = 1724;
  std::size_t overlap = 128;
  std::optional<std::size_t> hop;
  adfa::WindowKind window = adfa::WindowKind::kBlackman;
  adfa::TailPolicy tail = adfa::TailPolicy::kDropPartial;
};

const std::map<std::string, adfa::Method> kMethods = {
    {"dfa", adfa::Method::kDfa}, {"adfa", adfa::Method::kAdfa},
    {"mdfa", adfa::Method::kMdfa}, {"cqa", adfa::Method::kCqa}};
const std::map<std::string, adfa::WindowKind> kWindows = {
    {"blackman", adfa::WindowKind::kBlackman}, {"hann", adfa::WindowKind::kHann},
    {"rectangular", adfa::WindowKind::kRectangular}};
const std::map<std::string, adfa::TailPolicy> kTails = {
    {"drop", adfa::TailPolicy::kDropPartial}, {"zero-pad", adfa::TailPolicy::kZeroPadLast}};
const std::map<std::string, adfa::MelFormula> kMelFormulas = {
    {"htk", adfa::MelFormula::kHtk}, {"slaney", adfa::MelFormula::kSlaney}};
const std::map<std::string, adfa::Normalization> kNormalizations = {
    {"none", adfa::Normalization::kNone}, {"inv-sqrt-cols", adfa::Normalization::kInvSqrtCols}};
const std::map<std::string, adfa::SpecFormat> kFormats = {
    {"binary", adfa::SpecFormat::kBinary}, {"csv", adfa::SpecFormat::kCsv}};

void add_basis_flags(CLI::App* cmd, BasisFlags& f, bool with_cols) {
  cmd->add_option("--method", f.method, "dfa | adfa | mdfa | cqa")
      ->transform(CLI::CheckedTransformer(kMethods, CLI::ignore_case))
      ->capture_default_str();
  cmd->add_option("--bins", f.bins, "number of frequency bins (N2)")->capture_default_str();
  if (with_cols) {
    cmd->add_option("--cols", f.cols, "matrix columns (N1); default 2*(bins-1)");
  }
  cmd->add_option("--sr", f.sample_rate, "sample rate in Hz for the mel mapping");
  cmd->add_option("--mel-formula", f.mel_formula, "htk | slaney")
      ->transform(CLI::CheckedTransformer(kMelFormulas, CLI::ignore_case));
  cmd->add_option("--cq-base", f.cq_base, "constant-Q base B (> 1)")->capture_default_str();
  cmd->add_option("--cq-bins-per-octave", f.cq_bins_per_octave, "constant-Q bins per octave b")
      ->capture_default_str();
  cmd->add_option("--normalization", f.normalization, "none | inv-sqrt-cols")
      ->transform(CLI::CheckedTransformer(kNormalizations, CLI::ignore_case));
}

void add_frame_flags(CLI::App* cmd, FrameFlags& f) {
  cmd->add_option("--frame-len", f.frame_len, "frame length in samples")->capture_default_str();
  cmd->add_option("--overlap", f.overlap, "samples shared by consecutive frames")
      ->capture_default_str();
  cmd->add_option("--hop", f.hop, "frame stride; overrides --overlap");
  cmd->add_option("--window", f.window, "blackman | hann | rectangular")
      ->transform(CLI::CheckedTransformer(kWindows, CLI::ignore_case));
  cmd->add_option("--tail", f.tail, "drop | zero-pad")
      ->transform(CLI::CheckedTransformer(kTails, CLI::ignore_case));
}

adfa::FrameConfig frame_config(const FrameFlags& f) {
  usage_check(f.frame_len >= 1, "--frame-len", "must be at least 1");
  adfa::FrameConfig cfg;
  cfg.frame_len = f.frame_len;
  cfg.window = f.window;
  cfg.tail_policy = f.tail;
  if (f.hop) {
    usage_check(*f.hop >= 1 && *f.hop <= f.frame_len, "--hop", "must be in [1, frame-len]");
    cfg.overlap = f.frame_len - *f.hop;
  } else {
    usage_check(f.overlap < f.frame_len, "--overlap", "must be smaller than --frame-len");
    cfg.overlap = f.overlap;
  }
  usage_check(cfg.window == adfa::WindowKind::kRectangular || cfg.frame_len >= 2, "--frame-len",
              "tapering windows need at least 2 samples");
  return cfg;
}

// Translates flags into basis parameters, checking every precondition the
// builders would reject so the error names the offending flag.
adfa::BasisParams basis_params(const BasisFlags& f, std::size_t n_cols, bool bins_given,
                               double default_rate) {
  adfa::BasisParams p;
  p.method = f.method;
  p.normalization = f.normalization;
  p.n_cols = n_cols;
  usage_check(n_cols >= 1, f.cols ? "--cols" : "--frame-len", "must be at least 1");
  if (f.method == adfa::Method::kDfa) {
    usage_check(!bins_given || f.bins == n_cols, "--bins",
                "DFA is square; bins must equal the column count " + std::to_string(n_cols));
    p.n_bins = n_cols;
  } else {
    p.n_bins = f.bins;
  }
  switch (f.method) {
    case adfa::Method::kAdfa:
    case adfa::Method::kMdfa:
      usage_check(p.n_bins >= 2, "--bins", "must be at least 2 for adfa/mdfa");
      break;
    case adfa::Method::kCqa:
      usage_check(p.n_bins >= 1, "--bins", "must be at least 1");
      usage_check(f.cq_base > 1.0, "--cq-base", "must be greater than 1");
      usage_check(f.cq_bins_per_octave >= 1, "--cq-bins-per-octave", "must be at least 1");
      break;
    case adfa::Method::kDfa: break;
  }
  p.mel.sample_rate = f.sample_rate.value_or(default_rate);
  p.mel.formula = f.mel_formula;
  usage_check(p.mel.sample_rate > 0.0, "--sr", "must be positive");
  p.cq.base = f.cq_base;
  p.cq.bins_per_octave = f.cq_bins_per_octave;
  return p;
}

unsigned thread_count(std::optional<unsigned> flag) {
  if (flag) {
    usage_check(*flag >= 1, "--threads", "must be at least 1");
    return *flag;
  }
  if (const char* env = std::getenv("ADFA_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    usage_check(end != env && *end == '\0' && v >= 1, "ADFA_THREADS", "must be a positive integer");
    return static_cast<unsigned>(v);
  }
  return 1;
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
  std::string input;
  std::string out;
  BasisFlags basis;
  FrameFlags frame;
  bool log_power = false;
  double eps = adfa::kDefaultFloorEps;
  adfa::SpecFormat format = adfa::SpecFormat::kBinary;
  std::optional<unsigned> threads;
  CLI::Option* bins_opt = nullptr;
};

int cmd_analyze(const AnalyzeArgs& a) {
  const adfa::FrameConfig cfg = frame_config(a.frame);
  usage_check(a.eps > 0.0, "--eps", "must be positive");
  const unsigned threads = thread_count(a.threads);
  const bool bins_given = a.bins_opt->count() > 0;
  basis_params(a.basis, cfg.frame_len, bins_given, 1.0);
  const adfa::AudioBuffer audio = adfa::read_wav(a.input);
  const adfa::BasisParams p =
      basis_params(a.basis, cfg.frame_len, bins_given, static_cast<double>(audio.sample_rate));
  const adfa::AnalysisMatrix m = adfa::build_matrix(p);
  const adfa::Spectrogram spec = adfa::analyze(audio, m, cfg, threads);
  if (a.log_power) {
    adfa::write_spectrogram(adfa::log_power(spec, a.eps), a.out, a.format);
  } else {
    adfa::write_spectrogram(spec, a.out, a.format);
  }
  std::printf("wrote %s: %zu bins x %zu frames\n", a.out.c_str(), spec.n_bins, spec.n_frames);
  return kExitOk;
}

struct MatrixArgs {
  std::string out;
  BasisFlags basis;
  adfa::SpecFormat format = adfa::SpecFormat::kBinary;
};

int cmd_matrix(const MatrixArgs& a) {
  std::size_t cols = 0;
  if (a.basis.cols) {
    cols = *a.basis.cols;
  } else if (a.basis.method == adfa::Method::kDfa) {
    cols = a.basis.bins;
  } else {
    usage_check(a.basis.bins >= 2, "--bins", "must be at least 2 unless --cols is given");
    cols = 2 * (a.basis.bins - 1);
  }
  usage_check(cols >= 1, "--cols", "must be at least 1");
  const adfa::BasisParams p = basis_params(a.basis, cols, true, 16000.0);
  const adfa::AnalysisMatrix m = adfa::build_matrix(p);
  adfa::write_matrix(m, a.out, a.format);
  std::printf("wrote %s: %zu x %zu %s matrix\n", a.out.c_str(), m.n_bins(), m.n_cols(),
              std::string(adfa::name(m.method())).c_str());
  return kExitOk;
}

struct VerifyArgs {
  std::optional<std::size_t> bins;
  std::optional<std::size_t> cols;
};

int cmd_verify(const VerifyArgs& a) {
  std::vector<std::size_t> extra;
  if (a.bins) {
    usage_check(*a.bins >= 2, "--bins", "must be at least 2");
    if (!a.cols) extra.push_back(*a.bins);
  }
  std::vector<adfa::verify::Check> checks = adfa::verify::standard_suite(extra);
  if (a.cols) {
    usage_check(*a.cols >= 1, "--cols", "must be at least 1");
    checks.push_back(adfa::verify::orthogonality(a.bins.value_or(5), *a.cols));
  }
  bool ok = true;
  for (const auto& c : checks) {
    const char* tag = c.expected_violation ? "WARN" : (c.passed ? "PASS" : "FAIL");
    std::printf("%s %s max_deviation=%.3e tolerance=%.3e%s\n", tag, c.name.c_str(), c.deviation,
                c.tolerance,
                c.expected_violation ? " (orthogonality not guaranteed: n_cols != 2*(n_bins-1))"
                                     : "");
    ok = ok && c.passed;
  }
  std::printf("verify: %s\n", ok ? "ok" : "FAILED");
  return ok ? kExitOk : kExitVerify;
}

struct BenchArgs {
  std::string input;
  std::optional<double> synthetic;
  double synthetic_rate = 16000.0;
  BasisFlags basis;
  FrameFlags frame;
  unsigned repeats = 3;
  std::optional<unsigned> threads;
  CLI::Option* bins_opt = nullptr;
};

int cmd_bench(const BenchArgs& a) {
  const adfa::FrameConfig cfg = frame_config(a.frame);
  usage_check(a.repeats >= 1, "--repeats", "must be at least 1");
  usage_check(a.input.empty() != !a.synthetic.has_value(), "--synthetic",
              "give either an input WAV or --synthetic SECONDS");
  const unsigned threads = thread_count(a.threads);
  const bool bins_given = a.bins_opt->count() > 0;
  basis_params(a.basis, cfg.frame_len, bins_given, 1.0);
  adfa::AudioBuffer audio;
  if (a.synthetic) {
    usage_check(*a.synthetic > 0.0, "--synthetic", "must be positive");
    usage_check(a.synthetic_rate >= 1.0, "--synthetic-rate", "must be positive");
    audio = adfa::synthetic_noise(*a.synthetic, static_cast<std::uint32_t>(a.synthetic_rate));
  } else {
    audio = adfa::read_wav(a.input);
  }
  const adfa::BasisParams p =
      basis_params(a.basis, cfg.frame_len, bins_given, static_cast<double>(audio.sample_rate));
  const adfa::BenchReport r = adfa::bench(p, audio, cfg, {a.repeats, threads});
  if (!r.gate_passed) {
    std::fprintf(stderr, "bench: matrix and naive paths disagree (max_abs_diff=%.3e > %.3e)\n",
                 r.max_abs_diff, r.tolerance);
    return kExitVerify;
  }
  std::printf(
      "method=%s n_bins=%zu frame_len=%zu hop=%zu n_frames=%zu repeats=%u threads=%u "
      "matrix_path_seconds=%.6f naive_path_seconds=%.6f ratio=%.3f max_abs_diff=%.3e\n",
      std::string(adfa::name(p.method)).c_str(), p.n_bins, cfg.frame_len, cfg.hop(),
      r.n_frames, r.repeats, threads, r.matrix_path_seconds, r.naive_path_seconds, r.ratio,
      r.max_abs_diff);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix-based spectral analysis (DFA, ADFA, MDFA, CQA)"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "compute a spectrogram from a PCM16 WAV file");
  an->add_option("input", analyze.input, "input WAV file")->required();
  an->add_option("--out,-o", analyze.out, "output path")->required();
  add_basis_flags(an, analyze.basis, false);
  analyze.bins_opt = an->get_option("--bins");
  add_frame_flags(an, analyze.frame);
  an->add_flag("--log-power", analyze.log_power, "write ln(max(|z|^2, eps)) instead of z");
  an->add_option("--eps", analyze.eps, "log-power floor")->capture_default_str();
  an->add_option("--format", analyze.format, "binary | csv")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  an->add_option("--threads", analyze.threads, "worker threads (default $ADFA_THREADS or 1)");

  MatrixArgs matrix;
  auto* mx = app.add_subcommand("matrix", "export an analysis matrix");
  mx->add_option("--out,-o", matrix.out, "output path")->required();
  add_basis_flags(mx, matrix.basis, true);
  mx->add_option("--format", matrix.format, "binary | csv")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));

  VerifyArgs verify;
  auto* vf = app.add_subcommand("verify", "run the numerical self-checks");
  vf->add_option("--bins", verify.bins, "add an ADFA case with this many bins");
  vf->add_option("--cols", verify.cols, "check an ADFA matrix with this many columns");

  BenchArgs bench;
  auto* bn = app.add_subcommand("bench", "time the matrix path against direct summation");
  bn->add_option("input", bench.input, "input WAV file");
  bn->add_option("--synthetic", bench.synthetic, "use SECONDS of seeded white noise");
  bn->add_option("--synthetic-rate", bench.synthetic_rate, "sample rate of synthetic input")
      ->capture_default_str();
  add_basis_flags(bn, bench.basis, false);
  bench.bins_opt = bn->get_option("--bins");
  add_frame_flags(bn, bench.frame);
  bn->add_option("--repeats", bench.repeats, "timed runs per path")->capture_default_str();
  bn->add_option("--threads", bench.threads, "worker threads per path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*an) return cmd_analyze(analyze);
    if (*mx) return cmd_matrix(matrix);
    if (*vf) return cmd_verify(verify);
    if (*bn) return cmd_bench(bench);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return kExitUsage;
  } catch (const adfa::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.is_io() ? kExitIo : kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  return kExitUsage;
}

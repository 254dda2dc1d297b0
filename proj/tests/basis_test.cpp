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

#include "adfa/basis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "adfa/engine.hpp"
#include "test_oracles.hpp"

namespace adfa {
namespace {

using C = std::complex<double>;

void ExpectEntry(const AnalysisMatrix& m, std::size_t r, std::size_t c, C want,
                 double tol = 1e-12) {
  EXPECT_NEAR(m(r, c).real(), want.real(), tol) << "row " << r << " col " << c;
  EXPECT_NEAR(m(r, c).imag(), want.imag(), tol) << "row " << r << " col " << c;
}

TEST(UnitPhasorTest, ExactAtQuarterTurns) {
  EXPECT_EQ(unit_phasor(0.0), C(1.0, 0.0));
  EXPECT_EQ(unit_phasor(0.5), C(0.0, -1.0));
  EXPECT_EQ(unit_phasor(1.0), C(-1.0, 0.0));
  EXPECT_EQ(unit_phasor(1.5), C(0.0, 1.0));
  EXPECT_EQ(unit_phasor(2.0), C(1.0, 0.0));
  EXPECT_EQ(unit_phasor(-1.0), C(-1.0, 0.0));
  EXPECT_EQ(unit_phasor(1723.0), C(-1.0, 0.0));
}

TEST(UnitPhasorTest, MatchesStdExp) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = dist(rng);
    const C want = std::exp(C(0.0, -std::numbers::pi * x));
    EXPECT_NEAR(std::abs(unit_phasor(x) - want), 0.0, 1e-13) << x;
  }
}

TEST(DfaMatrixTest, SizeTwo) {
  const AnalysisMatrix m = build_dfa_matrix(2);
  EXPECT_EQ(m.method(), Method::kDfa);
  ExpectEntry(m, 0, 0, {1, 0});
  ExpectEntry(m, 0, 1, {1, 0});
  ExpectEntry(m, 1, 0, {1, 0});
  ExpectEntry(m, 1, 1, {-1, 0});
}

TEST(DfaMatrixTest, SizeFourRowOne) {
  const AnalysisMatrix m = build_dfa_matrix(4);
  ExpectEntry(m, 1, 0, {1, 0});
  ExpectEntry(m, 1, 1, {0, -1});
  ExpectEntry(m, 1, 2, {-1, 0});
  ExpectEntry(m, 1, 3, {0, 1});
}

TEST(DfaMatrixTest, CenterFreqsAreCyclesPerSample) {
  const AnalysisMatrix m = build_dfa_matrix(8);
  for (std::size_t k = 0; k < 8; ++k) EXPECT_DOUBLE_EQ(m.center_freqs()[k], k / 8.0);
}

TEST(DfaMatrixTest, ParsevalAgainstBruteForce) {
  const AnalysisMatrix m = build_dfa_matrix(4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto z = testing::random_vector(4, seed);
    const auto want = testing::brute_force_dft(z);
    const auto got = analyze_frame(m, z);
    long double energy = 0.0L;
    long double out = 0.0L;
    for (double x : z) energy += static_cast<long double>(x) * x;
    for (std::size_t k = 0; k < 4; ++k) {
      EXPECT_NEAR(std::abs(got[k] - C(static_cast<double>(want[k].real()),
                                      static_cast<double>(want[k].imag()))),
                  0.0, 1e-12);
      out += std::norm(want[k]);
    }
    EXPECT_NEAR(static_cast<double>(out), static_cast<double>(4.0L * energy), 1e-12);
  }
}

TEST(DfaMatrixTest, RejectsZero) {
  EXPECT_THROW(build_dfa_matrix(0), Error);
}

TEST(AdfaMatrixTest, TwoByTwo) {
  const AnalysisMatrix m = build_adfa_matrix(2, 2);
  ExpectEntry(m, 0, 0, {1, 0}, 0.0);
  ExpectEntry(m, 0, 1, {1, 0}, 0.0);
  ExpectEntry(m, 1, 0, {1, 0}, 0.0);
  ExpectEntry(m, 1, 1, {-1, 0}, 0.0);
}

TEST(AdfaMatrixTest, ThreeBinsFourColsRowOne) {
  const AnalysisMatrix m = build_adfa_matrix(3, 4);
  ExpectEntry(m, 1, 0, {1, 0});
  ExpectEntry(m, 1, 1, {0, -1});
  ExpectEntry(m, 1, 2, {-1, 0});
  ExpectEntry(m, 1, 3, {0, 1});
}

TEST(AdfaMatrixTest, DefaultConfigurationShape) {
  const AnalysisMatrix m = build_adfa_matrix(863, 1724);
  EXPECT_EQ(m.n_bins(), 863u);
  EXPECT_EQ(m.n_cols(), 1724u);
  EXPECT_EQ(m.entries().size(), 863u * 1724u);
  EXPECT_EQ(m.center_freqs().front(), 0.0);
  EXPECT_EQ(m.center_freqs().back(), 1.0);
  EXPECT_EQ(m(862, 1), C(-1.0, 0.0));
}

TEST(AdfaMatrixTest, RejectsSingleBin) {
  EXPECT_THROW(build_adfa_matrix(1, 4), Error);
  EXPECT_THROW(build_adfa_matrix(4, 0), Error);
}

TEST(AdfaMatrixTest, HalfSpectrumIdentity) {
  for (std::size_t bins : {2u, 5u, 33u, 257u}) {
    const std::size_t cols = 2 * (bins - 1);
    const AnalysisMatrix a = build_adfa_matrix(bins, cols);
    const AnalysisMatrix d = build_dfa_matrix(cols);
    double worst = 0.0;
    for (std::size_t r = 0; r < bins; ++r) {
      for (std::size_t c = 0; c < cols; ++c) worst = std::max(worst, std::abs(a(r, c) - d(r, c)));
    }
    EXPECT_LT(worst, 1e-12) << bins;
  }
}

TEST(AdfaMatrixTest, TruncatedVariantIsPrefixOfSquareCondition) {
  // n_cols != 2(n_bins-1) keeps the same rows, fewer (or more) columns.
  const AnalysisMatrix full = build_adfa_matrix(9, 16);
  const AnalysisMatrix cut = build_adfa_matrix(9, 10);
  const AnalysisMatrix longer = build_adfa_matrix(9, 40);
  for (std::size_t r = 0; r < 9; ++r) {
    for (std::size_t c = 0; c < 10; ++c) EXPECT_EQ(cut(r, c), full(r, c));
    for (std::size_t c = 0; c < 16; ++c) EXPECT_EQ(longer(r, c), full(r, c));
  }
}

TEST(AdfaMatrixTest, UnitModulusAndInvSqrtCols) {
  const AnalysisMatrix plain = build_adfa_matrix(17, 32);
  const AnalysisMatrix scaled = build_adfa_matrix(17, 32, Normalization::kInvSqrtCols);
  EXPECT_EQ(scaled.normalization(), Normalization::kInvSqrtCols);
  for (std::size_t i = 0; i < plain.entries().size(); ++i) {
    EXPECT_NEAR(std::abs(plain.entries()[i]), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(scaled.entries()[i]), 1.0 / std::sqrt(32.0), 1e-12);
  }
  EXPECT_LT(verify_orthogonality(scaled).max_deviation, 1e-12);
}

TEST(MelTest, HtkAndSlaneyRoundTrip) {
  for (double hz : {0.0, 100.0, 999.0, 1000.0, 4000.0, 8000.0, 22050.0}) {
    EXPECT_NEAR(mel_to_hz(hz_to_mel(hz, MelFormula::kHtk), MelFormula::kHtk), hz, 1e-9);
    EXPECT_NEAR(mel_to_hz(hz_to_mel(hz, MelFormula::kSlaney), MelFormula::kSlaney), hz, 1e-9);
  }
  EXPECT_EQ(hz_to_mel(0.0, MelFormula::kHtk), 0.0);
  EXPECT_EQ(hz_to_mel(0.0, MelFormula::kSlaney), 0.0);
  EXPECT_NEAR(hz_to_mel(1000.0, MelFormula::kSlaney), 15.0, 1e-12);
}

TEST(MelTest, CenterFreqEndpoints) {
  for (MelFormula f : {MelFormula::kHtk, MelFormula::kSlaney}) {
    const auto hz = mel_center_freqs(863, {16000.0, f});
    EXPECT_EQ(hz.front(), 0.0);
    EXPECT_EQ(hz.back(), 8000.0);
    for (std::size_t a = 1; a < hz.size(); ++a) EXPECT_GT(hz[a], hz[a - 1]);
  }
}

TEST(MelTest, ThreeBinMidpointHtk) {
  // 700 * (10^(m/2595) - 1) with m = 2595 * log10(1 + 8000/700) / 2.
  const auto hz = mel_center_freqs(3, {16000.0, MelFormula::kHtk});
  EXPECT_NEAR(hz[1], 1767.7925358506134, 1e-9);
}

TEST(MelTest, RejectsBadArguments) {
  EXPECT_THROW(mel_center_freqs(1, {}), Error);
  EXPECT_THROW(mel_center_freqs(4, {0.0, MelFormula::kHtk}), Error);
}

TEST(MdfaMatrixTest, RowsAndEndpoints) {
  const MelConfig cfg{16000.0, MelFormula::kHtk};
  const AnalysisMatrix m = build_mdfa_matrix(64, 126, cfg);
  for (std::size_t n = 0; n < m.n_cols(); ++n) EXPECT_EQ(m(0, n), C(1.0, 0.0));
  EXPECT_EQ(m(63, 1), C(-1.0, 0.0));
  EXPECT_EQ(m.center_freqs().front(), 0.0);
  EXPECT_EQ(m.center_freqs().back(), 1.0);
}

TEST(MdfaMatrixTest, UniformMelSpacingAt863) {
  const MelConfig cfg{16000.0, MelFormula::kHtk};
  const AnalysisMatrix m = build_mdfa_matrix(863, 8, cfg);
  // Recompute the mel value of every row from its center frequency.
  const auto mel = [](double frac) { return 2595.0 * std::log10(1.0 + frac * 8000.0 / 700.0); };
  const double step = mel(1.0) / 862.0;
  for (std::size_t a = 0; a + 1 < 863; ++a) {
    const double d = mel(m.center_freqs()[a + 1]) - mel(m.center_freqs()[a]);
    EXPECT_NEAR(d, step, 1e-9) << a;
  }
}

TEST(MdfaMatrixTest, EntriesArePowersOfRowPhasor) {
  const AnalysisMatrix m = build_mdfa_matrix(20, 50, {22050.0, MelFormula::kSlaney});
  for (std::size_t r = 0; r < 20; ++r) {
    const double f = m.center_freqs()[r];
    for (std::size_t n = 0; n < 50; ++n) {
      const C want = std::exp(C(0.0, -std::numbers::pi * f * static_cast<double>(n)));
      EXPECT_NEAR(std::abs(m(r, n) - want), 0.0, 1e-12);
    }
  }
}

TEST(CqaMatrixTest, NyquistRowIsLast) {
  const AnalysisMatrix m = build_cqa_matrix(863, 1724, {2.0, 96});
  EXPECT_EQ(m.center_freqs().back(), 1.0);
  EXPECT_EQ(m(862, 1), C(-1.0, 0.0));
  EXPECT_EQ(m(862, 0), C(1.0, 0.0));
}

TEST(CqaMatrixTest, OneOctaveDownIsHalfNyquist) {
  const AnalysisMatrix m = build_cqa_matrix(97, 8, {2.0, 96});
  // Row 0 has a = 96.
  EXPECT_EQ(m.center_freqs()[0], 0.5);
  EXPECT_EQ(m(0, 1), C(0.0, -1.0));
}

TEST(CqaMatrixTest, GeometricSpacing) {
  for (const CqConfig cfg : {CqConfig{2.0, 96}, CqConfig{2.0, 12}, CqConfig{3.0, 7}}) {
    const AnalysisMatrix m = build_cqa_matrix(200, 4, cfg);
    const double ratio = std::pow(cfg.base, 1.0 / cfg.bins_per_octave);
    for (std::size_t r = 0; r + 1 < 200; ++r) {
      EXPECT_NEAR(m.center_freqs()[r + 1] / m.center_freqs()[r], ratio, 1e-12);
      EXPECT_LE(m.center_freqs()[r], 1.0);
    }
  }
}

TEST(CqaMatrixTest, RejectsBadConfig) {
  EXPECT_THROW(build_cqa_matrix(8, 8, {1.0, 12}), Error);
  EXPECT_THROW(build_cqa_matrix(8, 8, {2.0, 0}), Error);
  EXPECT_THROW(build_cqa_matrix(0, 8, {2.0, 12}), Error);
  EXPECT_NO_THROW(build_cqa_matrix(1, 1, {2.0, 12}));
}

TEST(OrthogonalityTest, SquareConditionHolds) {
  const auto rep = verify_orthogonality(build_adfa_matrix(5, 8));
  EXPECT_TRUE(rep.guaranteed);
  EXPECT_LT(rep.max_deviation, 1e-12);
}

TEST(OrthogonalityTest, ViolatedConditionIsFlagged) {
  const auto rep = verify_orthogonality(build_adfa_matrix(3, 3));
  EXPECT_FALSE(rep.guaranteed);
  const long double want = testing::gram_deviation({0.0L, 0.5L, 1.0L}, 3);
  EXPECT_NEAR(rep.max_deviation, static_cast<double>(want), 1e-12);
  EXPECT_GT(rep.max_deviation, 0.3);
}

TEST(OrthogonalityTest, Dfa) {
  const auto rep = verify_orthogonality(build_dfa_matrix(8));
  EXPECT_TRUE(rep.guaranteed);
  EXPECT_LT(rep.max_deviation, 1e-12);
}

TEST(OrthogonalityTest, VariantsAreNotGuaranteed) {
  EXPECT_FALSE(verify_orthogonality(build_cqa_matrix(9, 16, {})).guaranteed);
  EXPECT_FALSE(verify_orthogonality(build_mdfa_matrix(9, 16, {})).guaranteed);
}

TEST(ConjugateSymmetryTest, RealFrameGivesRealEdgeBins) {
  const auto frame = testing::random_vector(64, 11);
  for (const AnalysisMatrix& m : {build_adfa_matrix(33, 64), build_mdfa_matrix(33, 64, {})}) {
    const auto out = analyze_frame(m, frame);
    EXPECT_LT(std::abs(out.front().imag()), 1e-9 * 64);
    EXPECT_LT(std::abs(out.back().imag()), 1e-9 * 64);
  }
}

}  // namespace
}  // namespace adfa

// spectral_test.cc

// Copyright 2026 The tdoa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "tdoa/spectral.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "test_util.h"
#include "tdoa/errors.h"
#include "tdoa/simulator.h"

namespace tdoa {
namespace {

using testing::Uniform;

constexpr double kPi = std::numbers::pi;

// Naive DFT bin of a windowed segment.
Complex NaiveBin(const std::vector<double> &x, size_t start, int k, int len) {
  Complex acc(0.0, 0.0);
  for (int n = 0; n < len; ++n)
    acc += x[start + n] * std::sin(kPi * n / len) *
           std::polar(1.0, -2.0 * kPi * k * n / len);
  return acc;
}

// Direct evaluation of the upsampled GCC sum with a Hermitian spectrum.
double NaiveGcc(const Spectrum &phi, int n, int r) {
  const int k_len = 2 * (static_cast<int>(phi.size()) - 1);
  Complex acc(0.0, 0.0);
  for (int k = 1; k < k_len; ++k) {
    // Bins above K/2 are the negative frequencies k - K.
    Complex v = k <= k_len / 2 ? phi[k] : std::conj(phi[k_len - k]);
    int f = k <= k_len / 2 ? k : k - k_len;
    acc += v * std::polar(1.0, 2.0 * kPi * n * f / (static_cast<double>(r) * k_len));
  }
  return acc.real() / (k_len - 1);
}

Spectrum RandomPhat(std::mt19937_64 &rng, int bins) {
  Spectrum s(bins);
  for (auto &c : s) c = std::polar(1.0, Uniform(rng, -kPi, kPi));
  s[0] = 1.0;
  s[bins - 1] = Uniform(rng, 0, 1) < 0.5 ? 1.0 : -1.0;
  return s;
}

TEST(Stft, FrameCount) {
  StftConfig cfg;
  Stft stft(cfg);
  EXPECT_EQ(stft.NumFrames(160000), 311);
  EXPECT_EQ(stft.NumFrames(1024), 1);
  EXPECT_EQ(stft.NumFrames(1535), 1);
  EXPECT_EQ(stft.NumFrames(1536), 2);
  EXPECT_THROW(stft.NumFrames(1023), UsageError);
}

TEST(Stft, RejectsBadConfig) {
  StftConfig cfg;
  cfg.hop = 256;
  EXPECT_THROW(Stft{cfg}, UsageError);
}

TEST(Stft, ZeroSignal) {
  auto frames = ComputeStft(std::vector<double>(4096, 0.0), StftConfig{});
  ASSERT_EQ(frames.size(), 7u);
  for (const auto &f : frames)
    for (const auto &c : f) EXPECT_EQ(c, Complex(0.0, 0.0));
}

TEST(Stft, WindowIsPeriodicSqrtHann) {
  std::vector<double> w = SqrtHannWindow(1024);
  EXPECT_EQ(w[0], 0.0);
  EXPECT_NEAR(w[512], 1.0, 1e-15);
  for (int n = 0; n < 1024; ++n) {
    EXPECT_GE(w[n], 0.0);
    // Squared window at 50 % overlap sums to one.
    EXPECT_NEAR(w[n] * w[n] + w[(n + 512) % 1024] * w[(n + 512) % 1024], 1.0, 1e-14);
  }
}

TEST(Stft, ImpulseGivesFlatMagnitude) {
  std::vector<double> x(1024, 0.0);
  const int pos = 100;
  x[pos] = 1.0;
  auto frames = ComputeStft(x, StftConfig{});
  const double wv = std::sin(kPi * pos / 1024);
  for (int k = 0; k <= 512; ++k) {
    EXPECT_NEAR(std::abs(frames[0][k]), wv, 1e-14);
    Complex expect = wv * std::polar(1.0, -2.0 * kPi * k * pos / 1024);
    EXPECT_NEAR(std::abs(frames[0][k] - expect), 0.0, 1e-13);
  }
}

TEST(Stft, MatchesNaiveDft) {
  std::mt19937_64 rng(3);
  std::vector<double> x(4096);
  for (double &v : x) v = Uniform(rng, -1, 1);
  auto frames = ComputeStft(x, StftConfig{});
  for (int l : {0, 3, 6})
    for (int k : {0, 1, 17, 200, 511, 512})
      EXPECT_NEAR(std::abs(frames[l][k] - NaiveBin(x, l * 512, k, 1024)), 0.0, 1e-10);
}

TEST(PairIndex, RowMajorUpperTriangle) {
  int idx = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) EXPECT_EQ(PairIndex(i, j, 6), idx++);
  EXPECT_EQ(NumPairs(6), 15);
  EXPECT_THROW(PairIndex(2, 2, 6), UsageError);
}

std::vector<Spectrum> RandomFrame(std::mt19937_64 &rng, int m, int bins) {
  std::vector<Spectrum> f(m, Spectrum(bins));
  for (auto &s : f)
    for (auto &c : s) c = Complex(Uniform(rng, -1, 1), Uniform(rng, -1, 1));
  return f;
}

TEST(CpsdState, ZeroLambdaIsInstantaneous) {
  std::mt19937_64 rng(4);
  CpsdState st(3, 9, 0.0);
  st.Update(RandomFrame(rng, 3, 9));
  auto f = RandomFrame(rng, 3, 9);
  st.Update(f);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Spectrum g = st.Get(i, j);
      for (int k = 0; k < 9; ++k)
        EXPECT_NEAR(std::abs(g[k] - f[i][k] * std::conj(f[j][k])), 0.0, 1e-15);
    }
}

TEST(CpsdState, TwoFrameRecursionAndSymmetry) {
  std::mt19937_64 rng(5);
  const double lambda = 0.98;
  CpsdState st(4, 7, lambda);
  EXPECT_FALSE(st.initialized());
  auto f1 = RandomFrame(rng, 4, 7);
  auto f2 = RandomFrame(rng, 4, 7);
  st.Update(f1);
  EXPECT_TRUE(st.initialized());
  st.Update(f2);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Spectrum g = st.Get(i, j);
      Spectrum h = st.Get(j, i);
      for (int k = 0; k < 7; ++k) {
        Complex expect = lambda * f1[i][k] * std::conj(f1[j][k]) +
                         (1 - lambda) * f2[i][k] * std::conj(f2[j][k]);
        EXPECT_NEAR(std::abs(g[k] - expect), 0.0, 1e-14);
        EXPECT_EQ(h[k], std::conj(g[k]));
        if (i == j) {
          EXPECT_EQ(g[k].imag(), 0.0);
          EXPECT_GE(g[k].real(), 0.0);
        }
      }
    }
  }
}

TEST(CpsdState, RejectsBadInput) {
  EXPECT_THROW(CpsdState(3, 9, 1.0), UsageError);
  CpsdState st(3, 9);
  std::mt19937_64 rng(1);
  EXPECT_THROW(st.Update(RandomFrame(rng, 2, 9)), UsageError);
  EXPECT_THROW(st.Stored(2, 1), UsageError);
}

TEST(PhatWeight, Normalizes) {
  Spectrum s = PhatWeight(Spectrum{Complex(3, 4), Complex(0, 0), Complex(-2, 0)});
  EXPECT_NEAR(s[0].real(), 0.6, 1e-16);
  EXPECT_NEAR(s[0].imag(), 0.8, 1e-16);
  EXPECT_EQ(s[1], Complex(0, 0));
  EXPECT_EQ(s[2], Complex(-1, 0));
}

TEST(PhatWeight, MagnitudesAreZeroOrOne) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    Spectrum s(513);
    for (auto &c : s) {
      double mag = std::pow(10.0, Uniform(rng, -8, 3));
      c = Uniform(rng, 0, 1) < 0.1 ? Complex(0, 0) : std::polar(mag, Uniform(rng, -kPi, kPi));
    }
    for (const Complex &c : PhatWeight(s)) {
      double a = std::abs(c);
      EXPECT_TRUE(a == 0.0 || std::abs(a - 1.0) < 1e-15) << a;
    }
  }
}

TEST(PhatWeight, GuardIsRelativeToMeanMagnitude) {
  Spectrum s(100, Complex(1.0, 0.0));
  s[5] = Complex(1e-13, 0.0);  // below 1e-12 of the mean
  s[6] = Complex(1e-11, 0.0);
  Spectrum p = PhatWeight(s);
  EXPECT_EQ(p[5], Complex(0, 0));
  EXPECT_EQ(p[6], Complex(1, 0));
}

TEST(MaxLag, DirectFormula) {
  EXPECT_EQ(MaxLag(1.0, 16000, 10, 343), 466);
  EXPECT_EQ(MaxLag(1.0, 16000, 1, 343), 46);
  EXPECT_EQ(MaxLag(0.0, 16000, 10, 343), 0);
}

TEST(GccPhat, SelfPairPeaksAtZero) {
  StftConfig cfg;
  GccPhat gcc(cfg, 10);
  GccFunction g = gcc.Compute(Spectrum(513, Complex(1, 0)), 466);
  EXPECT_EQ(g.max_lag, 466);
  EXPECT_EQ(g.values.size(), 933u);
  EXPECT_NEAR(g.at(0), 1.0, 1e-12);
  TdoaPeak p = EstimateTdoa(g);
  EXPECT_EQ(p.lag, 0);
  EXPECT_NEAR(p.reliability, 1.0, 1e-12);
}

TEST(GccPhat, MatchesDirectSum) {
  std::mt19937_64 rng(7);
  StftConfig cfg;
  for (int r : {1, 3, 10}) {
    GccPhat gcc(cfg, r);
    Spectrum phi = RandomPhat(rng, 513);
    GccFunction g = gcc.Compute(phi, 40 * r);
    for (int n : {-40 * r, -7, -1, 0, 1, 5, 13 * r, 40 * r})
      EXPECT_NEAR(g.at(n), NaiveGcc(phi, n, r), 1e-12) << "R=" << r << " n=" << n;
  }
}

TEST(GccPhat, UpsampledGridContainsBaseGrid) {
  std::mt19937_64 rng(8);
  StftConfig cfg;
  GccPhat g1(cfg, 1), g10(cfg, 10);
  Spectrum phi = RandomPhat(rng, 513);
  GccFunction a = g1.Compute(phi, 40), b = g10.Compute(phi, 400);
  for (int m = -40; m <= 40; ++m) EXPECT_NEAR(a.at(m), b.at(10 * m), 1e-12);
}

TEST(GccPhat, BoundedByOne) {
  std::mt19937_64 rng(9);
  StftConfig cfg;
  GccPhat gcc(cfg, 10);
  for (int trial = 0; trial < 20; ++trial) {
    GccFunction g = gcc.Compute(RandomPhat(rng, 513), 5119);
    for (double v : g.values) EXPECT_LE(std::abs(v), 1.0 + 1e-9);
  }
}

TEST(GccPhat, LagRangeClampedToAliasFreeWindow) {
  StftConfig cfg;
  GccPhat gcc(cfg, 10);
  EXPECT_EQ(gcc.ClampLag(100000), 5119);
  EXPECT_EQ(gcc.Compute(Spectrum(513, 1.0), 100000).max_lag, 5119);
}

TEST(GccPhat, SwapMirrorsFunction) {
  std::mt19937_64 rng(10);
  StftConfig cfg;
  GccPhat gcc(cfg, 10);
  Spectrum phi = RandomPhat(rng, 513);
  Spectrum conj(phi.size());
  for (size_t k = 0; k < phi.size(); ++k) conj[k] = std::conj(phi[k]);
  GccFunction a = gcc.Compute(phi, 300), b = gcc.Compute(conj, 300);
  for (int n = -300; n <= 300; ++n) EXPECT_NEAR(a.at(n), b.at(-n), 1e-12);
  TdoaPeak pa = EstimateTdoa(a), pb = EstimateTdoa(b);
  EXPECT_EQ(pa.lag, -pb.lag);
  EXPECT_NEAR(pa.reliability, pb.reliability, 1e-12);
}

TEST(EstimateTdoa, DeltaAndTieRules) {
  GccFunction g;
  g.upsampling = 10;
  g.sample_rate_hz = 16000;
  g.max_lag = 100;
  g.values.assign(201, 0.0);
  g.values[80 + 100] = 1.0;
  TdoaPeak p = EstimateTdoa(g);
  EXPECT_EQ(p.lag, 80);
  EXPECT_DOUBLE_EQ(p.tdoa_s, 0.5e-3);
  EXPECT_EQ(p.reliability, 1.0);

  g.values.assign(201, 0.25);
  EXPECT_EQ(EstimateTdoa(g).lag, 0);

  g.values.assign(201, 0.0);
  g.values[100 - 3] = 0.5;
  g.values[100 + 3] = 0.5;
  g.values[100 + 50] = 0.5;
  EXPECT_EQ(EstimateTdoa(g).lag, -3);
}

// White noise pair with an integer delay of d samples.
std::vector<std::vector<double>> DelayedPair(int d, size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<double> src(n + d);
  for (double &v : src) v = gauss(rng);
  std::vector<double> a(src.begin() + d, src.end());    // leads
  std::vector<double> b(src.begin(), src.begin() + n);  // lags by d samples
  return {b, a};
}

int TimeDomainXcorrPeak(const std::vector<double> &x, const std::vector<double> &y,
                        int max_lag) {
  int best = 0;
  double best_v = -1e300;
  for (int lag = -max_lag; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (size_t n = 0; n < x.size(); ++n) {
      long m = static_cast<long>(n) - lag;
      if (m >= 0 && m < static_cast<long>(y.size())) acc += x[n] * y[m];
    }
    if (acc > best_v) {
      best_v = acc;
      best = lag;
    }
  }
  return best;
}

TEST(GccPhat, IntegerDelayPeaksAtUpsampledLag) {
  StftConfig cfg;
  for (int d : {-7, -1, 0, 3, 12}) {
    auto pair = DelayedPair(std::abs(d), 16000, 100 + d);
    if (d < 0) std::swap(pair[0], pair[1]);
    int oracle = TimeDomainXcorrPeak(pair[0], pair[1], 20);
    ASSERT_EQ(oracle, d);
    MicArray array({Point(0, 0), Point(1.0, 0)});
    CpsdState st(2, cfg.num_bins());
    auto s0 = ComputeStft(pair[0], cfg), s1 = ComputeStft(pair[1], cfg);
    for (size_t l = 0; l < s0.size(); ++l) st.Update(std::vector<Spectrum>{s0[l], s1[l]});
    GccPhat gcc(cfg, 10);
    PairAnalysis pa = AnalyzePairs(st, array, gcc, 343.0);
    EXPECT_EQ(pa.Peak(0, 1, 2).lag, 10 * oracle);
    EXPECT_EQ(pa.Peak(1, 0, 2).lag, -10 * oracle);
    EXPECT_EQ(pa.Peak(1, 0, 2).reliability, pa.Peak(0, 1, 2).reliability);
  }
}

TEST(GccPhat, AnechoicSceneWithinOneUpsampledLag) {
  const double step = 1.0 / (10 * 16000.0);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SimScene scene = testing::AnechoicScene(seed, 3.0);
    SimOutput sim = Simulate(scene);
    MicArray array(scene.mics);
    StftConfig cfg;
    std::vector<std::vector<Spectrum>> spec;
    for (const auto &c : sim.mixture) spec.push_back(ComputeStft(c, cfg));
    CpsdState st(array.size(), cfg.num_bins());
    GccPhat gcc(cfg, 10);
    for (size_t l = 0; l < spec[0].size(); ++l) {
      std::vector<Spectrum> f;
      for (const auto &s : spec) f.push_back(s[l]);
      st.Update(f);
    }
    PairAnalysis pa = AnalyzePairs(st, array, gcc, scene.nu);
    for (int i = 0; i < array.size(); ++i)
      for (int j = i + 1; j < array.size(); ++j) {
        const GccFunction &g = pa.gcc[PairIndex(i, j, array.size())];
        double truth = TrueTdoa(scene.source, array[i], array[j], scene.nu);
        TdoaPeak p = pa.Peak(i, j, array.size());
        EXPECT_LE(std::abs(p.tdoa_s - truth), step) << i << "," << j;
        double mx = *std::max_element(g.values.begin(), g.values.end());
        EXPECT_EQ(p.reliability, mx);
        EXPECT_EQ(g.max_lag, MaxLag(array.PairDistance(i, j), 16000, 10, scene.nu));
      }
  }
}

TEST(WriteGccCsv, Columns) {
  GccFunction g;
  g.upsampling = 10;
  g.max_lag = 1;
  g.values = {0.1, 0.5, 0.2};
  std::ostringstream os;
  WriteGccCsv(os, g);
  EXPECT_EQ(os.str(), "lag_samples,value\n-0.1,0.1\n0,0.5\n0.1,0.2\n");
}

}  // namespace
}  // namespace tdoa

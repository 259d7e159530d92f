// tdoa/spectral.h

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

// STFT analysis, recursively smoothed cross-power spectral densities, PHAT
// weighting and upsampled GCC-PHAT with physical lag limits.

#ifndef TDOA_SPECTRAL_H_
#define TDOA_SPECTRAL_H_

#include <complex>
#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "tdoa/fft.h"
#include "tdoa/geometry.h"

namespace tdoa {

using Complex = std::complex<double>;
// One-sided spectrum, bins k = 0..K/2.
using Spectrum = std::vector<Complex>;

struct StftConfig {
  double sample_rate_hz = 16000.0;
  int frame_len = 1024;  // also the DFT length K
  int hop = 512;

  int dft_len() const { return frame_len; }
  int num_bins() const { return frame_len / 2 + 1; }
  // hop must be frame_len / 2 and frame_len even.
  void Validate() const;
};

// Periodic square-root Hann window, w[n] = sin(pi n / len).
std::vector<double> SqrtHannWindow(int len);

class Stft {
 public:
  explicit Stft(const StftConfig &cfg);

  const StftConfig &config() const { return cfg_; }
  // floor((len - frame_len) / hop) + 1; throws UsageError if len < frame_len.
  int NumFrames(size_t num_samples) const;
  std::vector<Spectrum> Analyze(std::span<const double> signal);

 private:
  StftConfig cfg_;
  std::vector<double> window_;
  std::vector<double> frame_;
  RealFft fft_;
};

std::vector<Spectrum> ComputeStft(std::span<const double> signal,
                                  const StftConfig &cfg);

// Number of unordered pairs and the index of pair (i, j), i < j, in the
// row-major upper-triangle enumeration (0,1), (0,2), ..., (M-2, M-1).
inline int NumPairs(int num_mics) { return num_mics * (num_mics - 1) / 2; }
int PairIndex(int i, int j, int num_mics);

// psi_ij[k, l] = lambda psi_ij[k, l-1] + (1 - lambda) Y_i[k, l] Y_j*[k, l].
// The first update stores the instantaneous product without smoothing.
// Only pairs i <= j are stored; psi_ji = conj(psi_ij).
class CpsdState {
 public:
  CpsdState(int num_mics, int num_bins, double lambda = 0.98);

  void Update(std::span<const Spectrum> frame);

  int num_mics() const { return num_mics_; }
  int num_bins() const { return num_bins_; }
  double lambda() const { return lambda_; }
  bool initialized() const { return initialized_; }

  const Spectrum &Stored(int i, int j) const;  // requires i <= j
  Spectrum Get(int i, int j) const;

 private:
  size_t Slot(int i, int j) const;
  int num_mics_;
  int num_bins_;
  double lambda_;
  bool initialized_ = false;
  std::vector<Spectrum> psi_;
};

// Relative threshold of the PHAT guard: bins with |psi| <= guard * mean|psi|
// carry no usable phase and map to zero.
inline constexpr double kPhatGuard = 1e-12;

Spectrum PhatWeight(std::span<const Complex> psi, double guard = kPhatGuard);

// GCC-PHAT over the admissible upsampled lags n in [-max_lag, max_lag].
struct GccFunction {
  int i = 0;
  int j = 0;
  int upsampling = 1;
  double sample_rate_hz = 16000.0;
  int max_lag = 0;
  std::vector<double> values;  // values[n + max_lag]

  int min_lag() const { return -max_lag; }
  double at(int n) const { return values[static_cast<size_t>(n + max_lag)]; }
  double LagToSeconds(int n) const {
    return n / (upsampling * sample_rate_hz);
  }
};

// floor(R fs D / nu), the largest physically realistic upsampled lag.
int MaxLag(double pair_distance, double sample_rate_hz, int upsampling,
           double nu);

// Evaluates
//   xi[n] = 1/(K-1) sum_{k=1}^{K-1} phi[k] exp(j 2 pi n k / (R K))
// from the one-sided PHAT spectrum by zero padding to R K bins, which is
// exact band-limited interpolation of the K-point GCC. The Nyquist bin is
// split evenly between +K/2 and -K/2 so that xi[R m] reproduces the K-point
// function.
class GccPhat {
 public:
  GccPhat(const StftConfig &cfg, int upsampling);

  int upsampling() const { return upsampling_; }
  const StftConfig &config() const { return cfg_; }
  // Lags are clamped to the non-aliased range |n| < R K / 2.
  int ClampLag(int max_lag) const;

  GccFunction Compute(std::span<const Complex> phat, int max_lag);

 private:
  StftConfig cfg_;
  int upsampling_;
  RealFft ifft_;
  Spectrum padded_;
  std::vector<double> out_;
};

struct TdoaPeak {
  int lag = 0;            // upsampled lag of the maximum
  double tdoa_s = 0.0;    // lag / (R fs)
  double reliability = 0.0;
};

// Argmax over admissible lags; ties go to the smallest |n|, negative first.
TdoaPeak EstimateTdoa(const GccFunction &g);

// Per-frame GCC-PHAT of every microphone pair, indexed by PairIndex.
struct PairAnalysis {
  std::vector<Spectrum> phat;
  std::vector<GccFunction> gcc;
  std::vector<TdoaPeak> peaks;

  // Estimate for the ordered pair (i, j); negates the lag when i > j.
  TdoaPeak Peak(int i, int j, int num_mics) const;
};

PairAnalysis AnalyzePairs(const CpsdState &cpsd, const MicArray &array,
                          GccPhat &gcc, double nu);

// Debug dump, columns lag_samples,value (lag in input-rate samples).
void WriteGccCsv(std::ostream &os, const GccFunction &g);

}  // namespace tdoa

#endif  // TDOA_SPECTRAL_H_

// spectral.cc

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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tdoa/errors.h"

namespace tdoa {

void StftConfig::Validate() const {
  if (!(sample_rate_hz > 0.0)) throw UsageError("sample rate must be positive");
  if (frame_len < 4 || frame_len % 2 != 0)
    throw UsageError("frame length must be even and >= 4");
  if (hop != frame_len / 2) throw UsageError("hop must equal frame_len / 2");
}

std::vector<double> SqrtHannWindow(int len) {
  std::vector<double> w(len);
  for (int n = 0; n < len; ++n) w[n] = std::sin(std::numbers::pi * n / len);
  return w;
}

Stft::Stft(const StftConfig &cfg)
    : cfg_(cfg),
      window_(SqrtHannWindow(cfg.frame_len)),
      frame_(cfg.frame_len),
      fft_(cfg.frame_len) {
  cfg_.Validate();
}

int Stft::NumFrames(size_t num_samples) const {
  if (num_samples < static_cast<size_t>(cfg_.frame_len))
    throw UsageError("signal shorter than one frame (" +
                     std::to_string(num_samples) + " < " +
                     std::to_string(cfg_.frame_len) + " samples)");
  return static_cast<int>((num_samples - cfg_.frame_len) / cfg_.hop) + 1;
}

std::vector<Spectrum> Stft::Analyze(std::span<const double> signal) {
  int num_frames = NumFrames(signal.size());
  std::vector<Spectrum> out(num_frames, Spectrum(cfg_.num_bins()));
  for (int l = 0; l < num_frames; ++l) {
    const double *seg = signal.data() + static_cast<size_t>(l) * cfg_.hop;
    for (int n = 0; n < cfg_.frame_len; ++n) frame_[n] = seg[n] * window_[n];
    fft_.Forward(frame_, out[l]);
  }
  return out;
}

std::vector<Spectrum> ComputeStft(std::span<const double> signal,
                                  const StftConfig &cfg) {
  Stft stft(cfg);
  return stft.Analyze(signal);
}

int PairIndex(int i, int j, int num_mics) {
  if (i < 0 || j >= num_mics || i >= j)
    throw UsageError("PairIndex expects 0 <= i < j < M");
  return i * num_mics - i * (i + 1) / 2 + (j - i - 1);
}

CpsdState::CpsdState(int num_mics, int num_bins, double lambda)
    : num_mics_(num_mics), num_bins_(num_bins), lambda_(lambda) {
  if (num_mics < 1 || num_bins < 1) throw UsageError("empty CPSD state");
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw UsageError("smoothing factor must satisfy 0 <= lambda < 1");
  psi_.assign(static_cast<size_t>(num_mics) * (num_mics + 1) / 2,
              Spectrum(num_bins));
}

size_t CpsdState::Slot(int i, int j) const {
  return static_cast<size_t>(i) * num_mics_ - static_cast<size_t>(i) * (i - 1) / 2 +
         (j - i);
}

void CpsdState::Update(std::span<const Spectrum> frame) {
  if (static_cast<int>(frame.size()) != num_mics_)
    throw UsageError("CPSD update needs one spectrum per microphone");
  for (const Spectrum &s : frame)
    if (static_cast<int>(s.size()) != num_bins_)
      throw UsageError("CPSD update spectrum length mismatch");
  double keep = initialized_ ? lambda_ : 0.0;
  double mix = 1.0 - keep;
  for (int i = 0; i < num_mics_; ++i) {
    for (int j = i; j < num_mics_; ++j) {
      Spectrum &psi = psi_[Slot(i, j)];
      const Spectrum &yi = frame[i];
      const Spectrum &yj = frame[j];
      if (i == j) {
        for (int k = 0; k < num_bins_; ++k)
          psi[k] = keep * psi[k].real() + mix * std::norm(yi[k]);
      } else {
        for (int k = 0; k < num_bins_; ++k)
          psi[k] = keep * psi[k] + mix * (yi[k] * std::conj(yj[k]));
      }
    }
  }
  initialized_ = true;
}

const Spectrum &CpsdState::Stored(int i, int j) const {
  if (i < 0 || j >= num_mics_ || i > j)
    throw UsageError("CpsdState::Stored expects 0 <= i <= j < M");
  return psi_[Slot(i, j)];
}

Spectrum CpsdState::Get(int i, int j) const {
  if (i <= j) return Stored(i, j);
  Spectrum s = Stored(j, i);
  for (Complex &c : s) c = std::conj(c);
  return s;
}

Spectrum PhatWeight(std::span<const Complex> psi, double guard) {
  Spectrum out(psi.size());
  if (psi.empty()) return out;
  double mean = 0.0;
  for (const Complex &c : psi) mean += std::abs(c);
  mean /= static_cast<double>(psi.size());
  double eps = guard * mean;
  for (size_t k = 0; k < psi.size(); ++k) {
    double mag = std::abs(psi[k]);
    out[k] = mag > eps && mag > 0.0 ? psi[k] / mag : Complex(0.0, 0.0);
  }
  return out;
}

int MaxLag(double pair_distance, double sample_rate_hz, int upsampling,
           double nu) {
  if (!(nu > 0.0)) throw UsageError("speed of sound must be positive");
  return static_cast<int>(
      std::floor(upsampling * sample_rate_hz * pair_distance / nu));
}

GccPhat::GccPhat(const StftConfig &cfg, int upsampling)
    : cfg_(cfg),
      upsampling_(upsampling),
      ifft_(std::max(upsampling, 1) * cfg.dft_len()),
      padded_(ifft_.num_bins()),
      out_(ifft_.size()) {
  cfg_.Validate();
  if (upsampling < 1) throw UsageError("upsampling factor must be >= 1");
}

int GccPhat::ClampLag(int max_lag) const {
  int limit = upsampling_ * cfg_.dft_len() / 2 - 1;
  return std::clamp(max_lag, 0, limit);
}

GccFunction GccPhat::Compute(std::span<const Complex> phat, int max_lag) {
  const int num_bins = cfg_.num_bins();
  const int half = cfg_.dft_len() / 2;
  if (static_cast<int>(phat.size()) != num_bins)
    throw UsageError("PHAT spectrum must have K/2 + 1 bins");
  std::fill(padded_.begin(), padded_.end(), Complex(0.0, 0.0));
  for (int k = 1; k < half; ++k) padded_[k] = phat[k];
  padded_[half] = upsampling_ > 1 ? 0.5 * phat[half] : phat[half];
  ifft_.Inverse(padded_, out_);

  GccFunction g;
  g.upsampling = upsampling_;
  g.sample_rate_hz = cfg_.sample_rate_hz;
  g.max_lag = ClampLag(max_lag);
  g.values.resize(2 * static_cast<size_t>(g.max_lag) + 1);
  const int n_fft = ifft_.size();
  const double norm = 1.0 / (cfg_.dft_len() - 1);
  for (int n = -g.max_lag; n <= g.max_lag; ++n)
    g.values[n + g.max_lag] = out_[(n + n_fft) % n_fft] * norm;
  return g;
}

TdoaPeak EstimateTdoa(const GccFunction &g) {
  if (g.values.empty()) throw UsageError("empty GCC function");
  int best = 0;
  double best_value = g.at(0);
  for (int a = 1; a <= g.max_lag; ++a) {
    for (int n : {-a, a}) {
      double v = g.at(n);
      if (v > best_value) {
        best_value = v;
        best = n;
      }
    }
  }
  return {best, g.LagToSeconds(best), best_value};
}

TdoaPeak PairAnalysis::Peak(int i, int j, int num_mics) const {
  if (i < j) return peaks[PairIndex(i, j, num_mics)];
  TdoaPeak p = peaks[PairIndex(j, i, num_mics)];
  p.lag = -p.lag;
  p.tdoa_s = -p.tdoa_s;
  return p;
}

PairAnalysis AnalyzePairs(const CpsdState &cpsd, const MicArray &array,
                          GccPhat &gcc, double nu) {
  const int m = array.size();
  if (cpsd.num_mics() != m)
    throw UsageError("CPSD state and array disagree on M");
  PairAnalysis out;
  out.phat.reserve(NumPairs(m));
  out.gcc.reserve(NumPairs(m));
  out.peaks.reserve(NumPairs(m));
  const double fs = gcc.config().sample_rate_hz;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      out.phat.push_back(PhatWeight(cpsd.Stored(i, j)));
      int max_lag = MaxLag(array.PairDistance(i, j), fs, gcc.upsampling(), nu);
      GccFunction g = gcc.Compute(out.phat.back(), max_lag);
      g.i = i;
      g.j = j;
      out.peaks.push_back(EstimateTdoa(g));
      out.gcc.push_back(std::move(g));
    }
  }
  return out;
}

void WriteGccCsv(std::ostream &os, const GccFunction &g) {
  os << "lag_samples,value\n";
  auto old_precision = os.precision(12);
  for (int n = g.min_lag(); n <= g.max_lag; ++n)
    os << static_cast<double>(n) / g.upsampling << ',' << g.at(n) << '\n';
  os.precision(old_precision);
}

}  // namespace tdoa

// tdoa/fft.h

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

#ifndef TDOA_FFT_H_
#define TDOA_FFT_H_

#include <complex>
#include <memory>
#include <span>

namespace tdoa {

// Real <-> half-spectrum DFT of fixed length n backed by FFTW.
//
// Forward: X[k] = sum_n x[n] exp(-j 2 pi k n / N), k = 0..N/2.
// Inverse: x[n] = sum_{k=0}^{N-1} X[k] exp(j 2 pi k n / N) with the upper half
// supplied by Hermitian symmetry (unnormalized, like FFTW).
//
// Plans use FFTW_ESTIMATE so results are bit-reproducible between runs. An
// instance owns its scratch buffers and is not safe for concurrent use.
class RealFft {
 public:
  explicit RealFft(int n);
  ~RealFft();
  RealFft(RealFft &&) noexcept;
  RealFft &operator=(RealFft &&) noexcept;
  RealFft(const RealFft &) = delete;
  RealFft &operator=(const RealFft &) = delete;

  int size() const { return n_; }
  int num_bins() const { return n_ / 2 + 1; }

  // in.size() must be <= n (zero-padded); out.size() == num_bins().
  void Forward(std::span<const double> in, std::span<std::complex<double>> out);
  // in.size() == num_bins(); out.size() == n.
  void Inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  struct Plans;
  int n_ = 0;
  std::unique_ptr<Plans> plans_;
};

// Smallest power of two >= n.
int NextPow2(int n);

}  // namespace tdoa

#endif  // TDOA_FFT_H_

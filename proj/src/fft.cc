// fft.cc

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

#include "tdoa/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <cstring>

#include "tdoa/errors.h"

namespace tdoa {

struct RealFft::Plans {
  double *real = nullptr;
  fftw_complex *spec = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;

  ~Plans() {
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
    if (real) fftw_free(real);
    if (spec) fftw_free(spec);
  }
};

RealFft::RealFft(int n) : n_(n), plans_(std::make_unique<Plans>()) {
  if (n < 2 || n % 2 != 0) throw UsageError("FFT length must be even and >= 2");
  plans_->real = fftw_alloc_real(n);
  plans_->spec = fftw_alloc_complex(n / 2 + 1);
  plans_->forward = fftw_plan_dft_r2c_1d(n, plans_->real, plans_->spec,
                                         FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
  plans_->inverse = fftw_plan_dft_c2r_1d(n, plans_->spec, plans_->real,
                                         FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
  if (!plans_->forward || !plans_->inverse)
    throw InternalError("FFTW plan creation failed");
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft &&) noexcept = default;
RealFft &RealFft::operator=(RealFft &&) noexcept = default;

void RealFft::Forward(std::span<const double> in,
                      std::span<std::complex<double>> out) {
  if (static_cast<int>(in.size()) > n_ ||
      static_cast<int>(out.size()) != num_bins())
    throw UsageError("RealFft::Forward size mismatch");
  std::copy(in.begin(), in.end(), plans_->real);
  std::fill(plans_->real + in.size(), plans_->real + n_, 0.0);
  fftw_execute(plans_->forward);
  const auto *spec = reinterpret_cast<const std::complex<double> *>(plans_->spec);
  std::copy(spec, spec + num_bins(), out.begin());
}

void RealFft::Inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) {
  if (static_cast<int>(in.size()) != num_bins() ||
      static_cast<int>(out.size()) != n_)
    throw UsageError("RealFft::Inverse size mismatch");
  std::memcpy(plans_->spec, in.data(), sizeof(fftw_complex) * num_bins());
  fftw_execute(plans_->inverse);
  std::copy(plans_->real, plans_->real + n_, out.begin());
}

int NextPow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace tdoa

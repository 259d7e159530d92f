// tdoa/room.h

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

// Shoebox room acoustics: band-limited fractional delays, image-source room
// impulse responses and Schroeder decay analysis.

#ifndef TDOA_ROOM_H_
#define TDOA_ROOM_H_

#include <span>
#include <vector>

#include "tdoa/geometry.h"

namespace tdoa {

// Kaiser-windowed sinc interpolator. For a delay of n0 + frac samples
// (0 <= frac < 1) the kernel tap h[t], t = 1 - taps/2 .. taps/2, is applied at
// output sample n0 + t. frac = 0 gives a unit impulse.
class FractionalDelay {
 public:
  explicit FractionalDelay(int taps = 64, double kaiser_beta = 8.0);

  int taps() const { return taps_; }
  int first_tap() const { return 1 - taps_ / 2; }
  void Kernel(double frac, std::span<double> out) const;

 private:
  int taps_;
  double beta_;
  double i0_beta_;
};

// Delays `in` by `delay_samples` and scales by `gain`, accumulating into
// `out` (samples pushed past the end are dropped).
void AddDelayed(std::span<const double> in, double delay_samples, double gain,
                const FractionalDelay &fd, std::span<double> out);

struct Room {
  double lx = 6.0, ly = 7.0, lz = 2.7;

  double Volume() const { return lx * ly * lz; }
  double Surface() const { return 2.0 * (lx * ly + lx * lz + ly * lz); }
  bool Contains(const Point &p) const;
};

// Uniform wall reflection coefficient from the Eyring reverberation formula.
double EyringReflection(const Room &room, double t60_s, double nu);

// Image-source impulse response of `length` samples (Allen & Berkley image
// lattice, frequency-independent walls with pressure reflection `beta`). The
// direct path uses `direct` interpolation; reflections use a tabulated
// 16-tap kernel.
std::vector<double> ImageSourceRir(const Room &room, const Point &source,
                                   const Point &mic, double beta,
                                   double sample_rate_hz, int length, double nu,
                                   const FractionalDelay &direct);

// Broadband T60 from the Schroeder backward integral, fitting the -5 to
// -25 dB range and extrapolating to 60 dB. NaN when the range is not reached.
double SchroederT60(std::span<const double> rir, double sample_rate_hz);

// Linear convolution truncated to signal.size() samples (FFT based).
std::vector<double> Convolve(std::span<const double> signal,
                             std::span<const double> kernel);

}  // namespace tdoa

#endif  // TDOA_ROOM_H_

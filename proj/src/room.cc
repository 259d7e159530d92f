// room.cc

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

#include "tdoa/room.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "tdoa/errors.h"
#include "tdoa/fft.h"

namespace tdoa {

namespace {

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  if (x == std::nearbyint(x)) return 0.0;
  double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Tabulated short kernel for the many reflections of a long response.
class KernelTable {
 public:
  static constexpr int kTaps = 16;
  static constexpr int kPhases = 1024;

  KernelTable() : table_(static_cast<size_t>(kPhases + 1) * kTaps) {
    FractionalDelay fd(kTaps, 6.0);
    for (int p = 0; p <= kPhases; ++p)
      fd.Kernel(static_cast<double>(p) / kPhases,
                std::span<double>(table_.data() + static_cast<size_t>(p) * kTaps, kTaps));
  }

  const double *Row(double frac) const {
    int p = static_cast<int>(std::lround(frac * kPhases));
    return table_.data() + static_cast<size_t>(p) * kTaps;
  }

 private:
  std::vector<double> table_;
};

const KernelTable &ReflectionKernels() {
  static const KernelTable table;
  return table;
}

}  // namespace

FractionalDelay::FractionalDelay(int taps, double kaiser_beta)
    : taps_(taps), beta_(kaiser_beta), i0_beta_(std::cyl_bessel_i(0.0, kaiser_beta)) {
  if (taps < 2 || taps % 2 != 0) throw UsageError("kernel taps must be even");
}

void FractionalDelay::Kernel(double frac, std::span<double> out) const {
  if (static_cast<int>(out.size()) != taps_)
    throw UsageError("kernel output size mismatch");
  const double half = taps_ / 2;
  for (int k = 0; k < taps_; ++k) {
    double x = (first_tap() + k) - frac;
    double r = x / half;
    double w = r * r >= 1.0
                   ? (r * r == 1.0 ? 1.0 / i0_beta_ : 0.0)
                   : std::cyl_bessel_i(0.0, beta_ * std::sqrt(1.0 - r * r)) / i0_beta_;
    out[k] = Sinc(x) * w;
  }
}

void AddDelayed(std::span<const double> in, double delay_samples, double gain,
                const FractionalDelay &fd, std::span<double> out) {
  if (!(delay_samples >= 0.0)) throw UsageError("negative delay");
  double n0f = std::floor(delay_samples);
  double frac = delay_samples - n0f;
  long n0 = static_cast<long>(n0f);
  std::vector<double> h(fd.taps());
  fd.Kernel(frac, h);
  const long len_out = static_cast<long>(out.size());
  const long len_in = static_cast<long>(in.size());
  for (int k = 0; k < fd.taps(); ++k) {
    double c = gain * h[k];
    if (c == 0.0) continue;
    long shift = n0 + fd.first_tap() + k;
    long begin = std::max(0L, shift);
    long end = std::min(len_out, len_in + shift);
    for (long n = begin; n < end; ++n) out[n] += c * in[n - shift];
  }
}

bool Room::Contains(const Point &p) const {
  return p.dim() == 3 && p.x() > 0.0 && p.x() < lx && p.y() > 0.0 &&
         p.y() < ly && p.z() > 0.0 && p.z() < lz;
}

double EyringReflection(const Room &room, double t60_s, double nu) {
  if (!(t60_s > 0.0)) throw ConfigError("T60 must be positive");
  // T60 = 24 ln(10) V / (-nu S ln(1 - alpha)) with beta^2 = 1 - alpha.
  double ln_one_minus_alpha =
      -24.0 * std::log(10.0) * room.Volume() / (nu * room.Surface() * t60_s);
  return std::exp(0.5 * ln_one_minus_alpha);
}

std::vector<double> ImageSourceRir(const Room &room, const Point &source,
                                   const Point &mic, double beta,
                                   double sample_rate_hz, int length, double nu,
                                   const FractionalDelay &direct) {
  if (!room.Contains(source) || !room.Contains(mic))
    throw UsageError("source and microphone must lie inside the room");
  if (!(beta >= 0.0 && beta < 1.0)) throw UsageError("reflection must be in [0,1)");
  std::vector<double> rir(length, 0.0);
  const KernelTable &table = ReflectionKernels();
  const double samples_per_m = sample_rate_hz / nu;
  const double max_dist = (length + 1.0) / samples_per_m;
  const double max_dist2 = max_dist * max_dist;
  const double dims[3] = {room.lx, room.ly, room.lz};
  const double s[3] = {source.x(), source.y(), source.z()};
  const double r[3] = {mic.x(), mic.y(), mic.z()};
  int nmax[3];
  for (int a = 0; a < 3; ++a)
    nmax[a] = static_cast<int>(std::ceil(max_dist / (2.0 * dims[a]))) + 1;

  // Powers of beta up to the largest reflection count.
  int max_refl = 2 * (nmax[0] + nmax[1] + nmax[2]) + 3;
  std::vector<double> beta_pow(max_refl + 1, 1.0);
  for (int k = 1; k <= max_refl; ++k) beta_pow[k] = beta_pow[k - 1] * beta;

  std::vector<double> direct_kernel(direct.taps());
  for (int qx = 0; qx <= 1; ++qx) {
    for (int nx = -nmax[0]; nx <= nmax[0]; ++nx) {
      double dx = (1 - 2 * qx) * s[0] + 2.0 * nx * dims[0] - r[0];
      double dx2 = dx * dx;
      if (dx2 > max_dist2) continue;
      int rx = std::abs(nx - qx) + std::abs(nx);
      for (int qy = 0; qy <= 1; ++qy) {
        for (int ny = -nmax[1]; ny <= nmax[1]; ++ny) {
          double dy = (1 - 2 * qy) * s[1] + 2.0 * ny * dims[1] - r[1];
          double dxy2 = dx2 + dy * dy;
          if (dxy2 > max_dist2) continue;
          int ry = std::abs(ny - qy) + std::abs(ny);
          for (int qz = 0; qz <= 1; ++qz) {
            for (int nz = -nmax[2]; nz <= nmax[2]; ++nz) {
              double dz = (1 - 2 * qz) * s[2] + 2.0 * nz * dims[2] - r[2];
              double d2 = dxy2 + dz * dz;
              if (d2 > max_dist2) continue;
              int refl = rx + ry + std::abs(nz - qz) + std::abs(nz);
              double d = std::sqrt(d2);
              double gain = beta_pow[refl] / (4.0 * std::numbers::pi * d);
              if (gain == 0.0) continue;
              double t = d * samples_per_m;
              double n0f = std::floor(t);
              double frac = t - n0f;
              long n0 = static_cast<long>(n0f);
              if (refl == 0) {
                direct.Kernel(frac, direct_kernel);
                for (int k = 0; k < direct.taps(); ++k) {
                  long idx = n0 + direct.first_tap() + k;
                  if (idx >= 0 && idx < length) rir[idx] += gain * direct_kernel[k];
                }
              } else {
                const double *h = table.Row(frac);
                long base = n0 + 1 - KernelTable::kTaps / 2;
                for (int k = 0; k < KernelTable::kTaps; ++k) {
                  long idx = base + k;
                  if (idx >= 0 && idx < length) rir[idx] += gain * h[k];
                }
              }
            }
          }
        }
      }
    }
  }
  return rir;
}

double SchroederT60(std::span<const double> rir, double sample_rate_hz) {
  const size_t n = rir.size();
  std::vector<double> edc(n);
  double acc = 0.0;
  for (size_t k = n; k-- > 0;) {
    acc += rir[k] * rir[k];
    edc[k] = acc;
  }
  if (!(acc > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  size_t count = 0;
  bool reached = false;
  for (size_t k = 0; k < n; ++k) {
    if (edc[k] <= 0.0) break;
    double db = 10.0 * std::log10(edc[k] / acc);
    if (db < -25.0) {
      reached = true;
      break;
    }
    if (db > -5.0) continue;
    double t = static_cast<double>(k) / sample_rate_hz;
    sx += t;
    sy += db;
    sxx += t * t;
    sxy += t * db;
    ++count;
  }
  if (!reached || count < 2) return std::numeric_limits<double>::quiet_NaN();
  double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  if (!(slope < 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return -60.0 / slope;
}

std::vector<double> Convolve(std::span<const double> signal,
                             std::span<const double> kernel) {
  std::vector<double> out(signal.size(), 0.0);
  if (signal.empty() || kernel.empty()) return out;
  int n = NextPow2(static_cast<int>(signal.size() + kernel.size()));
  RealFft fft(n);
  std::vector<std::complex<double>> a(fft.num_bins()), b(fft.num_bins());
  fft.Forward(signal, a);
  fft.Forward(kernel, b);
  for (size_t k = 0; k < a.size(); ++k) a[k] *= b[k] / static_cast<double>(n);
  std::vector<double> full(n);
  fft.Inverse(a, full);
  std::copy(full.begin(), full.begin() + signal.size(), out.begin());
  return out;
}

}  // namespace tdoa

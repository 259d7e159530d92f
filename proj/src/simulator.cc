// simulator.cc

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

#include "tdoa/simulator.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tdoa/errors.h"
#include "tdoa/wav.h"

namespace tdoa {

namespace {

constexpr double kMaxT60 = 3.0;
// Below this target the walls are effectively anechoic and no decay can be
// measured on a finite response.
constexpr double kMinCalibratedT60 = 0.05;
constexpr double kT60Tolerance = 0.15;
constexpr int kCalibrationIters = 8;
constexpr double kMinSourceMicDistance = 1e-3;

std::uint64_t SplitMix64(std::uint64_t &state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Second-order high-pass (RBJ cookbook, Q = 1/sqrt(2)).
void HighPass(std::vector<double> &x, double fc, double fs) {
  double w0 = 2.0 * std::numbers::pi * fc / fs;
  double alpha = std::sin(w0) / std::sqrt(2.0);
  double c = std::cos(w0);
  double a0 = 1.0 + alpha;
  double b0 = (1.0 + c) / 2.0 / a0, b1 = -(1.0 + c) / a0, b2 = b0;
  double a1 = -2.0 * c / a0, a2 = (1.0 - alpha) / a0;
  double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
  for (double &v : x) {
    double y = b0 * v + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = v;
    y2 = y1;
    y1 = y;
    v = y;
  }
}

void OnePoleLowPass(std::vector<double> &x, double fc, double fs) {
  double a = 1.0 - std::exp(-2.0 * std::numbers::pi * fc / fs);
  double y = 0.0;
  for (double &v : x) {
    y += a * (v - y);
    v = y;
  }
}

void NormalizeRms(std::vector<double> &x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  if (e <= 0.0) return;
  double g = 1.0 / std::sqrt(e / x.size());
  for (double &v : x) v *= g;
}

double Energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

// Syllable-rate amplitude modulation, floor at 0.2 / 1.8 of the peak.
void Modulate(std::span<double> x, double rate_hz, double phase, double fs) {
  for (size_t n = 0; n < x.size(); ++n)
    x[n] *= (1.0 + 0.8 * std::sin(2.0 * std::numbers::pi * rate_hz * n / fs + phase)) /
            1.8;
}

int RirLength(const SimScene &scene, const std::vector<Point> &sources) {
  double max_d = 0.0;
  for (const Point &s : sources)
    for (const Point &m : scene.mics) max_d = std::max(max_d, Distance(s, m));
  return static_cast<int>(std::ceil(scene.t60_s * scene.sample_rate_hz) +
                          std::ceil(max_d * scene.sample_rate_hz / scene.nu)) +
         64;
}

Channels RenderWithModel(const SimScene &scene, const RoomModel &model,
                         std::span<const double> signal, const Point &position) {
  if (scene.t60_s == 0.0) return RenderFreeField(scene, signal, position);
  FractionalDelay fd;
  Channels out;
  out.reserve(scene.mics.size());
  for (const Point &m : scene.mics) {
    std::vector<double> rir =
        ImageSourceRir(scene.room, position, m, model.beta, scene.sample_rate_hz,
                       model.rir_length, scene.nu, fd);
    out.push_back(Convolve(signal, rir));
  }
  return out;
}

std::vector<Point> NoiseSources(const SimScene &scene) {
  return scene.noise_sources.empty() ? CornerNoiseSources(scene.room)
                                     : scene.noise_sources;
}

Channels RenderNoise(const SimScene &scene, const RoomModel &model) {
  const size_t n = scene.num_samples();
  Channels noise(scene.mics.size(), std::vector<double>(n, 0.0));
  std::vector<Point> sources = NoiseSources(scene);
  for (size_t s = 0; s < sources.size(); ++s) {
    std::mt19937_64 rng = SceneRng(scene.seed, 1 + s);
    std::vector<double> babble = BabbleNoise(n, scene.sample_rate_hz, rng);
    Channels r = RenderWithModel(scene, model, babble, sources[s]);
    for (size_t m = 0; m < noise.size(); ++m)
      for (size_t k = 0; k < n; ++k) noise[m][k] += r[m][k];
  }
  return noise;
}

void CheckNonzero(const Channels &clean) {
  double e = 0.0;
  for (const auto &c : clean) e += Energy(c);
  if (!(e > 0.0)) throw UsageError("clean signal has zero energy");
}

std::vector<double> LoadSourceWav(const SimScene &scene) {
  WavData wav = ReadWavFile(scene.source_wav);
  if (wav.sample_rate_hz != scene.sample_rate_hz)
    throw ConfigError("source WAV sample rate does not match the scene");
  if (wav.num_samples() == 0) throw ConfigError("source WAV is empty");
  const size_t n = scene.num_samples();
  std::vector<double> out(n);
  for (size_t k = 0; k < n; ++k) out[k] = wav.channels[0][k % wav.num_samples()];
  return out;
}

}  // namespace

void SimScene::Validate() const {
  if (mics.size() < 2) throw ConfigError("scene needs at least two microphones");
  if (!(room.lx > 0 && room.ly > 0 && room.lz > 0))
    throw ConfigError("room dimensions must be positive");
  for (const Point &m : mics)
    if (!room.Contains(m)) throw ConfigError("microphone outside the room");
  if (!room.Contains(source)) throw ConfigError("source outside the room");
  for (const Point &s : noise_sources)
    if (!room.Contains(s)) throw ConfigError("noise source outside the room");
  if (!(t60_s >= 0.0) || !std::isfinite(t60_s))
    throw ConfigError("T60 must be finite and nonnegative");
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity())
    throw ConfigError("SNR must be finite or +inf");
  if (!(nu > 0.0) || !(sample_rate_hz > 0.0) || !(duration_s > 0.0))
    throw ConfigError("speed of sound, sample rate and duration must be positive");
}

size_t SimScene::num_samples() const {
  return static_cast<size_t>(std::llround(duration_s * sample_rate_hz));
}

std::vector<Point> CornerNoiseSources(const Room &room, double inset,
                                      double height) {
  return {Point(inset, inset, height), Point(room.lx - inset, inset, height),
          Point(room.lx - inset, room.ly - inset, height),
          Point(inset, room.ly - inset, height)};
}

std::mt19937_64 SceneRng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  std::uint64_t a = SplitMix64(state);
  state ^= stream * 0xd1b54a32d192ed03ULL;
  std::uint64_t b = SplitMix64(state);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

std::vector<double> SpeechShapedNoise(size_t num_samples, double sample_rate_hz,
                                      std::mt19937_64 &rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> x(num_samples);
  for (double &v : x) v = gauss(rng);
  HighPass(x, 100.0, sample_rate_hz);
  OnePoleLowPass(x, 800.0, sample_rate_hz);
  NormalizeRms(x);
  return x;
}

SourceSignal SpeechLikeSource(size_t num_samples, double sample_rate_hz,
                              std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> burst_len(0.8, 2.0);
  std::uniform_real_distribution<double> gap_len(0.2, 0.6);
  std::uniform_real_distribution<double> rate(3.0, 6.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  SourceSignal out;
  out.samples.assign(num_samples, 0.0);
  const size_t edge = static_cast<size_t>(0.02 * sample_rate_hz);
  size_t pos = static_cast<size_t>(gap_len(rng) * sample_rate_hz);
  while (pos < num_samples) {
    size_t len = static_cast<size_t>(burst_len(rng) * sample_rate_hz);
    size_t end = std::min(num_samples, pos + len);
    std::vector<double> b = SpeechShapedNoise(end - pos, sample_rate_hz, rng);
    Modulate(b, rate(rng), phase(rng), sample_rate_hz);
    const size_t e = std::min(edge, b.size() / 2);
    for (size_t k = 0; k < e; ++k) {
      double w = 0.5 - 0.5 * std::cos(std::numbers::pi * (k + 0.5) / e);
      b[k] *= w;
      b[b.size() - 1 - k] *= w;
    }
    std::copy(b.begin(), b.end(), out.samples.begin() + pos);
    out.bursts.push_back({pos, end});
    pos = end + static_cast<size_t>(gap_len(rng) * sample_rate_hz);
  }
  return out;
}

SourceSignal PulseTrainSource(size_t num_samples, double sample_rate_hz,
                              double rate_hz) {
  if (!(rate_hz > 0.0)) throw UsageError("pulse rate must be positive");
  SourceSignal out;
  out.samples.assign(num_samples, 0.0);
  const size_t width = std::max<size_t>(2, static_cast<size_t>(1e-3 * sample_rate_hz));
  const double period = sample_rate_hz / rate_hz;
  for (int p = 0;; ++p) {
    size_t begin = static_cast<size_t>(std::llround(p * period));
    if (begin + width > num_samples) break;
    for (size_t k = 0; k < width; ++k)
      out.samples[begin + k] =
          0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (k + 0.5) / width);
    out.bursts.push_back({begin, begin + width});
  }
  return out;
}

std::vector<double> BabbleNoise(size_t num_samples, double sample_rate_hz,
                                std::mt19937_64 &rng, int talkers) {
  std::uniform_real_distribution<double> rate(3.0, 6.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<double> out(num_samples, 0.0);
  for (int t = 0; t < talkers; ++t) {
    std::vector<double> s = SpeechShapedNoise(num_samples, sample_rate_hz, rng);
    Modulate(s, rate(rng), phase(rng), sample_rate_hz);
    for (size_t n = 0; n < num_samples; ++n) out[n] += s[n];
  }
  NormalizeRms(out);
  return out;
}

Channels RenderFreeField(const SimScene &scene, std::span<const double> signal,
                         const Point &position) {
  FractionalDelay fd;
  Channels out(scene.mics.size(), std::vector<double>(signal.size(), 0.0));
  for (size_t m = 0; m < scene.mics.size(); ++m) {
    double d = Distance(position, scene.mics[m]);
    if (d < kMinSourceMicDistance)
      throw UsageError("source coincides with a microphone");
    AddDelayed(signal, d * scene.sample_rate_hz / scene.nu,
               1.0 / (4.0 * std::numbers::pi * d), fd, out[m]);
  }
  return out;
}

RoomModel CalibrateRoom(const SimScene &scene) {
  RoomModel model;
  if (scene.t60_s == 0.0) return model;
  if (!(scene.t60_s > 0.0)) throw ConfigError("T60 must be positive");
  if (scene.t60_s > kMaxT60) throw ConfigError("T60 beyond the supported range");
  std::vector<Point> sources = NoiseSources(scene);
  sources.push_back(scene.source);
  model.rir_length = RirLength(scene, sources);
  double beta = EyringReflection(scene.room, scene.t60_s, scene.nu);
  if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("T60 unachievable for this room");
  if (scene.t60_s < kMinCalibratedT60) {
    model.beta = beta;
    model.t60_achieved = scene.t60_s;
    return model;
  }
  FractionalDelay fd;
  // Calibration response: the speech source to the first microphone.
  double measured = 0.0;
  for (int it = 0; it < kCalibrationIters; ++it) {
    std::vector<double> rir = ImageSourceRir(scene.room, scene.source, scene.mics[0],
                                             beta, scene.sample_rate_hz,
                                             model.rir_length, scene.nu, fd);
    measured = SchroederT60(rir, scene.sample_rate_hz);
    if (!std::isfinite(measured)) break;
    if (std::abs(measured / scene.t60_s - 1.0) < 0.01) break;
    double log_beta = std::log(beta) * measured / scene.t60_s;
    beta = std::exp(log_beta);
    if (!(beta > 0.0 && beta < 1.0)) break;
  }
  if (!std::isfinite(measured) ||
      std::abs(measured / scene.t60_s - 1.0) > kT60Tolerance)
    throw ConfigError("T60 unachievable for geometry and absorption bounds");
  model.beta = beta;
  model.t60_achieved = measured;
  return model;
}

Channels RenderReverberant(const SimScene &scene, std::span<const double> signal,
                           const Point &position, double *t60_achieved) {
  if (!(scene.t60_s > 0.0)) throw UsageError("reverberant rendering needs T60 > 0");
  RoomModel model = CalibrateRoom(scene);
  if (t60_achieved != nullptr) *t60_achieved = model.t60_achieved;
  return RenderWithModel(scene, model, signal, position);
}

Channels Render(const SimScene &scene, std::span<const double> signal,
                const Point &position, double *t60_achieved) {
  if (scene.t60_s == 0.0) {
    if (t60_achieved != nullptr) *t60_achieved = 0.0;
    return RenderFreeField(scene, signal, position);
  }
  return RenderReverberant(scene, signal, position, t60_achieved);
}

double ArraySnrDb(const Channels &clean, const Channels &noise) {
  if (clean.size() != noise.size() || clean.empty())
    throw UsageError("channel count mismatch");
  double acc = 0.0;
  for (size_t m = 0; m < clean.size(); ++m) {
    double pn = Energy(noise[m]);
    if (!(pn > 0.0)) throw UsageError("noise channel has zero energy");
    acc += 10.0 * std::log10(Energy(clean[m]) / pn);
  }
  return acc / clean.size();
}

Channels MixAtSnr(const Channels &clean, Channels &noise, double snr_db) {
  if (snr_db == std::numeric_limits<double>::infinity()) return clean;
  if (!std::isfinite(snr_db)) throw UsageError("SNR must be finite or +inf");
  double gain = std::pow(10.0, (ArraySnrDb(clean, noise) - snr_db) / 20.0);
  Channels out = clean;
  for (size_t m = 0; m < noise.size(); ++m) {
    if (noise[m].size() != clean[m].size()) throw UsageError("length mismatch");
    for (size_t n = 0; n < noise[m].size(); ++n) {
      noise[m][n] *= gain;
      out[m][n] += noise[m][n];
    }
  }
  return out;
}

Channels AddNoise(const Channels &clean, const SimScene &scene,
                  Channels *noise_out) {
  CheckNonzero(clean);
  if (scene.snr_db == std::numeric_limits<double>::infinity()) {
    if (noise_out != nullptr) noise_out->clear();
    return clean;
  }
  RoomModel model = CalibrateRoom(scene);
  Channels noise = RenderNoise(scene, model);
  for (auto &c : noise) c.resize(clean[0].size(), 0.0);
  Channels mix = MixAtSnr(clean, noise, scene.snr_db);
  if (noise_out != nullptr) *noise_out = std::move(noise);
  return mix;
}

SimOutput Simulate(const SimScene &scene) {
  scene.Validate();
  SimOutput out;
  const size_t n = scene.num_samples();
  if (!scene.source_wav.empty()) {
    out.source = LoadSourceWav(scene);
  } else if (scene.source_kind == SourceKind::kPulseTrain) {
    SourceSignal s = PulseTrainSource(n, scene.sample_rate_hz);
    out.source = std::move(s.samples);
    out.bursts = std::move(s.bursts);
  } else {
    std::mt19937_64 rng = SceneRng(scene.seed, 0);
    SourceSignal s = SpeechLikeSource(n, scene.sample_rate_hz, rng);
    out.source = std::move(s.samples);
    out.bursts = std::move(s.bursts);
  }
  RoomModel model = CalibrateRoom(scene);
  out.t60_achieved = model.t60_achieved;
  out.clean = RenderWithModel(scene, model, out.source, scene.source);
  CheckNonzero(out.clean);
  if (scene.snr_db == std::numeric_limits<double>::infinity()) {
    out.mixture = out.clean;
    return out;
  }
  out.noise = RenderNoise(scene, model);
  out.mixture = MixAtSnr(out.clean, out.noise, scene.snr_db);
  out.snr_achieved_db = ArraySnrDb(out.clean, out.noise);
  return out;
}

std::vector<SimScene> GenerateConfigs(int n_configs, std::uint64_t seed,
                                      const ConfigBounds &b) {
  if (n_configs < 1) throw UsageError("need at least one configuration");
  if (b.num_mics < 2) throw ConfigError("need at least two microphones");
  const double x_lo = b.wall_margin, x_hi = b.room.lx - b.wall_margin;
  const double y_lo = b.wall_margin, y_hi = b.room.ly - b.wall_margin;
  if (!(x_hi > x_lo && y_hi > y_lo) || b.mic_z_min > b.mic_z_max ||
      b.mic_z_min < b.wall_margin || b.mic_z_max > b.room.lz - b.wall_margin ||
      b.source_height < b.wall_margin || b.source_height > b.room.lz - b.wall_margin)
    throw ConfigError("placement bounds infeasible for the room");
  std::vector<SimScene> scenes;
  scenes.reserve(n_configs);
  for (int c = 0; c < n_configs; ++c) {
    std::mt19937_64 rng = SceneRng(seed, static_cast<std::uint64_t>(c));
    std::uniform_real_distribution<double> ux(x_lo, x_hi), uy(y_lo, y_hi),
        uz(b.mic_z_min, b.mic_z_max);
    SimScene s;
    s.id = "scene_" + std::to_string(c + 1);
    s.room = b.room;
    s.t60_s = b.t60_s;
    s.snr_db = b.snr_db;
    s.nu = b.nu;
    s.sample_rate_hz = b.sample_rate_hz;
    s.duration_s = b.duration_s;
    s.seed = rng();
    double sx = ux(rng);
    double sy = uy(rng);
    s.source = Point(sx, sy, b.source_height);
    int attempts = 0;
    while (static_cast<int>(s.mics.size()) < b.num_mics) {
      if (++attempts > b.max_attempts)
        throw ConfigError("could not place microphones within the bounds");
      double mx = ux(rng);
      double my = uy(rng);
      Point m(mx, my, uz(rng));
      bool ok = Distance(m, s.source) >= b.min_source_mic_distance;
      for (const Point &o : s.mics)
        ok = ok && Distance(m, o) >= b.min_mic_spacing;
      if (ok) s.mics.push_back(m);
    }
    s.Validate();
    scenes.push_back(std::move(s));
  }
  return scenes;
}

}  // namespace tdoa

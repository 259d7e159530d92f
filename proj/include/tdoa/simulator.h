// tdoa/simulator.h

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

// Multichannel scene simulation: speech-like sources, free-field and
// image-source rendering, corner noise sources and SNR calibration.

#ifndef TDOA_SIMULATOR_H_
#define TDOA_SIMULATOR_H_

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tdoa/geometry.h"
#include "tdoa/room.h"

namespace tdoa {

using Channels = std::vector<std::vector<double>>;

// Half-open sample interval [begin, end).
struct Burst {
  size_t begin = 0;
  size_t end = 0;
};

enum class SourceKind { kSpeechLike, kPulseTrain };

struct SimScene {
  std::string id;
  Room room;
  double t60_s = 0.0;  // 0 selects free-field rendering
  std::vector<Point> mics;
  Point source{1.0, 1.0, 1.5};
  // Empty means the default four corner loudspeakers.
  std::vector<Point> noise_sources;
  double snr_db = std::numeric_limits<double>::infinity();  // inf: noise free
  double nu = kDefaultSpeedOfSound;
  double sample_rate_hz = 16000.0;
  double duration_s = 10.0;
  std::uint64_t seed = 0;
  SourceKind source_kind = SourceKind::kSpeechLike;
  // Optional mono speech file replacing the synthetic source; it must match
  // sample_rate_hz and is looped or truncated to the scene duration.
  std::string source_wav;

  // Positions inside the room, 3D, T60 >= 0 and finite SNR or +inf.
  void Validate() const;
  size_t num_samples() const;
};

// Corner loudspeaker positions, `inset` meters from both walls.
std::vector<Point> CornerNoiseSources(const Room &room, double inset = 0.5,
                                      double height = 1.0);

// Independent RNG stream `stream` of a scene seed.
std::mt19937_64 SceneRng(std::uint64_t seed, std::uint64_t stream);

struct SourceSignal {
  std::vector<double> samples;
  std::vector<Burst> bursts;
};

// Amplitude-modulated speech-shaped noise bursts separated by silent gaps.
SourceSignal SpeechLikeSource(size_t num_samples, double sample_rate_hz,
                              std::mt19937_64 &rng);
// Raised-cosine clicks at a fixed rate; each click is its own burst.
SourceSignal PulseTrainSource(size_t num_samples, double sample_rate_hz,
                              double rate_hz = 4.0);
// Continuous babble-like noise: several modulated speech-shaped streams.
std::vector<double> BabbleNoise(size_t num_samples, double sample_rate_hz,
                                std::mt19937_64 &rng, int talkers = 3);
// White Gaussian noise shaped like a long-term speech spectrum.
std::vector<double> SpeechShapedNoise(size_t num_samples, double sample_rate_hz,
                                      std::mt19937_64 &rng);

// Channel m = signal delayed by d_m / nu and scaled by 1 / (4 pi d_m).
Channels RenderFreeField(const SimScene &scene, std::span<const double> signal,
                         const Point &position);

// Image-source rendering. The wall reflection is calibrated so that the
// Schroeder T60 of the response to the first microphone matches the target;
// the achieved value is written to *t60_achieved when given.
Channels RenderReverberant(const SimScene &scene, std::span<const double> signal,
                           const Point &position, double *t60_achieved = nullptr);

// Free-field when scene.t60_s == 0, reverberant otherwise.
Channels Render(const SimScene &scene, std::span<const double> signal,
                const Point &position, double *t60_achieved = nullptr);

// Calibrated wall reflection and impulse-response length for a scene.
struct RoomModel {
  double beta = 0.0;
  int rir_length = 0;
  double t60_achieved = 0.0;
};
RoomModel CalibrateRoom(const SimScene &scene);

// Mean over microphones of 10 log10(P_signal / P_noise).
double ArraySnrDb(const Channels &clean, const Channels &noise);

// Scales `noise` by one global gain so that ArraySnrDb(clean, noise) equals
// snr_db, then returns clean + noise. snr_db = +inf returns clean unchanged.
Channels MixAtSnr(const Channels &clean, Channels &noise, double snr_db);

// Renders the scene's noise sources (babble) through the scene's room model
// and mixes at scene.snr_db. Throws UsageError for a zero-energy clean input.
Channels AddNoise(const Channels &clean, const SimScene &scene,
                  Channels *noise_out = nullptr);

struct SimOutput {
  Channels mixture;
  Channels clean;
  Channels noise;  // scaled, empty when noise free
  std::vector<double> source;
  std::vector<Burst> bursts;
  double t60_achieved = 0.0;
  double snr_achieved_db = std::numeric_limits<double>::infinity();
};

SimOutput Simulate(const SimScene &scene);

struct ConfigBounds {
  Room room;
  int num_mics = 6;
  double wall_margin = 0.5;
  double min_mic_spacing = 0.2;
  double min_source_mic_distance = 0.5;
  double mic_z_min = 1.2;
  double mic_z_max = 1.8;
  double source_height = 1.5;
  double t60_s = 0.0;
  double snr_db = std::numeric_limits<double>::infinity();
  double nu = kDefaultSpeedOfSound;
  double sample_rate_hz = 16000.0;
  double duration_s = 10.0;
  int max_attempts = 10000;
};

// Random source/array configurations, deterministic per seed. Throws
// ConfigError when the bounds cannot be met.
std::vector<SimScene> GenerateConfigs(int n_configs, std::uint64_t seed,
                                      const ConfigBounds &bounds);

}  // namespace tdoa

#endif  // TDOA_SIMULATOR_H_

// tdoa/wav.h

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

#ifndef TDOA_WAV_H_
#define TDOA_WAV_H_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace tdoa {

// Channel-major audio, samples as doubles (PCM is scaled to [-1, 1)).
struct WavData {
  double sample_rate_hz = 16000.0;
  std::vector<std::vector<double>> channels;

  size_t num_samples() const {
    return channels.empty() ? 0 : channels[0].size();
  }
};

// Reads 16/24/32-bit PCM and 32/64-bit float RIFF files, including
// WAVE_FORMAT_EXTENSIBLE. Throws ConfigError on malformed input.
WavData ReadWav(std::istream &is);
WavData ReadWavFile(const std::string &path);

// Writes 32-bit float samples.
void WriteWav(std::ostream &os, const WavData &wav);
void WriteWavFile(const std::string &path, const WavData &wav);

}  // namespace tdoa

#endif  // TDOA_WAV_H_

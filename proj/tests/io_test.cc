// io_test.cc

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

#include <gtest/gtest.h>

#include <cstdint>
#include <sstream>

#include "test_util.h"
#include "tdoa/errors.h"
#include "tdoa/scene_io.h"
#include "tdoa/wav.h"

namespace tdoa {
namespace {

void PutLe(std::string &s, std::uint32_t v, int bytes) {
  for (int b = 0; b < bytes; ++b) s.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

// Minimal PCM16 file assembled byte by byte.
std::string Pcm16Wav(int channels, int rate, const std::vector<std::int16_t> &pcm) {
  std::string data;
  for (std::int16_t v : pcm) PutLe(data, static_cast<std::uint16_t>(v), 2);
  std::string s = "RIFF";
  PutLe(s, 36 + static_cast<std::uint32_t>(data.size()), 4);
  s += "WAVEfmt ";
  PutLe(s, 16, 4);
  PutLe(s, 1, 2);
  PutLe(s, channels, 2);
  PutLe(s, rate, 4);
  PutLe(s, rate * channels * 2, 4);
  PutLe(s, channels * 2, 2);
  PutLe(s, 16, 2);
  s += "data";
  PutLe(s, static_cast<std::uint32_t>(data.size()), 4);
  return s + data;
}

TEST(Wav, ReadsHandBuiltPcm16) {
  std::istringstream in(Pcm16Wav(2, 8000, {0, 16384, -32768, 32767, 100, -100}));
  WavData w = ReadWav(in);
  EXPECT_EQ(w.sample_rate_hz, 8000);
  ASSERT_EQ(w.channels.size(), 2u);
  ASSERT_EQ(w.num_samples(), 3u);
  EXPECT_EQ(w.channels[0][0], 0.0);
  EXPECT_EQ(w.channels[1][0], 0.5);
  EXPECT_EQ(w.channels[0][1], -1.0);
  EXPECT_EQ(w.channels[1][2], -100.0 / 32768.0);
}

TEST(Wav, FloatRoundTrip) {
  WavData w;
  w.sample_rate_hz = 16000;
  w.channels = {{0.0, 0.25, -0.5, 1.0 / 1024}, {1.0, -1.0, 0.125, 3.0 / 8}};
  std::stringstream io;
  WriteWav(io, w);
  WavData r = ReadWav(io);
  EXPECT_EQ(r.sample_rate_hz, w.sample_rate_hz);
  EXPECT_EQ(r.channels, w.channels);
}

TEST(Wav, RejectsGarbage) {
  std::istringstream junk("RIFX0000WAVE");
  EXPECT_THROW(ReadWav(junk), ConfigError);
  std::string truncated = Pcm16Wav(1, 16000, {1, 2, 3});
  std::istringstream cut(truncated.substr(0, 30));
  EXPECT_THROW(ReadWav(cut), ConfigError);
}

TEST(SceneJson, RoundTrip) {
  SimScene s = testing::AnechoicScene(3, 2.0, 5);
  s.id = "room_a";
  s.t60_s = 0.5;
  s.snr_db = 5.0;
  s.source_kind = SourceKind::kPulseTrain;
  SimScene r = SceneFromJson(SceneToJson(s));
  EXPECT_EQ(r.id, s.id);
  EXPECT_EQ(r.mics, s.mics);
  EXPECT_EQ(r.source, s.source);
  EXPECT_EQ(r.t60_s, s.t60_s);
  EXPECT_EQ(r.snr_db, s.snr_db);
  EXPECT_EQ(r.seed, s.seed);
  EXPECT_EQ(r.duration_s, s.duration_s);
  EXPECT_EQ(r.source_kind, s.source_kind);
  EXPECT_EQ(r.room.lx, s.room.lx);

  s.snr_db = std::numeric_limits<double>::infinity();
  nlohmann::json j = SceneToJson(s);
  EXPECT_TRUE(j["snr_db"].is_null());
  EXPECT_TRUE(std::isinf(SceneFromJson(j).snr_db));
}

TEST(SceneJson, MissingOrBadFieldsThrow) {
  nlohmann::json j = SceneToJson(testing::AnechoicScene(4, 2.0));
  nlohmann::json no_mics = j;
  no_mics.erase("mic_positions_m");
  EXPECT_THROW(SceneFromJson(no_mics), ConfigError);
  nlohmann::json outside = j;
  outside["source_position_m"] = {100.0, 1.0, 1.5};
  EXPECT_THROW(SceneFromJson(outside), ConfigError);
  nlohmann::json wrong_type = j;
  wrong_type["t60_s"] = "long";
  EXPECT_THROW(SceneFromJson(wrong_type), ConfigError);
}

TEST(SceneJson, SidecarListsEveryPair) {
  SimScene s = testing::AnechoicScene(5, 1.0, 4);
  SimOutput out = Simulate(s);
  nlohmann::json side = SidecarJson(s, out);
  ASSERT_EQ(side["true_tdoas"].size(), 6u);
  EXPECT_EQ(side["true_tdoas"][0]["i"], 1);
  EXPECT_EQ(side["true_tdoas"][0]["j"], 2);
  EXPECT_DOUBLE_EQ(side["true_tdoas"][0]["tdoa_s"].get<double>(),
                   TrueTdoa(s.source, s.mics[0], s.mics[1], s.nu));
  EXPECT_EQ(side["source_bursts_samples"].size(), out.bursts.size());
}

}  // namespace
}  // namespace tdoa

// scene_io.cc

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

#include "tdoa/scene_io.h"

#include <cmath>
#include <fstream>
#include <limits>

#include "tdoa/errors.h"

namespace tdoa {

namespace {

using nlohmann::json;

json PointJson(const Point &p) {
  json a = json::array({p.x(), p.y()});
  if (p.dim() == 3) a.push_back(p.z());
  return a;
}

Point PointFrom(const json &j, const char *what) {
  if (!j.is_array() || j.size() != 3)
    throw ConfigError(std::string(what) + " must be a 3-element array");
  for (const auto &v : j)
    if (!v.is_number()) throw ConfigError(std::string(what) + " must be numeric");
  return Point(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

const json &Required(const json &j, const char *key) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(std::string("scene lacks field ") + key);
  return *it;
}

double Number(const json &j, const char *key) {
  const json &v = Required(j, key);
  if (!v.is_number()) throw ConfigError(std::string(key) + " must be a number");
  return v.get<double>();
}

}  // namespace

json SceneToJson(const SimScene &s) {
  json j;
  j["id"] = s.id;
  j["room_dims_m"] = {s.room.lx, s.room.ly, s.room.lz};
  json mics = json::array();
  for (const Point &m : s.mics) mics.push_back(PointJson(m));
  j["mic_positions_m"] = mics;
  j["source_position_m"] = PointJson(s.source);
  j["t60_s"] = s.t60_s;
  if (std::isfinite(s.snr_db))
    j["snr_db"] = s.snr_db;
  else
    j["snr_db"] = nullptr;
  j["nu_mps"] = s.nu;
  j["sample_rate_hz"] = s.sample_rate_hz;
  j["duration_s"] = s.duration_s;
  j["seed"] = s.seed;
  if (!s.noise_sources.empty()) {
    json n = json::array();
    for (const Point &p : s.noise_sources) n.push_back(PointJson(p));
    j["noise_positions_m"] = n;
  }
  j["source"] = s.source_kind == SourceKind::kPulseTrain ? "pulses" : "speech";
  if (!s.source_wav.empty()) j["source_wav"] = s.source_wav;
  return j;
}

SimScene SceneFromJson(const json &j) {
  if (!j.is_object()) throw ConfigError("scene must be a JSON object");
  try {
    SimScene s;
    if (j.contains("id")) s.id = j.at("id").get<std::string>();
    const json &dims = Required(j, "room_dims_m");
    if (!dims.is_array() || dims.size() != 3)
      throw ConfigError("room_dims_m must be a 3-element array");
    s.room = Room{dims[0].get<double>(), dims[1].get<double>(), dims[2].get<double>()};
    const json &mics = Required(j, "mic_positions_m");
    if (!mics.is_array()) throw ConfigError("mic_positions_m must be an array");
    for (const json &m : mics) s.mics.push_back(PointFrom(m, "mic position"));
    s.source = PointFrom(Required(j, "source_position_m"), "source_position_m");
    s.t60_s = Number(j, "t60_s");
    const json &snr = Required(j, "snr_db");
    if (snr.is_null())
      s.snr_db = std::numeric_limits<double>::infinity();
    else if (snr.is_number())
      s.snr_db = snr.get<double>();
    else
      throw ConfigError("snr_db must be a number or null");
    s.nu = Number(j, "nu_mps");
    if (j.contains("sample_rate_hz")) s.sample_rate_hz = Number(j, "sample_rate_hz");
    if (j.contains("duration_s")) s.duration_s = Number(j, "duration_s");
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("noise_positions_m"))
      for (const json &p : j.at("noise_positions_m"))
        s.noise_sources.push_back(PointFrom(p, "noise position"));
    if (j.contains("source")) {
      std::string kind = j.at("source").get<std::string>();
      if (kind == "pulses")
        s.source_kind = SourceKind::kPulseTrain;
      else if (kind != "speech")
        throw ConfigError("unknown source kind " + kind);
    }
    if (j.contains("source_wav")) s.source_wav = j.at("source_wav").get<std::string>();
    s.Validate();
    return s;
  } catch (const json::exception &e) {
    throw ConfigError(std::string("malformed scene: ") + e.what());
  } catch (const UsageError &e) {
    throw ConfigError(std::string("invalid scene: ") + e.what());
  }
}

SimScene LoadSceneFile(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception &e) {
    throw ConfigError(path + ": " + e.what());
  }
  return SceneFromJson(j);
}

void SaveSceneFile(const std::string &path, const SimScene &scene) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  os << SceneToJson(scene).dump(2) << "\n";
}

json SidecarJson(const SimScene &scene, const SimOutput &out) {
  json j;
  j["scene"] = SceneToJson(scene);
  j["t60_achieved_s"] = out.t60_achieved;
  if (std::isfinite(out.snr_achieved_db))
    j["snr_achieved_db"] = out.snr_achieved_db;
  else
    j["snr_achieved_db"] = nullptr;
  json pairs = json::array();
  const int m = static_cast<int>(scene.mics.size());
  for (int i = 0; i < m; ++i)
    for (int k = i + 1; k < m; ++k)
      pairs.push_back({{"i", i + 1},
                       {"j", k + 1},
                       {"tdoa_s", TrueTdoa(scene.source, scene.mics[i],
                                           scene.mics[k], scene.nu)}});
  j["true_tdoas"] = pairs;
  json bursts = json::array();
  for (const Burst &b : out.bursts) bursts.push_back({b.begin, b.end});
  j["source_bursts_samples"] = bursts;
  return j;
}

}  // namespace tdoa

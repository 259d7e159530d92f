// tdoa/scene_io.h

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

// JSON scene files and simulation sidecars.
//
// Scene fields: room_dims_m [lx, ly, lz], mic_positions_m [[x, y, z], ...],
// source_position_m [x, y, z], t60_s, snr_db (null for noise free), nu_mps.
// Optional: id, sample_rate_hz, duration_s, seed, noise_positions_m,
// source ("speech" or "pulses"), source_wav.

#ifndef TDOA_SCENE_IO_H_
#define TDOA_SCENE_IO_H_

#include <string>

#include "json.hpp"
#include "tdoa/simulator.h"

namespace tdoa {

nlohmann::json SceneToJson(const SimScene &scene);
// Throws ConfigError on missing or malformed fields.
SimScene SceneFromJson(const nlohmann::json &j);

SimScene LoadSceneFile(const std::string &path);
void SaveSceneFile(const std::string &path, const SimScene &scene);

// Ground truth for a rendered scene: the scene itself, achieved T60 and SNR
// and the true TDOA of every pair (i, j), i < j, 1-based.
nlohmann::json SidecarJson(const SimScene &scene, const SimOutput &out);

}  // namespace tdoa

#endif  // TDOA_SCENE_IO_H_

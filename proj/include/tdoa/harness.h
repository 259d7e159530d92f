// tdoa/harness.h

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

// Experiment runner: per-frame pipeline over simulated scenes, snapshot
// selection, error metrics and result tables.

#ifndef TDOA_HARNESS_H_
#define TDOA_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tdoa/geometry.h"
#include "tdoa/localization.h"
#include "tdoa/simulator.h"
#include "tdoa/spectral.h"

namespace tdoa {

enum class Method { kSrpPhat, kRefA, kRefC, kRefR, kMst, kMstPlus };

inline constexpr Method kAllMethods[] = {Method::kSrpPhat, Method::kRefA,
                                         Method::kRefC,    Method::kRefR,
                                         Method::kMst,     Method::kMstPlus};

// Display names: SRP-PHAT, Ref-A, Ref-C, Ref-R, MST, MST+.
std::string MethodName(Method m);
// Accepts srp-phat, ref-a, ref-c, ref-r, mst, mst+ (case-insensitive) and the
// display names. Throws ConfigError otherwise.
Method ParseMethod(const std::string &s);
// Comma-separated list; "all" selects every method.
std::vector<Method> ParseMethodList(const std::string &s);

// Reverberation conditions: low 0.3 s, med 0.5 s, high 1.0 s, anechoic 0.
double ConditionT60(const std::string &condition);
std::string ConditionForT60(double t60_s);

struct VadConfig {
  double threshold_db = 30.0;  // below the loudest frame
  double settle_s = 2.0;       // frames starting earlier are excluded
};

// Frames (same framing as the STFT) whose energy in `reference` is within
// threshold_db of the loudest frame and that start at or after settle_s.
// Returns an empty set, with a warning on `log` when given, if the reference
// is silent.
std::vector<int> VadSnapshots(std::span<const double> reference,
                              const StftConfig &stft, const VadConfig &cfg,
                              std::ostream *log = nullptr);

// Mean absolute TDOA error in milliseconds over snapshots and microphones
// m != ref. Every vector must be relative to microphone 0 (mic 1 in 1-based
// terms); throws UsageError otherwise or on size mismatch. NaN when empty.
double MeanTdoaError(std::span<const TdoaVector> estimates,
                     std::span<const TdoaVector> truth);

struct PositionScores {
  double mean_error_cm = 0.0;
  double accuracy_pct = 0.0;  // share of errors <= 10 cm
};

inline constexpr double kAccuracyThresholdM = 0.10;

// 2D errors. NaN scores when empty.
PositionScores PositionMetrics(std::span<const Point> estimates,
                               std::span<const Point> truth);

struct ExperimentScene {
  SimScene scene;
  std::string condition;
};

struct GeneratorConfig {
  int n_scenes = 0;
  std::optional<std::uint64_t> seed;  // defaults to the master seed
  std::vector<std::string> conditions = {"low", "med", "high"};
  ConfigBounds bounds;
};

struct ExperimentConfig {
  std::vector<ExperimentScene> scenes;
  std::vector<std::string> scene_files;
  GeneratorConfig generator;
  std::vector<Method> methods;
  StftConfig stft;
  double lambda = 0.98;
  int upsampling = 10;
  VadConfig vad;
  double source_height = 1.5;
  double srp_coarse = 0.10;
  double srp_fine = 0.01;
  int srp_refine = 3;
  std::string out_dir;     // empty: nothing written
  bool diagnostics = false;  // per-frame MST+ step dump
  std::uint64_t seed = 1;
};

// Throws ConfigError on parse failures and empty method or scene lists.
ExperimentConfig ExperimentConfigFromJson(const nlohmann::json &j);
ExperimentConfig LoadExperimentConfig(const std::string &path);

// Scenes of the configuration, generated or loaded. Files that fail to load
// are skipped with a message on `log`.
std::vector<ExperimentScene> ResolveScenes(const ExperimentConfig &cfg,
                                           std::ostream *log = nullptr);

// One method's result on one snapshot frame.
struct FrameRow {
  std::string scene;
  std::string condition;
  int frame = 0;
  Method method = Method::kMst;
  TdoaVector estimate;  // relative to microphone 0
  TdoaVector truth;
  Point position;       // 2D
  Point true_position;  // 2D
  double cost = 0.0;    // SI cost, or the SRP functional at the peak
};

struct MetricsEntry {
  Method method = Method::kMst;
  std::string condition;
  double sigma_ms = 0.0;
  double epsilon_cm = 0.0;
  double acc_pct = 0.0;
  int snapshots = 0;
};

struct MetricsReport {
  std::vector<std::string> conditions;  // table column order
  std::vector<MetricsEntry> entries;

  const MetricsEntry *Find(Method m, const std::string &condition) const;
};

struct ExperimentResult {
  std::vector<FrameRow> rows;
  MetricsReport report;
  int scenes_run = 0;
  int scenes_skipped = 0;
  // Over every MST+ frame: worst lag-matrix residual on the processed
  // microphones, worst PHAT magnitude deviation and bins checked.
  std::int64_t max_consistency_residual = 0;
  double max_phat_deviation = 0.0;
  long phat_bins_checked = 0;
  int mst_plus_frames = 0;
};

ExperimentResult RunExperiment(const ExperimentConfig &cfg,
                               std::ostream *log = nullptr);

// Pools rows per (method, condition).
MetricsReport ReportFromRows(std::span<const FrameRow> rows);

void WriteResultsCsv(std::ostream &os, std::span<const FrameRow> rows);
// Throws ConfigError on malformed input.
std::vector<FrameRow> ReadResultsCsv(std::istream &is);

void WriteReportCsv(std::ostream &os, const MetricsReport &report);
void WriteReportMarkdown(std::ostream &os, const MetricsReport &report);

// results.csv, report.csv and report.md under `dir` (created if needed).
void WriteOutputs(const std::string &dir, std::span<const FrameRow> rows,
                  const MetricsReport &report);

}  // namespace tdoa

#endif  // TDOA_HARNESS_H_

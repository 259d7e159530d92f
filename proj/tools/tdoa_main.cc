// tdoa_main.cc

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

// Command line front end: simulate scenes, run experiments, build reports.
//
//   tdoa simulate --reverb med --seed 7 --scenes 5 --out scenes/
//   tdoa run --config exp.json --methods mst,mst+ --out results/
//   tdoa report --results results/results.csv --out results/

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tdoa/errors.h"
#include "tdoa/harness.h"
#include "tdoa/scene_io.h"
#include "tdoa/simulator.h"
#include "tdoa/wav.h"

namespace {

using namespace tdoa;

struct Options {
  std::string config;
  std::uint64_t seed = 1;
  bool seed_set = false;
  std::string methods;
  std::string out;
  std::string reverb;
  std::string results;
  int scenes = 0;
  double duration = 0.0;
  double snr = 5.0;
  bool noise_free = false;
  bool diagnostics = false;
};

ExperimentConfig BuildConfig(const Options &o) {
  ExperimentConfig cfg;
  if (!o.config.empty()) {
    cfg = LoadExperimentConfig(o.config);
  } else {
    cfg.methods = {std::begin(kAllMethods), std::end(kAllMethods)};
    cfg.generator.n_scenes = 10;
    cfg.generator.bounds.snr_db = 5.0;
  }
  if (o.seed_set) {
    cfg.seed = o.seed;
    cfg.generator.seed.reset();
  }
  if (!o.methods.empty()) cfg.methods = ParseMethodList(o.methods);
  if (!o.reverb.empty()) {
    ConditionT60(o.reverb);
    cfg.generator.conditions = {o.reverb};
    if (cfg.generator.n_scenes < 1) cfg.generator.n_scenes = 10;
  }
  if (o.scenes > 0) cfg.generator.n_scenes = o.scenes;
  if (o.duration > 0.0) cfg.generator.bounds.duration_s = o.duration;
  if (o.noise_free)
    cfg.generator.bounds.snr_db = std::numeric_limits<double>::infinity();
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (o.diagnostics) cfg.diagnostics = true;
  return cfg;
}

int CmdSimulate(const Options &o) {
  Options opts = o;
  if (opts.config.empty() && opts.reverb.empty()) opts.reverb = "med";
  ExperimentConfig cfg = BuildConfig(opts);
  if (o.config.empty()) cfg.generator.bounds.snr_db = o.noise_free
                                                          ? std::numeric_limits<double>::infinity()
                                                          : o.snr;
  if (cfg.out_dir.empty()) throw ConfigError("simulate needs --out");
  std::filesystem::create_directories(cfg.out_dir);
  std::filesystem::path dir(cfg.out_dir);
  for (const ExperimentScene &es : ResolveScenes(cfg, &std::cerr)) {
    SimOutput out = Simulate(es.scene);
    WavData wav;
    wav.sample_rate_hz = es.scene.sample_rate_hz;
    wav.channels = out.mixture;
    WriteWavFile((dir / (es.scene.id + ".wav")).string(), wav);
    nlohmann::json scene = SceneToJson(es.scene);
    scene["condition"] = es.condition;
    std::ofstream(dir / (es.scene.id + ".json")) << scene.dump(2) << "\n";
    std::ofstream(dir / (es.scene.id + ".truth.json"))
        << SidecarJson(es.scene, out).dump(2) << "\n";
    std::cout << es.scene.id << ": T60 " << out.t60_achieved << " s, SNR "
              << out.snr_achieved_db << " dB\n";
  }
  return 0;
}

int CmdRun(const Options &o) {
  ExperimentConfig cfg = BuildConfig(o);
  ExperimentResult r = RunExperiment(cfg, &std::cerr);
  if (cfg.out_dir.empty()) WriteResultsCsv(std::cout, r.rows);
  else WriteReportMarkdown(std::cout, r.report);
  std::cerr << r.scenes_run << " scenes run, " << r.scenes_skipped << " skipped\n";
  return r.scenes_run > 0 ? 0 : 1;
}

int CmdReport(const Options &o) {
  std::string path = o.results;
  if (path.empty() && !o.out.empty())
    path = (std::filesystem::path(o.out) / "results.csv").string();
  if (path.empty()) throw ConfigError("report needs --results or --out");
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path);
  std::vector<FrameRow> rows = ReadResultsCsv(is);
  MetricsReport report = ReportFromRows(rows);
  if (!o.out.empty()) {
    std::filesystem::create_directories(o.out);
    std::ofstream csv(std::filesystem::path(o.out) / "report.csv");
    WriteReportCsv(csv, report);
    std::ofstream md(std::filesystem::path(o.out) / "report.md");
    WriteReportMarkdown(md, report);
  }
  WriteReportMarkdown(std::cout, report);
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"TDOA estimation, minimal-set selection and localization"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--config", o.config, "experiment config (JSON)");
    sub->add_option("--seed", o.seed, "master seed")->each([&](const std::string &) {
      o.seed_set = true;
    });
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--reverb", o.reverb, "reverberation condition")
        ->check(CLI::IsMember({"low", "med", "high", "anechoic"}));
    sub->add_option("--scenes", o.scenes, "generated scenes per condition");
    sub->add_option("--duration", o.duration, "signal duration (s)");
    sub->add_flag("--noise-free", o.noise_free, "no additive noise");
  };
  CLI::App *sim = app.add_subcommand("simulate", "render scenes to WAV and JSON");
  add_common(sim);
  sim->add_option("--snr", o.snr, "array-averaged SNR (dB)");
  CLI::App *run = app.add_subcommand("run", "run an experiment");
  add_common(run);
  run->add_option("--methods", o.methods,
                  "comma-separated: srp-phat,ref-a,ref-c,ref-r,mst,mst+ or all");
  run->add_flag("--diagnostics", o.diagnostics, "dump MST+ steps per frame");
  CLI::App *rep = app.add_subcommand("report", "tables from a results CSV");
  rep->add_option("--results", o.results, "results.csv path");
  rep->add_option("--out", o.out, "output directory");

  CLI11_PARSE(app, argc, argv);
  try {
    if (sim->parsed()) return CmdSimulate(o);
    if (run->parsed()) return CmdRun(o);
    return CmdReport(o);
  } catch (const std::exception &e) {
    std::cerr << "tdoa: " << e.what() << "\n";
    return 2;
  }
}

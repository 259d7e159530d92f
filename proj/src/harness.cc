// harness.cc

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

#include "tdoa/harness.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "tdoa/errors.h"
#include "tdoa/minimal_set.h"
#include "tdoa/mst_plus.h"
#include "tdoa/scene_io.h"

namespace tdoa {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string Lower(std::string s) {
  for (char &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string Fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Fixed(double v, int digits) {
  if (std::isnan(v)) return "n/a";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::vector<std::string> Split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double ParseDouble(const std::string &s) {
  size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception &) {
    throw ConfigError("bad number in results CSV: " + s);
  }
  if (used != s.size()) throw ConfigError("bad number in results CSV: " + s);
  return v;
}

std::uint64_t Mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a * 0x9e3779b97f4a7c15ULL ^ (b + 0x632be59bd9b4e019ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<Method> Canonical(const std::vector<Method> &methods) {
  std::vector<Method> out;
  for (Method m : kAllMethods)
    if (std::find(methods.begin(), methods.end(), m) != methods.end())
      out.push_back(m);
  return out;
}

bool Has(const std::vector<Method> &methods, Method m) {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

std::vector<EdgeTdoa> TreeTdoas(const SpanningTree &t, const PairAnalysis &pa,
                                int m) {
  std::vector<EdgeTdoa> out;
  for (const Edge &e : t.edges())
    out.push_back({e.a, e.b, pa.Peak(e.a, e.b, m).tdoa_s});
  return out;
}

std::string TauList(const TdoaVector &v) {
  std::string s;
  for (int k = 0; k < v.size(); ++k) {
    if (k == v.ref) continue;
    if (!s.empty()) s += ';';
    s += Fmt(v.taus[k]);
  }
  return s;
}

TdoaVector TausFromList(const std::string &s) {
  TdoaVector v;
  v.ref = 0;
  v.taus.push_back(0.0);
  for (const std::string &t : Split(s, ';')) v.taus.push_back(ParseDouble(t));
  return v;
}

void ReadSceneObject(const json &j, std::vector<ExperimentScene> &out) {
  ExperimentScene es;
  es.scene = SceneFromJson(j);
  es.condition = j.contains("condition") ? j.at("condition").get<std::string>()
                                         : ConditionForT60(es.scene.t60_s);
  out.push_back(std::move(es));
}

void CheckId(const std::string &id) {
  if (id.find_first_of(",\n\"") != std::string::npos)
    throw ConfigError("scene id must not contain commas, quotes or newlines");
}

// Pipeline state for one scene.
class SceneRunner {
 public:
  SceneRunner(const ExperimentConfig &cfg, const ExperimentScene &es,
              ExperimentResult &result, std::ostream *diag)
      : cfg_(cfg), es_(es), result_(result), diag_(diag),
        array_(es.scene.mics), gcc_(cfg.stft, cfg.upsampling) {}

  void Run() {
    const SimScene &scene = es_.scene;
    const int m = array_.size();
    SimOutput sim = Simulate(scene);
    std::vector<std::vector<Spectrum>> spectra;
    for (const auto &ch : sim.mixture) spectra.push_back(ComputeStft(ch, cfg_.stft));
    const int frames = static_cast<int>(spectra[0].size());
    std::vector<int> snaps = VadSnapshots(sim.source, cfg_.stft, cfg_.vad);
    std::vector<bool> is_snap(frames, false);
    for (int l : snaps) is_snap[l] = true;

    const Point truth_xy = scene.source.Xy();
    const TdoaVector truth = TrueTdoaVector(scene.source, array_, 0, scene.nu);
    const int ref_a = SelectRefArbitrary(m, Mix(cfg_.seed, scene.seed));
    const int ref_c = SelectRefCentroid(array_);

    SiOptions si;
    si.source_height = cfg_.source_height;
    si.room_centre = Point(scene.room.lx / 2.0, scene.room.ly / 2.0);
    SrpGrid grid;
    grid.x_min = 0.0;
    grid.x_max = scene.room.lx;
    grid.y_min = 0.0;
    grid.y_max = scene.room.ly;
    grid.height = cfg_.source_height;
    grid.coarse = cfg_.srp_coarse;
    grid.fine = cfg_.srp_fine;
    grid.refine_count = cfg_.srp_refine;

    CpsdState cpsd(m, cfg_.stft.num_bins(), cfg_.lambda);
    std::vector<Spectrum> frame(m);
    const std::vector<Method> methods = Canonical(cfg_.methods);
    for (int l = 0; l < frames; ++l) {
      for (int c = 0; c < m; ++c) frame[c] = spectra[c][l];
      cpsd.Update(frame);
      if (!is_snap[l]) continue;
      PairAnalysis pa = AnalyzePairs(cpsd, array_, gcc_, scene.nu);
      ReliabilityGraph graph = GraphFromAnalysis(pa, m);
      std::optional<SpanningTree> mst;
      if (Has(methods, Method::kMst) || Has(methods, Method::kMstPlus))
        mst = PrimMst(graph);
      for (Method method : methods) {
        FrameRow row;
        row.scene = scene.id;
        row.condition = es_.condition;
        row.frame = l;
        row.method = method;
        row.truth = truth;
        row.true_position = truth_xy;
        switch (method) {
          case Method::kSrpPhat: {
            PositionEstimate p = SrpPhatLocate(pa.gcc, array_, grid, scene.nu);
            row.position = p.position;
            row.cost = p.cost;
            row.estimate = SrpTdoaReadout(p.position, array_, scene.nu,
                                          cfg_.source_height, 0);
            break;
          }
          case Method::kRefA:
          case Method::kRefC:
          case Method::kRefR: {
            int ref = method == Method::kRefA   ? ref_a
                      : method == Method::kRefC ? ref_c
                                                : SelectRefReliability(graph);
            SpanningTree star = StarTree(m, ref);
            row.estimate = RewriteToReference(star, TreeTdoas(star, pa, m), 0);
            break;
          }
          case Method::kMst:
            row.estimate = RewriteToReference(*mst, TreeTdoas(*mst, pa, m), 0);
            break;
          case Method::kMstPlus: {
            EdgeOrder order = OrderEdges(*mst, graph);
            MstPlusResult r =
                RunIncremental(order, cpsd, pa, array_, gcc_, scene.nu, 0);
            if (r.tree_edges != mst->edges())
              throw InternalError("MST+ ran on a different spanning tree than MST");
            RecordMstPlus(r, l);
            row.estimate = r.tdoas;
            break;
          }
        }
        if (method != Method::kSrpPhat) {
          PositionEstimate p = SiLocate(row.estimate, array_, scene.nu, si);
          row.position = p.position;
          row.cost = p.cost;
        }
        result_.rows.push_back(std::move(row));
      }
    }
  }

 private:
  void RecordMstPlus(const MstPlusResult &r, int frame) {
    ++result_.mst_plus_frames;
    result_.max_consistency_residual =
        std::max(result_.max_consistency_residual, ConsistencyResidual(r.lags, r.processed));
    for (const MstPlusStep &s : r.steps) {
      result_.max_phat_deviation = std::max(result_.max_phat_deviation, s.phat_deviation);
      result_.phat_bins_checked += s.phat_bins;
    }
    if (diag_ != nullptr) {
      json edges = json::array();
      for (const Edge &e : r.tree_edges) edges.push_back({e.a + 1, e.b + 1});
      json line = {{"scene", es_.scene.id},
                   {"frame", frame},
                   {"mst_edges", edges},
                   {"steps", StepsToJson(r.steps)}};
      *diag_ << line.dump() << "\n";
    }
  }

  const ExperimentConfig &cfg_;
  const ExperimentScene &es_;
  ExperimentResult &result_;
  std::ostream *diag_;
  MicArray array_;
  GccPhat gcc_;
};

}  // namespace

std::string MethodName(Method m) {
  switch (m) {
    case Method::kSrpPhat: return "SRP-PHAT";
    case Method::kRefA: return "Ref-A";
    case Method::kRefC: return "Ref-C";
    case Method::kRefR: return "Ref-R";
    case Method::kMst: return "MST";
    case Method::kMstPlus: return "MST+";
  }
  throw InternalError("unknown method");
}

Method ParseMethod(const std::string &s) {
  std::string l = Lower(s);
  for (Method m : kAllMethods)
    if (l == Lower(MethodName(m))) return m;
  throw ConfigError("unknown method " + s);
}

std::vector<Method> ParseMethodList(const std::string &s) {
  if (Lower(s) == "all") return {std::begin(kAllMethods), std::end(kAllMethods)};
  std::vector<Method> out;
  for (const std::string &t : Split(s, ',')) {
    if (t.empty()) continue;
    Method m = ParseMethod(t);
    if (!Has(out, m)) out.push_back(m);
  }
  if (out.empty()) throw ConfigError("method list is empty");
  return out;
}

double ConditionT60(const std::string &c) {
  if (c == "low") return 0.3;
  if (c == "med") return 0.5;
  if (c == "high") return 1.0;
  if (c == "anechoic") return 0.0;
  throw ConfigError("unknown reverberation condition " + c);
}

std::string ConditionForT60(double t60_s) {
  for (const char *c : {"anechoic", "low", "med", "high"})
    if (ConditionT60(c) == t60_s) return c;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "t60_%gs", t60_s);
  return buf;
}

std::vector<int> VadSnapshots(std::span<const double> reference,
                              const StftConfig &stft, const VadConfig &cfg,
                              std::ostream *log) {
  stft.Validate();
  std::vector<int> out;
  if (reference.size() < static_cast<size_t>(stft.frame_len)) {
    if (log != nullptr) *log << "warning: signal shorter than one frame\n";
    return out;
  }
  const int frames =
      static_cast<int>((reference.size() - stft.frame_len) / stft.hop) + 1;
  std::vector<double> energy(frames, 0.0);
  double max_e = 0.0;
  for (int l = 0; l < frames; ++l) {
    const size_t start = static_cast<size_t>(l) * stft.hop;
    double e = 0.0;
    for (int n = 0; n < stft.frame_len; ++n) e += reference[start + n] * reference[start + n];
    energy[l] = e;
    max_e = std::max(max_e, e);
  }
  if (!(max_e > 0.0)) {
    if (log != nullptr) *log << "warning: no active frames\n";
    return out;
  }
  const double threshold = max_e * std::pow(10.0, -cfg.threshold_db / 10.0);
  const double settle = cfg.settle_s * stft.sample_rate_hz;
  for (int l = 0; l < frames; ++l)
    if (static_cast<double>(l) * stft.hop >= settle && energy[l] > threshold)
      out.push_back(l);
  if (out.empty() && log != nullptr) *log << "warning: no active frames\n";
  return out;
}

double MeanTdoaError(std::span<const TdoaVector> estimates,
                     std::span<const TdoaVector> truth) {
  if (estimates.size() != truth.size())
    throw UsageError("estimate and truth counts differ");
  double sum = 0.0;
  long count = 0;
  for (size_t s = 0; s < estimates.size(); ++s) {
    const TdoaVector &e = estimates[s];
    const TdoaVector &t = truth[s];
    if (e.ref != 0 || t.ref != 0)
      throw UsageError("TDOA vectors must be relative to microphone 1");
    if (e.size() != t.size()) throw UsageError("TDOA vector sizes differ");
    for (int m = 1; m < e.size(); ++m) {
      sum += std::abs(e.taus[m] - t.taus[m]);
      ++count;
    }
  }
  if (count == 0) return kNaN;
  return 1000.0 * sum / static_cast<double>(count);
}

PositionScores PositionMetrics(std::span<const Point> estimates,
                               std::span<const Point> truth) {
  if (estimates.size() != truth.size())
    throw UsageError("estimate and truth counts differ");
  if (estimates.empty()) return {kNaN, kNaN};
  double sum = 0.0;
  size_t hits = 0;
  for (size_t s = 0; s < estimates.size(); ++s) {
    double e = Distance(estimates[s].Xy(), truth[s].Xy());
    sum += e;
    if (e <= kAccuracyThresholdM) ++hits;
  }
  const double n = static_cast<double>(estimates.size());
  return {100.0 * sum / n, 100.0 * static_cast<double>(hits) / n};
}

ExperimentConfig ExperimentConfigFromJson(const json &j) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  ExperimentConfig cfg;
  try {
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("methods")) {
      const json &m = j.at("methods");
      if (m.is_string()) {
        cfg.methods = ParseMethodList(m.get<std::string>());
      } else {
        for (const json &v : m) {
          Method x = ParseMethod(v.get<std::string>());
          if (!Has(cfg.methods, x)) cfg.methods.push_back(x);
        }
      }
    } else {
      cfg.methods = {std::begin(kAllMethods), std::end(kAllMethods)};
    }
    if (j.contains("scenes"))
      for (const json &s : j.at("scenes")) ReadSceneObject(s, cfg.scenes);
    if (j.contains("scene_files"))
      for (const json &s : j.at("scene_files"))
        cfg.scene_files.push_back(s.get<std::string>());
    if (j.contains("generator")) {
      const json &g = j.at("generator");
      GeneratorConfig &gen = cfg.generator;
      gen.n_scenes = g.value("n_scenes", 0);
      if (g.contains("seed")) gen.seed = g.at("seed").get<std::uint64_t>();
      if (g.contains("conditions"))
        gen.conditions = g.at("conditions").get<std::vector<std::string>>();
      for (const std::string &c : gen.conditions) ConditionT60(c);
      ConfigBounds &b = gen.bounds;
      if (g.contains("room_dims_m")) {
        auto d = g.at("room_dims_m").get<std::vector<double>>();
        if (d.size() != 3) throw ConfigError("room_dims_m must have 3 entries");
        b.room = Room{d[0], d[1], d[2]};
      }
      b.num_mics = g.value("num_mics", b.num_mics);
      b.wall_margin = g.value("wall_margin_m", b.wall_margin);
      b.min_mic_spacing = g.value("min_mic_spacing_m", b.min_mic_spacing);
      b.min_source_mic_distance =
          g.value("min_source_mic_distance_m", b.min_source_mic_distance);
      b.source_height = g.value("source_height_m", b.source_height);
      b.duration_s = g.value("duration_s", b.duration_s);
      b.nu = g.value("nu_mps", b.nu);
      if (g.contains("snr_db"))
        b.snr_db = g.at("snr_db").is_null() ? std::numeric_limits<double>::infinity()
                                            : g.at("snr_db").get<double>();
    }
    if (j.contains("stft")) {
      const json &s = j.at("stft");
      cfg.stft.frame_len = s.value("frame_len", cfg.stft.frame_len);
      cfg.stft.hop = s.value("hop", cfg.stft.hop);
      cfg.stft.sample_rate_hz = s.value("sample_rate_hz", cfg.stft.sample_rate_hz);
    }
    cfg.lambda = j.value("lambda", cfg.lambda);
    cfg.upsampling = j.value("upsampling", cfg.upsampling);
    if (j.contains("vad")) {
      cfg.vad.threshold_db = j.at("vad").value("threshold_db", cfg.vad.threshold_db);
      cfg.vad.settle_s = j.at("vad").value("settle_s", cfg.vad.settle_s);
    }
    cfg.source_height = j.value("source_height_m", cfg.source_height);
    if (j.contains("srp")) {
      cfg.srp_coarse = j.at("srp").value("coarse_m", cfg.srp_coarse);
      cfg.srp_fine = j.at("srp").value("fine_m", cfg.srp_fine);
      cfg.srp_refine = j.at("srp").value("refine_count", cfg.srp_refine);
    }
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.diagnostics = j.value("diagnostics", cfg.diagnostics);
  } catch (const json::exception &e) {
    throw ConfigError(std::string("malformed experiment config: ") + e.what());
  }
  if (cfg.methods.empty()) throw ConfigError("no methods selected");
  if (cfg.scenes.empty() && cfg.scene_files.empty() && cfg.generator.n_scenes < 1)
    throw ConfigError("no scenes configured");
  cfg.stft.Validate();
  if (cfg.upsampling < 1) throw ConfigError("upsampling must be >= 1");
  if (!(cfg.lambda >= 0.0 && cfg.lambda < 1.0)) throw ConfigError("lambda must be in [0, 1)");
  return cfg;
}

ExperimentConfig LoadExperimentConfig(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception &e) {
    throw ConfigError(path + ": " + e.what());
  }
  return ExperimentConfigFromJson(j);
}

std::vector<ExperimentScene> ResolveScenes(const ExperimentConfig &cfg,
                                           std::ostream *log) {
  std::vector<ExperimentScene> out = cfg.scenes;
  for (const std::string &path : cfg.scene_files) {
    try {
      std::ifstream is(path);
      if (!is) throw ConfigError("cannot open " + path);
      json j;
      is >> j;
      ReadSceneObject(j, out);
    } catch (const std::exception &e) {
      if (log != nullptr) *log << "error: skipping scene " << path << ": " << e.what() << "\n";
    }
  }
  const GeneratorConfig &g = cfg.generator;
  if (g.n_scenes > 0) {
    const std::uint64_t seed = g.seed.value_or(cfg.seed);
    for (const std::string &c : g.conditions) {
      ConfigBounds b = g.bounds;
      b.t60_s = ConditionT60(c);
      b.sample_rate_hz = cfg.stft.sample_rate_hz;
      for (SimScene &s : GenerateConfigs(g.n_scenes, seed, b)) {
        s.id = c + "_" + s.id;
        out.push_back({std::move(s), c});
      }
    }
  }
  return out;
}

const MetricsEntry *MetricsReport::Find(Method m, const std::string &condition) const {
  for (const MetricsEntry &e : entries)
    if (e.method == m && e.condition == condition) return &e;
  return nullptr;
}

ExperimentResult RunExperiment(const ExperimentConfig &cfg, std::ostream *log) {
  if (cfg.methods.empty()) throw ConfigError("no methods selected");
  std::vector<ExperimentScene> scenes = ResolveScenes(cfg, log);
  if (scenes.empty()) throw ConfigError("no scenes to run");
  ExperimentResult result;
  std::ofstream diag;
  if (cfg.diagnostics && !cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    diag.open(std::filesystem::path(cfg.out_dir) / "mst_plus_steps.jsonl");
  }
  for (const ExperimentScene &es : scenes) {
    CheckId(es.scene.id);
    if (es.scene.sample_rate_hz != cfg.stft.sample_rate_hz) {
      if (log != nullptr)
        *log << "error: skipping scene " << es.scene.id << ": sample rate mismatch\n";
      ++result.scenes_skipped;
      continue;
    }
    const size_t before = result.rows.size();
    try {
      SceneRunner runner(cfg, es, result, diag.is_open() ? &diag : nullptr);
      runner.Run();
      ++result.scenes_run;
    } catch (const ConfigError &e) {
      result.rows.resize(before);
      ++result.scenes_skipped;
      if (log != nullptr) *log << "error: skipping scene " << es.scene.id << ": " << e.what() << "\n";
    }
  }
  result.report = ReportFromRows(result.rows);
  if (!cfg.out_dir.empty()) WriteOutputs(cfg.out_dir, result.rows, result.report);
  return result;
}

MetricsReport ReportFromRows(std::span<const FrameRow> rows) {
  MetricsReport report;
  for (const char *c : {"anechoic", "low", "med", "high"})
    for (const FrameRow &r : rows)
      if (r.condition == c) {
        report.conditions.push_back(c);
        break;
      }
  std::vector<std::string> other;
  for (const FrameRow &r : rows)
    if (std::find(report.conditions.begin(), report.conditions.end(), r.condition) ==
            report.conditions.end() &&
        std::find(other.begin(), other.end(), r.condition) == other.end())
      other.push_back(r.condition);
  std::sort(other.begin(), other.end());
  report.conditions.insert(report.conditions.end(), other.begin(), other.end());

  for (Method m : kAllMethods) {
    for (const std::string &c : report.conditions) {
      std::vector<TdoaVector> est, truth;
      std::vector<Point> pos, true_pos;
      for (const FrameRow &r : rows) {
        if (r.method != m || r.condition != c) continue;
        est.push_back(r.estimate);
        truth.push_back(r.truth);
        pos.push_back(r.position);
        true_pos.push_back(r.true_position);
      }
      if (est.empty()) continue;
      MetricsEntry e;
      e.method = m;
      e.condition = c;
      e.sigma_ms = MeanTdoaError(est, truth);
      PositionScores p = PositionMetrics(pos, true_pos);
      e.epsilon_cm = p.mean_error_cm;
      e.acc_pct = p.accuracy_pct;
      e.snapshots = static_cast<int>(est.size());
      report.entries.push_back(e);
    }
  }
  return report;
}

constexpr char kResultsHeader[] =
    "scene,condition,frame_index,method,x_m,y_m,cost,x_true_m,y_true_m,"
    "position_error_cm,tau_est_s,tau_true_s,tdoa_error_ms";

void WriteResultsCsv(std::ostream &os, std::span<const FrameRow> rows) {
  os << kResultsHeader << '\n';
  for (const FrameRow &r : rows) {
    double err = MeanTdoaError(std::span<const TdoaVector>(&r.estimate, 1),
                               std::span<const TdoaVector>(&r.truth, 1));
    double perr = 100.0 * Distance(r.position.Xy(), r.true_position.Xy());
    os << r.scene << ',' << r.condition << ',' << r.frame << ',' << MethodName(r.method)
       << ',' << Fmt(r.position.x()) << ',' << Fmt(r.position.y()) << ','
       << Fmt(r.cost) << ',' << Fmt(r.true_position.x()) << ','
       << Fmt(r.true_position.y()) << ',' << Fmt(perr) << ',' << TauList(r.estimate)
       << ',' << TauList(r.truth) << ',' << Fmt(err) << '\n';
  }
}

std::vector<FrameRow> ReadResultsCsv(std::istream &is) {
  std::string line;
  if (!std::getline(is, line) || line != kResultsHeader)
    throw ConfigError("results CSV lacks the expected header");
  std::vector<FrameRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = Split(line, ',');
    if (f.size() != 13) throw ConfigError("results CSV row has wrong field count");
    FrameRow r;
    r.scene = f[0];
    r.condition = f[1];
    r.frame = static_cast<int>(ParseDouble(f[2]));
    r.method = ParseMethod(f[3]);
    r.position = Point(ParseDouble(f[4]), ParseDouble(f[5]));
    r.cost = ParseDouble(f[6]);
    r.true_position = Point(ParseDouble(f[7]), ParseDouble(f[8]));
    r.estimate = TausFromList(f[10]);
    r.truth = TausFromList(f[11]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void WriteReportCsv(std::ostream &os, const MetricsReport &report) {
  os << "method";
  for (const std::string &c : report.conditions)
    os << ',' << c << "_sigma_ms," << c << "_epsilon_cm," << c << "_acc_pct," << c
       << "_snapshots";
  os << '\n';
  for (Method m : kAllMethods) {
    bool any = false;
    for (const std::string &c : report.conditions) any = any || report.Find(m, c);
    if (!any) continue;
    os << MethodName(m);
    for (const std::string &c : report.conditions) {
      const MetricsEntry *e = report.Find(m, c);
      if (e == nullptr) {
        os << ",,,,";
        continue;
      }
      os << ',' << Fmt(e->sigma_ms) << ',' << Fmt(e->epsilon_cm) << ','
         << Fmt(e->acc_pct) << ',' << e->snapshots;
    }
    os << '\n';
  }
}

void WriteReportMarkdown(std::ostream &os, const MetricsReport &report) {
  os << "# TDOA estimation and localization results\n\n"
     << "Snapshots are selected with an oracle voice activity detector on the "
        "simulated clean source: frames within 30 dB of the loudest frame, "
        "excluding the first 2 s. sigma is the mean TDOA error relative to "
        "microphone 1 (ms), epsilon the mean 2D position error (cm) and Acc "
        "the share of snapshots with epsilon <= 10 cm.\n\n";
  os << "| Method |";
  for (const std::string &c : report.conditions)
    os << ' ' << c << " sigma (ms) | " << c << " epsilon (cm) | " << c << " Acc (%) |";
  os << "\n|---|";
  for (size_t k = 0; k < report.conditions.size(); ++k) os << "---:|---:|---:|";
  os << '\n';
  for (Method m : kAllMethods) {
    bool any = false;
    for (const std::string &c : report.conditions) any = any || report.Find(m, c);
    if (!any) continue;
    os << "| " << MethodName(m) << " |";
    for (const std::string &c : report.conditions) {
      const MetricsEntry *e = report.Find(m, c);
      if (e == nullptr) {
        os << " | | |";
        continue;
      }
      os << ' ' << Fixed(e->sigma_ms, 4) << " | " << Fixed(e->epsilon_cm, 1) << " | "
         << Fixed(e->acc_pct, 1) << " |";
    }
    os << '\n';
  }
  os << "\nSnapshots per condition:";
  for (const std::string &c : report.conditions) {
    int s = 0;
    for (const MetricsEntry &e : report.entries)
      if (e.condition == c) s = std::max(s, e.snapshots);
    os << ' ' << c << " S = " << s << ';';
  }
  os << '\n';
}

void WriteOutputs(const std::string &dir, std::span<const FrameRow> rows,
                  const MetricsReport &report) {
  std::filesystem::create_directories(dir);
  std::filesystem::path p(dir);
  {
    std::ofstream os(p / "results.csv");
    if (!os) throw ConfigError("cannot write results.csv in " + dir);
    WriteResultsCsv(os, rows);
  }
  {
    std::ofstream os(p / "report.csv");
    WriteReportCsv(os, report);
  }
  {
    std::ofstream os(p / "report.md");
    WriteReportMarkdown(os, report);
  }
}

}  // namespace tdoa

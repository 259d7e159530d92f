// mst_plus.cc

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

#include "tdoa/mst_plus.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tdoa/errors.h"

namespace tdoa {

ReliabilityGraph GraphFromAnalysis(const PairAnalysis &pa, int num_mics) {
  std::vector<PairReliability> pairs;
  for (int i = 0; i < num_mics; ++i)
    for (int j = i + 1; j < num_mics; ++j)
      pairs.push_back({i, j, pa.peaks[PairIndex(i, j, num_mics)].reliability});
  return ReliabilityGraph(num_mics, pairs);
}

Spectrum IndirectCpsd(std::span<const Complex> psi_ik, double tau_jk,
                      double sample_rate_hz, int dft_len) {
  if (!std::isfinite(tau_jk)) throw UsageError("phase-alignment TDOA not finite");
  Spectrum out(psi_ik.size());
  const double w0 = 2.0 * std::numbers::pi * sample_rate_hz * tau_jk / dft_len;
  for (size_t k = 0; k < psi_ik.size(); ++k)
    out[k] = psi_ik[k] * std::polar(1.0, w0 * static_cast<double>(k));
  return out;
}

Spectrum AveragedPhat(std::span<const Complex> direct,
                      const std::vector<Spectrum> &indirect) {
  Spectrum sum(direct.begin(), direct.end());
  for (const Spectrum &s : indirect) {
    if (s.size() != sum.size())
      throw UsageError("indirect CPSD length differs from direct CPSD");
    for (size_t k = 0; k < sum.size(); ++k) sum[k] += s[k];
  }
  return PhatWeight(sum);
}

std::int64_t ConsistencyResidual(const LagMatrix &lags,
                                 const std::vector<int> &subset) {
  std::int64_t worst = 0;
  for (int i : subset) {
    for (int j : subset) {
      for (int m : subset) {
        if (!lags.defined(i, j) || !lags.defined(i, m) || !lags.defined(j, m))
          throw UsageError("lag matrix entry undefined inside subset");
        std::int64_t r = lags(i, j) - (lags(i, m) - lags(j, m));
        worst = std::max(worst, r < 0 ? -r : r);
      }
    }
  }
  return worst;
}

namespace {

void MeasurePhat(std::span<const Complex> phat, MstPlusStep &step) {
  step.phat_deviation = 0.0;
  step.phat_bins = 0;
  for (const Complex &c : phat) {
    if (c == Complex(0.0, 0.0)) continue;
    step.phat_deviation = std::max(step.phat_deviation, std::abs(std::abs(c) - 1.0));
    ++step.phat_bins;
  }
}

void ValidateOrder(const EdgeOrder &order, int num_mics) {
  if (static_cast<int>(order.size()) != num_mics - 1)
    throw UsageError("edge order must have M - 1 rows");
  std::vector<bool> seen(num_mics, false);
  for (size_t h = 0; h < order.size(); ++h) {
    const OrderedEdge &row = order[h];
    auto in_range = [&](int v) { return v >= 0 && v < num_mics; };
    if (!in_range(row.anchor) || !in_range(row.joined) ||
        row.anchor == row.joined)
      throw UsageError("edge order row " + std::to_string(h + 1) +
                       " has invalid vertices");
    if (MakeEdge(row.i, row.j) != MakeEdge(row.anchor, row.joined))
      throw UsageError("edge order row " + std::to_string(h + 1) +
                       " anchor/joined disagree with the row");
    if (h > 0 && !seen[row.anchor])
      throw UsageError("edge order row " + std::to_string(h + 1) +
                       " is not connected to earlier rows");
    if (seen[row.joined])
      throw UsageError("edge order row " + std::to_string(h + 1) +
                       " closes a cycle");
    seen[row.anchor] = seen[row.joined] = true;
  }
}

}  // namespace

MstPlusResult RunIncremental(const EdgeOrder &order, const CpsdState &cpsd,
                             const PairAnalysis &direct, const MicArray &array,
                             GccPhat &gcc, double nu, int ref) {
  const int m = array.size();
  if (cpsd.num_mics() != m || static_cast<int>(direct.peaks.size()) != NumPairs(m))
    throw InternalError("CPSD or pair analysis missing microphone pairs");
  if (!cpsd.initialized()) throw InternalError("CPSD state not initialized");
  if (ref < 0 || ref >= m) throw UsageError("reference out of range");
  ValidateOrder(order, m);

  const StftConfig &cfg = gcc.config();
  const double lag_rate = gcc.upsampling() * cfg.sample_rate_hz;

  MstPlusResult res;
  res.lags = LagMatrix(m);
  for (const OrderedEdge &row : order)
    res.tree_edges.push_back(MakeEdge(row.i, row.j));
  std::sort(res.tree_edges.begin(), res.tree_edges.end());

  for (size_t h = 0; h < order.size(); ++h) {
    const OrderedEdge &row = order[h];
    const int o = row.anchor;
    const int n = row.joined;
    MstPlusStep step;
    step.step = static_cast<int>(h) + 1;
    step.anchor = o;
    step.joined = n;
    TdoaPeak plain = direct.Peak(n, o, m);
    step.peak_direct = plain.reliability;

    if (h == 0) {
      step.peak_averaged = plain.reliability;
      step.lag = plain.lag;
      MeasurePhat(direct.phat[PairIndex(std::min(n, o), std::max(n, o), m)], step);
      res.lags.Set(n, o, plain.lag);
      res.processed = {o, n};
      res.steps.push_back(std::move(step));
      continue;
    }

    std::vector<Spectrum> indirect;
    for (int k : res.processed) {
      if (k == o) continue;
      double tau_ok = static_cast<double>(res.lags(o, k)) / lag_rate;
      indirect.push_back(IndirectCpsd(cpsd.Get(n, k), tau_ok,
                                      cfg.sample_rate_hz, cfg.dft_len()));
      step.routes.push_back(k);
    }
    Spectrum phat = AveragedPhat(cpsd.Get(n, o), indirect);
    MeasurePhat(phat, step);
    int max_lag = MaxLag(array.PairDistance(n, o), cfg.sample_rate_hz,
                         gcc.upsampling(), nu);
    GccFunction g = gcc.Compute(phat, max_lag);
    g.i = n;
    g.j = o;
    TdoaPeak peak = EstimateTdoa(g);
    step.peak_averaged = peak.reliability;
    step.lag = peak.lag;

    res.lags.Set(n, o, peak.lag);
    for (int k : res.processed)
      if (k != o) res.lags.Set(n, k, res.lags(n, o) - res.lags(k, o));
    res.processed.push_back(n);
    res.steps.push_back(std::move(step));
  }

  res.tdoas.ref = ref;
  res.tdoas.taus.assign(m, 0.0);
  for (int v = 0; v < m; ++v)
    if (v != ref) res.tdoas.taus[v] = static_cast<double>(res.lags(v, ref)) / lag_rate;
  return res;
}

nlohmann::json StepsToJson(const std::vector<MstPlusStep> &steps) {
  nlohmann::json out = nlohmann::json::array();
  for (const MstPlusStep &s : steps) {
    std::vector<int> routes;
    for (int k : s.routes) routes.push_back(k + 1);
    out.push_back({{"step", s.step},
                   {"pair", {s.joined + 1, s.anchor + 1}},
                   {"anchor", s.anchor + 1},
                   {"joined", s.joined + 1},
                   {"num_indirect", s.routes.size()},
                   {"routes", routes},
                   {"peak_direct", s.peak_direct},
                   {"peak_averaged", s.peak_averaged},
                   {"lag", s.lag}});
  }
  return out;
}

}  // namespace tdoa

// tdoa/mst_plus.h

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

// Incremental TDOA re-estimation over the ordered spanning-tree edges.
//
// Step 1 keeps the plain GCC-PHAT estimate of the most reliable edge. Every
// later step H joins a new microphone n to an already processed anchor o and
// re-estimates tau_{n,o} from the PHAT-normalized sum of the direct CPSD
// psi_{n,o} and H - 1 indirect CPSDs, one per processed microphone k != o:
//
//   psi~_{n,o}^{[k]}(w) = psi_{n,k}(w) exp(j w tau'_{o,k}),
//
// where tau'_{o,k} comes from earlier steps. The new row/column of the
// re-estimated matrix is then closed with tau'_{n,k} = tau'_{n,o} - tau'_{k,o}
// so the processed submatrix stays consistent after every step.

#ifndef TDOA_MST_PLUS_H_
#define TDOA_MST_PLUS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "tdoa/geometry.h"
#include "tdoa/minimal_set.h"
#include "tdoa/spectral.h"

namespace tdoa {

// Reliability graph of one frame: the GCC-PHAT peak value of every pair.
ReliabilityGraph GraphFromAnalysis(const PairAnalysis &pa, int num_mics);

// Phase-aligns psi_{i,k} into an estimate of psi_{i,j}: bin k is multiplied by
// exp(j 2 pi k fs tau_jk / K). Magnitudes are unchanged.
Spectrum IndirectCpsd(std::span<const Complex> psi_ik, double tau_jk,
                      double sample_rate_hz, int dft_len);

// PHAT weight of direct + sum(indirect), with the usual zero guard.
Spectrum AveragedPhat(std::span<const Complex> direct,
                      const std::vector<Spectrum> &indirect);

// Antisymmetric matrix of TDOAs in upsampled-lag units with a definedness
// mask. Integer lags keep chain closure exact.
class LagMatrix {
 public:
  explicit LagMatrix(int m)
      : m_(m), v_(static_cast<size_t>(m) * m, 0), set_(v_.size(), false) {
    for (int i = 0; i < m; ++i) set_[Index(i, i)] = true;
  }

  int size() const { return m_; }
  bool defined(int i, int j) const { return set_[Index(i, j)]; }
  std::int64_t operator()(int i, int j) const { return v_[Index(i, j)]; }
  // Sets (i, j) = lag and (j, i) = -lag.
  void Set(int i, int j, std::int64_t lag) {
    v_[Index(i, j)] = lag;
    v_[Index(j, i)] = -lag;
    set_[Index(i, j)] = set_[Index(j, i)] = true;
  }

 private:
  size_t Index(int i, int j) const { return static_cast<size_t>(i) * m_ + j; }
  int m_;
  std::vector<std::int64_t> v_;
  std::vector<bool> set_;
};

// max over (i,j,m) in subset of |L(i,j) - (L(i,m) - L(j,m))|. Throws
// UsageError if an entry in the subset is undefined.
std::int64_t ConsistencyResidual(const LagMatrix &lags,
                                 const std::vector<int> &subset);

struct MstPlusStep {
  int step = 0;     // H, 1-based
  int anchor = 0;   // already processed microphone
  int joined = 0;   // microphone added by this step
  std::vector<int> routes;  // third microphone of each indirect CPSD
  double peak_direct = 0.0;    // reliability of the single-CPSD GCC
  double peak_averaged = 0.0;  // peak of the averaged GCC
  int lag = 0;                 // re-estimated tau'_{joined,anchor}, upsampled
  // Largest | |phi[k]| - 1 | over the nonzero bins of the PHAT spectrum the
  // step's GCC was computed from, and the number of such bins.
  double phat_deviation = 0.0;
  int phat_bins = 0;
};

struct MstPlusResult {
  TdoaVector tdoas;                // relative to the requested reference
  LagMatrix lags{0};
  std::vector<int> processed;      // microphones in the order they joined
  std::vector<Edge> tree_edges;    // the minimal set the order was built on
  std::vector<MstPlusStep> steps;
};

// `direct` must hold the frame's plain GCC-PHAT estimates for every pair
// (the same ones the reliability graph was built from). Throws UsageError on
// a malformed order and InternalError if a CPSD pair is unavailable.
MstPlusResult RunIncremental(const EdgeOrder &order, const CpsdState &cpsd,
                             const PairAnalysis &direct, const MicArray &array,
                             GccPhat &gcc, double nu, int ref = 0);

// Per-step diagnostic dump, 1-based microphone indices.
nlohmann::json StepsToJson(const std::vector<MstPlusStep> &steps);

}  // namespace tdoa

#endif  // TDOA_MST_PLUS_H_

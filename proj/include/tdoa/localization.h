// tdoa/localization.h

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

#ifndef TDOA_LOCALIZATION_H_
#define TDOA_LOCALIZATION_H_

#include <span>
#include <string>
#include <vector>

#include "tdoa/geometry.h"
#include "tdoa/spectral.h"

namespace tdoa {

struct PositionEstimate {
  Point position;  // 2D, meters
  double cost = 0.0;
  std::string method;
  int iterations = 0;
  bool converged = true;
  bool ill_conditioned = false;
};

struct SiOptions {
  double source_height = 1.5;      // evaluation plane, meters
  Point room_centre{0.0, 0.0};     // 2D
  double constraint_radius = 5.0;  // meters around room_centre
  int max_iters = 200;
  double min_step = 1e-4;          // meters
  double initial_step = 0.05;      // gradient scale of the first trial step
  int max_halvings = 40;
  // Condition-number bound of the linear initialization.
  double max_condition = 1e8;
};

// Spherical interpolation followed by projected gradient descent.
//
// Ranges d_m = nu tau_{m,ref} give the linear system
//   2 a_m . x + 2 d_m R_s = |a_m|^2 - d_m^2,  a_m = m_m - m_ref,
// where x is the source relative to the reference microphone and R_s its
// range. SI removes R_s by projecting onto the orthogonal complement of d and
// solves for (x, y) with z fixed at the source height. That estimate seeds
// gradient descent on
//   J(p) = sum_m (|p - m_m| - |p - m_ref| - d_m)^2,
// with backtracking halving and projection onto the constraint disc after
// every iterate.
PositionEstimate SiLocate(const TdoaVector &tdoas, const MicArray &array,
                          double nu, const SiOptions &opts,
                          std::vector<double> *cost_trace = nullptr);

// J(p) for a 2D candidate at the configured source height.
double SiCost(const Point &p_xy, const TdoaVector &tdoas, const MicArray &array,
              double nu, double source_height);

struct SrpGrid {
  double x_min = 0.0, x_max = 6.0;
  double y_min = 0.0, y_max = 7.0;
  double height = 1.5;
  double coarse = 0.10;  // must be an integer multiple of fine
  double fine = 0.01;
  int refine_count = 3;

  // Throws UsageError for empty or inconsistent grids.
  void Validate() const;
};

// Sum over all pairs of the GCC value at the nearest upsampled lag implied by
// the candidate. `gcc` is indexed by PairIndex and covers every pair.
class SrpFunctional {
 public:
  SrpFunctional(const MicArray &array, std::span<const GccFunction> gcc,
                double nu);
  double operator()(const Point &p3) const;

 private:
  const MicArray &array_;
  std::span<const GccFunction> gcc_;
  double nu_;
};

// Coarse grid over the bounds, then the fine grid within one coarse step of
// the top refine_count coarse points. Ties go to the lexicographically
// smallest grid index (x first).
PositionEstimate SrpPhatLocate(std::span<const GccFunction> gcc,
                               const MicArray &array, const SrpGrid &grid,
                               double nu);

// Fine grid everywhere; reference for the two-stage search.
PositionEstimate SrpPhatExhaustive(std::span<const GccFunction> gcc,
                                   const MicArray &array, const SrpGrid &grid,
                                   double nu);

// tau_{m,ref}(p_hat) with p_hat lifted to the array dimension at `height`.
TdoaVector SrpTdoaReadout(const Point &p_hat, const MicArray &array, double nu,
                          double height, int ref = 0);

}  // namespace tdoa

#endif  // TDOA_LOCALIZATION_H_

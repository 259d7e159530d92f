// tests/metric_cases.h

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

// Hand-worked metric cases. Expected values are written out by hand.

#ifndef TDOA_TESTS_METRIC_CASES_H_
#define TDOA_TESTS_METRIC_CASES_H_

#include <cmath>
#include <string>
#include <vector>

#include "tdoa/geometry.h"

namespace tdoa {
namespace testing {

struct TdoaCase {
  std::string name;
  std::vector<TdoaVector> estimates;
  std::vector<TdoaVector> truth;
  double sigma_ms;
};

struct PositionCase {
  std::string name;
  std::vector<Point> estimates;
  std::vector<Point> truth;
  double epsilon_cm;
  double acc_pct;
};

// Truth vectors of a fixed geometry plus per-microphone errors in ms.
inline TdoaVector Offset(const TdoaVector &t, const std::vector<double> &err_ms) {
  TdoaVector e = t;
  for (size_t m = 1; m < e.taus.size(); ++m) e.taus[m] += err_ms[m - 1] * 1e-3;
  return e;
}

inline std::vector<TdoaCase> TdoaCases() {
  const TdoaVector t2{0, {0.0, 1.5e-3}};
  const TdoaVector t3{0, {0.0, -2.0e-3, 0.75e-3}};
  const TdoaVector t6{0, {0.0, 1e-3, -1e-3, 2e-3, -2e-3, 0.5e-3}};
  return {
      {"perfect", {t6}, {t6}, 0.0},
      {"one pair 0.5 ms", {Offset(t2, {0.5})}, {t2}, 0.5},
      // (0.25 + 0.5 + 1 + 0) / 4
      {"two snapshots M=3",
       {Offset(t3, {0.25, -0.5}), Offset(t3, {1.0, 0.0})},
       {t3, t3},
       0.4375},
      // (0.125 + 0.25 + 0.5 + 1 + 2) / 5
      {"M=6 doubling errors",
       {Offset(t6, {0.125, -0.25, 0.5, -1.0, 2.0})},
       {t6},
       0.775},
      // (1 + 2 + 3) / 3
      {"three snapshots M=2",
       {Offset(t2, {1.0}), Offset(t2, {-2.0}), Offset(t2, {3.0})},
       {t2, t2, t2},
       2.0},
  };
}

inline std::vector<PositionCase> PositionCases() {
  const double above = std::nextafter(0.1, 1.0);
  return {
      {"perfect", {Point(1, 2), Point(3, 4)}, {Point(1, 2), Point(3, 4)}, 0.0, 100.0},
      {"exactly 10 cm",
       {Point(0.1, 0.0), Point(0.0, -0.1)},
       {Point(0, 0), Point(0, 0)},
       10.0,
       100.0},
      // errors 5, 10, 20, 30 cm: mean 16.25, two of four within 10 cm
      {"mixed",
       {Point(0.05, 0.0), Point(0.0, 0.1), Point(-0.2, 0.0), Point(0.0, 0.3)},
       {Point(0, 0), Point(0, 0), Point(0, 0), Point(0, 0)},
       16.25,
       50.0},
      {"3-4-5 triangle", {Point(0.3, 0.4)}, {Point(0, 0)}, 50.0, 0.0},
      {"just above 10 cm",
       {Point(above, 0.0), Point(0.1, 0.0)},
       {Point(0, 0), Point(0, 0)},
       50.0 * (above + 0.1),
       50.0},
  };
}

}  // namespace testing
}  // namespace tdoa

#endif  // TDOA_TESTS_METRIC_CASES_H_

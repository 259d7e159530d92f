// geometry.cc

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

#include "tdoa/geometry.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "tdoa/errors.h"

namespace tdoa {

namespace {

void CheckFinite(double v) {
  if (!std::isfinite(v)) throw UsageError("point coordinate is not finite");
}

}  // namespace

Point::Point(double x, double y) : c_{x, y, 0.0}, dim_(2) {
  CheckFinite(x);
  CheckFinite(y);
}

Point::Point(double x, double y, double z) : c_{x, y, z}, dim_(3) {
  CheckFinite(x);
  CheckFinite(y);
  CheckFinite(z);
}

double Distance(const Point &a, const Point &b) {
  if (a.dim() != b.dim())
    throw UsageError("point dimension mismatch: " + std::to_string(a.dim()) +
                     " vs " + std::to_string(b.dim()));
  double s = 0.0;
  for (int d = 0; d < a.dim(); ++d) {
    double diff = a[d] - b[d];
    s += diff * diff;
  }
  return std::sqrt(s);
}

MicArray::MicArray(std::vector<Point> mics) : mics_(std::move(mics)) {
  if (mics_.size() < 2) throw UsageError("a microphone array needs M >= 2");
  int dim = mics_.front().dim();
  for (const Point &p : mics_)
    if (p.dim() != dim) throw UsageError("mixed dimensions in microphone array");
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      if (!(Distance(mics_[i], mics_[j]) > 0.0))
        throw UsageError("microphones " + std::to_string(i + 1) + " and " +
                         std::to_string(j + 1) + " coincide");
}

double MicArray::PairDistance(int i, int j) const {
  return Distance(mics_[i], mics_[j]);
}

Point MicArray::Centroid() const {
  double s[3] = {0.0, 0.0, 0.0};
  for (const Point &p : mics_)
    for (int d = 0; d < p.dim(); ++d) s[d] += p[d];
  double n = static_cast<double>(mics_.size());
  return dim() == 3 ? Point(s[0] / n, s[1] / n, s[2] / n)
                    : Point(s[0] / n, s[1] / n);
}

void TdoaVector::Validate() const {
  if (ref < 0 || ref >= size())
    throw UsageError("TDOA vector reference index out of range");
  if (taus[ref] != 0.0)
    throw UsageError("TDOA vector entry of the reference must be 0");
}

double TrueTdoa(const Point &p, const Point &mi, const Point &mj, double nu) {
  if (!(nu > 0.0)) throw UsageError("speed of sound must be positive");
  return (Distance(p, mi) - Distance(p, mj)) / nu;
}

TdoaVector TrueTdoaVector(const Point &p, const MicArray &array, int ref,
                          double nu) {
  TdoaVector v;
  v.ref = ref;
  v.taus.resize(array.size());
  for (int m = 0; m < array.size(); ++m)
    v.taus[m] = m == ref ? 0.0 : TrueTdoa(p, array[m], array[ref], nu);
  return v;
}

TdoaMatrix MatrixFromVector(const TdoaVector &v) {
  v.Validate();
  TdoaMatrix t(v.size());
  for (int i = 0; i < v.size(); ++i)
    for (int j = 0; j < v.size(); ++j) t(i, j) = v.taus[i] - v.taus[j];
  return t;
}

double ConsistencyResidual(const TdoaMatrix &t, const std::vector<int> &subset) {
  double worst = 0.0;
  for (int i : subset)
    for (int j : subset)
      for (int m : subset)
        worst = std::max(worst, std::abs(t(i, j) - (t(i, m) - t(j, m))));
  return worst;
}

double ConsistencyResidual(const TdoaMatrix &t) {
  std::vector<int> all(t.size());
  for (int i = 0; i < t.size(); ++i) all[i] = i;
  return ConsistencyResidual(t, all);
}

}  // namespace tdoa

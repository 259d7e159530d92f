// tdoa/geometry.h

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

#ifndef TDOA_GEOMETRY_H_
#define TDOA_GEOMETRY_H_

#include <array>
#include <cstddef>
#include <vector>

namespace tdoa {

inline constexpr double kDefaultSpeedOfSound = 343.0;  // m/s

// A position in meters, either 2D or 3D.
class Point {
 public:
  Point() = default;
  Point(double x, double y);
  Point(double x, double y, double z);

  int dim() const { return dim_; }
  double operator[](int d) const { return c_[d]; }
  double x() const { return c_[0]; }
  double y() const { return c_[1]; }
  double z() const { return c_[2]; }

  // Drops the third coordinate.
  Point Xy() const { return Point(c_[0], c_[1]); }
  // Lifts a 2D point to 3D at height z.
  Point WithHeight(double z) const { return Point(c_[0], c_[1], z); }

  bool operator==(const Point &other) const = default;

 private:
  std::array<double, 3> c_{0.0, 0.0, 0.0};
  int dim_ = 2;
};

// Euclidean distance. Throws UsageError on dimension mismatch.
double Distance(const Point &a, const Point &b);

// Ordered set of microphone positions. Indices are 0-based in code and
// 1-based in every file or table the tools emit.
class MicArray {
 public:
  explicit MicArray(std::vector<Point> mics);

  int size() const { return static_cast<int>(mics_.size()); }
  const Point &operator[](int m) const { return mics_[m]; }
  const std::vector<Point> &positions() const { return mics_; }
  int dim() const { return mics_.front().dim(); }

  double PairDistance(int i, int j) const;
  Point Centroid() const;

 private:
  std::vector<Point> mics_;
};

// TDOAs of every microphone relative to microphone `ref`, in seconds:
// taus[m] = tau_{m,ref}, taus[ref] = 0.
struct TdoaVector {
  int ref = 0;
  std::vector<double> taus;

  int size() const { return static_cast<int>(taus.size()); }
  // Throws UsageError when ref is out of range or taus[ref] != 0.
  void Validate() const;
};

// Dense MxM matrix of pairwise TDOAs, entry (i,j) = tau_{i,j}.
class TdoaMatrix {
 public:
  explicit TdoaMatrix(int m) : m_(m), v_(static_cast<size_t>(m) * m, 0.0) {}

  int size() const { return m_; }
  double operator()(int i, int j) const { return v_[Index(i, j)]; }
  double &operator()(int i, int j) { return v_[Index(i, j)]; }

 private:
  size_t Index(int i, int j) const { return static_cast<size_t>(i) * m_ + j; }
  int m_;
  std::vector<double> v_;
};

// tau_{i,j}(p) = (|p - mi| - |p - mj|) / nu.
double TrueTdoa(const Point &p, const Point &mi, const Point &mj,
                double nu = kDefaultSpeedOfSound);

// Ground-truth TDOA vector of source p relative to microphone ref.
TdoaVector TrueTdoaVector(const Point &p, const MicArray &array, int ref,
                          double nu = kDefaultSpeedOfSound);

// T = tau_m 1^T - 1 tau_m^T, i.e. T(i,j) = tau_{i,m} - tau_{j,m}.
TdoaMatrix MatrixFromVector(const TdoaVector &v);

// max over (i,j,m) of |T(i,j) - (T(i,m) - T(j,m))|. Zero iff consistent.
double ConsistencyResidual(const TdoaMatrix &t);

// Same residual restricted to the listed vertices.
double ConsistencyResidual(const TdoaMatrix &t, const std::vector<int> &subset);

}  // namespace tdoa

#endif  // TDOA_GEOMETRY_H_

// localization.cc

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

#include "tdoa/localization.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <tuple>

#include "tdoa/errors.h"

namespace tdoa {

namespace {

Point Lift(const Point &p_xy, const MicArray &array, double height) {
  return array.dim() == 3 ? p_xy.WithHeight(height) : p_xy;
}

Point ProjectToDisc(const Point &p, const Point &centre, double radius) {
  double dx = p.x() - centre.x(), dy = p.y() - centre.y();
  double r = std::hypot(dx, dy);
  if (r <= radius) return p;
  return Point(centre.x() + dx * radius / r, centre.y() + dy * radius / r);
}

// Gradient of SiCost with respect to (x, y).
Eigen::Vector2d SiGradient(const Point &p_xy, const TdoaVector &tdoas,
                           const MicArray &array, double nu, double height) {
  Point p = Lift(p_xy, array, height);
  const Point &mr = array[tdoas.ref];
  double dr = Distance(p, mr);
  Eigen::Vector2d ur = Eigen::Vector2d::Zero();
  if (dr > 0.0) ur << (p.x() - mr.x()) / dr, (p.y() - mr.y()) / dr;
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (int m = 0; m < array.size(); ++m) {
    if (m == tdoas.ref) continue;
    double dm = Distance(p, array[m]);
    double resid = dm - dr - nu * tdoas.taus[m];
    Eigen::Vector2d um = Eigen::Vector2d::Zero();
    if (dm > 0.0) um << (p.x() - array[m].x()) / dm, (p.y() - array[m].y()) / dm;
    g += 2.0 * resid * (um - ur);
  }
  return g;
}

}  // namespace

double SiCost(const Point &p_xy, const TdoaVector &tdoas, const MicArray &array,
              double nu, double source_height) {
  Point p = Lift(p_xy, array, source_height);
  double dr = Distance(p, array[tdoas.ref]);
  double j = 0.0;
  for (int m = 0; m < array.size(); ++m) {
    if (m == tdoas.ref) continue;
    double resid = Distance(p, array[m]) - dr - nu * tdoas.taus[m];
    j += resid * resid;
  }
  return j;
}

PositionEstimate SiLocate(const TdoaVector &tdoas, const MicArray &array,
                          double nu, const SiOptions &opts,
                          std::vector<double> *cost_trace) {
  tdoas.Validate();
  if (tdoas.size() != array.size())
    throw UsageError("TDOA vector and array disagree on M");
  if (array.size() < 4) throw UsageError("SI localization needs M >= 4");
  for (double t : tdoas.taus)
    if (!std::isfinite(t)) throw UsageError("TDOA vector has non-finite entries");

  PositionEstimate est;
  est.method = "si";

  // Linear SI initialization.
  const int rows = array.size() - 1;
  const Point &mr = array[tdoas.ref];
  Eigen::MatrixXd a(rows, 2);
  Eigen::VectorXd d(rows), b(rows);
  double z_rel = array.dim() == 3 ? opts.source_height - mr.z() : 0.0;
  for (int m = 0, r = 0; m < array.size(); ++m) {
    if (m == tdoas.ref) continue;
    double ax = array[m].x() - mr.x(), ay = array[m].y() - mr.y();
    double az = array.dim() == 3 ? array[m].z() - mr.z() : 0.0;
    double dm = nu * tdoas.taus[m];
    a(r, 0) = 2.0 * ax;
    a(r, 1) = 2.0 * ay;
    d(r) = dm;
    b(r) = ax * ax + ay * ay + az * az - dm * dm - 2.0 * az * z_rel;
    ++r;
  }
  Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(rows, rows);
  double dd = d.squaredNorm();
  if (dd > 0.0) proj -= d * d.transpose() / dd;
  Eigen::Matrix2d normal = a.transpose() * proj * a;
  Eigen::Vector2d rhs = a.transpose() * proj * b;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(normal);
  double lo = eig.eigenvalues()(0), hi = eig.eigenvalues()(1);
  Point p;
  if (!(hi > 0.0) || lo <= hi / opts.max_condition) {
    est.ill_conditioned = true;
    Point c = array.Centroid();
    p = Point(c.x(), c.y());
  } else {
    Eigen::Vector2d x = normal.ldlt().solve(rhs);
    p = Point(mr.x() + x(0), mr.y() + x(1));
  }
  p = ProjectToDisc(p, opts.room_centre, opts.constraint_radius);

  // Projected gradient descent with backtracking.
  double cost = SiCost(p, tdoas, array, nu, opts.source_height);
  if (cost_trace) cost_trace->push_back(cost);
  est.converged = false;
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    Eigen::Vector2d g = SiGradient(p, tdoas, array, nu, opts.source_height);
    if (g.squaredNorm() == 0.0) {
      est.converged = true;
      break;
    }
    double step = opts.initial_step;
    bool accepted = false;
    Point next;
    double next_cost = cost;
    for (int h = 0; h < opts.max_halvings; ++h, step *= 0.5) {
      next = ProjectToDisc(Point(p.x() - step * g(0), p.y() - step * g(1)),
                           opts.room_centre, opts.constraint_radius);
      next_cost = SiCost(next, tdoas, array, nu, opts.source_height);
      if (next_cost < cost) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      est.converged = true;
      break;
    }
    double moved = std::hypot(next.x() - p.x(), next.y() - p.y());
    p = next;
    cost = next_cost;
    if (cost_trace) cost_trace->push_back(cost);
    if (moved < opts.min_step) {
      est.converged = true;
      ++it;
      break;
    }
  }
  est.position = p;
  est.cost = cost;
  est.iterations = it;
  return est;
}

void SrpGrid::Validate() const {
  if (!(x_max >= x_min) || !(y_max >= y_min))
    throw UsageError("SRP grid bounds are empty");
  if (!(fine > 0.0) || !(coarse >= fine))
    throw UsageError("SRP grid resolutions must satisfy coarse >= fine > 0");
  double ratio = coarse / fine;
  if (std::abs(ratio - std::round(ratio)) > 1e-9)
    throw UsageError("SRP coarse resolution must be a multiple of the fine one");
  if (refine_count < 1) throw UsageError("SRP refine count must be >= 1");
}

SrpFunctional::SrpFunctional(const MicArray &array,
                             std::span<const GccFunction> gcc, double nu)
    : array_(array), gcc_(gcc), nu_(nu) {
  if (static_cast<int>(gcc.size()) != NumPairs(array.size()))
    throw UsageError("SRP-PHAT needs the GCC function of every pair");
}

double SrpFunctional::operator()(const Point &p3) const {
  const int m = array_.size();
  std::vector<double> dist(m);
  for (int i = 0; i < m; ++i) dist[i] = Distance(p3, array_[i]);
  double sum = 0.0;
  int idx = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j, ++idx) {
      const GccFunction &g = gcc_[idx];
      double lag = (dist[i] - dist[j]) / nu_ * g.upsampling * g.sample_rate_hz;
      int n = std::clamp(static_cast<int>(std::lround(lag)), -g.max_lag, g.max_lag);
      sum += g.at(n);
    }
  }
  return sum;
}

namespace {

struct GridEval {
  const SrpFunctional &f;
  const MicArray &array;
  const SrpGrid &grid;
  int nx, ny;

  double At(int a, int b) const {
    Point p(grid.x_min + a * grid.fine, grid.y_min + b * grid.fine);
    return f(Lift(p, array, grid.height));
  }
};

// (value, a, b) ordering: larger value first, then smaller indices.
bool Before(const std::tuple<double, int, int> &l,
            const std::tuple<double, int, int> &r) {
  if (std::get<0>(l) != std::get<0>(r)) return std::get<0>(l) > std::get<0>(r);
  return std::make_pair(std::get<1>(l), std::get<2>(l)) <
         std::make_pair(std::get<1>(r), std::get<2>(r));
}

PositionEstimate MakeEstimate(const SrpGrid &grid,
                              const std::tuple<double, int, int> &best,
                              int evaluations) {
  PositionEstimate est;
  est.position = Point(grid.x_min + std::get<1>(best) * grid.fine,
                       grid.y_min + std::get<2>(best) * grid.fine);
  est.cost = std::get<0>(best);
  est.method = "srp-phat";
  est.iterations = evaluations;
  return est;
}

GridEval MakeEval(const SrpFunctional &f, const MicArray &array,
                  const SrpGrid &grid) {
  grid.Validate();
  int nx = static_cast<int>(std::floor((grid.x_max - grid.x_min) / grid.fine + 1e-9));
  int ny = static_cast<int>(std::floor((grid.y_max - grid.y_min) / grid.fine + 1e-9));
  return GridEval{f, array, grid, nx, ny};
}

}  // namespace

PositionEstimate SrpPhatLocate(std::span<const GccFunction> gcc,
                               const MicArray &array, const SrpGrid &grid,
                               double nu) {
  SrpFunctional f(array, gcc, nu);
  GridEval ev = MakeEval(f, array, grid);
  const int stride = static_cast<int>(std::lround(grid.coarse / grid.fine));

  std::vector<std::tuple<double, int, int>> coarse;
  for (int a = 0; a <= ev.nx; a += stride)
    for (int b = 0; b <= ev.ny; b += stride) coarse.emplace_back(ev.At(a, b), a, b);
  if (coarse.empty()) throw UsageError("SRP coarse grid is empty");
  int top = std::min<int>(grid.refine_count, static_cast<int>(coarse.size()));
  std::partial_sort(coarse.begin(), coarse.begin() + top, coarse.end(), Before);

  std::tuple<double, int, int> best = coarse.front();
  int evaluations = static_cast<int>(coarse.size());
  for (int c = 0; c < top; ++c) {
    auto [v, a0, b0] = coarse[c];
    for (int a = std::max(0, a0 - stride); a <= std::min(ev.nx, a0 + stride); ++a) {
      for (int b = std::max(0, b0 - stride); b <= std::min(ev.ny, b0 + stride); ++b) {
        std::tuple<double, int, int> cand(ev.At(a, b), a, b);
        ++evaluations;
        if (Before(cand, best)) best = cand;
      }
    }
  }
  return MakeEstimate(grid, best, evaluations);
}

PositionEstimate SrpPhatExhaustive(std::span<const GccFunction> gcc,
                                   const MicArray &array, const SrpGrid &grid,
                                   double nu) {
  SrpFunctional f(array, gcc, nu);
  GridEval ev = MakeEval(f, array, grid);
  std::tuple<double, int, int> best(ev.At(0, 0), 0, 0);
  int evaluations = 0;
  for (int a = 0; a <= ev.nx; ++a) {
    for (int b = 0; b <= ev.ny; ++b) {
      std::tuple<double, int, int> cand(ev.At(a, b), a, b);
      ++evaluations;
      if (Before(cand, best)) best = cand;
    }
  }
  return MakeEstimate(grid, best, evaluations);
}

TdoaVector SrpTdoaReadout(const Point &p_hat, const MicArray &array, double nu,
                          double height, int ref) {
  return TrueTdoaVector(Lift(p_hat.Xy(), array, height), array, ref, nu);
}

}  // namespace tdoa

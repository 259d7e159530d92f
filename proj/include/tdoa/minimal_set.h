// tdoa/minimal_set.h

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

// Minimal sets of microphone pairs: the maximum-reliability spanning tree of
// the GCC-PHAT signal graph and the three reference-microphone baselines.

#ifndef TDOA_MINIMAL_SET_H_
#define TDOA_MINIMAL_SET_H_

#include <cstdint>
#include <ostream>
#include <vector>

#include "tdoa/geometry.h"

namespace tdoa {

struct PairReliability {
  int i = 0;
  int j = 0;
  double value = 0.0;
};

// Complete undirected graph over M microphones weighted by reliability.
class ReliabilityGraph {
 public:
  // Every unordered pair must appear exactly once. Throws UsageError on
  // missing, duplicate, self or non-finite entries.
  ReliabilityGraph(int num_mics, const std::vector<PairReliability> &pairs);

  int size() const { return m_; }
  double operator()(int i, int j) const {
    return w_[static_cast<size_t>(i) * m_ + j];
  }

 private:
  int m_;
  std::vector<double> w_;
};

struct Edge {
  int a = 0;  // a < b
  int b = 0;
  bool operator==(const Edge &) const = default;
  auto operator<=>(const Edge &) const = default;
};

inline Edge MakeEdge(int u, int v) { return u < v ? Edge{u, v} : Edge{v, u}; }

class SpanningTree {
 public:
  // Throws UsageError unless the edges form a spanning tree on num_mics.
  SpanningTree(int num_mics, std::vector<Edge> edges);

  int num_vertices() const { return m_; }
  const std::vector<Edge> &edges() const { return edges_; }
  bool Contains(Edge e) const;
  std::vector<std::vector<int>> Adjacency() const;
  double TotalWeight(const ReliabilityGraph &g) const;

 private:
  int m_;
  std::vector<Edge> edges_;  // sorted
};

// Every edge joined to a common reference microphone.
SpanningTree StarTree(int num_mics, int ref);

// Maximum total reliability spanning tree grown from vertex 0. Among equally
// reliable crossing edges the lexicographically smallest (a, b) wins.
SpanningTree PrimMst(const ReliabilityGraph &g);

// One row of the processing order. (i, j) is the row as displayed, larger
// index first; `anchor` is the endpoint reached by earlier rows and `joined`
// is the endpoint this row adds. For the first row the anchor is the endpoint
// with more tree neighbours, ties to the lower index.
struct OrderedEdge {
  int i = 0;
  int j = 0;
  double reliability = 0.0;
  int anchor = 0;
  int joined = 0;
};

// Edges sorted by reliability subject to connectivity: the first row is the
// most reliable tree edge and each later row is the most reliable remaining
// edge touching a vertex of earlier rows.
using EdgeOrder = std::vector<OrderedEdge>;

EdgeOrder OrderEdges(const SpanningTree &t, const ReliabilityGraph &g);

// Ref-A: uniform over microphones, reproducible per seed.
int SelectRefArbitrary(int num_mics, std::uint64_t seed);
// Ref-C: closest to the array centroid, ties to the lowest index.
int SelectRefCentroid(const MicArray &array);
// Ref-R: argmax_m min_{i != m} R(i, m), ties to the lowest index.
int SelectRefReliability(const ReliabilityGraph &g);

// tau_{from,to} measured on one tree edge.
struct EdgeTdoa {
  int from = 0;
  int to = 0;
  double tau = 0.0;
};

// Sums edge TDOAs along tree paths so that taus[m] = tau_{m,ref}.
TdoaVector RewriteToReference(const SpanningTree &t,
                              const std::vector<EdgeTdoa> &edge_tdoas, int ref);

// Debug export: i,j,reliability,in_mst with 1-based indices.
void WriteGraphCsv(std::ostream &os, const ReliabilityGraph &g,
                   const SpanningTree &t);

}  // namespace tdoa

#endif  // TDOA_MINIMAL_SET_H_

// minimal_set.cc

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

#include "tdoa/minimal_set.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <string>

#include "tdoa/errors.h"

namespace tdoa {

namespace {

// true if (w1, e1) should be preferred over (w2, e2).
bool Better(double w1, Edge e1, double w2, Edge e2) {
  if (w1 != w2) return w1 > w2;
  return e1 < e2;
}

std::string PairName(int i, int j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace

ReliabilityGraph::ReliabilityGraph(int num_mics,
                                   const std::vector<PairReliability> &pairs)
    : m_(num_mics),
      w_(static_cast<size_t>(num_mics) * num_mics,
         std::numeric_limits<double>::quiet_NaN()) {
  if (num_mics < 2) throw UsageError("reliability graph needs M >= 2");
  for (const PairReliability &p : pairs) {
    if (p.i < 0 || p.j < 0 || p.i >= m_ || p.j >= m_ || p.i == p.j)
      throw UsageError("invalid pair " + PairName(p.i, p.j));
    if (!std::isfinite(p.value))
      throw UsageError("non-finite reliability for pair " + PairName(p.i, p.j));
    double &slot = w_[static_cast<size_t>(p.i) * m_ + p.j];
    if (!std::isnan(slot))
      throw UsageError("duplicate pair " + PairName(p.i, p.j));
    slot = p.value;
    w_[static_cast<size_t>(p.j) * m_ + p.i] = p.value;
  }
  for (int i = 0; i < m_; ++i) {
    w_[static_cast<size_t>(i) * m_ + i] = 0.0;
    for (int j = i + 1; j < m_; ++j)
      if (std::isnan((*this)(i, j)))
        throw UsageError("missing reliability for pair " + PairName(i, j));
  }
}

SpanningTree::SpanningTree(int num_mics, std::vector<Edge> edges)
    : m_(num_mics), edges_(std::move(edges)) {
  if (num_mics < 2) throw UsageError("spanning tree needs M >= 2");
  if (static_cast<int>(edges_.size()) != m_ - 1)
    throw UsageError("spanning tree needs exactly M - 1 edges");
  for (Edge &e : edges_) {
    e = MakeEdge(e.a, e.b);
    if (e.a < 0 || e.b >= m_ || e.a == e.b)
      throw UsageError("invalid tree edge " + PairName(e.a, e.b));
  }
  std::sort(edges_.begin(), edges_.end());
  // M - 1 edges and no cycle implies connected; check with union-find.
  std::vector<int> parent(m_);
  for (int v = 0; v < m_; ++v) parent[v] = v;
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const Edge &e : edges_) {
    int ra = find(e.a), rb = find(e.b);
    if (ra == rb) throw UsageError("tree edges contain a cycle");
    parent[ra] = rb;
  }
}

bool SpanningTree::Contains(Edge e) const {
  return std::binary_search(edges_.begin(), edges_.end(), MakeEdge(e.a, e.b));
}

std::vector<std::vector<int>> SpanningTree::Adjacency() const {
  std::vector<std::vector<int>> adj(m_);
  for (const Edge &e : edges_) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  return adj;
}

double SpanningTree::TotalWeight(const ReliabilityGraph &g) const {
  double s = 0.0;
  for (const Edge &e : edges_) s += g(e.a, e.b);
  return s;
}

SpanningTree StarTree(int num_mics, int ref) {
  if (ref < 0 || ref >= num_mics) throw UsageError("reference out of range");
  std::vector<Edge> edges;
  for (int m = 0; m < num_mics; ++m)
    if (m != ref) edges.push_back(MakeEdge(m, ref));
  return SpanningTree(num_mics, std::move(edges));
}

SpanningTree PrimMst(const ReliabilityGraph &g) {
  const int m = g.size();
  if (m < 2) throw UsageError("MST needs M >= 2");
  std::vector<bool> in_tree(m, false);
  in_tree[0] = true;
  std::vector<Edge> edges;
  for (int step = 1; step < m; ++step) {
    bool found = false;
    Edge best{};
    double best_w = 0.0;
    for (int u = 0; u < m; ++u) {
      if (!in_tree[u]) continue;
      for (int v = 0; v < m; ++v) {
        if (in_tree[v]) continue;
        Edge e = MakeEdge(u, v);
        if (!found || Better(g(u, v), e, best_w, best)) {
          found = true;
          best = e;
          best_w = g(u, v);
        }
      }
    }
    in_tree[in_tree[best.a] ? best.b : best.a] = true;
    edges.push_back(best);
  }
  return SpanningTree(m, std::move(edges));
}

EdgeOrder OrderEdges(const SpanningTree &t, const ReliabilityGraph &g) {
  if (t.num_vertices() != g.size())
    throw UsageError("tree and graph disagree on M");
  const int m = t.num_vertices();
  std::vector<Edge> remaining = t.edges();
  std::vector<bool> visited(m, false);
  std::vector<int> degree(m, 0);
  for (const Edge &e : remaining) {
    ++degree[e.a];
    ++degree[e.b];
  }
  EdgeOrder order;
  while (!remaining.empty()) {
    int best = -1;
    for (int k = 0; k < static_cast<int>(remaining.size()); ++k) {
      const Edge &e = remaining[k];
      if (!order.empty() && !visited[e.a] && !visited[e.b]) continue;
      if (best < 0 || Better(g(e.a, e.b), e, g(remaining[best].a, remaining[best].b),
                             remaining[best]))
        best = k;
    }
    if (best < 0) throw InternalError("tree order stalled; tree disconnected");
    Edge e = remaining[best];
    remaining.erase(remaining.begin() + best);

    OrderedEdge row;
    row.i = e.b;
    row.j = e.a;
    row.reliability = g(e.a, e.b);
    if (order.empty()) {
      // degree counts include this edge on both sides, so comparing raw
      // degrees compares the remaining neighbours.
      row.anchor = degree[e.b] > degree[e.a] ? e.b : e.a;
      row.joined = row.anchor == e.a ? e.b : e.a;
    } else {
      row.anchor = visited[e.a] ? e.a : e.b;
      row.joined = visited[e.a] ? e.b : e.a;
    }
    visited[e.a] = visited[e.b] = true;
    order.push_back(row);
  }
  return order;
}

int SelectRefArbitrary(int num_mics, std::uint64_t seed) {
  if (num_mics < 2) throw UsageError("reference selection needs M >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(0, num_mics - 1);
  return dist(rng);
}

int SelectRefCentroid(const MicArray &array) {
  Point c = array.Centroid();
  int best = 0;
  double best_d = Distance(array[0], c);
  for (int m = 1; m < array.size(); ++m) {
    double d = Distance(array[m], c);
    if (d < best_d) {
      best_d = d;
      best = m;
    }
  }
  return best;
}

int SelectRefReliability(const ReliabilityGraph &g) {
  int best = -1;
  double best_min = 0.0;
  for (int m = 0; m < g.size(); ++m) {
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < g.size(); ++i)
      if (i != m) worst = std::min(worst, g(i, m));
    if (best < 0 || worst > best_min) {
      best = m;
      best_min = worst;
    }
  }
  return best;
}

TdoaVector RewriteToReference(const SpanningTree &t,
                              const std::vector<EdgeTdoa> &edge_tdoas,
                              int ref) {
  const int m = t.num_vertices();
  if (ref < 0 || ref >= m) throw UsageError("reference out of range");
  // tau[u * m + v] = tau_{u,v} for tree edges.
  std::vector<double> tau(static_cast<size_t>(m) * m,
                          std::numeric_limits<double>::quiet_NaN());
  for (const EdgeTdoa &e : edge_tdoas) {
    if (!t.Contains(MakeEdge(e.from, e.to)))
      throw UsageError("TDOA given for non-tree pair " + PairName(e.from, e.to));
    if (!std::isnan(tau[static_cast<size_t>(e.from) * m + e.to]))
      throw UsageError("duplicate TDOA for pair " + PairName(e.from, e.to));
    tau[static_cast<size_t>(e.from) * m + e.to] = e.tau;
    tau[static_cast<size_t>(e.to) * m + e.from] = -e.tau;
  }
  for (const Edge &e : t.edges())
    if (std::isnan(tau[static_cast<size_t>(e.a) * m + e.b]))
      throw UsageError("missing TDOA for tree edge " + PairName(e.a, e.b));

  TdoaVector out;
  out.ref = ref;
  out.taus.assign(m, 0.0);
  std::vector<bool> seen(m, false);
  auto adj = t.Adjacency();
  std::queue<int> q;
  q.push(ref);
  seen[ref] = true;
  while (!q.empty()) {
    int p = q.front();
    q.pop();
    for (int c : adj[p]) {
      if (seen[c]) continue;
      seen[c] = true;
      out.taus[c] = tau[static_cast<size_t>(c) * m + p] + out.taus[p];
      q.push(c);
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw UsageError("tree does not reach every microphone");
  return out;
}

void WriteGraphCsv(std::ostream &os, const ReliabilityGraph &g,
                   const SpanningTree &t) {
  os << "i,j,reliability,in_mst\n";
  auto old_precision = os.precision(12);
  for (int i = 0; i < g.size(); ++i)
    for (int j = i + 1; j < g.size(); ++j)
      os << i + 1 << ',' << j + 1 << ',' << g(i, j) << ','
         << (t.Contains({i, j}) ? 1 : 0) << '\n';
  os.precision(old_precision);
}

}  // namespace tdoa

// minimal_set_test.cc

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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "oracles.h"
#include "test_util.h"
#include "tdoa/errors.h"

namespace tdoa {
namespace {

using testing::RandomArray;
using testing::RandomGraph;
using testing::RandomPoint;
using testing::Uniform;
using testing::UniformInt;

TEST(ReliabilityGraph, WorkedExampleIsStoredSymmetrically) {
  ReliabilityGraph g = testing::ExampleGraph();
  EXPECT_EQ(g.size(), 5);
  EXPECT_EQ(g(0, 1), 0.05);
  EXPECT_EQ(g(3, 2), 0.8);
  EXPECT_EQ(g(4, 0), 0.6);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(g(i, i), 0.0);
    for (int j = 0; j < 5; ++j) EXPECT_EQ(g(i, j), g(j, i));
  }
}

TEST(ReliabilityGraph, RejectsMalformedInput) {
  EXPECT_THROW(ReliabilityGraph(3, {{0, 1, 0.5}, {0, 2, 0.5}}), UsageError);
  EXPECT_THROW(ReliabilityGraph(2, {{0, 1, 0.5}, {1, 0, 0.5}}), UsageError);
  EXPECT_THROW(ReliabilityGraph(2, {{0, 0, 0.5}}), UsageError);
  EXPECT_THROW(ReliabilityGraph(2, {{0, 1, std::nan("")}}), UsageError);
  ReliabilityGraph two(2, {{1, 0, 0.3}});
  EXPECT_EQ(two(0, 1), 0.3);
}

TEST(PrimMst, WorkedExample) {
  SpanningTree t = PrimMst(testing::ExampleGraph());
  // {(3,4), (2,3), (4,1), (1,5)} in 1-based terms.
  std::vector<Edge> expect = {{0, 3}, {0, 4}, {1, 2}, {2, 3}};
  EXPECT_EQ(t.edges(), expect);
  EXPECT_NEAR(t.TotalWeight(testing::ExampleGraph()), 2.5, 1e-15);
}

TEST(PrimMst, TwoVertices) {
  SpanningTree t = PrimMst(ReliabilityGraph(2, {{0, 1, 0.1}}));
  EXPECT_EQ(t.edges(), (std::vector<Edge>{{0, 1}}));
}

TEST(PrimMst, RejectsSingleVertex) {
  EXPECT_THROW(PrimMst(ReliabilityGraph(1, {})), UsageError);
}

TEST(PrimMst, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 400; ++trial) {
    int m = 3 + trial % 4;
    ReliabilityGraph g = RandomGraph(rng, m, trial % 3 == 0 ? 3 : 0);
    auto trees = testing::AllSpanningTrees(m);
    if (m == 5) ASSERT_EQ(trees.size(), 125u);
    double best = -1.0;
    for (const auto &t : trees) best = std::max(best, testing::TreeWeight(g, t));
    EXPECT_EQ(PrimMst(g).TotalWeight(g), best) << "M=" << m;
  }
}

TEST(PrimMst, TieBreakIsDeterministic) {
  // All weights equal: Prim from vertex 0 with the smallest-edge rule is the
  // star around vertex 0.
  std::vector<PairReliability> pairs;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) pairs.push_back({i, j, 0.5});
  SpanningTree t = PrimMst(ReliabilityGraph(5, pairs));
  EXPECT_EQ(t.edges(), StarTree(5, 0).edges());
}

TEST(SpanningTree, Validation) {
  EXPECT_THROW(SpanningTree(3, {{0, 1}}), UsageError);
  EXPECT_THROW(SpanningTree(3, {{0, 1}, {0, 1}}), UsageError);
  EXPECT_THROW(SpanningTree(4, {{0, 1}, {1, 2}, {0, 2}}), UsageError);
  EXPECT_NO_THROW(SpanningTree(3, {{1, 2}, {0, 2}}));
}

TEST(OrderEdges, WorkedExample) {
  ReliabilityGraph g = testing::ExampleGraph();
  EdgeOrder order = OrderEdges(PrimMst(g), g);
  ASSERT_EQ(order.size(), 4u);
  const double r[] = {0.8, 0.6, 0.5, 0.6};
  const int v[4][2] = {{4, 3}, {3, 2}, {4, 1}, {5, 1}};
  for (int h = 0; h < 4; ++h) {
    EXPECT_EQ(order[h].reliability, r[h]);
    EXPECT_EQ(order[h].i + 1, v[h][0]);
    EXPECT_EQ(order[h].j + 1, v[h][1]);
  }
  // Step by step, the new microphone joins an earlier one.
  EXPECT_EQ(order[1].joined, 1);
  EXPECT_EQ(order[1].anchor, 2);
  EXPECT_EQ(order[2].joined, 0);
  EXPECT_EQ(order[2].anchor, 3);
  EXPECT_EQ(order[3].joined, 4);
  EXPECT_EQ(order[3].anchor, 0);
}

TEST(OrderEdges, StarIsDescending) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    ReliabilityGraph g = RandomGraph(rng, 6);
    EdgeOrder order = OrderEdges(StarTree(6, trial % 6), g);
    for (size_t h = 1; h < order.size(); ++h)
      EXPECT_GE(order[h - 1].reliability, order[h].reliability);
  }
}

TEST(OrderEdges, PathWithMaximumAtTheEnd) {
  // Path 0-1-2-3-4 with the heaviest edge at the end (3,4).
  std::vector<PairReliability> pairs;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) pairs.push_back({i, j, 0.01});
  auto set = [&](int a, int b, double w) {
    for (auto &p : pairs)
      if (p.i == a && p.j == b) p.value = w;
  };
  set(0, 1, 0.7);
  set(1, 2, 0.2);
  set(2, 3, 0.5);
  set(3, 4, 0.9);
  ReliabilityGraph g(5, pairs);
  SpanningTree path(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  EdgeOrder order = OrderEdges(path, g);
  std::vector<double> r;
  for (const auto &row : order) r.push_back(row.reliability);
  EXPECT_EQ(r, testing::BestConstrainedOrder(path, g));
  EXPECT_EQ(r, (std::vector<double>{0.9, 0.5, 0.2, 0.7}));
}

TEST(OrderEdges, MatchesConstrainedOrderOracle) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    int m = 2 + trial % 6;
    ReliabilityGraph g = RandomGraph(rng, m);
    SpanningTree t = testing::RandomTree(rng, m);
    EdgeOrder order = OrderEdges(t, g);
    std::vector<double> r;
    std::vector<bool> seen(m, false);
    for (size_t h = 0; h < order.size(); ++h) {
      const OrderedEdge &row = order[h];
      r.push_back(row.reliability);
      EXPECT_EQ(row.reliability, g(row.i, row.j));
      EXPECT_TRUE(t.Contains(MakeEdge(row.i, row.j)));
      EXPECT_EQ(MakeEdge(row.i, row.j), MakeEdge(row.anchor, row.joined));
      if (h > 0) {
        EXPECT_TRUE(seen[row.anchor]);
        EXPECT_FALSE(seen[row.joined]);
      }
      seen[row.anchor] = seen[row.joined] = true;
    }
    EXPECT_EQ(r, testing::BestConstrainedOrder(t, g));
  }
}

TEST(SelectRefArbitrary, ReproducibleAndUniform) {
  EXPECT_THROW(SelectRefArbitrary(1, 0), UsageError);
  EXPECT_EQ(SelectRefArbitrary(6, 42), SelectRefArbitrary(6, 42));
  std::vector<int> counts(6, 0);
  const int n = 10000;
  for (int s = 0; s < n; ++s) {
    int r = SelectRefArbitrary(6, static_cast<std::uint64_t>(s));
    ASSERT_GE(r, 0);
    ASSERT_LT(r, 6);
    ++counts[r];
  }
  const double p = 1.0 / 6.0;
  const double sigma = std::sqrt(n * p * (1 - p));
  for (int c : counts) EXPECT_LE(std::abs(c - n * p), 5 * sigma);
}

TEST(SelectRefCentroid, Examples) {
  MicArray square({Point(1, 1), Point(-1, 1), Point(-1, -1), Point(1, -1)});
  EXPECT_EQ(SelectRefCentroid(square), 0);
  MicArray centred({Point(1, 1), Point(-1, 1), Point(-1, -1), Point(1, -1),
                    Point(0.01, 0.0)});
  EXPECT_EQ(SelectRefCentroid(centred), 4);
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    MicArray a = RandomArray(rng, 2 + trial % 7, trial % 2 ? 3 : 2);
    Point c = a.Centroid();
    int best = 0;
    for (int m = 1; m < a.size(); ++m)
      if (Distance(a[m], c) < Distance(a[best], c)) best = m;
    EXPECT_EQ(SelectRefCentroid(a), best);
  }
}

TEST(SelectRefReliability, WorkedExampleAndOracle) {
  EXPECT_EQ(SelectRefReliability(testing::ExampleGraph()), 2);
  EXPECT_EQ(SelectRefReliability(ReliabilityGraph(2, {{0, 1, 0.4}})), 0);
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 300; ++trial) {
    int m = 2 + trial % 7;
    ReliabilityGraph g = RandomGraph(rng, m, trial % 2 ? 5 : 0);
    int best = -1;
    double best_v = -1.0;
    for (int r = 0; r < m; ++r) {
      double mn = 2.0;
      for (int i = 0; i < m; ++i)
        if (i != r) mn = std::min(mn, g(i, r));
      if (mn > best_v) {
        best_v = mn;
        best = r;
      }
    }
    int got = SelectRefReliability(g);
    EXPECT_EQ(got, best);
    // Invariant under a strictly monotone transform of every weight.
    std::vector<PairReliability> pairs;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) pairs.push_back({i, j, std::exp(3.0 * g(i, j)) - 7.0});
    EXPECT_EQ(SelectRefReliability(ReliabilityGraph(m, pairs)), got);
  }
}

TEST(RewriteToReference, ChainAndStar) {
  MicArray a({Point(0, 0), Point(2, 0), Point(2, 2), Point(0, 2), Point(1, 3)});
  Point p(0.3, 1.7);
  SpanningTree t = PrimMst(testing::ExampleGraph());
  std::vector<EdgeTdoa> e;
  for (const Edge &x : t.edges()) e.push_back({x.b, x.a, TrueTdoa(p, a[x.b], a[x.a])});
  TdoaVector v = RewriteToReference(t, e, 0);
  EXPECT_EQ(v.ref, 0);
  EXPECT_EQ(v.taus[0], 0.0);
  // tau_21 = tau_23 + tau_34 + tau_41 along the tree path.
  EXPECT_EQ(v.taus[1], TrueTdoa(p, a[1], a[2]) + (TrueTdoa(p, a[2], a[3]) + TrueTdoa(p, a[3], a[0])));
  TdoaVector truth = TrueTdoaVector(p, a, 0);
  for (int m = 0; m < 5; ++m) EXPECT_NEAR(v.taus[m], truth.taus[m], 1e-17);

  SpanningTree star = StarTree(5, 0);
  std::vector<EdgeTdoa> se;
  for (int m = 1; m < 5; ++m) se.push_back({m, 0, 0.001 * m});
  TdoaVector sv = RewriteToReference(star, se, 0);
  for (int m = 1; m < 5; ++m) EXPECT_EQ(sv.taus[m], 0.001 * m);
}

TEST(RewriteToReference, ReproducesEdgeTdoas) {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 300; ++trial) {
    int m = 2 + trial % 7;
    SpanningTree t = testing::RandomTree(rng, m);
    std::vector<EdgeTdoa> e;
    for (const Edge &x : t.edges())
      e.push_back(UniformInt(rng, 0, 1) ? EdgeTdoa{x.a, x.b, Uniform(rng, -0.01, 0.01)}
                                        : EdgeTdoa{x.b, x.a, Uniform(rng, -0.01, 0.01)});
    int ref = trial % m;
    TdoaVector v = RewriteToReference(t, e, ref);
    EXPECT_EQ(v.taus[ref], 0.0);
    for (const EdgeTdoa &x : e) EXPECT_NEAR(v.taus[x.from] - v.taus[x.to], x.tau, 1e-15);
  }
}

TEST(RewriteToReference, RejectsMissingOrForeignEdges) {
  SpanningTree t(3, {{0, 1}, {1, 2}});
  EXPECT_THROW(RewriteToReference(t, {{0, 1, 0.0}}, 0), UsageError);
  EXPECT_THROW(RewriteToReference(t, {{0, 1, 0.0}, {0, 2, 0.0}}, 0), UsageError);
}

TEST(WriteGraphCsv, OneBasedEdgeList) {
  ReliabilityGraph g(3, {{0, 1, 0.5}, {0, 2, 0.25}, {1, 2, 0.125}});
  std::ostringstream os;
  WriteGraphCsv(os, g, PrimMst(g));
  EXPECT_EQ(os.str(), "i,j,reliability,in_mst\n1,2,0.5,1\n1,3,0.25,1\n2,3,0.125,0\n");
}

}  // namespace
}  // namespace tdoa

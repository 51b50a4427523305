#include <gtest/gtest.h>

#include <algorithm>

#include "generators.hpp"
#include "oracles.hpp"
#include "pwk/graph.hpp"
#include "shapes.hpp"

using namespace pwk;
using shapes::make;

namespace {

VertexList sorted(VertexList v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(Graph, DefaultLabelsAndLookup) {
  Graph g(3);
  EXPECT_EQ(g.label(2), "2");
  EXPECT_EQ(g.find("1"), 1);
  EXPECT_FALSE(g.find("x"));
  EXPECT_TRUE(g.well_formed());
}

TEST(Graph, RejectsSelfLoopsAndUnknownIds) {
  Graph g(2);
  EXPECT_THROW(g.insert_edge(0, 0), Error);
  EXPECT_THROW(g.insert_edge(0, 5), Error);
  EXPECT_THROW(g.insert_vertex("1"), Error);
}

TEST(Graph, InsertEdgeReportsNovelty) {
  Graph g(2);
  EXPECT_TRUE(g.insert_edge(0, 1));
  EXPECT_FALSE(g.insert_edge(1, 0));
  EXPECT_EQ(g.edge_count(), 1u);
}

TEST(Graph, DeleteVertexFromTriangleLeavesEdge) {
  for (Vertex v = 0; v < 3; ++v) {
    Graph h = delete_vertex(shapes::complete(3), v);
    EXPECT_EQ(h.vertex_count(), 2);
    EXPECT_EQ(h.edge_count(), 1u);
  }
}

TEST(Graph, DeleteOnlyVertexGivesEmptyGraph) {
  Graph h = delete_vertex(Graph(1), 0);
  EXPECT_EQ(h.vertex_count(), 0);
  EXPECT_TRUE(h.empty());
}

TEST(Graph, DeleteFromCycleGivesPath) {
  Graph h = delete_vertex(shapes::cycle(4), 2);
  EXPECT_EQ(h.vertex_count(), 3);
  EXPECT_EQ(h.edge_count(), 2u);
  // Labels survive recompaction: the middle of the path is "0".
  EXPECT_EQ(h.degree(*h.find("0")), 2);
  EXPECT_EQ(h.label(2), "3");
}

TEST(Graph, DeleteUnknownVertexThrows) { EXPECT_THROW(delete_vertex(Graph(2), 4), Error); }

TEST(Graph, ContractPathEdgeGivesK2) {
  Graph h = contract_edge(shapes::path(3), 0, 1);
  EXPECT_EQ(h.vertex_count(), 2);
  EXPECT_EQ(h.edge_count(), 1u);
  EXPECT_EQ(h.label(0), "0");
}

TEST(Graph, ContractCycleEdgeGivesTriangle) {
  Graph h = contract_edge(shapes::cycle(4), 1, 2);
  EXPECT_EQ(h.vertex_count(), 3);
  EXPECT_EQ(h.edge_count(), 3u);
}

TEST(Graph, ContractNonEdgeThrows) { EXPECT_THROW(contract_edge(shapes::path(3), 0, 2), Error); }

TEST(Graph, AddEdgeIsIdempotent) {
  Graph g = shapes::path(3);
  EXPECT_EQ(add_edge(g, 0, 1), g);
  EXPECT_EQ(add_edge(g, 0, 2).edge_count(), 3u);
}

TEST(Graph, SimplicialExamples) {
  Graph claw = shapes::star(3);
  EXPECT_TRUE(is_simplicial(claw, 1));
  EXPECT_FALSE(is_simplicial(claw, 0));
  Graph k4 = shapes::complete(4);
  for (Vertex v = 0; v < 4; ++v) EXPECT_TRUE(is_simplicial(k4, v));
  EXPECT_TRUE(is_simplicial(Graph(1), 0));
}

TEST(Graph, SpecialNeighborExamples) {
  // v = 0 with N(v) = {w=1, p=2, q=3}, only {p, q} present.
  Graph g = make(4, {{0, 1}, {0, 2}, {0, 3}, {2, 3}});
  EXPECT_EQ(special_neighbors(g, 0), VertexList{1});
  EXPECT_TRUE(is_almost_simplicial(g, 0));

  Graph tri = shapes::complete(3);
  EXPECT_EQ(sorted(special_neighbors(tri, 0)), (VertexList{1, 2}));

  Graph claw = shapes::star(3);
  EXPECT_TRUE(special_neighbors(claw, 0).empty());
  EXPECT_FALSE(is_almost_simplicial(claw, 0));
}

TEST(Graph, SimplicialIffAllNeighborsSpecialAwayFromDegreeTwo) {
  gen::Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    Graph g = gen::any_graph(rng, gen::uniform(rng, 1, 8));
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      // At degree two both neighbours are special even when non-adjacent.
      if (g.degree(v) == 0 || g.degree(v) == 2) continue;
      VertexList nb(g.neighbors(v).begin(), g.neighbors(v).end());
      EXPECT_EQ(is_simplicial(g, v), sorted(special_neighbors(g, v)) == nb);
    }
  }
}

TEST(Graph, DisjointPathExamples) {
  Graph k25 = shapes::complete_bipartite(2, 5);
  EXPECT_EQ(count_internally_disjoint_paths(k25, 0, 1, 10), 5);
  EXPECT_EQ(count_internally_disjoint_paths(k25, 0, 1, 3), 3);
  EXPECT_EQ(count_internally_disjoint_paths(shapes::path(4), 0, 3, 10), 1);
  Graph two = make(4, {{0, 1}, {2, 3}});
  EXPECT_EQ(count_internally_disjoint_paths(two, 0, 2, 10), 0);
  EXPECT_THROW(count_internally_disjoint_paths(shapes::path(2), 0, 1, 3), Error);
  EXPECT_THROW(count_internally_disjoint_paths(shapes::path(2), 0, 0, 3), Error);
}

TEST(Graph, DisjointPathsMatchBruteForce) {
  gen::Rng rng(12);
  int checked = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const int n = gen::uniform(rng, 2, 7);
    Graph g = gen::any_graph(rng, n);
    Vertex v = gen::uniform(rng, 0, n - 1), w = gen::uniform(rng, 0, n - 1);
    if (v == w || g.has_edge(v, w)) continue;
    EXPECT_EQ(count_internally_disjoint_paths(g, v, w, n), oracle::disjoint_paths(g, v, w));
    ++checked;
  }
  EXPECT_GT(checked, 200);
}

TEST(Graph, SimplicialComponentExamples) {
  Graph claw = shapes::star(3);
  auto comps = simplicial_components(claw, VertexList{0});
  EXPECT_EQ(comps.size(), 3u);
  for (const auto& c : comps) EXPECT_EQ(c.size(), 1u);

  // S = {0, 1} nonadjacent, W = {2} adjacent to both.
  Graph g = make(3, {{0, 2}, {1, 2}});
  EXPECT_TRUE(simplicial_components(g, VertexList{0, 1}).empty());

  EXPECT_TRUE(simplicial_components(shapes::complete(3), VertexList{0, 1, 2}).empty());
}

TEST(Graph, DeletionMatchesInducedSubgraphByLabel) {
  gen::Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen::uniform(rng, 1, 9);
    Graph g = gen::any_graph(rng, n);
    VertexList gone = gen::random_subset(rng, n, gen::uniform(rng, 0, n));
    Graph h = delete_vertices(g, gone);
    ASSERT_TRUE(h.well_formed());
    EXPECT_EQ(h.vertex_count(), n - static_cast<int>(gone.size()));
    for (auto [a, b] : h.edges()) EXPECT_TRUE(g.has_edge(*g.find(h.label(a)), *g.find(h.label(b))));
    for (auto [a, b] : g.edges()) {
      auto ha = h.find(g.label(a)), hb = h.find(g.label(b));
      if (ha && hb) {
        EXPECT_TRUE(h.has_edge(*ha, *hb));
      }
    }
  }
}

TEST(Instance, ModulatorAndTargetInvariants) {
  EXPECT_THROW(Instance(Graph(2), {}, -1), Error);
  EXPECT_THROW(Instance(Graph(2), {3}, 0), Error);
  Instance inst(shapes::path(4), {1, 2}, 1);
  EXPECT_EQ(inst.modulator_size(), 2);
  Instance smaller = delete_vertices(inst, VertexList{1});
  EXPECT_EQ(smaller.modulator_size(), 1);
  EXPECT_TRUE(smaller.in_modulator(*smaller.graph().find("2")));
}

TEST(WeightedGraph, RejectsNonPositiveWeights) {
  EXPECT_THROW(WeightedGraph(Graph(2), {1, 0}), Error);
  EXPECT_THROW(WeightedGraph(Graph(2), {1}), Error);
  WeightedGraph wg(Graph(3), {1, 2, 3});
  EXPECT_EQ(wg.total_weight(VertexList{0, 2}), 4);
}

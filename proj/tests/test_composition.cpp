#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "generators.hpp"
#include "oracles.hpp"
#include "pwk/composition.hpp"
#include "pwk/width.hpp"
#include "shapes.hpp"

using namespace pwk;
using shapes::make;

namespace {

PreparedBatch prepared(std::vector<Cutwidth3Instance> batch) {
  auto prep = prepare_batch(std::move(batch));
  EXPECT_TRUE(std::holds_alternative<PreparedBatch>(prep));
  return std::get<PreparedBatch>(prep);
}

VertexList identity(int n) {
  VertexList v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

bool is_clique(const Graph& g, const VertexList& side) {
  for (std::size_t x = 0; x < side.size(); ++x)
    for (std::size_t y = x + 1; y < side.size(); ++y)
      if (!g.has_edge(side[x], side[y])) return false;
  return true;
}

bool is_cobipartite(const Graph& g, const CobipartitePartition& p) {
  return p.a.size() + p.b.size() == static_cast<std::size_t>(g.vertex_count()) && is_clique(g, p.a) &&
         is_clique(g, p.b);
}

// P5 (cutwidth 1) and a triangle plus a disjoint edge (cutwidth 2) share a key.
Graph path5() { return make(5, {{0, 2}, {0, 4}, {1, 2}, {1, 3}}); }
Graph triangle_and_edge() { return make(5, {{0, 4}, {1, 2}, {1, 3}, {2, 3}}); }

}  // namespace

TEST(EquivalenceKey, PathAndCycle) {
  auto p3 = equivalence_key({shapes::path(3), 1});
  EXPECT_FALSE(p3.malformed);
  EXPECT_EQ(p3.n, 3);
  EXPECT_EQ(p3.m, 2u);
  EXPECT_EQ(p3.k, 1);
  EXPECT_EQ(p3.degree_histogram, (std::array<int, 3>{2, 1, 0}));

  auto c4 = equivalence_key({shapes::cycle(4), 2});
  EXPECT_EQ(c4.m, 4u);
  EXPECT_EQ(c4.degree_histogram, (std::array<int, 3>{0, 4, 0}));
}

TEST(EquivalenceKey, IsomorphicGraphsShareKey) {
  Graph a = shapes::complete(4);
  Graph b = make(4, {{3, 2}, {1, 0}, {0, 2}, {1, 3}, {0, 3}, {1, 2}});
  EXPECT_EQ(equivalence_key({a, 3}), equivalence_key({b, 3}));
  EXPECT_NE(equivalence_key({a, 3}), equivalence_key({a, 2}));
}

TEST(EquivalenceKey, MalformedInputsCollapse) {
  auto sentinel = EquivalenceKey::sentinel();
  EXPECT_EQ(equivalence_key({Graph(3), 0}), sentinel);                  // isolated vertices
  EXPECT_EQ(equivalence_key({shapes::star(4), 1}), sentinel);           // degree 4
  EXPECT_EQ(equivalence_key({shapes::path(3), 5}), sentinel);           // k > m
  EXPECT_EQ(equivalence_key({shapes::path(3), -1}), sentinel);
  EXPECT_TRUE(sentinel.malformed);
}

TEST(EquivalenceKey, HistogramSumsMatch) {
  gen::Rng rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    Graph g = gen::random_degree3(rng, gen::uniform(rng, 2, 9));
    auto key = equivalence_key({g, gen::uniform(rng, 0, static_cast<int>(g.edge_count()))});
    if (key.malformed) continue;
    const auto& h = key.degree_histogram;
    EXPECT_EQ(h[0] + h[1] + h[2], key.n);
    EXPECT_EQ(static_cast<std::size_t>(h[0] + 2 * h[1] + 3 * h[2]), 2 * key.m);
  }
}

TEST(PrepareBatch, PadsToPowerOfTwo) {
  auto b = prepared({{shapes::path(3), 1}, {shapes::path(3), 1}, {make(3, {{1, 0}, {1, 2}}), 1}});
  EXPECT_EQ(b.t(), 4);
  EXPECT_EQ(b.log_t(), 2);
  EXPECT_EQ(b.original_count, 3);
  EXPECT_EQ(b.instances[3].graph, b.instances[2].graph);

  auto one = prepared({{shapes::path(3), 1}});
  EXPECT_EQ(one.t(), 1);
  EXPECT_EQ(one.log_t(), 0);
}

TEST(PrepareBatch, SolvesDirectlyWhenTooFewNodes) {
  std::vector<Cutwidth3Instance> batch(16, Cutwidth3Instance{shapes::path(3), 1});
  auto prep = prepare_batch(batch);
  ASSERT_TRUE(std::holds_alternative<SolvedBatch>(prep));
  EXPECT_TRUE(std::get<SolvedBatch>(prep).answer);

  std::vector<Cutwidth3Instance> no(16, Cutwidth3Instance{shapes::complete(3), 1});
  auto prep_no = prepare_batch(no);
  ASSERT_TRUE(std::holds_alternative<SolvedBatch>(prep_no));
  EXPECT_FALSE(std::get<SolvedBatch>(prep_no).answer);
}

TEST(PrepareBatch, AllMalformedIsNo) {
  auto prep = prepare_batch({{shapes::star(4), 1}, {Graph(2), 0}});
  ASSERT_TRUE(std::holds_alternative<SolvedBatch>(prep));
  EXPECT_FALSE(std::get<SolvedBatch>(prep).answer);
}

TEST(PrepareBatch, RejectsEmptyAndMixedBatches) {
  EXPECT_THROW(prepare_batch({}), Error);
  EXPECT_THROW(prepare_batch({{shapes::path(3), 1}, {shapes::cycle(4), 1}}), Error);
  EXPECT_THROW(prepare_batch({{shapes::path(3), 1}, {shapes::path(3), 2}}), Error);
}

TEST(Compose, SizesForTwoPaths) {
  auto batch = prepared({{shapes::path(3), 1}, {shapes::path(3), 1}});
  ComposedInstance ci = compose(batch);
  // A: 2 * (3 + 1); B: 2 selectors + 3 nodes + 3 pair vertices.
  EXPECT_EQ(ci.gadget.graph().vertex_count(), 16);
  EXPECT_EQ(ci.partition.a.size(), 8u);
  EXPECT_EQ(ci.partition.b.size(), 8u);
  EXPECT_EQ(ci.b_selectors.size(), 2u);
  EXPECT_EQ(ci.b_nodes.size(), 3u);
  EXPECT_EQ(ci.b_edges.size(), 3u);
  EXPECT_TRUE(is_cobipartite(ci.gadget.graph(), ci.partition));
}

TEST(Compose, SizesFollowFormula) {
  gen::Rng rng(72);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = gen::uniform(rng, 3, 6);
    Graph g = gen::random_degree3(rng, n);
    Cutwidth3Instance inst{g, gen::uniform(rng, 0, static_cast<int>(g.edge_count()))};
    if (equivalence_key(inst).malformed) continue;
    const int count = gen::uniform(rng, 1, 4);
    std::vector<Cutwidth3Instance> batch(static_cast<std::size_t>(count), inst);
    for (auto& b : batch) b.graph = gen::shuffled(rng, b.graph);
    auto prep = prepare_batch(batch);
    if (!std::holds_alternative<PreparedBatch>(prep)) continue;
    const auto& pb = std::get<PreparedBatch>(prep);
    ComposedInstance ci = compose(pb);
    const int t = pb.t(), lt = pb.log_t();
    EXPECT_EQ(ci.partition.a.size(), static_cast<std::size_t>(t * (n + 1)));
    EXPECT_EQ(ci.partition.b.size(), static_cast<std::size_t>(2 * lt + n + n * (n - 1) / 2));
    EXPECT_TRUE(is_cobipartite(ci.gadget.graph(), ci.partition));
  }
}

TEST(Compose, SingleInstanceHasNoSelectors) {
  auto batch = prepared({{shapes::path(3), 1}});
  ComposedInstance ci = compose(batch);
  EXPECT_TRUE(ci.b_selectors.empty());
  const Weight n = 3;
  EXPECT_EQ(ci.threshold, n * n * n * n + n * n * n * n * n * n + n * n * n + 1);
}

TEST(Compose, SelectorsEncodeInstanceIndex) {
  std::vector<Cutwidth3Instance> batch(4, Cutwidth3Instance{shapes::cycle(4), 2});
  ComposedInstance ci = compose(prepared(batch));
  ASSERT_EQ(ci.log_t, 2);
  const Graph& g = ci.gadget.graph();
  for (int i = 0; i < 4; ++i) {
    Vertex d = ci.dummy[static_cast<std::size_t>(i)];
    for (int q = 0; q < 2; ++q) {
      const bool bit = (i >> q) & 1;
      EXPECT_EQ(g.has_edge(d, ci.select_one[q]), bit) << i << " " << q;
      EXPECT_EQ(g.has_edge(d, ci.select_zero[q]), !bit) << i << " " << q;
    }
  }
  // Instance 2: bit 0 clear, bit 1 set.
  Vertex v = ci.instance_vertex[2][0];
  EXPECT_TRUE(g.has_edge(v, ci.select_zero[0]));
  EXPECT_TRUE(g.has_edge(v, ci.select_one[1]));
  EXPECT_FALSE(g.has_edge(v, ci.select_one[0]));
  EXPECT_FALSE(g.has_edge(v, ci.select_zero[1]));
}

TEST(Compose, WeightsAndThreshold) {
  auto batch = prepared({{shapes::path(3), 1}, {shapes::path(3), 1}});
  ComposedInstance ci = compose(batch);
  const Weight n = 3;
  const Weight n3 = n * n * n, n5 = n3 * n * n, n6 = n5 * n;
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(ci.gadget.weight(ci.dummy[i]), n6);
    for (int j = 0; j < 3; ++j) EXPECT_EQ(ci.gadget.weight(ci.instance_vertex[i][j]), n3);
  }
  EXPECT_EQ(ci.gadget.weight(ci.select_one[0]), n5);
  EXPECT_EQ(ci.gadget.weight(ci.select_zero[0]), n5);
  for (int j = 0; j < 3; ++j) EXPECT_EQ(ci.gadget.weight(ci.node_rep[j]), n3 - ci.node_degree[j]);
  for (auto [uv, e] : ci.edge_rep) EXPECT_EQ(ci.gadget.weight(e), 2);
  EXPECT_EQ(ci.threshold, 2 * (n * n3 + n6) + n3 + n5 * 1 + 1);
}

TEST(Compose, LabelsNameTheirRole) {
  auto batch = prepared({{shapes::path(3), 1}, {shapes::path(3), 1}});
  ComposedInstance ci = compose(batch);
  const Graph& g = ci.gadget.graph();
  EXPECT_EQ(g.label(ci.instance_vertex[1][2]), "v1_2");
  EXPECT_EQ(g.label(ci.dummy[0]), "d0");
  EXPECT_EQ(g.label(ci.select_one[0]), "a0");
  EXPECT_EQ(g.label(ci.select_zero[0]), "b0");
  EXPECT_EQ(g.label(ci.node_rep[2]), "x2");
  EXPECT_EQ(g.label(ci.edge_rep.at({0, 2})), "e0_2");
}

TEST(Compose, NodesSortedByDegree) {
  Graph g = make(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}});  // degrees 3, 2, 2, 1
  ComposedInstance ci = compose(prepared({{g, 2}}));
  EXPECT_EQ(ci.node_degree, (std::vector<int>{1, 2, 2, 3}));
  EXPECT_EQ(ci.original_vertex[0][0], 3);
  EXPECT_EQ(ci.original_vertex[0][3], 0);
}

TEST(EWeight, ClosedFormExamples) {
  EXPECT_EQ(e_weight_closed_form(2, 1, 0), 88);
  EXPECT_EQ(e_weight_closed_form(3, 2, 2), 1892);
  EXPECT_EQ(e_weight_closed_form(3, 2, 5) - e_weight_closed_form(3, 2, 2), 3);
  EXPECT_THROW(e_weight_closed_form(5000, 1, 0), Error);
}

TEST(EWeight, FirstStepMatchesClosedForm) {
  gen::Rng rng(73);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = gen::uniform(rng, 3, 5);
    Graph g = gen::random_degree3(rng, n);
    Cutwidth3Instance inst{g, 0};
    if (equivalence_key(inst).malformed) continue;
    std::vector<Cutwidth3Instance> batch(static_cast<std::size_t>(gen::uniform(rng, 1, 2)), inst);
    auto prep = prepare_batch(batch);
    if (!std::holds_alternative<PreparedBatch>(prep)) continue;
    const auto& pb = std::get<PreparedBatch>(prep);
    ComposedInstance ci = compose(pb);
    VertexList pi = identity(n);
    std::shuffle(pi.begin(), pi.end(), rng);
    const Weight first = e_weight_simulated(ci, 0, pi, 0);
    EXPECT_EQ(first, e_weight_closed_form(n, pb.t(), ci.node_degree[pi[0]]));
    const auto profile = e_weight_profile(ci, 0, pi);
    ASSERT_EQ(profile.size(), static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
      const long long cut = prefix_cut(ci.sorted_graphs[0], pi, s + 1);
      EXPECT_EQ(profile[s], e_weight_closed_form(n, pb.t(), cut)) << "step " << s;
    }
  }
}

TEST(EWeight, StepOutOfRangeThrows) {
  ComposedInstance ci = compose(prepared({{shapes::path(3), 1}}));
  EXPECT_THROW(e_weight_simulated(ci, 0, identity(3), 3), Error);
  EXPECT_THROW(e_weight_simulated(ci, 0, VertexList{0, 0, 1}, 0), Error);
}

TEST(CanonicalOrdering, CostDominatesEveryStep) {
  std::vector<Cutwidth3Instance> batch(2, Cutwidth3Instance{shapes::cycle(4), 2});
  ComposedInstance ci = compose(prepared(batch));
  const VertexList pi = identity(4);
  const Weight cost = canonical_ordering_cost(ci, 1, pi);
  for (Weight step : e_weight_profile(ci, 1, pi)) EXPECT_GE(cost, step);
  EXPECT_GE(cost, e_weight_closed_form(4, 2, 0));
}

TEST(VerifyComposition, AllYes) {
  auto batch = prepared({{shapes::path(3), 1}, {shapes::path(3), 1}});
  ComposedInstance ci = compose(batch);
  auto v = verify_composition(ci, batch);
  EXPECT_TRUE(v.any_yes);
  EXPECT_TRUE(v.gadget_yes);
  EXPECT_TRUE(v.equivalent);
  ASSERT_TRUE(v.yes_instance);
  EXPECT_EQ(*v.yes_instance, 0);
  EXPECT_LE(*v.yes_instance_cost, ci.threshold);
  EXPECT_EQ(v.cutwidths, (std::vector<int>{1, 1}));
}

TEST(VerifyComposition, AllNo) {
  auto batch = prepared({{shapes::complete(4), 3}, {shapes::complete(4), 3}});
  auto v = verify_composition(compose(batch), batch);
  EXPECT_EQ(v.cutwidths, (std::vector<int>{4, 4}));
  EXPECT_FALSE(v.any_yes);
  EXPECT_FALSE(v.gadget_yes);
  EXPECT_TRUE(v.equivalent);
  EXPECT_GT(v.weighted_treewidth, v.threshold);
}

TEST(VerifyComposition, SingleYesMemberCarriesTheBatch) {
  ASSERT_EQ(equivalence_key({path5(), 1}), equivalence_key({triangle_and_edge(), 1}));
  for (int yes_at : {0, 1}) {
    std::vector<Cutwidth3Instance> batch(2, Cutwidth3Instance{triangle_and_edge(), 1});
    batch[static_cast<std::size_t>(yes_at)].graph = path5();
    auto pb = prepared(batch);
    ComposedInstance ci = compose(pb);
    auto v = verify_composition(ci, pb);
    EXPECT_EQ(v.cutwidths[yes_at], 1);
    EXPECT_EQ(v.cutwidths[1 - yes_at], 2);
    EXPECT_TRUE(v.gadget_yes);
    EXPECT_TRUE(v.equivalent);
    EXPECT_EQ(v.yes_instance, yes_at);
    EXPECT_LE(*v.yes_instance_cost, ci.threshold);
    EXPECT_EQ(v.leading_instance, yes_at);
  }
}

TEST(ExpandWeights, WeightBecomesClique) {
  ExpandedGraph ex = expand_weights(WeightedGraph(Graph(1), {3}));
  EXPECT_EQ(ex.graph.vertex_count(), 3);
  EXPECT_EQ(ex.graph.edge_count(), 3u);
  EXPECT_EQ(ex.graph.label(0), "0");
  EXPECT_EQ(ex.graph.label(1), "0#1");
  ASSERT_EQ(ex.copies.size(), 1u);
  EXPECT_EQ(ex.copies[0].size(), 3u);
}

TEST(ExpandWeights, UnitWeightsAreIdentity) {
  Graph g = shapes::cycle(5);
  ExpandedGraph ex = expand_weights(WeightedGraph(g, std::vector<Weight>(5, 1)));
  EXPECT_EQ(ex.graph, g);
}

TEST(ExpandWeights, CopiesShareClosedNeighbourhood) {
  Graph g = shapes::path(3);
  ExpandedGraph ex = expand_weights(WeightedGraph(g, {2, 1, 3}));
  EXPECT_EQ(ex.graph.vertex_count(), 6);
  for (Vertex a : ex.copies[0])
    for (Vertex c : ex.copies[2]) EXPECT_FALSE(ex.graph.has_edge(a, c));
  for (Vertex a : ex.copies[0]) EXPECT_TRUE(ex.graph.has_edge(a, ex.copies[1][0]));
}

TEST(ExpandWeights, CobipartiteWidthsCoincide) {
  gen::Rng rng(74);
  for (int trial = 0; trial < 60; ++trial) {
    auto [g, part] = gen::random_cobipartite(rng, gen::uniform(rng, 1, 5), 0.5);
    WeightedGraph wg(g, gen::random_weights(rng, g.vertex_count(), 2));
    ExpandedGraph ex = expand_weights(wg);
    const int pw = pathwidth_exact(ex.graph).width;
    EXPECT_EQ(pw, treewidth_exact(ex.graph).width);
    EXPECT_EQ(pw + 1, weighted_treewidth_exact(wg).width);
  }
}

TEST(ModulatorInstance, RemovingBLeavesClique) {
  auto batch = prepared({{make(2, {{0, 1}}), 1}});
  ComposedInstance ci = compose(batch);
  Instance inst = to_modulator_instance(ci);
  EXPECT_EQ(inst.target(), ci.threshold - 1);
  Weight b_weight = 0;
  for (Vertex v : ci.partition.b) b_weight += ci.gadget.weight(v);
  EXPECT_EQ(inst.modulator_size(), b_weight);
  std::vector<bool> mask(static_cast<std::size_t>(inst.graph().vertex_count()), false);
  for (Vertex s : inst.modulator()) mask[s] = true;
  VertexList rest;
  for (Vertex v = 0; v < inst.graph().vertex_count(); ++v)
    if (!mask[v]) rest.push_back(v);
  for (std::size_t x = 0; x < rest.size(); ++x)
    for (std::size_t y = x + 1; y < rest.size(); ++y) ASSERT_TRUE(inst.graph().has_edge(rest[x], rest[y]));
}

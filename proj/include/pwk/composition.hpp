#pragma once

// Composition of many CUTWIDTH3 instances into one weighted co-bipartite
// graph whose weighted treewidth is at most k' exactly when some input has
// cutwidth at most k. Includes the elimination-weight arithmetic and the
// verification helpers.

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pwk/decomposition.hpp"
#include "pwk/graph.hpp"
#include "pwk/width.hpp"

namespace pwk {

/// Graph with all degrees in {1, 2, 3} and a cutwidth target k <= |E|.
struct Cutwidth3Instance {
  Graph graph;
  int target = 0;
};

inline Validation validate_cutwidth3(const Cutwidth3Instance& inst) {
  const Graph& g = inst.graph;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) < 1 || g.degree(v) > 3)
      return Validation::fail("vertex '" + g.label(v) + "' has degree " + std::to_string(g.degree(v)));
  if (inst.target < 0) return Validation::fail("negative cutwidth target");
  if (static_cast<std::size_t>(inst.target) > g.edge_count()) return Validation::fail("target exceeds edge count");
  if (g.vertex_count() == 0) return Validation::fail("empty graph");
  return {};
}

/// Class key: instances compose together iff their keys are equal. All
/// malformed instances share the sentinel key.
struct EquivalenceKey {
  bool malformed = false;
  int n = 0;
  std::size_t m = 0;
  int k = 0;
  std::array<int, 3> degree_histogram{};  // counts of degree 1, 2, 3

  static EquivalenceKey sentinel() {
    EquivalenceKey key;
    key.malformed = true;
    return key;
  }

  friend auto operator<=>(const EquivalenceKey&, const EquivalenceKey&) = default;
};

inline EquivalenceKey equivalence_key(const Cutwidth3Instance& inst) {
  if (!validate_cutwidth3(inst)) return EquivalenceKey::sentinel();
  EquivalenceKey key;
  key.n = inst.graph.vertex_count();
  key.m = inst.graph.edge_count();
  key.k = inst.target;
  for (Vertex v = 0; v < key.n; ++v) ++key.degree_histogram[static_cast<std::size_t>(inst.graph.degree(v) - 1)];
  return key;
}

/// Batch padded to a power of two by repeating its last instance.
struct PreparedBatch {
  std::vector<Cutwidth3Instance> instances;
  int original_count = 0;
  EquivalenceKey key;

  int t() const { return static_cast<int>(instances.size()); }
  int log_t() const { return std::countr_zero(static_cast<unsigned>(instances.size())); }
};

/// Batches too small in n (n < 2 or n < log t) or entirely malformed are
/// answered directly.
struct SolvedBatch {
  bool answer = false;
  std::vector<int> cutwidths;
  std::string reason;
};

using BatchPreparation = std::variant<PreparedBatch, SolvedBatch>;

inline BatchPreparation prepare_batch(std::vector<Cutwidth3Instance> instances, int cutwidth_cap = kDefaultCutwidthCap) {
  if (instances.empty()) throw Error("prepare_batch: empty batch");
  const EquivalenceKey key = equivalence_key(instances.front());
  for (const auto& inst : instances)
    if (equivalence_key(inst) != key) throw Error("prepare_batch: instances belong to different equivalence classes");
  if (key.malformed) return SolvedBatch{false, {}, "all instances malformed"};

  const auto count = static_cast<unsigned>(instances.size());
  const unsigned t = std::bit_ceil(count);
  const int log_t = std::countr_zero(t);
  if (key.n < 2 || key.n < log_t) {
    SolvedBatch s;
    s.reason = "n = " + std::to_string(key.n) + " below max(2, log t = " + std::to_string(log_t) + ")";
    for (const auto& inst : instances) {
      int cw = cutwidth_exact(inst.graph, cutwidth_cap).width;
      s.cutwidths.push_back(cw);
      s.answer = s.answer || cw <= inst.target;
    }
    return s;
  }
  PreparedBatch b;
  b.original_count = static_cast<int>(count);
  b.key = key;
  while (instances.size() < t) instances.push_back(instances.back());
  b.instances = std::move(instances);
  return b;
}

/// The weighted co-bipartite gadget. Instance indices i run 0..t-1; node
/// numbers j run 0..n-1 in the shared degree-sorted order. Bit q of i (least
/// significant first) selects a_q when set and b_q otherwise.
struct ComposedInstance {
  WeightedGraph gadget;
  CobipartitePartition partition;  // A = instance vertices + dummies, B = selectors + nodes + edges
  Weight threshold = 0;            // k'
  int t = 0;
  int n = 0;
  int k = 0;
  int log_t = 0;

  std::vector<VertexList> instance_vertex;  // [i][j] -> v_{i,j}
  VertexList dummy;                         // [i] -> d_i
  VertexList select_one;                    // [q] -> a_q
  VertexList select_zero;                   // [q] -> b_q
  VertexList node_rep;                      // [j] -> x_j
  std::map<std::pair<int, int>, Vertex> edge_rep;  // (u < v) -> e_{u,v}
  VertexList b_selectors, b_nodes, b_edges;

  std::vector<int> node_degree;             // deg(j)
  std::vector<VertexList> original_vertex;  // [i][j] -> vertex id of node j in G_i
  std::vector<Graph> sorted_graphs;         // G_i with vertex j = node j
};

namespace detail {

inline Weight checked_mul(Weight a, Weight b) {
  Weight r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("composition weights overflow 64-bit integers");
  return r;
}

inline Weight checked_add(Weight a, Weight b) {
  Weight r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw Error("composition weights overflow 64-bit integers");
  return r;
}

inline Weight ipow(Weight base, int e) {
  Weight r = 1;
  for (int i = 0; i < e; ++i) r = checked_mul(r, base);
  return r;
}

/// Vertices of g ordered by (degree, id).
inline VertexList degree_order(const Graph& g) {
  VertexList order(static_cast<std::size_t>(g.vertex_count()));
  for (Vertex v = 0; v < g.vertex_count(); ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return g.degree(a) < g.degree(b); });
  return order;
}

}  // namespace detail

/// Weight of the closed neighbourhood at an instance-vertex step, from the closed form: t(n^4 + n^6) + n^3 + n^5 log t + cut.
inline Weight e_weight_closed_form(int n, int t, long long cut) {
  const int log_t = std::countr_zero(static_cast<unsigned>(t));
  Weight base = detail::checked_mul(t, detail::checked_add(detail::ipow(n, 4), detail::ipow(n, 6)));
  base = detail::checked_add(base, detail::ipow(n, 3));
  base = detail::checked_add(base, detail::checked_mul(detail::ipow(n, 5), log_t));
  return detail::checked_add(base, cut);
}

inline ComposedInstance compose(const PreparedBatch& batch) {
  const int t = batch.t();
  if (t == 0 || !std::has_single_bit(static_cast<unsigned>(t))) throw Error("compose: batch size is not a power of two");
  const EquivalenceKey key = batch.key;
  if (key.malformed) throw Error("compose: malformed batch");
  for (const auto& inst : batch.instances)
    if (equivalence_key(inst) != key) throw Error("compose: instances belong to different equivalence classes");
  const int n = key.n;
  const int log_t = batch.log_t();
  if (n < 2 || n < log_t) throw Error("compose: need n >= max(2, log t)");

  ComposedInstance ci;
  ci.t = t;
  ci.n = n;
  ci.k = key.k;
  ci.log_t = log_t;

  const Weight n3 = detail::ipow(n, 3), n5 = detail::ipow(n, 5), n6 = detail::ipow(n, 6);
  std::vector<std::string> labels;
  std::vector<Weight> weights;
  auto add = [&](std::string label, Weight w) {
    labels.push_back(std::move(label));
    weights.push_back(w);
    return static_cast<Vertex>(labels.size() - 1);
  };

  for (int i = 0; i < t; ++i) {
    const Graph& g = batch.instances[static_cast<std::size_t>(i)].graph;
    VertexList order = detail::degree_order(g);
    std::vector<Vertex> position(order.size());
    for (std::size_t j = 0; j < order.size(); ++j) position[order[j]] = static_cast<Vertex>(j);
    std::vector<Edge> edges;
    for (auto [u, v] : g.edges()) edges.emplace_back(std::min(position[u], position[v]), std::max(position[u], position[v]));
    ci.sorted_graphs.push_back(Graph::from_edges(n, edges));
    ci.original_vertex.push_back(std::move(order));
  }
  for (int j = 0; j < n; ++j) ci.node_degree.push_back(ci.sorted_graphs.front().degree(j));

  for (int i = 0; i < t; ++i) {
    VertexList row;
    for (int j = 0; j < n; ++j) row.push_back(add("v" + std::to_string(i) + "_" + std::to_string(j), n3));
    ci.instance_vertex.push_back(std::move(row));
  }
  for (int i = 0; i < t; ++i) ci.dummy.push_back(add("d" + std::to_string(i), n6));
  for (int q = 0; q < log_t; ++q) {
    ci.select_one.push_back(add("a" + std::to_string(q), n5));
    ci.select_zero.push_back(add("b" + std::to_string(q), n5));
    ci.b_selectors.push_back(ci.select_one.back());
    ci.b_selectors.push_back(ci.select_zero.back());
  }
  for (int j = 0; j < n; ++j) {
    ci.node_rep.push_back(add("x" + std::to_string(j), n3 - ci.node_degree[static_cast<std::size_t>(j)]));
    ci.b_nodes.push_back(ci.node_rep.back());
  }
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      Vertex e = add("e" + std::to_string(u) + "_" + std::to_string(v), 2);
      ci.edge_rep[{u, v}] = e;
      ci.b_edges.push_back(e);
    }

  std::vector<Edge> edges;
  for (int i = 0; i < t; ++i) ci.partition.a.insert(ci.partition.a.end(), ci.instance_vertex[i].begin(), ci.instance_vertex[i].end());
  ci.partition.a.insert(ci.partition.a.end(), ci.dummy.begin(), ci.dummy.end());
  for (auto* part : {&ci.b_selectors, &ci.b_nodes, &ci.b_edges})
    ci.partition.b.insert(ci.partition.b.end(), part->begin(), part->end());
  for (const VertexList* side : {&ci.partition.a, &ci.partition.b})
    for (std::size_t x = 0; x < side->size(); ++x)
      for (std::size_t y = x + 1; y < side->size(); ++y) edges.emplace_back((*side)[x], (*side)[y]);

  for (int i = 0; i < t; ++i) {
    VertexList selectors;
    for (int q = 0; q < log_t; ++q)
      selectors.push_back((i >> q & 1) ? ci.select_one[static_cast<std::size_t>(q)] : ci.select_zero[static_cast<std::size_t>(q)]);
    for (Vertex s : selectors) {
      edges.emplace_back(ci.dummy[i], s);
      for (Vertex a : ci.instance_vertex[i]) edges.emplace_back(a, s);
    }
    for (int j = 0; j < n; ++j) edges.emplace_back(ci.instance_vertex[i][j], ci.node_rep[j]);
    for (Vertex x : ci.b_nodes) edges.emplace_back(ci.dummy[i], x);
    for (Vertex e : ci.b_edges) edges.emplace_back(ci.dummy[i], e);
    for (auto [u, v] : ci.sorted_graphs[i].edges()) {
      Vertex e = ci.edge_rep.at({u, v});
      edges.emplace_back(ci.instance_vertex[i][u], e);
      edges.emplace_back(ci.instance_vertex[i][v], e);
    }
  }

  Graph g = Graph::from_edges(static_cast<int>(labels.size()), edges);
  Graph named = Graph::with_labels(labels);
  for (auto [u, v] : g.edges()) named.insert_edge(u, v);
  ci.gadget = WeightedGraph(std::move(named), std::move(weights));
  ci.threshold = detail::checked_add(e_weight_closed_form(n, t, 0), key.k);
  return ci;
}

/// Cut after the first `prefix` positions of `pi` (a permutation of node
/// numbers) in graph g.
inline int prefix_cut(const Graph& g, const VertexList& pi, int prefix) {
  std::vector<char> placed(static_cast<std::size_t>(g.vertex_count()), 0);
  for (int j = 0; j < prefix; ++j) placed[pi[static_cast<std::size_t>(j)]] = 1;
  int cut = 0;
  for (auto [u, v] : g.edges()) cut += placed[u] != placed[v];
  return cut;
}

namespace detail {

inline void check_instance_permutation(const ComposedInstance& ci, int i, const VertexList& pi) {
  if (i < 0 || i >= ci.t) throw Error("instance index out of range");
  if (!is_permutation_of_vertices(ci.sorted_graphs[static_cast<std::size_t>(i)], pi))
    throw Error("pi is not a permutation of the node numbers");
}

/// v_{i,pi(0..n-1)}, then d_i, then everything else in id order (or in the
/// given order when `suffix` is nonempty).
inline EliminationOrdering instance_first_ordering(const ComposedInstance& ci, int i, const VertexList& pi,
                                                   const VertexList& suffix) {
  EliminationOrdering order;
  std::vector<char> used(static_cast<std::size_t>(ci.gadget.graph().vertex_count()), 0);
  for (Vertex j : pi) {
    Vertex v = ci.instance_vertex[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    order.order.push_back(v);
    used[v] = 1;
  }
  order.order.push_back(ci.dummy[static_cast<std::size_t>(i)]);
  used[ci.dummy[static_cast<std::size_t>(i)]] = 1;
  if (!suffix.empty()) {
    for (Vertex v : suffix) {
      if (!ci.gadget.graph().contains(v) || used[v]) throw Error("suffix is not a permutation of the remaining vertices");
      used[v] = 1;
      order.order.push_back(v);
    }
  } else {
    for (Vertex v = 0; v < ci.gadget.graph().vertex_count(); ++v)
      if (!used[v]) order.order.push_back(v);
  }
  if (order.order.size() != static_cast<std::size_t>(ci.gadget.graph().vertex_count()))
    throw Error("suffix is not a permutation of the remaining vertices");
  return order;
}

}  // namespace detail

/// Weight of N[v_{i,pi(j)}] at its elimination, for every step j, when the
/// gadget eliminates v_{i,pi(0)}, v_{i,pi(1)}, ... in order.
inline std::vector<Weight> e_weight_profile(const ComposedInstance& ci, int i, const VertexList& pi) {
  detail::check_instance_permutation(ci, i, pi);
  auto costs = elimination_step_costs(ci.gadget, detail::instance_first_ordering(ci, i, pi, {}));
  costs.resize(static_cast<std::size_t>(ci.n));
  return costs;
}

/// Same quantity read off a simulated elimination, at 0-based step j.
inline Weight e_weight_simulated(const ComposedInstance& ci, int i, const VertexList& pi, int step) {
  if (step < 0 || step >= ci.n) throw Error("e_weight_simulated: step out of range");
  return e_weight_profile(ci, i, pi)[static_cast<std::size_t>(step)];
}

/// Cost of eliminating instance i's vertices along pi, then d_i, then the
/// rest (in id order, or in `suffix` order when given).
inline Weight canonical_ordering_cost(const ComposedInstance& ci, int i, const VertexList& pi,
                                      const VertexList& suffix = {}) {
  detail::check_instance_permutation(ci, i, pi);
  return elimination_cost(ci.gadget, detail::instance_first_ordering(ci, i, pi, suffix));
}

/// Unweighted graph where each vertex of weight w becomes w mutually
/// adjacent twins sharing its closed neighbourhood. The first copy keeps the
/// original label; further copies are labelled "<label>#<c>".
struct ExpandedGraph {
  Graph graph;
  std::vector<VertexList> copies;  // original vertex -> its copies
};

inline ExpandedGraph expand_weights(const WeightedGraph& wg) {
  const Graph& g = wg.graph();
  ExpandedGraph out;
  std::vector<std::string> labels;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    VertexList mine;
    for (Weight c = 0; c < wg.weight(v); ++c) {
      mine.push_back(static_cast<Vertex>(labels.size()));
      labels.push_back(c == 0 ? g.label(v) : g.label(v) + "#" + std::to_string(c));
    }
    out.copies.push_back(std::move(mine));
  }
  if (labels.size() > static_cast<std::size_t>(std::numeric_limits<int>::max() / 2))
    throw Error("expand_weights: expanded graph too large");
  std::vector<Edge> edges;
  for (const auto& mine : out.copies)
    for (std::size_t a = 0; a < mine.size(); ++a)
      for (std::size_t b = a + 1; b < mine.size(); ++b) edges.emplace_back(mine[a], mine[b]);
  for (auto [u, v] : g.edges())
    for (Vertex x : out.copies[u])
      for (Vertex y : out.copies[v]) edges.emplace_back(x, y);
  Graph shape = Graph::from_edges(static_cast<int>(labels.size()), edges);
  out.graph = Graph::with_labels(std::move(labels));
  for (auto [u, v] : shape.edges()) out.graph.insert_edge(u, v);
  return out;
}

/// Unweighted instance: expanded gadget, S = expanded B side, target k' - 1.
inline Instance to_modulator_instance(const ComposedInstance& ci) {
  if (ci.threshold - 1 > std::numeric_limits<int>::max()) throw Error("to_modulator_instance: k' too large");
  ExpandedGraph ex = expand_weights(ci.gadget);
  VertexList s;
  for (Vertex b : ci.partition.b) s.insert(s.end(), ex.copies[b].begin(), ex.copies[b].end());
  std::sort(s.begin(), s.end());
  return Instance(std::move(ex.graph), std::move(s), static_cast<int>(ci.threshold - 1));
}

struct CompositionVerdict {
  Weight weighted_treewidth = 0;
  Weight threshold = 0;
  EliminationOrdering gadget_ordering;
  std::vector<int> cutwidths;
  std::vector<LinearLayout> layouts;
  bool gadget_yes = false;
  bool any_yes = false;
  bool equivalent = false;
  /// First instance with cutwidth <= k and the cost of its canonical ordering.
  std::optional<int> yes_instance;
  std::optional<Weight> yes_instance_cost;
  /// Instance of the first vertex eliminated by the optimal gadget ordering.
  std::optional<int> leading_instance;
};

/// Solves both sides exactly: the gadget with the co-bipartite fast path and
/// every batch member with the cutwidth DP.
inline CompositionVerdict verify_composition(const ComposedInstance& ci, const PreparedBatch& batch,
                                             int cobipartite_cap = kDefaultCobipartiteCap,
                                             int cutwidth_cap = kDefaultCutwidthCap) {
  CompositionVerdict r;
  r.threshold = ci.threshold;
  auto wtw = weighted_treewidth_exact(ci.gadget, ci.partition, cobipartite_cap);
  r.weighted_treewidth = wtw.width;
  r.gadget_ordering = wtw.ordering;
  r.gadget_yes = wtw.width <= ci.threshold;
  for (int i = 0; i < ci.t; ++i) {
    const auto& inst = batch.instances[static_cast<std::size_t>(i)];
    auto cw = cutwidth_exact(inst.graph, cutwidth_cap);
    r.cutwidths.push_back(cw.width);
    r.layouts.push_back(cw.layout);
    if (cw.width <= inst.target && !r.yes_instance) {
      r.yes_instance = i;
      // Node number of each original vertex, then the layout in node numbers.
      std::vector<Vertex> node_of(static_cast<std::size_t>(ci.n));
      for (int j = 0; j < ci.n; ++j) node_of[ci.original_vertex[i][j]] = j;
      VertexList pi;
      for (Vertex v : cw.layout.order) pi.push_back(node_of[v]);
      r.yes_instance_cost = canonical_ordering_cost(ci, i, pi);
    }
  }
  r.any_yes = r.yes_instance.has_value();
  r.equivalent = r.gadget_yes == r.any_yes;
  if (!r.gadget_ordering.order.empty()) {
    Vertex first = r.gadget_ordering.order.front();
    for (int i = 0; i < ci.t; ++i) {
      const auto& row = ci.instance_vertex[static_cast<std::size_t>(i)];
      if (std::find(row.begin(), row.end(), first) != row.end() || ci.dummy[i] == first) r.leading_instance = i;
    }
  }
  return r;
}

}  // namespace pwk

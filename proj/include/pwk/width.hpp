#pragma once

// Exact subset-DP solvers for pathwidth, treewidth, weighted treewidth and
// cutwidth, with certificates. Desk scale only: every solver takes a vertex
// cap and throws CapExceeded above it.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "pwk/decomposition.hpp"
#include "pwk/graph.hpp"

namespace pwk {

inline constexpr int kDefaultPathwidthCap = 20;
inline constexpr int kDefaultTreewidthCap = 20;
inline constexpr int kDefaultCutwidthCap = 18;
inline constexpr int kDefaultCobipartiteCap = 22;
// Tables are 2^n entries; this is the hard ceiling regardless of the cap.
inline constexpr int kMaxTableBits = 28;

struct PathwidthResult {
  int width = 0;
  VertexList ordering;
  PathDecomposition decomposition;
};

struct TreewidthResult {
  int width = 0;
  EliminationOrdering ordering;
};

struct WeightedTreewidthResult {
  Weight width = 0;
  EliminationOrdering ordering;
};

struct CutwidthResult {
  int width = 0;
  LinearLayout layout;
};

/// Vertex partition of a co-bipartite graph into two cliques.
struct CobipartitePartition {
  VertexList a;
  VertexList b;
};

namespace detail {

using Mask = std::uint64_t;

inline Mask bit(int v) { return Mask{1} << v; }

inline void check_cap(const char* what, int n, int cap) {
  if (n > cap || n > kMaxTableBits) throw CapExceeded(what, n, std::min(cap, kMaxTableBits));
}

inline std::vector<Mask> adjacency_masks(const Graph& g) {
  if (g.vertex_count() > 64) throw CapExceeded("bitmask adjacency", g.vertex_count(), 64);
  std::vector<Mask> adj(static_cast<std::size_t>(g.vertex_count()), 0);
  for (auto [u, v] : g.edges()) {
    adj[u] |= bit(v);
    adj[v] |= bit(u);
  }
  return adj;
}

/// Sum of weights over a mask using eight byte-indexed lookup tables.
class MaskWeigher {
 public:
  explicit MaskWeigher(const std::vector<Weight>& w) {
    for (int chunk = 0; chunk < 8; ++chunk)
      for (int byte = 0; byte < 256; ++byte) {
        Weight s = 0;
        for (int b = 0; b < 8; ++b) {
          std::size_t v = static_cast<std::size_t>(chunk * 8 + b);
          if ((byte >> b & 1) && v < w.size()) s += w[v];
        }
        table_[chunk][byte] = s;
      }
  }

  Weight operator()(Mask m) const {
    Weight s = 0;
    for (int chunk = 0; chunk < 8; ++chunk) s += table_[chunk][(m >> (8 * chunk)) & 0xff];
    return s;
  }

 private:
  std::array<std::array<Weight, 256>, 8> table_{};
};

/// Vertices outside eliminated ∪ {v} reachable from v through eliminated
/// vertices: the neighbourhood of v at its elimination time.
inline Mask elimination_neighborhood(const std::vector<Mask>& adj, Mask eliminated, int v) {
  Mask reached = adj[v] & eliminated;
  Mask frontier = reached;
  Mask outside = adj[v] & ~eliminated;
  while (frontier) {
    int x = std::countr_zero(frontier);
    frontier &= frontier - 1;
    outside |= adj[x] & ~eliminated;
    Mask fresh = adj[x] & eliminated & ~reached;
    reached |= fresh;
    frontier |= fresh;
  }
  return outside & ~bit(v);
}

/// Generic min-max ordering DP: value(S) = max(step(S \ v, v), value(S \ v))
/// minimised over v in S, lowest id winning ties. Returns the optimal order.
template <class Value, class StepCost>
std::pair<Value, VertexList> ordering_dp(int n, StepCost&& step) {
  const std::size_t states = std::size_t{1} << n;
  std::vector<Value> best(states, std::numeric_limits<Value>::max());
  std::vector<std::int8_t> choice(states, -1);
  best[0] = 0;
  for (std::size_t s = 1; s < states; ++s) {
    const Mask set = s;
    for (Mask rest = set; rest; rest &= rest - 1) {
      int v = std::countr_zero(rest);
      Mask before = set & ~bit(v);
      Value prior = best[before];
      if (prior >= best[s]) continue;
      Value c = std::max(prior, step(before, v));
      if (c < best[s]) {
        best[s] = c;
        choice[s] = static_cast<std::int8_t>(v);
      }
    }
  }
  VertexList order(static_cast<std::size_t>(n));
  Mask s = states - 1;
  for (int i = n - 1; i >= 0; --i) {
    int v = choice[s];
    order[static_cast<std::size_t>(i)] = v;
    s &= ~bit(v);
  }
  return {best[states - 1], order};
}

/// Same recurrence when the step cost depends only on the resulting set:
/// value(S) = max(cost(S), min over v of value(S \ v)).
template <class Value, class StateCost>
std::pair<Value, VertexList> prefix_dp(int n, StateCost&& state_cost) {
  const std::size_t states = std::size_t{1} << n;
  std::vector<Value> best(states, 0);
  std::vector<std::int8_t> choice(states, -1);
  for (std::size_t s = 1; s < states; ++s) {
    Value lowest = std::numeric_limits<Value>::max();
    for (Mask rest = s; rest; rest &= rest - 1) {
      int v = std::countr_zero(rest);
      Value prior = best[s & ~bit(v)];
      if (prior < lowest) {
        lowest = prior;
        choice[s] = static_cast<std::int8_t>(v);
      }
    }
    best[s] = std::max(lowest, state_cost(static_cast<Mask>(s)));
  }
  VertexList order(static_cast<std::size_t>(n));
  Mask s = states - 1;
  for (int i = n - 1; i >= 0; --i) {
    int v = choice[s];
    order[static_cast<std::size_t>(i)] = v;
    s &= ~bit(v);
  }
  return {best[states - 1], order};
}

}  // namespace detail

/// Exact pathwidth through the vertex separation number.
inline PathwidthResult pathwidth_exact(const Graph& g, int cap = kDefaultPathwidthCap) {
  const int n = g.vertex_count();
  detail::check_cap("pathwidth_exact", n, cap);
  PathwidthResult r;
  if (n == 0) {
    r.decomposition.bags.emplace_back();
    return r;
  }
  const auto adj = detail::adjacency_masks(g);
  const detail::Mask full = (detail::Mask{1} << n) - 1;
  // Boundary of a prefix: its vertices with a neighbour still to come.
  auto boundary = [&](detail::Mask s) {
    int count = 0;
    for (detail::Mask m = s; m; m &= m - 1)
      if (adj[std::countr_zero(m)] & ~s & full) ++count;
    return count;
  };
  auto [w, order] = detail::prefix_dp<int>(n, boundary);
  r.width = w;
  r.ordering = std::move(order);
  r.decomposition = path_decomposition_from_ordering(g, r.ordering);
  return r;
}

/// Max degree at elimination time along `pi`.
inline int elimination_width(const Graph& g, const EliminationOrdering& pi) {
  if (!is_permutation_of_vertices(g, pi.order)) throw Error("ordering is not a permutation of the vertices");
  return decomposition_width(tree_decomposition_from_ordering(g, pi));
}

/// Exact treewidth: min over elimination orderings of the max elimination degree.
inline TreewidthResult treewidth_exact(const Graph& g, int cap = kDefaultTreewidthCap) {
  const int n = g.vertex_count();
  detail::check_cap("treewidth_exact", n, cap);
  TreewidthResult r;
  if (n == 0) return r;
  const auto adj = detail::adjacency_masks(g);
  auto step = [&](detail::Mask before, int v) {
    return std::popcount(detail::elimination_neighborhood(adj, before, v));
  };
  auto [w, order] = detail::ordering_dp<int>(n, step);
  r.width = w;
  r.ordering.order = std::move(order);
  return r;
}

/// Closed-neighbourhood weight at each elimination step along `pi`.
inline std::vector<Weight> elimination_step_costs(const WeightedGraph& wg, const EliminationOrdering& pi) {
  const Graph& g = wg.graph();
  if (!is_permutation_of_vertices(g, pi.order)) throw Error("ordering is not a permutation of the vertices");
  const int n = g.vertex_count();
  std::vector<std::vector<char>> adj(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = 1;
  std::vector<char> gone(static_cast<std::size_t>(n), 0);
  std::vector<Weight> costs;
  costs.reserve(static_cast<std::size_t>(n));
  VertexList nb;
  for (Vertex v : pi.order) {
    nb.clear();
    for (Vertex y = 0; y < n; ++y)
      if (!gone[y] && adj[v][y]) nb.push_back(y);
    Weight c = wg.weight(v);
    for (Vertex y : nb) c += wg.weight(y);
    costs.push_back(c);
    for (std::size_t a = 0; a < nb.size(); ++a)
      for (std::size_t b = a + 1; b < nb.size(); ++b) adj[nb[a]][nb[b]] = adj[nb[b]][nb[a]] = 1;
    gone[v] = 1;
  }
  return costs;
}

/// Cost of an elimination ordering: max weight of N[v] when v is eliminated.
inline Weight elimination_cost(const WeightedGraph& wg, const EliminationOrdering& pi) {
  Weight best = 0;
  for (Weight c : elimination_step_costs(wg, pi)) best = std::max(best, c);
  return best;
}

namespace detail {

inline void check_clique_side(const Graph& g, const VertexList& side, const char* name) {
  if (!is_clique(g, side)) throw Error(std::string("co-bipartite partition: side ") + name + " is not a clique");
}

/// Elimination DP restricted to orderings that start with all of A. Since A
/// is a clique, the eliminated part of A is connected and adjacent to every
/// remaining A vertex, so the neighbourhood at elimination is simply the
/// union of the neighbourhoods minus what is gone.
inline WeightedTreewidthResult cobipartite_fast_path(const WeightedGraph& wg, const CobipartitePartition& part,
                                                     int cap) {
  const Graph& g = wg.graph();
  const int n = g.vertex_count();
  std::vector<char> side(static_cast<std::size_t>(n), 0);
  for (Vertex v : part.a) {
    if (!g.contains(v) || side[v]) throw Error("co-bipartite partition: A is not a set of vertices");
    side[v] = 1;
  }
  for (Vertex v : part.b) {
    if (!g.contains(v) || side[v]) throw Error("co-bipartite partition: A and B overlap or repeat");
    side[v] = 2;
  }
  if (part.a.size() + part.b.size() != static_cast<std::size_t>(n))
    throw Error("co-bipartite partition: A and B do not cover the vertices");
  check_clique_side(g, part.a, "A");
  check_clique_side(g, part.b, "B");

  const int na = static_cast<int>(part.a.size());
  check_cap("weighted_treewidth_exact (co-bipartite A side)", na, cap);
  const auto adj = adjacency_masks(g);
  const MaskWeigher weigh(wg.weights());

  const std::size_t states = std::size_t{1} << na;
  std::vector<Mask> global(states, 0), union_nb(states, 0);
  for (std::size_t s = 1; s < states; ++s) {
    int low = std::countr_zero(static_cast<Mask>(s));
    std::size_t rest = s & (s - 1);
    Vertex v = part.a[static_cast<std::size_t>(low)];
    global[s] = global[rest] | bit(v);
    union_nb[s] = union_nb[rest] | adj[v];
  }
  auto step = [&](Mask before, int local) {
    Vertex v = part.a[static_cast<std::size_t>(local)];
    Mask nb = (adj[v] | union_nb[before]) & ~global[before] & ~bit(v);
    return wg.weight(v) + weigh(nb);
  };
  WeightedTreewidthResult r;
  Weight a_cost = 0;
  VertexList local_order;
  if (na > 0) std::tie(a_cost, local_order) = ordering_dp<Weight>(na, step);
  for (int local : local_order) r.ordering.order.push_back(part.a[static_cast<std::size_t>(local)]);
  // B is a clique that survives intact: its first vertex pays w(B).
  Weight b_cost = 0;
  for (Vertex v : part.b) {
    b_cost += wg.weight(v);
    r.ordering.order.push_back(v);
  }
  r.width = std::max(a_cost, b_cost);
  return r;
}

}  // namespace detail

/// Exact weighted treewidth (no -1). With a partition into two cliques A and
/// B, only A-first orderings are searched, which is exact for co-bipartite
/// graphs.
inline WeightedTreewidthResult weighted_treewidth_exact(const WeightedGraph& wg,
                                                        const std::optional<CobipartitePartition>& partition = {},
                                                        int cap = kDefaultTreewidthCap) {
  if (partition) return detail::cobipartite_fast_path(wg, *partition, std::max(cap, kDefaultCobipartiteCap));
  const Graph& g = wg.graph();
  const int n = g.vertex_count();
  detail::check_cap("weighted_treewidth_exact", n, cap);
  WeightedTreewidthResult r;
  if (n == 0) return r;
  const auto adj = detail::adjacency_masks(g);
  const detail::MaskWeigher weigh(wg.weights());
  auto step = [&](detail::Mask before, int v) {
    return wg.weight(v) + weigh(detail::elimination_neighborhood(adj, before, v));
  };
  auto [w, order] = detail::ordering_dp<Weight>(n, step);
  r.width = w;
  r.ordering.order = std::move(order);
  return r;
}

/// A split into two cliques, found by 2-colouring the complement, or nullopt.
/// Each complement component puts its smaller colour class on side A.
inline std::optional<CobipartitePartition> find_cobipartite_partition(const Graph& g) {
  const int n = g.vertex_count();
  std::vector<int> colour(static_cast<std::size_t>(n), -1);
  CobipartitePartition part;
  for (Vertex root = 0; root < n; ++root) {
    if (colour[root] != -1) continue;
    std::array<VertexList, 2> cls;
    VertexList queue{root};
    colour[root] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Vertex v = queue[head];
      cls[static_cast<std::size_t>(colour[v])].push_back(v);
      for (Vertex u = 0; u < n; ++u) {
        if (u == v || g.has_edge(u, v)) continue;
        if (colour[u] == -1) {
          colour[u] = 1 - colour[v];
          queue.push_back(u);
        } else if (colour[u] == colour[v]) {
          return std::nullopt;
        }
      }
    }
    if (cls[0].size() > cls[1].size()) std::swap(cls[0], cls[1]);
    part.a.insert(part.a.end(), cls[0].begin(), cls[0].end());
    part.b.insert(part.b.end(), cls[1].begin(), cls[1].end());
  }
  std::sort(part.a.begin(), part.a.end());
  std::sort(part.b.begin(), part.b.end());
  return part;
}

/// Exact cutwidth: min over layouts of the max number of edges across a gap.
inline CutwidthResult cutwidth_exact(const Graph& g, int cap = kDefaultCutwidthCap) {
  const int n = g.vertex_count();
  detail::check_cap("cutwidth_exact", n, cap);
  CutwidthResult r;
  if (n == 0) return r;
  const auto adj = detail::adjacency_masks(g);
  // cut(S) from cut(S minus its lowest vertex), filled in increasing order.
  std::vector<int> cut(std::size_t{1} << n, 0);
  auto cut_of = [&](detail::Mask s) {
    int v = std::countr_zero(s);
    detail::Mask rest = s & (s - 1);
    int c = cut[rest] + std::popcount(adj[v]) - 2 * std::popcount(adj[v] & rest);
    cut[s] = c;
    return c;
  };
  auto [w, order] = detail::prefix_dp<int>(n, cut_of);
  r.width = w;
  r.layout.order = std::move(order);
  return r;
}

}  // namespace pwk

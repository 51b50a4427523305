#pragma once

// Simple undirected graphs with stable vertex labels, modulator-carrying
// instances, and the structural predicates the reduction rules test.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pwk/error.hpp"

namespace pwk {

using Vertex = int;
using VertexList = std::vector<Vertex>;
using Edge = std::pair<Vertex, Vertex>;
using Weight = std::int64_t;

/// Simple undirected graph on dense ids 0..n-1. Every vertex carries a
/// unique label that survives deletions and recompaction.
class Graph {
 public:
  Graph() = default;

  /// n isolated vertices labelled "0".."n-1".
  explicit Graph(int n) {
    if (n < 0) throw Error("negative vertex count");
    adj_.resize(static_cast<std::size_t>(n));
    labels_.reserve(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      labels_.push_back(std::to_string(v));
      index_.emplace(labels_.back(), v);
    }
  }

  static Graph with_labels(std::vector<std::string> labels) {
    Graph g;
    for (auto& l : labels) g.insert_vertex(std::move(l));
    return g;
  }

  /// Builds a graph from an edge list; duplicate edges are merged.
  static Graph from_edges(int n, std::span<const Edge> edges) {
    Graph g(n);
    for (auto [u, v] : edges) {
      g.check_pair(u, v);
      g.adj_[u].push_back(v);
      g.adj_[v].push_back(u);
    }
    g.normalize();
    return g;
  }

  int vertex_count() const noexcept { return static_cast<int>(adj_.size()); }
  std::size_t edge_count() const noexcept { return edges_; }
  bool empty() const noexcept { return adj_.empty(); }

  bool contains(Vertex v) const noexcept { return v >= 0 && v < vertex_count(); }

  std::span<const Vertex> neighbors(Vertex v) const {
    check(v);
    return adj_[v];
  }

  int degree(Vertex v) const {
    check(v);
    return static_cast<int>(adj_[v].size());
  }

  bool has_edge(Vertex u, Vertex v) const {
    check(u);
    check(v);
    const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
    Vertex other = &a == &adj_[u] ? v : u;
    return std::binary_search(a.begin(), a.end(), other);
  }

  const std::string& label(Vertex v) const {
    check(v);
    return labels_[v];
  }

  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<Vertex> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Returns false when the edge was already present.
  bool insert_edge(Vertex u, Vertex v) {
    check_pair(u, v);
    auto& au = adj_[u];
    auto it = std::lower_bound(au.begin(), au.end(), v);
    if (it != au.end() && *it == v) return false;
    au.insert(it, v);
    auto& av = adj_[v];
    av.insert(std::lower_bound(av.begin(), av.end(), u), u);
    ++edges_;
    return true;
  }

  Vertex insert_vertex(std::string label) {
    if (label.empty()) throw Error("empty vertex label");
    if (index_.count(label)) throw Error("duplicate vertex label '" + label + "'");
    Vertex id = vertex_count();
    index_.emplace(label, id);
    labels_.push_back(std::move(label));
    adj_.emplace_back();
    return id;
  }

  /// Edges (u, v) with u < v in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edges_);
    for (Vertex u = 0; u < vertex_count(); ++u)
      for (Vertex v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.labels_ == b.labels_ && a.adj_ == b.adj_;
  }

  /// Verifies simplicity, symmetry and label uniqueness.
  bool well_formed() const {
    if (labels_.size() != adj_.size() || index_.size() != adj_.size()) return false;
    std::size_t degree_sum = 0;
    for (Vertex v = 0; v < vertex_count(); ++v) {
      const auto& a = adj_[v];
      if (!std::is_sorted(a.begin(), a.end())) return false;
      if (std::adjacent_find(a.begin(), a.end()) != a.end()) return false;
      for (Vertex u : a) {
        if (u == v || !contains(u)) return false;
        if (!std::binary_search(adj_[u].begin(), adj_[u].end(), v)) return false;
      }
      degree_sum += a.size();
      auto it = index_.find(labels_[v]);
      if (it == index_.end() || it->second != v) return false;
    }
    return degree_sum == 2 * edges_;
  }

 private:
  void check(Vertex v) const {
    if (!contains(v)) throw Error("unknown vertex id " + std::to_string(v));
  }

  void check_pair(Vertex u, Vertex v) const {
    check(u);
    check(v);
    if (u == v) throw Error("self-loop on vertex " + std::to_string(u));
  }

  void normalize() {
    edges_ = 0;
    for (auto& a : adj_) {
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
      edges_ += a.size();
    }
    edges_ /= 2;
  }

  std::vector<std::vector<Vertex>> adj_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, Vertex> index_;
  std::size_t edges_ = 0;
};

/// Induced subgraph on `keep` (any order; result ids follow increasing old id).
inline Graph induced_subgraph(const Graph& g, std::span<const Vertex> keep) {
  VertexList sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<Vertex> remap(static_cast<std::size_t>(g.vertex_count()), -1);
  std::vector<std::string> labels;
  labels.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!g.contains(sorted[i])) throw Error("unknown vertex id " + std::to_string(sorted[i]));
    remap[sorted[i]] = static_cast<Vertex>(i);
    labels.push_back(g.label(sorted[i]));
  }
  std::vector<Edge> edges;
  for (Vertex u : sorted)
    for (Vertex v : g.neighbors(u))
      if (u < v && remap[v] >= 0) edges.emplace_back(remap[u], remap[v]);
  Graph h = Graph::with_labels(std::move(labels));
  for (auto [u, v] : edges) h.insert_edge(u, v);
  return h;
}

/// G - W. Surviving vertices keep their relative order and labels.
inline Graph delete_vertices(const Graph& g, std::span<const Vertex> removed) {
  std::vector<char> gone(static_cast<std::size_t>(g.vertex_count()), 0);
  for (Vertex v : removed) {
    if (!g.contains(v)) throw Error("unknown vertex id " + std::to_string(v));
    gone[v] = 1;
  }
  VertexList keep;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (!gone[v]) keep.push_back(v);
  return induced_subgraph(g, keep);
}

inline Graph delete_vertex(const Graph& g, Vertex v) {
  const Vertex one[] = {v};
  return delete_vertices(g, one);
}

/// Idempotent on existing edges.
inline Graph add_edge(Graph g, Vertex u, Vertex v) {
  g.insert_edge(u, v);
  return g;
}

/// Merges v into u; u keeps its label. Parallel edges and loops vanish.
inline Graph contract_edge(const Graph& g, Vertex u, Vertex v) {
  if (!g.contains(u) || !g.contains(v) || u == v || !g.has_edge(u, v))
    throw Error("contract_edge: {" + std::to_string(u) + "," + std::to_string(v) +
                "} is not an edge");
  Graph h = g;
  for (Vertex x : g.neighbors(v))
    if (x != u) h.insert_edge(u, x);
  return delete_vertex(h, v);
}

inline bool is_clique(const Graph& g, std::span<const Vertex> vs) {
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      if (vs[i] != vs[j] && !g.has_edge(vs[i], vs[j])) return false;
  return true;
}

inline bool is_simplicial(const Graph& g, Vertex v) { return is_clique(g, g.neighbors(v)); }

/// All w in N(v) with N(v) \ {w} a clique. Nonempty iff v is almost simplicial.
inline VertexList special_neighbors(const Graph& g, Vertex v) {
  auto nb = g.neighbors(v);
  // Count, per neighbor, how many non-neighbors it has inside N(v).
  std::vector<int> missing(nb.size(), 0);
  int bad_pairs = 0;
  for (std::size_t i = 0; i < nb.size(); ++i)
    for (std::size_t j = i + 1; j < nb.size(); ++j)
      if (!g.has_edge(nb[i], nb[j])) {
        ++missing[i];
        ++missing[j];
        ++bad_pairs;
      }
  VertexList out;
  for (std::size_t i = 0; i < nb.size(); ++i)
    if (missing[i] == bad_pairs) out.push_back(nb[i]);
  return out;
}

inline bool is_almost_simplicial(const Graph& g, Vertex v) {
  return !special_neighbors(g, v).empty();
}

/// Number of v-w paths that pairwise share only their endpoints, capped at
/// `limit`. Unit-capacity flow on the vertex-split graph; v and w must be
/// distinct and nonadjacent.
inline int count_internally_disjoint_paths(const Graph& g, Vertex v, Vertex w, int limit) {
  if (!g.contains(v) || !g.contains(w)) throw Error("unknown vertex id");
  if (v == w) throw Error("disjoint paths: endpoints coincide");
  if (g.has_edge(v, w)) throw Error("disjoint paths: endpoints are adjacent");
  if (limit <= 0) return 0;

  // Node 2x is x_in, 2x+1 is x_out. Arc capacities are 0/1.
  struct Arc {
    int to;
    int rev;
    int cap;
  };
  const int n = g.vertex_count();
  std::vector<std::vector<Arc>> net(2 * static_cast<std::size_t>(n));
  auto link = [&](int a, int b) {
    net[a].push_back({b, static_cast<int>(net[b].size()), 1});
    net[b].push_back({a, static_cast<int>(net[a].size()) - 1, 0});
  };
  for (Vertex x = 0; x < n; ++x) {
    if (x != v && x != w) link(2 * x, 2 * x + 1);
    for (Vertex y : g.neighbors(x)) link(2 * x + 1, 2 * y);
  }
  const int source = 2 * v + 1;
  const int sink = 2 * w;

  int flow = 0;
  std::vector<std::pair<int, int>> parent(net.size());
  while (flow < limit) {
    std::fill(parent.begin(), parent.end(), std::pair{-1, -1});
    parent[source] = {source, -1};
    std::queue<int> q;
    q.push(source);
    while (!q.empty() && parent[sink].first < 0) {
      int a = q.front();
      q.pop();
      for (int i = 0; i < static_cast<int>(net[a].size()); ++i) {
        const Arc& arc = net[a][i];
        if (arc.cap > 0 && parent[arc.to].first < 0) {
          parent[arc.to] = {a, i};
          q.push(arc.to);
        }
      }
    }
    if (parent[sink].first < 0) break;
    for (int b = sink; b != source;) {
      auto [a, i] = parent[b];
      Arc& arc = net[a][i];
      arc.cap -= 1;
      net[b][arc.rev].cap += 1;
      b = a;
    }
    ++flow;
  }
  return flow;
}

/// Connected components of G - excluded, each sorted, ordered by smallest id.
inline std::vector<VertexList> components_avoiding(const Graph& g,
                                                   const std::vector<bool>& excluded) {
  const int n = g.vertex_count();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  std::vector<VertexList> out;
  for (Vertex s = 0; s < n; ++s) {
    if (comp[s] >= 0 || (!excluded.empty() && excluded[s])) continue;
    VertexList members{s};
    comp[s] = static_cast<int>(out.size());
    for (std::size_t i = 0; i < members.size(); ++i)
      for (Vertex y : g.neighbors(members[i]))
        if (comp[y] < 0 && (excluded.empty() || !excluded[y])) {
          comp[y] = comp[s];
          members.push_back(y);
        }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

inline std::vector<VertexList> connected_components(const Graph& g) {
  return components_avoiding(g, {});
}

/// N(W) = N[W] \ W, sorted.
inline VertexList open_neighborhood(const Graph& g, std::span<const Vertex> set) {
  std::vector<char> in(static_cast<std::size_t>(g.vertex_count()), 0);
  for (Vertex v : set) in[v] = 1;
  VertexList out;
  for (Vertex v : set)
    for (Vertex y : g.neighbors(v))
      if (!in[y]) {
        in[y] = 2;
        out.push_back(y);
      }
  std::sort(out.begin(), out.end());
  return out;
}

/// A graph together with a modulator S and a target pathwidth k.
class Instance {
 public:
  Instance() = default;

  Instance(Graph graph, VertexList modulator, int target)
      : graph_(std::move(graph)),
        in_modulator_(static_cast<std::size_t>(graph_.vertex_count()), false),
        target_(target) {
    if (target < 0) throw Error("negative target pathwidth");
    for (Vertex v : modulator) {
      if (!graph_.contains(v)) throw Error("modulator vertex " + std::to_string(v) + " not in graph");
      in_modulator_[v] = true;
    }
  }

  const Graph& graph() const noexcept { return graph_; }
  int target() const noexcept { return target_; }

  bool in_modulator(Vertex v) const { return in_modulator_.at(static_cast<std::size_t>(v)); }
  const std::vector<bool>& modulator_mask() const noexcept { return in_modulator_; }

  VertexList modulator() const {
    VertexList s;
    for (Vertex v = 0; v < graph_.vertex_count(); ++v)
      if (in_modulator_[v]) s.push_back(v);
    return s;
  }

  int modulator_size() const {
    return static_cast<int>(std::count(in_modulator_.begin(), in_modulator_.end(), true));
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.target_ == b.target_ && a.graph_ == b.graph_ && a.in_modulator_ == b.in_modulator_;
  }

 private:
  Graph graph_;
  std::vector<bool> in_modulator_;
  int target_ = 0;
};

/// Instance with `removed` deleted; S shrinks accordingly.
inline Instance delete_vertices(const Instance& inst, std::span<const Vertex> removed) {
  Graph h = delete_vertices(inst.graph(), removed);
  VertexList s;
  for (Vertex v : inst.modulator()) {
    auto id = h.find(inst.graph().label(v));
    if (id) s.push_back(*id);
  }
  return Instance(std::move(h), std::move(s), inst.target());
}

/// Components W of G - S whose S-neighbourhood is a clique in G.
inline std::vector<VertexList> simplicial_components(const Graph& g, const std::vector<bool>& in_s) {
  std::vector<VertexList> out;
  for (auto& w : components_avoiding(g, in_s)) {
    VertexList nb = open_neighborhood(g, w);
    if (is_clique(g, nb)) out.push_back(std::move(w));
  }
  return out;
}

inline std::vector<VertexList> simplicial_components(const Graph& g, std::span<const Vertex> s) {
  std::vector<bool> mask(static_cast<std::size_t>(g.vertex_count()), false);
  for (Vertex v : s) {
    if (!g.contains(v)) throw Error("modulator vertex " + std::to_string(v) + " not in graph");
    mask[v] = true;
  }
  return simplicial_components(g, mask);
}

/// Graph with positive integer vertex weights.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  WeightedGraph(Graph graph, std::vector<Weight> weights)
      : graph_(std::move(graph)), weights_(std::move(weights)) {
    if (weights_.size() != static_cast<std::size_t>(graph_.vertex_count()))
      throw Error("weight vector size does not match vertex count");
    for (Weight w : weights_)
      if (w < 1) throw Error("vertex weights must be positive");
  }

  static WeightedGraph unit(Graph graph) {
    std::vector<Weight> w(static_cast<std::size_t>(graph.vertex_count()), 1);
    return WeightedGraph(std::move(graph), std::move(w));
  }

  const Graph& graph() const noexcept { return graph_; }
  Weight weight(Vertex v) const { return weights_.at(static_cast<std::size_t>(v)); }
  const std::vector<Weight>& weights() const noexcept { return weights_; }

  Weight total_weight(std::span<const Vertex> set) const {
    Weight sum = 0;
    for (Vertex v : set) sum += weight(v);
    return sum;
  }

 private:
  Graph graph_;
  std::vector<Weight> weights_;
};

}  // namespace pwk

#pragma once

// Certificates for the four width measures and their validators.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwk/graph.hpp"

namespace pwk {

using Bag = VertexList;

struct PathDecomposition {
  std::vector<Bag> bags;
};

/// Bags keyed by node id; `tree` lists the tree edges between node ids.
struct TreeDecomposition {
  std::map<int, Bag> bags;
  std::vector<std::pair<int, int>> tree;
};

/// Permutation of the vertices: order[i] is eliminated i-th.
struct EliminationOrdering {
  VertexList order;
};

/// Permutation of the vertices: order[i] is placed at position i.
struct LinearLayout {
  VertexList order;
};

/// Outcome of a validator: `ok`, or the first violated clause with a witness.
struct Validation {
  bool ok = true;
  std::string violation;

  explicit operator bool() const noexcept { return ok; }

  static Validation fail(std::string why) { return {false, std::move(why)}; }
};

/// max |X| - 1 over the bags. The empty graph's single empty bag counts as
/// width 0, matching the convention pw(empty) = 0.
inline int decomposition_width(const std::vector<Bag>& bags) {
  std::size_t largest = 0;
  for (const auto& b : bags) largest = std::max(largest, b.size());
  return largest == 0 ? 0 : static_cast<int>(largest) - 1;
}

inline int decomposition_width(const PathDecomposition& pd) { return decomposition_width(pd.bags); }

inline int decomposition_width(const TreeDecomposition& td) {
  std::vector<Bag> bags;
  for (const auto& [id, b] : td.bags) bags.push_back(b);
  return decomposition_width(bags);
}

/// Weighted width: max total bag weight, without the -1.
inline Weight weighted_width(const WeightedGraph& wg, const std::vector<Bag>& bags) {
  Weight best = 0;
  for (const auto& b : bags) best = std::max(best, wg.total_weight(b));
  return best;
}

inline Weight weighted_width(const WeightedGraph& wg, const TreeDecomposition& td) {
  std::vector<Bag> bags;
  for (const auto& [id, b] : td.bags) bags.push_back(b);
  return weighted_width(wg, bags);
}

namespace detail {

inline std::optional<std::string> check_bag_vertices(const Graph& g, const Bag& bag, int index) {
  for (Vertex v : bag)
    if (!g.contains(v))
      return "bag " + std::to_string(index) + " names unknown vertex " + std::to_string(v);
  Bag sorted = bag;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    return "bag " + std::to_string(index) + " repeats a vertex";
  return std::nullopt;
}

inline std::string vname(const Graph& g, Vertex v) { return "'" + g.label(v) + "'"; }

}  // namespace detail

inline Validation validate_path_decomposition(const Graph& g, const PathDecomposition& pd) {
  if (pd.bags.empty()) return Validation::fail("decomposition has no bags");
  const int n = g.vertex_count();
  std::vector<int> first(static_cast<std::size_t>(n), -1), last(static_cast<std::size_t>(n), -1),
      count(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < static_cast<int>(pd.bags.size()); ++i) {
    if (auto err = detail::check_bag_vertices(g, pd.bags[i], i)) return Validation::fail(*err);
    for (Vertex v : pd.bags[i]) {
      if (first[v] < 0) first[v] = i;
      last[v] = i;
      ++count[v];
    }
  }
  for (Vertex v = 0; v < n; ++v)
    if (first[v] < 0) return Validation::fail("vertex cover: " + detail::vname(g, v) + " is in no bag");
  for (auto [u, v] : g.edges()) {
    bool covered = false;
    for (const auto& b : pd.bags)
      if (std::find(b.begin(), b.end(), u) != b.end() && std::find(b.begin(), b.end(), v) != b.end()) {
        covered = true;
        break;
      }
    if (!covered)
      return Validation::fail("edge cover: {" + detail::vname(g, u) + "," + detail::vname(g, v) +
                              "} is in no bag");
  }
  for (Vertex v = 0; v < n; ++v)
    if (last[v] - first[v] + 1 != count[v])
      return Validation::fail("convexity: bags containing " + detail::vname(g, v) +
                              " are not consecutive");
  return {};
}

inline Validation validate_tree_decomposition(const Graph& g, const TreeDecomposition& td) {
  if (td.bags.empty()) return Validation::fail("decomposition has no bags");
  std::map<int, std::vector<int>> adjacency;
  for (const auto& [id, b] : td.bags) {
    if (auto err = detail::check_bag_vertices(g, b, id)) return Validation::fail(*err);
    adjacency[id];
  }
  for (auto [a, b] : td.tree) {
    if (!td.bags.count(a) || !td.bags.count(b))
      return Validation::fail("tree edge {" + std::to_string(a) + "," + std::to_string(b) +
                              "} names an unknown node");
    if (a == b) return Validation::fail("tree has a self-loop at node " + std::to_string(a));
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  if (td.tree.size() + 1 != td.bags.size()) return Validation::fail("tree: edge count is not nodes - 1");

  // Connected plus |E| = |V| - 1 means a tree.
  std::map<int, bool> seen;
  std::vector<int> stack{td.bags.begin()->first};
  seen[stack.back()] = true;
  while (!stack.empty()) {
    int a = stack.back();
    stack.pop_back();
    for (int b : adjacency[a])
      if (!seen[b]) {
        seen[b] = true;
        stack.push_back(b);
      }
  }
  if (seen.size() != td.bags.size()) return Validation::fail("tree: nodes are not connected");

  const int n = g.vertex_count();
  std::vector<std::vector<int>> holders(static_cast<std::size_t>(n));
  for (const auto& [id, b] : td.bags)
    for (Vertex v : b) holders[v].push_back(id);
  for (Vertex v = 0; v < n; ++v)
    if (holders[v].empty()) return Validation::fail("vertex cover: " + detail::vname(g, v) + " is in no bag");
  for (auto [u, v] : g.edges()) {
    const auto& hu = holders[u];
    const auto& hv = holders[v];
    bool covered = std::any_of(hu.begin(), hu.end(), [&](int id) {
      return std::find(hv.begin(), hv.end(), id) != hv.end();
    });
    if (!covered)
      return Validation::fail("edge cover: {" + detail::vname(g, u) + "," + detail::vname(g, v) +
                              "} is in no bag");
  }
  for (Vertex v = 0; v < n; ++v) {
    // Nodes holding v must induce a connected subtree.
    std::map<int, bool> member, reached;
    for (int id : holders[v]) member[id] = true;
    std::vector<int> st{holders[v].front()};
    reached[st.back()] = true;
    std::size_t hit = 1;
    while (!st.empty()) {
      int a = st.back();
      st.pop_back();
      for (int b : adjacency[a])
        if (member.count(b) && !reached.count(b)) {
          reached[b] = true;
          ++hit;
          st.push_back(b);
        }
    }
    if (hit != holders[v].size())
      return Validation::fail("subtree: nodes containing " + detail::vname(g, v) + " are disconnected");
  }
  return {};
}

inline bool is_permutation_of_vertices(const Graph& g, const VertexList& order) {
  if (order.size() != static_cast<std::size_t>(g.vertex_count())) return false;
  std::vector<char> seen(order.size(), 0);
  for (Vertex v : order) {
    if (!g.contains(v) || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

/// Path decomposition whose i-th bag is the boundary of the first i-1
/// vertices plus the i-th vertex. Width equals the vertex separation of the
/// ordering.
inline PathDecomposition path_decomposition_from_ordering(const Graph& g, const VertexList& order) {
  if (!is_permutation_of_vertices(g, order)) throw Error("ordering is not a permutation of the vertices");
  PathDecomposition pd;
  if (order.empty()) {
    pd.bags.emplace_back();
    return pd;
  }
  const int n = g.vertex_count();
  std::vector<int> pos(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pos[order[i]] = i;
  // last_needed[v]: position of v's latest neighbour (or v itself).
  std::vector<int> last_needed(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) {
    last_needed[v] = pos[v];
    for (Vertex y : g.neighbors(v)) last_needed[v] = std::max(last_needed[v], pos[y]);
  }
  for (int i = 0; i < n; ++i) {
    Bag bag;
    for (int j = 0; j < i; ++j)
      if (last_needed[order[j]] >= i) bag.push_back(order[j]);
    bag.push_back(order[i]);
    std::sort(bag.begin(), bag.end());
    pd.bags.push_back(std::move(bag));
  }
  return pd;
}

/// Max over prefixes of the number of prefix vertices with a neighbour outside.
inline int vertex_separation(const Graph& g, const VertexList& order) {
  PathDecomposition pd = path_decomposition_from_ordering(g, order);
  return decomposition_width(pd);
}

/// Removes every simplicial vertex from all bags except the first bag that
/// holds its closed neighbourhood. The input must be valid for `g`.
inline PathDecomposition normalize_simplicial(const Graph& g, const PathDecomposition& pd) {
  if (auto v = validate_path_decomposition(g, pd); !v)
    throw Error("normalize_simplicial: invalid input decomposition (" + v.violation + ")");
  PathDecomposition out = pd;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (!is_simplicial(g, v)) continue;
    VertexList closed(g.neighbors(v).begin(), g.neighbors(v).end());
    closed.push_back(v);
    std::size_t keep = out.bags.size();
    for (std::size_t i = 0; i < out.bags.size(); ++i) {
      const Bag& b = out.bags[i];
      if (std::all_of(closed.begin(), closed.end(),
                      [&](Vertex x) { return std::find(b.begin(), b.end(), x) != b.end(); })) {
        keep = i;
        break;
      }
    }
    if (keep == out.bags.size()) throw Error("normalize_simplicial: no bag holds a simplicial neighbourhood");
    for (std::size_t i = 0; i < out.bags.size(); ++i)
      if (i != keep) std::erase(out.bags[i], v);
  }
  return out;
}

/// Tree decomposition read off an elimination ordering: the bag of v is v
/// plus its neighbours at elimination time, attached to the earliest of
/// those neighbours eliminated later. Separate roots are chained.
inline TreeDecomposition tree_decomposition_from_ordering(const Graph& g, const EliminationOrdering& pi) {
  if (!is_permutation_of_vertices(g, pi.order)) throw Error("ordering is not a permutation of the vertices");
  const int n = g.vertex_count();
  TreeDecomposition td;
  if (n == 0) {
    td.bags[0] = {};
    return td;
  }
  std::vector<int> pos(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pos[pi.order[i]] = i;
  std::vector<std::vector<char>> adj(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = 1;
  int previous_root = -1;
  for (int i = 0; i < n; ++i) {
    Vertex v = pi.order[i];
    Bag later;
    for (Vertex y = 0; y < n; ++y)
      if (adj[v][y] && pos[y] > i) later.push_back(y);
    for (std::size_t a = 0; a < later.size(); ++a)
      for (std::size_t b = a + 1; b < later.size(); ++b) adj[later[a]][later[b]] = adj[later[b]][later[a]] = 1;
    Bag bag = later;
    bag.push_back(v);
    std::sort(bag.begin(), bag.end());
    td.bags[v] = bag;
    if (later.empty()) {
      if (previous_root >= 0) td.tree.emplace_back(previous_root, v);
      previous_root = v;
    } else {
      Vertex parent = *std::min_element(later.begin(), later.end(),
                                        [&](Vertex a, Vertex b) { return pos[a] < pos[b]; });
      td.tree.emplace_back(v, parent);
    }
  }
  return td;
}

/// Max number of edges crossing a gap of the layout.
inline int layout_cutwidth(const Graph& g, const LinearLayout& layout) {
  if (!is_permutation_of_vertices(g, layout.order)) throw Error("layout is not a permutation of the vertices");
  const int n = g.vertex_count();
  std::vector<int> pos(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pos[layout.order[i]] = i;
  std::vector<int> delta(static_cast<std::size_t>(n) + 1, 0);
  for (auto [u, v] : g.edges()) {
    int a = std::min(pos[u], pos[v]);
    int b = std::max(pos[u], pos[v]);
    ++delta[a];
    --delta[b];
  }
  int best = 0, running = 0;
  for (int i = 0; i < n; ++i) {
    running += delta[i];
    best = std::max(best, running);
  }
  return best;
}

}  // namespace pwk

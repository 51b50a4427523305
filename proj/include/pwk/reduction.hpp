#pragma once

// Safe reduction rules for pathwidth on (G, S, k) instances and the
// exhaustive scheduler. Rules fire at the lowest-id site; ids follow label
// creation order, so traces are deterministic.

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pwk/graph.hpp"
#include "pwk/width.hpp"

namespace pwk {

/// R3G is the unrestricted disjoint-paths edge addition (either endpoint
/// may lie outside S). It is opt-in and never used by the kernelizers.
enum class RuleId { R1, R2, R3, R4, R3G, R5, R6, R7 };

/// Scheduler priority order.
inline constexpr std::array<RuleId, 8> kRulePriority = {RuleId::R1, RuleId::R2,  RuleId::R3, RuleId::R4,
                                                        RuleId::R3G, RuleId::R5, RuleId::R6, RuleId::R7};

inline std::string_view rule_name(RuleId r) {
  switch (r) {
    case RuleId::R1: return "R1";
    case RuleId::R2: return "R2";
    case RuleId::R3: return "R3";
    case RuleId::R4: return "R4";
    case RuleId::R3G: return "R3G";
    case RuleId::R5: return "R5";
    case RuleId::R6: return "R6";
    case RuleId::R7: return "R7";
  }
  return "?";
}

inline std::optional<RuleId> parse_rule(std::string_view name) {
  for (RuleId r : kRulePriority)
    if (rule_name(r) == name) return r;
  return std::nullopt;
}

class RuleSet {
 public:
  constexpr RuleSet() = default;
  RuleSet(std::initializer_list<RuleId> rules) {
    for (RuleId r : rules) insert(r);
  }

  /// R1..R7 (without R3G).
  static RuleSet standard() {
    return {RuleId::R1, RuleId::R2, RuleId::R3, RuleId::R4, RuleId::R5, RuleId::R6, RuleId::R7};
  }

  /// "all" or a comma-separated list such as "R1,R2,R7".
  static RuleSet parse(std::string_view text) {
    if (text == "all") return standard();
    RuleSet out;
    while (!text.empty()) {
      auto comma = text.find(',');
      auto token = text.substr(0, comma);
      auto r = parse_rule(token);
      if (!r) throw Error("unknown rule '" + std::string(token) + "'");
      out.insert(*r);
      if (comma == std::string_view::npos) break;
      text.remove_prefix(comma + 1);
    }
    return out;
  }

  void insert(RuleId r) { bits_ |= 1u << static_cast<unsigned>(r); }
  bool contains(RuleId r) const { return bits_ >> static_cast<unsigned>(r) & 1u; }

 private:
  unsigned bits_ = 0;
};

struct RuleApplication {
  RuleId rule = RuleId::R1;
  std::vector<std::string> site;
  std::vector<std::string> removed;
  std::vector<std::string> added;
  std::vector<std::pair<std::string, std::string>> added_edges;
};

enum class Verdict { Reduced, DecidedYes, DecidedNo };

inline std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Reduced: return "Reduced";
    case Verdict::DecidedYes: return "DecidedYes";
    case Verdict::DecidedNo: return "DecidedNo";
  }
  return "?";
}

/// One rule firing. For a DecidedNo step `instance` is the unchanged input.
struct RuleStep {
  Verdict verdict = Verdict::Reduced;
  Instance instance;
  RuleApplication application;
};

struct ReductionOutcome {
  Verdict verdict = Verdict::Reduced;
  Instance instance;
  std::vector<RuleApplication> trace;
};

/// Restricts the vertices R7 may fire on.
using Rule7Filter = std::function<bool(const Instance&, Vertex)>;

/// Pathwidth of G[W] for components, memoised on the induced adjacency.
class ComponentWidthCache {
 public:
  explicit ComponentWidthCache(int cap = kDefaultPathwidthCap) : cap_(cap) {}

  /// nullopt when the component is too large for the exact solver.
  std::optional<int> width(const Graph& g, const VertexList& component) {
    const int size = static_cast<int>(component.size());
    if (size <= 1) return 0;
    if (is_clique(g, component)) return size - 1;
    Graph h = induced_subgraph(g, component);
    if (is_star(h)) return 1;
    std::string key = std::to_string(size) + ':';
    for (auto [u, v] : h.edges()) key += std::to_string(u) + '-' + std::to_string(v) + ' ';
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (size > cap_) return std::nullopt;
    int w = pathwidth_exact(h, cap_).width;
    memo_.emplace(std::move(key), w);
    return w;
  }

  static bool is_star(const Graph& h) {
    const int n = h.vertex_count();
    if (h.edge_count() != static_cast<std::size_t>(n - 1)) return false;
    for (Vertex v = 0; v < n; ++v)
      if (h.degree(v) == n - 1) return true;
    return false;
  }

 private:
  int cap_;
  std::map<std::string, int> memo_;
};

namespace detail {

inline std::vector<std::string> labels_of(const Graph& g, std::span<const Vertex> vs) {
  std::vector<std::string> out;
  out.reserve(vs.size());
  for (Vertex v : vs) out.push_back(g.label(v));
  return out;
}

inline RuleStep deletion_step(const Instance& inst, RuleId rule, VertexList site, VertexList removed) {
  RuleStep step;
  step.application.rule = rule;
  step.application.site = labels_of(inst.graph(), site);
  step.application.removed = labels_of(inst.graph(), removed);
  step.instance = delete_vertices(inst, removed);
  return step;
}

inline RuleStep edge_step(const Instance& inst, RuleId rule, Vertex v, Vertex w) {
  RuleStep step;
  step.application.rule = rule;
  step.application.site = labels_of(inst.graph(), VertexList{v, w});
  step.application.added_edges.emplace_back(inst.graph().label(v), inst.graph().label(w));
  step.instance = Instance(add_edge(inst.graph(), v, w), inst.modulator(), inst.target());
  return step;
}

inline std::string fresh_label(const Graph& g, std::string base) {
  while (g.find(base)) base += '\'';
  return base;
}

/// Deletes v and adds one degree-2 vertex per unordered pair of its
/// neighbours. This is the R7 replacement without any precondition check;
/// tests use it to exhibit the unsafe sites R7 must refuse.
inline RuleStep replace_with_pair_vertices(const Instance& inst, Vertex v) {
  const Graph& g = inst.graph();
  VertexList nb(g.neighbors(v).begin(), g.neighbors(v).end());
  RuleStep step;
  step.application.rule = RuleId::R7;
  step.application.site = {g.label(v)};
  step.application.removed = {g.label(v)};

  Instance reduced = delete_vertices(inst, VertexList{v});
  Graph h = reduced.graph();
  // Labels are "<v>.<pair index>": naming them after both neighbours would
  // nest labels and grow them exponentially under repeated replacement.
  int pair = 0;
  for (std::size_t i = 0; i < nb.size(); ++i)
    for (std::size_t j = i + 1; j < nb.size(); ++j) {
      const std::string& p = g.label(nb[i]);
      const std::string& q = g.label(nb[j]);
      std::string label = fresh_label(h, g.label(v) + "." + std::to_string(pair++));
      Vertex x = h.insert_vertex(label);
      h.insert_edge(x, *h.find(p));
      h.insert_edge(x, *h.find(q));
      step.application.added.push_back(label);
      step.application.added_edges.emplace_back(label, p);
      step.application.added_edges.emplace_back(label, q);
    }
  step.instance = Instance(std::move(h), reduced.modulator(), inst.target());
  return step;
}

}  // namespace detail

/// R1: delete the lowest-id vertex of degree zero.
inline std::optional<RuleStep> rule1(const Instance& inst) {
  const Graph& g = inst.graph();
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) == 0) return detail::deletion_step(inst, RuleId::R1, {v}, {v});
  return std::nullopt;
}

/// R2: of the lowest pair of degree-one vertices sharing their neighbour,
/// delete one, preferring a vertex outside S and otherwise the higher id.
inline std::optional<RuleStep> rule2(const Instance& inst) {
  const Graph& g = inst.graph();
  const int n = g.vertex_count();
  for (Vertex u = 0; u < n; ++u) {
    if (g.degree(u) != 1) continue;
    Vertex c = g.neighbors(u)[0];
    for (Vertex v = u + 1; v < n; ++v) {
      if (g.degree(v) != 1 || g.neighbors(v)[0] != c) continue;
      Vertex victim = inst.in_modulator(v) && !inst.in_modulator(u) ? u : v;
      return detail::deletion_step(inst, RuleId::R2, {u, v, c}, {victim});
    }
  }
  return std::nullopt;
}

/// R3: two degree-two vertices with common neighbours x, y, one of them in
/// S: delete one of the pair and add {x, y}.
inline std::optional<RuleStep> rule3(const Instance& inst) {
  const Graph& g = inst.graph();
  const int n = g.vertex_count();
  for (Vertex v = 0; v < n; ++v) {
    if (g.degree(v) != 2) continue;
    Vertex x = g.neighbors(v)[0], y = g.neighbors(v)[1];
    if (!inst.in_modulator(x) && !inst.in_modulator(y)) continue;
    for (Vertex w = v + 1; w < n; ++w) {
      if (g.degree(w) != 2 || g.neighbors(w)[0] != x || g.neighbors(w)[1] != y) continue;
      Vertex victim = inst.in_modulator(w) && !inst.in_modulator(v) ? v : w;
      RuleStep step = detail::deletion_step(inst, RuleId::R3, {v, w, x, y}, {victim});
      Graph h = step.instance.graph();
      Vertex hx = *h.find(g.label(x)), hy = *h.find(g.label(y));
      if (h.insert_edge(hx, hy)) {
        step.application.added_edges.emplace_back(g.label(x), g.label(y));
        step.instance = Instance(std::move(h), step.instance.modulator(), inst.target());
      }
      return step;
    }
  }
  return std::nullopt;
}

namespace detail {

inline std::optional<RuleStep> disjoint_paths_rule(const Instance& inst, RuleId rule, bool require_modulator) {
  const Graph& g = inst.graph();
  const int n = g.vertex_count();
  const int need = inst.target() + 1;
  for (Vertex v = 0; v < n; ++v) {
    if (require_modulator && !inst.in_modulator(v)) continue;
    if (g.degree(v) < need) continue;
    for (Vertex w = require_modulator ? 0 : v + 1; w < n; ++w) {
      if (w == v || g.degree(w) < need || g.has_edge(v, w)) continue;
      if (count_internally_disjoint_paths(g, v, w, need) >= need) return edge_step(inst, rule, v, w);
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// R4: v in S nonadjacent to w with at least k+1 internally disjoint v-w paths.
inline std::optional<RuleStep> rule4(const Instance& inst) {
  return detail::disjoint_paths_rule(inst, RuleId::R4, true);
}

/// R3G: the same edge addition for any nonadjacent pair.
inline std::optional<RuleStep> rule3g(const Instance& inst) {
  return detail::disjoint_paths_rule(inst, RuleId::R3G, false);
}

/// R5: delete a simplicial v outside S of degree at least two when every
/// pair of its neighbours has a common simplicial neighbour outside N[v].
inline std::optional<RuleStep> rule5(const Instance& inst) {
  const Graph& g = inst.graph();
  const int n = g.vertex_count();
  std::vector<char> simplicial(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) simplicial[v] = is_simplicial(g, v);
  for (Vertex v = 0; v < n; ++v) {
    if (inst.in_modulator(v) || g.degree(v) < 2 || !simplicial[v]) continue;
    auto nb = g.neighbors(v);
    bool all_witnessed = true;
    for (std::size_t i = 0; i < nb.size() && all_witnessed; ++i)
      for (std::size_t j = i + 1; j < nb.size() && all_witnessed; ++j) {
        bool found = false;
        for (Vertex w : g.neighbors(nb[i])) {
          if (w == v || !simplicial[w] || g.has_edge(w, v)) continue;
          if (g.has_edge(w, nb[j])) {
            found = true;
            break;
          }
        }
        all_witnessed = found;
      }
    if (all_witnessed) return detail::deletion_step(inst, RuleId::R5, {v}, {v});
  }
  return std::nullopt;
}

/// R6: delete a simplicial component W when every pair (v, w) of its
/// S-neighbours, v = w included, is shared by at least 2k+3 other
/// simplicial components of pathwidth at least pw(G[W]). A component with
/// no S-neighbour needs 2k+3 other simplicial components of at least its
/// pathwidth. Components too large for the solver are skipped.
inline std::optional<RuleStep> rule6(const Instance& inst, ComponentWidthCache& cache) {
  const Graph& g = inst.graph();
  const auto comps = simplicial_components(g, inst.modulator_mask());
  if (comps.size() < 2) return std::nullopt;
  const long long need = 2LL * inst.target() + 3;
  if (static_cast<long long>(comps.size()) - 1 < need) return std::nullopt;

  std::vector<std::optional<int>> width(comps.size());
  std::vector<std::vector<char>> touches(comps.size(), std::vector<char>(static_cast<std::size_t>(g.vertex_count()), 0));
  std::vector<VertexList> attach(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) {
    width[i] = cache.width(g, comps[i]);
    attach[i] = open_neighborhood(g, comps[i]);
    for (Vertex s : attach[i]) touches[i][s] = 1;
  }
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (!width[i]) continue;
    auto supporters = [&](Vertex a, Vertex b) {
      long long count = 0;
      for (std::size_t j = 0; j < comps.size(); ++j) {
        if (j == i || !width[j] || *width[j] < *width[i]) continue;
        if (a >= 0 && (!touches[j][a] || !touches[j][b])) continue;
        ++count;
      }
      return count;
    };
    const VertexList& y = attach[i];
    bool removable = true;
    if (y.empty()) {
      removable = supporters(-1, -1) >= need;
    } else {
      for (std::size_t a = 0; a < y.size() && removable; ++a)
        for (std::size_t b = a; b < y.size() && removable; ++b) removable = supporters(y[a], y[b]) >= need;
    }
    if (removable) {
      VertexList site = comps[i];
      site.insert(site.end(), y.begin(), y.end());
      return detail::deletion_step(inst, RuleId::R6, site, comps[i]);
    }
  }
  return std::nullopt;
}

/// R7: for an almost simplicial v outside S of degree at least three,
/// answer no if deg(v) > k+1, else replace v by degree-2 vertices, one per
/// pair of its neighbours. `filter` may veto candidate vertices.
inline std::optional<RuleStep> rule7(const Instance& inst, const Rule7Filter& filter = {}) {
  const Graph& g = inst.graph();
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (inst.in_modulator(v) || g.degree(v) < 3) continue;
    VertexList special = special_neighbors(g, v);
    if (special.empty()) continue;
    if (filter && !filter(inst, v)) continue;
    if (g.degree(v) > inst.target() + 1) {
      RuleStep step;
      step.verdict = Verdict::DecidedNo;
      step.instance = inst;
      step.application.rule = RuleId::R7;
      step.application.site = {g.label(v), g.label(special.front())};
      return step;
    }
    RuleStep step = detail::replace_with_pair_vertices(inst, v);
    step.application.site.push_back(g.label(special.front()));
    return step;
  }
  return std::nullopt;
}

/// Shared state for applying rules one at a time.
struct RuleContext {
  Rule7Filter rule7_filter;
  ComponentWidthCache cache{};
};

inline std::optional<RuleStep> apply_rule(RuleId rule, const Instance& inst, RuleContext& ctx) {
  switch (rule) {
    case RuleId::R1: return rule1(inst);
    case RuleId::R2: return rule2(inst);
    case RuleId::R3: return rule3(inst);
    case RuleId::R4: return rule4(inst);
    case RuleId::R3G: return rule3g(inst);
    case RuleId::R5: return rule5(inst);
    case RuleId::R6: return rule6(inst, ctx.cache);
    case RuleId::R7: return rule7(inst, ctx.rule7_filter);
  }
  return std::nullopt;
}

struct ReduceOptions {
  Rule7Filter rule7_filter;
  /// Budget constant C in C * (n^2 + n * k^2) applications.
  long long bound_constant = 10;
  int pathwidth_cap = kDefaultPathwidthCap;
};

inline long long application_budget(int n, int k, long long constant) {
  const long long nn = n, kk = k;
  return constant * (nn * nn + nn * kk * kk);
}

/// Applies the enabled rules in priority order until none matches. Throws
/// BoundViolation if the application count exceeds the budget.
inline ReductionOutcome exhaustive_reduce(const Instance& input, RuleSet enabled, const ReduceOptions& options = {}) {
  RuleContext ctx{options.rule7_filter, ComponentWidthCache(options.pathwidth_cap)};
  const long long budget = application_budget(input.graph().vertex_count(), input.target(), options.bound_constant);
  ReductionOutcome out;
  out.instance = input;
  for (;;) {
    std::optional<RuleStep> step;
    for (RuleId r : kRulePriority) {
      if (!enabled.contains(r)) continue;
      step = apply_rule(r, out.instance, ctx);
      if (step) break;
    }
    if (!step) return out;
    out.trace.push_back(std::move(step->application));
    if (static_cast<long long>(out.trace.size()) > budget)
      throw BoundViolation("exhaustive_reduce: " + std::to_string(out.trace.size()) +
                           " applications exceed budget " + std::to_string(budget));
    if (step->verdict == Verdict::DecidedNo) {
      out.verdict = Verdict::DecidedNo;
      return out;
    }
    out.instance = std::move(step->instance);
  }
}

inline int count_high_degree(const Graph& g) {
  int count = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) count += g.degree(v) >= 3;
  return count;
}

}  // namespace pwk

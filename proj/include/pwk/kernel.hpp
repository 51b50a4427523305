#pragma once

// Polynomial kernelizations for pathwidth parameterized by a modulator to
// independent sets, bounded-size components, or disjoint unions of stars,
// with an audit of the counting inequalities behind their size bounds.

#include <string>
#include <utility>
#include <vector>

#include "pwk/graph.hpp"
#include "pwk/reduction.hpp"
#include "pwk/width.hpp"

namespace pwk {

struct Family {
  enum class Kind { IndependentSet, BoundedComponents, StarForest };

  Kind kind = Kind::IndependentSet;
  int max_component = 1;  // c, for BoundedComponents

  static Family independent_set() { return {Kind::IndependentSet, 1}; }
  static Family star_forest() { return {Kind::StarForest, 1}; }
  static Family bounded_components(int c) {
    if (c < 1) throw Error("component bound must be at least 1");
    return {Kind::BoundedComponents, c};
  }

  /// "vc", "stars" or "bounded:<c>".
  static Family parse(const std::string& text) {
    if (text == "vc") return independent_set();
    if (text == "stars") return star_forest();
    const std::string prefix = "bounded:";
    if (text.rfind(prefix, 0) == 0) {
      std::size_t used = 0;
      int c = 0;
      try {
        c = std::stoi(text.substr(prefix.size()), &used);
      } catch (const std::exception&) {
        throw Error("bad family '" + text + "'");
      }
      if (used + prefix.size() != text.size()) throw Error("bad family '" + text + "'");
      return bounded_components(c);
    }
    throw Error("unknown family '" + text + "'");
  }

  std::string name() const {
    switch (kind) {
      case Kind::IndependentSet: return "vc";
      case Kind::StarForest: return "stars";
      case Kind::BoundedComponents: return "bounded:" + std::to_string(max_component);
    }
    return "?";
  }

  friend bool operator==(const Family&, const Family&) = default;
};

struct Recognition {
  bool ok = true;
  VertexList offending_component;
  std::string reason;

  explicit operator bool() const noexcept { return ok; }
};

/// Whether G - S belongs to the family; otherwise names an offending component.
inline Recognition recognize(const Graph& g, const std::vector<bool>& in_s, const Family& f) {
  for (auto& comp : components_avoiding(g, in_s)) {
    const int size = static_cast<int>(comp.size());
    Recognition bad{false, comp, {}};
    switch (f.kind) {
      case Family::Kind::IndependentSet:
        if (size > 1) {
          bad.reason = "component has an edge";
          return bad;
        }
        break;
      case Family::Kind::BoundedComponents:
        if (size > f.max_component) {
          bad.reason = "component of size " + std::to_string(size) + " exceeds " + std::to_string(f.max_component);
          return bad;
        }
        break;
      case Family::Kind::StarForest:
        if (size > 2 && !ComponentWidthCache::is_star(induced_subgraph(g, comp))) {
          bad.reason = "component is not a star";
          return bad;
        }
        break;
    }
  }
  return {};
}

inline Recognition recognize(const Instance& inst, const Family& f) {
  return recognize(inst.graph(), inst.modulator_mask(), f);
}

/// Counts used by the size-bound arguments. Star-specific counts are only
/// filled when every component of G - S is a star. In a two-vertex star the
/// vertex of larger degree in G (lower id on ties) is the centre; leaf
/// degrees are degrees in G.
struct StructuralCounts {
  int modulator_size = 0;
  int vertices = 0;
  int nonsimplicial_components = 0;
  int simplicial_components = 0;
  bool star_forest = false;
  int star_centers = 0;
  int degree1_leaves = 0;
  int degree2_leaves = 0;
  int high_degree_leaves = 0;
  int simplicial_vertices_outside = 0;
};

inline StructuralCounts structural_counts(const Instance& inst) {
  const Graph& g = inst.graph();
  StructuralCounts c;
  c.modulator_size = inst.modulator_size();
  c.vertices = g.vertex_count();
  const auto comps = components_avoiding(g, inst.modulator_mask());
  c.star_forest = true;
  for (const auto& comp : comps) {
    if (is_clique(g, open_neighborhood(g, comp)))
      ++c.simplicial_components;
    else
      ++c.nonsimplicial_components;
    if (comp.size() > 2 && !ComponentWidthCache::is_star(induced_subgraph(g, comp))) c.star_forest = false;
  }
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (!inst.in_modulator(v) && is_simplicial(g, v)) ++c.simplicial_vertices_outside;
  if (!c.star_forest) return c;
  for (const auto& comp : comps) {
    ++c.star_centers;
    if (comp.size() == 1) continue;
    Vertex center = comp[0];
    for (Vertex v : comp) {
      int inner = 0;
      for (Vertex y : g.neighbors(v)) inner += !inst.in_modulator(y);
      int center_inner = 0;
      for (Vertex y : g.neighbors(center)) center_inner += !inst.in_modulator(y);
      if (inner > center_inner || (inner == center_inner && comp.size() == 2 && g.degree(v) > g.degree(center)))
        center = v;
    }
    for (Vertex v : comp) {
      if (v == center) continue;
      const int d = g.degree(v);
      if (d == 1)
        ++c.degree1_leaves;
      else if (d == 2)
        ++c.degree2_leaves;
      else
        ++c.high_degree_leaves;
    }
  }
  return c;
}

struct BoundCheck {
  std::string name;
  long long value = 0;
  long long bound = 0;
  bool ok = true;
};

struct KernelOptions {
  /// Constant of the rule application budget C * (n^2 + n k^2).
  long long application_constant = 10;
  /// Constants on the headline size bounds.
  long long star_size_constant = 4;       // C4 * (l + 1)^4
  long long bounded_size_constant = 3;    // C2 * (c l^3 + c^2 l^2 + l + c)
  long long vertex_cover_size_constant = 3;  // C1 * (l^3 + l)
  /// R5 in the vertex-cover pipeline; it bounds simplicial vertices by l^2.
  bool vertex_cover_rule5 = true;
  int pathwidth_cap = kDefaultPathwidthCap;
};

struct KernelResult {
  Family family;
  ReductionOutcome outcome;
  StructuralCounts stats;
  std::vector<BoundCheck> audits;
  bool bound_ok = true;
  std::string bound_formula;
  /// Labels of whole connected components of G dropped (all inside G - S).
  std::vector<std::vector<std::string>> dropped_components;
  long long applications = 0;
  long long application_budget = 0;
  int input_modulator_size = 0;
  int input_vertices = 0;
};

/// Constant-size yes-instance: K1, S empty, k = 0.
inline Instance canonical_yes_instance() { return Instance(Graph(1), {}, 0); }

/// Constant-size no-instance: K3, S empty, k = 1.
inline Instance canonical_no_instance() {
  const Edge e[] = {{0, 1}, {0, 2}, {1, 2}};
  return Instance(Graph::from_edges(3, e), {}, 1);
}

namespace detail {

inline void add_check(KernelResult& r, std::string name, long long value, long long bound) {
  BoundCheck c{std::move(name), value, bound, value <= bound};
  r.bound_ok = r.bound_ok && c.ok;
  r.audits.push_back(std::move(c));
}

/// Components of G - S with no neighbour in S are whole components of G:
/// pw(G) = max(pw(G - W), pw(G[W])). Answer no if one exceeds k, otherwise
/// drop them all. Returns false on a no answer.
inline bool drop_detached_components(Instance& inst, KernelResult& r, ComponentWidthCache& cache) {
  const Graph& g = inst.graph();
  VertexList doomed;
  for (const auto& comp : components_avoiding(g, inst.modulator_mask())) {
    if (!open_neighborhood(g, comp).empty()) continue;
    auto w = cache.width(g, comp);
    if (!w) continue;
    if (*w > inst.target()) return false;
    r.dropped_components.push_back(labels_of(g, comp));
    doomed.insert(doomed.end(), comp.begin(), comp.end());
  }
  if (!doomed.empty()) inst = delete_vertices(inst, doomed);
  return true;
}

inline void finish_decided(KernelResult& r, const Instance& input, Verdict v) {
  r.outcome.verdict = v;
  r.outcome.instance = v == Verdict::DecidedYes ? canonical_yes_instance() : canonical_no_instance();
  r.stats = structural_counts(input);
  r.bound_formula = "decided";
}

/// Alternates the rule fixpoint with dropping detached components until
/// neither changes the instance.
inline void run_pipeline(const Instance& input, RuleSet rules, const Rule7Filter& filter, const KernelOptions& opt,
                         KernelResult& r) {
  ReduceOptions ro;
  ro.rule7_filter = filter;
  ro.bound_constant = opt.application_constant;
  ro.pathwidth_cap = opt.pathwidth_cap;
  ComponentWidthCache cache(opt.pathwidth_cap);
  r.application_budget = application_budget(input.graph().vertex_count(), input.target(), opt.application_constant);

  Instance current = input;
  for (;;) {
    if (!drop_detached_components(current, r, cache)) {
      r.outcome.verdict = Verdict::DecidedNo;
      r.outcome.instance = canonical_no_instance();
      return;
    }
    ReductionOutcome step = exhaustive_reduce(current, rules, ro);
    r.applications += static_cast<long long>(step.trace.size());
    for (auto& a : step.trace) r.outcome.trace.push_back(std::move(a));
    if (r.applications > r.application_budget)
      throw BoundViolation("kernelizer: " + std::to_string(r.applications) + " applications exceed budget " +
                           std::to_string(r.application_budget));
    if (step.verdict == Verdict::DecidedNo) {
      r.outcome.verdict = Verdict::DecidedNo;
      r.outcome.instance = canonical_no_instance();
      return;
    }
    const bool changed = !step.trace.empty();
    current = std::move(step.instance);
    if (!changed) break;
  }
  r.outcome.verdict = Verdict::Reduced;
  r.outcome.instance = std::move(current);
}

inline void require_family(const Instance& inst, const Family& f) {
  if (auto rec = recognize(inst, f); !rec)
    throw Error("input is not in family " + f.name() + ": " + rec.reason);
}

inline void audit_components(KernelResult& r, long long k, long long l) {
  add_check(r, "nonsimplicial components <= k*l^2", r.stats.nonsimplicial_components, k * l * l);
  add_check(r, "simplicial components <= (2k+3)*l^2", r.stats.simplicial_components, (2 * k + 3) * l * l);
}

}  // namespace detail

/// R7 only on vertices with at most one neighbour outside S.
inline Rule7Filter star_rule7_filter() {
  return [](const Instance& in, Vertex v) {
    int outside = 0;
    for (Vertex y : in.graph().neighbors(v)) outside += !in.in_modulator(y);
    return outside <= 1;
  };
}

/// Modulator to a disjoint union of stars. Answers yes outright when
/// k >= l + 1; otherwise runs R1-R6 and R7 restricted to vertices with at
/// most one neighbour in G - S.
inline KernelResult kernelize_star_forest(const Instance& inst, const KernelOptions& opt = {}) {
  const Family family = Family::star_forest();
  detail::require_family(inst, family);
  KernelResult r;
  r.family = family;
  r.input_modulator_size = inst.modulator_size();
  r.input_vertices = inst.graph().vertex_count();
  const long long l_in = r.input_modulator_size;
  if (inst.target() >= l_in + 1) {
    detail::finish_decided(r, inst, Verdict::DecidedYes);
    return r;
  }
  detail::run_pipeline(inst, RuleSet::standard(), star_rule7_filter(), opt, r);
  if (r.outcome.verdict != Verdict::Reduced) {
    r.stats = structural_counts(inst);
    r.bound_formula = "decided";
    return r;
  }
  r.stats = structural_counts(r.outcome.instance);
  const long long k = inst.target();
  const long long l = r.stats.modulator_size;
  detail::add_check(r, "G'-S' is a star forest", r.stats.star_forest ? 0 : 1, 0);
  detail::audit_components(r, k, l);
  detail::add_check(r, "degree-1 leaves <= centers", r.stats.degree1_leaves, r.stats.star_centers);
  detail::add_check(r, "degree-2 leaves <= centers*l", r.stats.degree2_leaves, r.stats.star_centers * l);
  detail::add_check(r, "degree->2 leaves <= (k+1)*l^2", r.stats.high_degree_leaves, (k + 1) * l * l);
  const long long p = l_in + 1;
  detail::add_check(r, "|V'| <= C4*(l+1)^4", r.stats.vertices, opt.star_size_constant * p * p * p * p);
  detail::add_check(r, "applications <= C*(n^2+n*k^2)", r.applications, r.application_budget);
  r.bound_formula = "|V'| <= " + std::to_string(opt.star_size_constant) + "*(l+1)^4 with l = " + std::to_string(l_in);
  return r;
}

namespace detail {

inline KernelResult kernelize_bounded_impl(const Instance& inst, const Family& family, bool use_rule5,
                                           const KernelOptions& opt) {
  require_family(inst, family);
  const long long c = family.max_component;
  KernelResult r;
  r.family = family;
  r.input_modulator_size = inst.modulator_size();
  r.input_vertices = inst.graph().vertex_count();
  const long long l_in = r.input_modulator_size;
  // pw(G) <= c + l - 1.
  if (inst.target() >= c + l_in - 1) {
    finish_decided(r, inst, Verdict::DecidedYes);
    return r;
  }
  RuleSet rules{RuleId::R1, RuleId::R2, RuleId::R4, RuleId::R6};
  if (use_rule5) rules.insert(RuleId::R5);
  run_pipeline(inst, rules, {}, opt, r);
  if (r.outcome.verdict != Verdict::Reduced) {
    r.stats = structural_counts(inst);
    r.bound_formula = "decided";
    return r;
  }
  r.stats = structural_counts(r.outcome.instance);
  const long long k = inst.target();
  const long long l = r.stats.modulator_size;
  add_check(r, "G'-S' keeps components of size <= c",
            recognize(r.outcome.instance, family) ? 0 : 1, 0);
  audit_components(r, k, l);
  add_check(r, "|V'| <= l + c*(3k+3)*l^2", r.stats.vertices, l + c * (3 * k + 3) * l * l);
  add_check(r, "applications <= C*(n^2+n*k^2)", r.applications, r.application_budget);
  if (c == 1) {
    add_check(r, "|V'| <= C1*(l^3+l)", r.stats.vertices, opt.vertex_cover_size_constant * (l_in * l_in * l_in + l_in));
    if (use_rule5) add_check(r, "simplicial vertices of G'-S' <= l^2", r.stats.simplicial_vertices_outside, l * l);
    r.bound_formula = "|V'| <= " + std::to_string(opt.vertex_cover_size_constant) + "*(l^3+l) with l = " +
                      std::to_string(l_in);
  } else {
    add_check(r, "|V'| <= C2*(c*l^3+c^2*l^2+l+c)", r.stats.vertices,
              opt.bounded_size_constant * (c * l_in * l_in * l_in + c * c * l_in * l_in + l_in + c));
    r.bound_formula = "|V'| <= " + std::to_string(opt.bounded_size_constant) + "*(c*l^3+c^2*l^2+l+c) with c = " +
                      std::to_string(c) + ", l = " + std::to_string(l_in);
  }
  return r;
}

}  // namespace detail

/// Modulator to components of at most c vertices. Answers yes outright when
/// k >= c + l - 1; otherwise runs R1, R2, R4, R5, R6.
inline KernelResult kernelize_bounded_components(const Instance& inst, int c, const KernelOptions& opt = {}) {
  return detail::kernelize_bounded_impl(inst, Family::bounded_components(c), true, opt);
}

/// Vertex cover modulator: the c = 1 case.
inline KernelResult kernelize_vertex_cover(const Instance& inst, const KernelOptions& opt = {}) {
  return detail::kernelize_bounded_impl(inst, Family::independent_set(), opt.vertex_cover_rule5, opt);
}

inline KernelResult kernelize(const Instance& inst, const Family& f, const KernelOptions& opt = {}) {
  switch (f.kind) {
    case Family::Kind::IndependentSet: return kernelize_vertex_cover(inst, opt);
    case Family::Kind::BoundedComponents: return kernelize_bounded_components(inst, f.max_component, opt);
    case Family::Kind::StarForest: return kernelize_star_forest(inst, opt);
  }
  throw Error("unknown family");
}

}  // namespace pwk

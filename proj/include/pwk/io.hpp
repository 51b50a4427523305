#pragma once

// Line-based text formats and JSON reports.
//
// Instance file:
//   pwk-instance v1
//   p <n> <m> <k>
//   v <label> [weight]        one per vertex, in id order
//   e <label> <label>         m lines
//   s <label>...              optional, the modulator
//   f <family>                optional: vc | stars | bounded:<c>
// Blank lines and anything after '#' are ignored.

#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pwk/composition.hpp"
#include "pwk/decomposition.hpp"
#include "pwk/error.hpp"
#include "pwk/graph.hpp"
#include "pwk/kernel.hpp"
#include "pwk/reduction.hpp"

namespace pwk {

using Json = nlohmann::ordered_json;

struct InstanceFile {
  Graph graph;
  VertexList modulator;
  int target = 0;
  std::optional<std::vector<Weight>> weights;
  std::optional<Family> family;

  Instance instance() const { return Instance(graph, modulator, target); }
  Cutwidth3Instance cutwidth3() const { return {graph, target}; }
  WeightedGraph weighted() const {
    return weights ? WeightedGraph(graph, *weights) : WeightedGraph::unit(graph);
  }

  friend bool operator==(const InstanceFile&, const InstanceFile&) = default;
};

namespace detail {

inline std::vector<std::string> split_tokens(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

inline long long parse_integer(const std::string& tok, int line, const char* what) {
  std::size_t used = 0;
  long long value = 0;
  try {
    value = std::stoll(tok, &used);
  } catch (const std::exception&) {
    throw ParseError(line, std::string("expected integer ") + what + ", got '" + tok + "'");
  }
  if (used != tok.size()) throw ParseError(line, std::string("expected integer ") + what + ", got '" + tok + "'");
  return value;
}

/// Non-empty lines with their 1-based line numbers.
inline std::vector<std::pair<int, std::vector<std::string>>> tokenize_lines(std::string_view text) {
  std::vector<std::pair<int, std::vector<std::string>>> out;
  int number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    auto toks = split_tokens(text.substr(start, end - start));
    if (!toks.empty()) out.emplace_back(number, std::move(toks));
    start = end + 1;
  }
  return out;
}

inline void expect_header(const std::vector<std::pair<int, std::vector<std::string>>>& lines, const std::string& magic) {
  if (lines.empty()) throw ParseError(0, "empty input");
  const auto& [line, toks] = lines.front();
  if (toks.size() != 2 || toks[0] != magic || toks[1] != "v1")
    throw ParseError(line, "expected header '" + magic + " v1'");
}

inline Vertex lookup(const Graph& g, const std::string& label, int line) {
  auto id = g.find(label);
  if (!id) throw ParseError(line, "unknown vertex '" + label + "'");
  return *id;
}

}  // namespace detail

inline InstanceFile parse_instance(std::string_view text) {
  const auto lines = detail::tokenize_lines(text);
  detail::expect_header(lines, "pwk-instance");
  if (lines.size() < 2 || lines[1].second[0] != "p")
    throw ParseError(lines.size() < 2 ? 0 : lines[1].first, "expected 'p <n> <m> <k>'");
  const auto& [pline, ptoks] = lines[1];
  if (ptoks.size() != 4) throw ParseError(pline, "expected 'p <n> <m> <k>'");
  const long long n = detail::parse_integer(ptoks[1], pline, "vertex count");
  const long long m = detail::parse_integer(ptoks[2], pline, "edge count");
  const long long k = detail::parse_integer(ptoks[3], pline, "target");
  if (n < 0 || m < 0 || k < 0) throw ParseError(pline, "negative value in header");
  if (n > 10'000'000) throw ParseError(pline, "vertex count too large");

  InstanceFile out;
  out.target = static_cast<int>(k);
  std::vector<std::string> labels;
  std::vector<Weight> weights;
  bool any_weight = false;
  std::vector<std::pair<std::string, std::string>> edge_labels;
  std::vector<int> edge_lines;
  std::optional<std::pair<int, std::vector<std::string>>> s_line;
  std::size_t i = 2;

  for (; i < lines.size(); ++i) {
    const auto& [line, toks] = lines[i];
    const std::string& kind = toks[0];
    if (kind == "v") {
      if (!edge_labels.empty() || s_line || out.family) throw ParseError(line, "vertex line after edges, modulator or family");
      if (toks.size() < 2 || toks.size() > 3) throw ParseError(line, "expected 'v <label> [weight]'");
      labels.push_back(toks[1]);
      Weight w = 1;
      if (toks.size() == 3) {
        w = detail::parse_integer(toks[2], line, "weight");
        if (w < 1) throw ParseError(line, "weight must be positive");
        any_weight = true;
      }
      weights.push_back(w);
    } else if (kind == "e") {
      if (s_line || out.family) throw ParseError(line, "edge line after modulator or family");
      if (toks.size() != 3) throw ParseError(line, "expected 'e <label> <label>'");
      edge_labels.emplace_back(toks[1], toks[2]);
      edge_lines.push_back(line);
    } else if (kind == "s") {
      if (s_line) throw ParseError(line, "second modulator line");
      if (out.family) throw ParseError(line, "modulator line after family");
      s_line = lines[i];
    } else if (kind == "f") {
      if (out.family) throw ParseError(line, "second family line");
      if (toks.size() != 2) throw ParseError(line, "expected 'f <family>'");
      try {
        out.family = Family::parse(toks[1]);
      } catch (const Error& e) {
        throw ParseError(line, e.what());
      }
    } else {
      throw ParseError(line, "unknown line type '" + kind + "'");
    }
  }

  if (static_cast<long long>(labels.size()) != n)
    throw ParseError(pline, "header declares " + std::to_string(n) + " vertices, found " + std::to_string(labels.size()));
  if (static_cast<long long>(edge_labels.size()) != m)
    throw ParseError(pline, "header declares " + std::to_string(m) + " edges, found " + std::to_string(edge_labels.size()));

  Graph g(0);
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (g.find(labels[v])) {
      int line = 0;
      int seen = 0;
      for (const auto& [ln, toks] : lines)
        if (toks[0] == "v" && ++seen == static_cast<int>(v) + 1) line = ln;
      throw ParseError(line, "duplicate vertex label '" + labels[v] + "'");
    }
    g.insert_vertex(labels[v]);
  }
  for (std::size_t e = 0; e < edge_labels.size(); ++e) {
    const int line = edge_lines[e];
    Vertex u = detail::lookup(g, edge_labels[e].first, line);
    Vertex v = detail::lookup(g, edge_labels[e].second, line);
    if (u == v) throw ParseError(line, "self-loop at '" + edge_labels[e].first + "'");
    if (!g.insert_edge(u, v))
      throw ParseError(line, "duplicate edge '" + edge_labels[e].first + "' '" + edge_labels[e].second + "'");
  }
  if (s_line) {
    const auto& [line, toks] = *s_line;
    std::vector<bool> seen(static_cast<std::size_t>(g.vertex_count()), false);
    for (std::size_t t = 1; t < toks.size(); ++t) {
      Vertex v = detail::lookup(g, toks[t], line);
      if (seen[v]) throw ParseError(line, "vertex '" + toks[t] + "' listed twice in modulator");
      seen[v] = true;
      out.modulator.push_back(v);
    }
    std::sort(out.modulator.begin(), out.modulator.end());
  }
  out.graph = std::move(g);
  if (any_weight) out.weights = std::move(weights);
  return out;
}

/// Canonical text: vertices in id order, edges sorted by id pair, modulator
/// sorted by id.
inline std::string serialize_instance(const InstanceFile& f) {
  std::ostringstream out;
  const Graph& g = f.graph;
  out << "pwk-instance v1\n";
  out << "p " << g.vertex_count() << ' ' << g.edge_count() << ' ' << f.target << '\n';
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    out << "v " << g.label(v);
    if (f.weights) out << ' ' << (*f.weights)[v];
    out << '\n';
  }
  for (auto [u, v] : g.edges()) out << "e " << g.label(u) << ' ' << g.label(v) << '\n';
  if (!f.modulator.empty()) {
    VertexList s = f.modulator;
    std::sort(s.begin(), s.end());
    out << 's';
    for (Vertex v : s) out << ' ' << g.label(v);
    out << '\n';
  }
  if (f.family) out << "f " << f.family->name() << '\n';
  return out.str();
}

inline InstanceFile to_file(const Instance& inst, std::optional<Family> family = std::nullopt) {
  return {inst.graph(), inst.modulator(), inst.target(), std::nullopt, family};
}

inline InstanceFile to_file(const WeightedGraph& wg, int target = 0) {
  return {wg.graph(), {}, target, wg.weights(), std::nullopt};
}

inline std::string serialize_instance(const Instance& inst) { return serialize_instance(to_file(inst)); }

// Decomposition file:
//   pwk-decomposition v1
//   path                        then 'b <label>...' per bag
//   tree                        then 'bag <id> <label>...' and 'arc <id> <id>'
//   order <label>...            elimination ordering or layout

struct DecompositionFile {
  std::optional<PathDecomposition> path;
  std::optional<TreeDecomposition> tree;
  std::optional<VertexList> order;
};

inline DecompositionFile parse_decomposition(std::string_view text, const Graph& g) {
  const auto lines = detail::tokenize_lines(text);
  detail::expect_header(lines, "pwk-decomposition");
  DecompositionFile out;
  enum class Mode { None, Path, Tree } mode = Mode::None;
  auto read_bag = [&](const std::vector<std::string>& toks, std::size_t from, int line) {
    Bag bag;
    for (std::size_t t = from; t < toks.size(); ++t) bag.push_back(detail::lookup(g, toks[t], line));
    std::sort(bag.begin(), bag.end());
    if (std::adjacent_find(bag.begin(), bag.end()) != bag.end()) throw ParseError(line, "vertex repeated in bag");
    return bag;
  };
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [line, toks] = lines[i];
    const std::string& kind = toks[0];
    if (kind == "path" || kind == "tree") {
      if (mode != Mode::None) throw ParseError(line, "decomposition kind given twice");
      if (toks.size() != 1) throw ParseError(line, "unexpected tokens after '" + kind + "'");
      mode = kind == "path" ? Mode::Path : Mode::Tree;
      if (mode == Mode::Path) out.path.emplace();
      else out.tree.emplace();
    } else if (kind == "b") {
      if (mode != Mode::Path) throw ParseError(line, "'b' line outside a path decomposition");
      out.path->bags.push_back(read_bag(toks, 1, line));
    } else if (kind == "bag") {
      if (mode != Mode::Tree) throw ParseError(line, "'bag' line outside a tree decomposition");
      if (toks.size() < 2) throw ParseError(line, "expected 'bag <id> <label>...'");
      int id = static_cast<int>(detail::parse_integer(toks[1], line, "bag id"));
      if (!out.tree->bags.emplace(id, read_bag(toks, 2, line)).second) throw ParseError(line, "duplicate bag id");
    } else if (kind == "arc") {
      if (mode != Mode::Tree) throw ParseError(line, "'arc' line outside a tree decomposition");
      if (toks.size() != 3) throw ParseError(line, "expected 'arc <id> <id>'");
      out.tree->tree.emplace_back(static_cast<int>(detail::parse_integer(toks[1], line, "bag id")),
                                  static_cast<int>(detail::parse_integer(toks[2], line, "bag id")));
    } else if (kind == "order") {
      if (out.order) throw ParseError(line, "second order line");
      VertexList order;
      for (std::size_t t = 1; t < toks.size(); ++t) order.push_back(detail::lookup(g, toks[t], line));
      out.order = std::move(order);
    } else {
      throw ParseError(line, "unknown line type '" + kind + "'");
    }
  }
  return out;
}

inline std::string serialize_path_decomposition(const Graph& g, const PathDecomposition& pd) {
  std::ostringstream out;
  out << "pwk-decomposition v1\npath\n";
  for (const auto& bag : pd.bags) {
    out << 'b';
    for (Vertex v : bag) out << ' ' << g.label(v);
    out << '\n';
  }
  return out.str();
}

inline std::string serialize_tree_decomposition(const Graph& g, const TreeDecomposition& td) {
  std::ostringstream out;
  out << "pwk-decomposition v1\ntree\n";
  for (const auto& [id, bag] : td.bags) {
    out << "bag " << id;
    for (Vertex v : bag) out << ' ' << g.label(v);
    out << '\n';
  }
  for (auto [a, b] : td.tree) out << "arc " << a << ' ' << b << '\n';
  return out.str();
}

inline std::string serialize_order(const Graph& g, const VertexList& order) {
  std::ostringstream out;
  out << "pwk-decomposition v1\norder";
  for (Vertex v : order) out << ' ' << g.label(v);
  out << '\n';
  return out.str();
}

/// 64-bit FNV-1a, hex encoded.
inline std::string digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

inline Json to_json(const RuleApplication& a) {
  Json j;
  j["rule"] = rule_name(a.rule);
  j["site"] = a.site;
  j["removed"] = a.removed;
  j["added"] = a.added;
  Json edges = Json::array();
  for (const auto& [u, v] : a.added_edges) edges.push_back({u, v});
  j["added_edges"] = edges;
  return j;
}

/// One JSON object per line.
inline std::string trace_jsonl(const std::vector<RuleApplication>& trace) {
  std::string out;
  for (const auto& a : trace) out += to_json(a).dump() + '\n';
  return out;
}

inline Json to_json(const StructuralCounts& c) {
  return Json{{"modulator_size", c.modulator_size},
              {"vertices", c.vertices},
              {"nonsimplicial_components", c.nonsimplicial_components},
              {"simplicial_components", c.simplicial_components},
              {"star_forest", c.star_forest},
              {"star_centers", c.star_centers},
              {"degree1_leaves", c.degree1_leaves},
              {"degree2_leaves", c.degree2_leaves},
              {"high_degree_leaves", c.high_degree_leaves},
              {"simplicial_vertices_outside", c.simplicial_vertices_outside}};
}

inline Json to_json(const ReductionOutcome& r) {
  Json j;
  j["verdict"] = verdict_name(r.verdict);
  j["instance"] = serialize_instance(r.instance);
  j["applications"] = r.trace.size();
  return j;
}

inline Json to_json(const KernelResult& r) {
  Json j;
  j["family"] = r.family.name();
  j["verdict"] = verdict_name(r.outcome.verdict);
  j["input"] = {{"vertices", r.input_vertices}, {"modulator_size", r.input_modulator_size}};
  j["kernel"] = serialize_instance(r.outcome.instance);
  j["stats"] = to_json(r.stats);
  Json audits = Json::array();
  for (const auto& a : r.audits) audits.push_back({{"name", a.name}, {"value", a.value}, {"bound", a.bound}, {"ok", a.ok}});
  j["audits"] = audits;
  j["bound_ok"] = r.bound_ok;
  j["bound_formula"] = r.bound_formula;
  j["dropped_components"] = r.dropped_components;
  j["applications"] = r.applications;
  j["application_budget"] = r.application_budget;
  return j;
}

inline std::string_view part_name(const ComposedInstance& ci, Vertex v) {
  auto in = [](const VertexList& xs, Vertex x) { return std::find(xs.begin(), xs.end(), x) != xs.end(); };
  if (in(ci.dummy, v)) return "D";
  if (in(ci.b_selectors, v)) return "BI";
  if (in(ci.b_nodes, v)) return "BN";
  if (in(ci.b_edges, v)) return "BE";
  return "A";
}

/// Composed-instance dump. Vertex lines carry side, sub-part, weight and the
/// indices the vertex represents (all 0-based).
inline std::string serialize_composed(const ComposedInstance& ci) {
  const Graph& g = ci.gadget.graph();
  std::vector<std::string> index(static_cast<std::size_t>(g.vertex_count()));
  for (int i = 0; i < ci.t; ++i)
    for (int j = 0; j < ci.n; ++j) index[ci.instance_vertex[i][j]] = "instance " + std::to_string(i) + " node " + std::to_string(j);
  for (int i = 0; i < ci.t; ++i) index[ci.dummy[i]] = "instance " + std::to_string(i);
  for (int q = 0; q < ci.log_t; ++q) {
    index[ci.select_one[q]] = "bit " + std::to_string(q) + " value 1";
    index[ci.select_zero[q]] = "bit " + std::to_string(q) + " value 0";
  }
  for (int j = 0; j < ci.n; ++j) index[ci.node_rep[j]] = "node " + std::to_string(j);
  for (const auto& [uv, e] : ci.edge_rep) index[e] = "pair " + std::to_string(uv.first) + ' ' + std::to_string(uv.second);

  std::ostringstream out;
  out << "pwk-composed v1\n";
  out << "meta t " << ci.t << " n " << ci.n << " k " << ci.k << " log_t " << ci.log_t << '\n';
  out << "threshold " << ci.threshold << '\n';
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    std::string_view part = part_name(ci, v);
    out << "v " << g.label(v) << ' ' << (part == "A" || part == "D" ? 'A' : 'B') << ' ' << part << ' '
        << ci.gadget.weight(v) << ' ' << index[v] << '\n';
  }
  for (auto [u, v] : g.edges()) out << "e " << g.label(u) << ' ' << g.label(v) << '\n';
  return out.str();
}

inline Json to_json(const CompositionVerdict& r, const Graph& gadget) {
  Json j;
  j["weighted_treewidth"] = r.weighted_treewidth;
  j["threshold"] = r.threshold;
  j["gadget_yes"] = r.gadget_yes;
  j["cutwidths"] = r.cutwidths;
  j["any_yes"] = r.any_yes;
  j["equivalent"] = r.equivalent;
  std::vector<std::string> order;
  for (Vertex v : r.gadget_ordering.order) order.push_back(gadget.label(v));
  j["gadget_ordering"] = order;
  j["yes_instance"] = r.yes_instance ? Json(*r.yes_instance) : Json(nullptr);
  j["yes_instance_cost"] = r.yes_instance_cost ? Json(*r.yes_instance_cost) : Json(nullptr);
  j["leading_instance"] = r.leading_instance ? Json(*r.leading_instance) : Json(nullptr);
  return j;
}

}  // namespace pwk

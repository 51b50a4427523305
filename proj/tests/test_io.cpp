#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "generators.hpp"
#include "pwk/io.hpp"
#include "pwk/kernel.hpp"
#include "pwk/width.hpp"
#include "shapes.hpp"

using namespace pwk;

namespace {

int error_line(std::string_view text) {
  try {
    parse_instance(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(ParseInstance, MinimalFileIsCanonicalYes) {
  auto f = parse_instance("pwk-instance v1\np 1 0 0\nv 0\n");
  EXPECT_EQ(f.instance(), canonical_yes_instance());
  EXPECT_FALSE(f.weights);
  EXPECT_FALSE(f.family);
}

TEST(ParseInstance, CommentsAndBlankLinesIgnored) {
  auto f = parse_instance("# header follows\npwk-instance v1\n\np 2 1 1  # two vertices\nv a\nv b\ne a b\ns a\nf stars\n");
  EXPECT_EQ(f.graph.vertex_count(), 2);
  EXPECT_EQ(f.graph.label(0), "a");
  EXPECT_EQ(f.modulator, VertexList{0});
  EXPECT_EQ(f.family, Family::star_forest());
}

TEST(ParseInstance, SelfLoopNamesTheLine) {
  const char* text = "pwk-instance v1\np 2 1 0\nv a\nv b\ne a a\n";
  EXPECT_THROW(parse_instance(text), ParseError);
  EXPECT_EQ(error_line(text), 5);
  try {
    parse_instance(text);
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos) << e.what();
  }
}

TEST(ParseInstance, RejectsMalformedInput) {
  EXPECT_EQ(error_line("pwk-instance v1\np 2 2 0\nv a\nv b\ne a b\ne b a\n"), 6);  // duplicate edge
  EXPECT_EQ(error_line("pwk-instance v1\np 2 1 0\nv a\nv b\ne a c\n"), 5);         // unknown vertex
  EXPECT_EQ(error_line("pwk-instance v1\np 2 0 0\nv a\nv a\n"), 4);                // duplicate label
  EXPECT_EQ(error_line("pwk-instance v1\np 3 0 0\nv a\n"), 2);                     // count mismatch
  EXPECT_EQ(error_line("pwk-instance v2\np 1 0 0\nv a\n"), 1);                     // wrong version
  EXPECT_EQ(error_line("graph\n"), 1);
  EXPECT_EQ(error_line("pwk-instance v1\np 1 0 x\nv a\n"), 2);
  EXPECT_EQ(error_line("pwk-instance v1\np 1 0 0\nv a 0\n"), 3);  // non-positive weight
  EXPECT_EQ(error_line("pwk-instance v1\np 2 1 0\nv a\ne a b\nv b\n"), 5);
  EXPECT_EQ(error_line("pwk-instance v1\np 1 0 0\nv a\ns a a\n"), 4);
  EXPECT_EQ(error_line("pwk-instance v1\np 1 0 0\nv a\nf tree\n"), 4);
  EXPECT_EQ(error_line("pwk-instance v1\np 1 0 0\nv a\nq\n"), 4);
  EXPECT_THROW(parse_instance(""), ParseError);
}

TEST(SerializeInstance, CanonicalForm) {
  Instance inst(shapes::path(3), {1}, 1);
  EXPECT_EQ(serialize_instance(inst), "pwk-instance v1\np 3 2 1\nv 0\nv 1\nv 2\ne 0 1\ne 1 2\ns 1\n");
}

TEST(SerializeInstance, RoundTripsRandomInstances) {
  gen::Rng rng(81);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = gen::uniform(rng, 0, 12);
    InstanceFile f;
    f.graph = gen::shuffled(rng, gen::random_graph(rng, n, 0.4));
    f.modulator = gen::random_subset(rng, n, gen::uniform(rng, 0, n));
    std::sort(f.modulator.begin(), f.modulator.end());
    f.target = gen::uniform(rng, 0, 6);
    if (gen::coin(rng, 0.3) && n > 0) f.weights = gen::random_weights(rng, n, 9);
    if (gen::coin(rng, 0.3)) f.family = Family::bounded_components(gen::uniform(rng, 1, 4));
    const std::string text = serialize_instance(f);
    InstanceFile back = parse_instance(text);
    ASSERT_EQ(back, f) << text;
    EXPECT_EQ(serialize_instance(back), text);
  }
}

TEST(SerializeInstance, RoundTripsNonNumericLabels) {
  Graph g = Graph::with_labels({"x", "hub", "y"});
  g.insert_edge(0, 1);
  g.insert_edge(1, 2);
  InstanceFile f{g, {1}, 1, std::vector<Weight>{1, 5, 2}, Family::star_forest()};
  EXPECT_EQ(parse_instance(serialize_instance(f)), f);
}

TEST(Decomposition, PathRoundTrip) {
  Graph c6 = shapes::cycle(6);
  auto pw = pathwidth_exact(c6);
  const std::string text = serialize_path_decomposition(c6, pw.decomposition);
  auto parsed = parse_decomposition(text, c6);
  ASSERT_TRUE(parsed.path);
  EXPECT_FALSE(parsed.tree);
  EXPECT_EQ(parsed.path->bags, pw.decomposition.bags);
  EXPECT_TRUE(validate_path_decomposition(c6, *parsed.path));
  EXPECT_EQ(decomposition_width(parsed.path->bags), 2);
}

TEST(Decomposition, TreeAndOrderRoundTrip) {
  Graph g = shapes::cycle(5);
  auto tw = treewidth_exact(g);
  TreeDecomposition td = tree_decomposition_from_ordering(g, tw.ordering);
  auto parsed = parse_decomposition(serialize_tree_decomposition(g, td), g);
  ASSERT_TRUE(parsed.tree);
  EXPECT_EQ(parsed.tree->bags, td.bags);
  EXPECT_EQ(parsed.tree->tree, td.tree);

  auto order = parse_decomposition(serialize_order(g, tw.ordering.order), g);
  ASSERT_TRUE(order.order);
  EXPECT_EQ(*order.order, tw.ordering.order);
}

TEST(Decomposition, RejectsMalformedInput) {
  Graph g = shapes::path(3);
  EXPECT_THROW(parse_decomposition("pwk-decomposition v1\nb 0 1\n", g), ParseError);
  EXPECT_THROW(parse_decomposition("pwk-decomposition v1\npath\nb 0 9\n", g), ParseError);
  EXPECT_THROW(parse_decomposition("pwk-decomposition v1\npath\nb 0 0\n", g), ParseError);
  EXPECT_THROW(parse_decomposition("pwk-decomposition v1\ntree\nbag 0 0\nbag 0 1\n", g), ParseError);
  EXPECT_THROW(parse_decomposition("pwk-decomposition v1\npath\ntree\n", g), ParseError);
}

TEST(Digest, KnownValues) {
  EXPECT_EQ(digest(""), "cbf29ce484222325");
  EXPECT_EQ(digest("a"), "af63dc4c8601ec8c");
  EXPECT_NE(digest("ab"), digest("ba"));
}

TEST(Json, KernelResultFields) {
  auto r = kernelize_star_forest(Instance(shapes::star(3), {0}, 2));
  Json j = to_json(r);
  EXPECT_EQ(j["verdict"], "DecidedYes");
  EXPECT_EQ(j["family"], "stars");
  for (const char* key : {"input", "kernel", "stats", "audits", "bound_ok", "applications", "application_budget"})
    EXPECT_TRUE(j.contains(key)) << key;
}

TEST(Json, TraceIsOneObjectPerLine) {
  Graph g = shapes::path(4);
  auto out = exhaustive_reduce(Instance(g, {}, 1), RuleSet::standard());
  const std::string text = trace_jsonl(out.trace);
  std::size_t lines = std::count(text.begin(), text.end(), '\n');
  EXPECT_EQ(lines, out.trace.size());
  if (!out.trace.empty()) {
    Json first = Json::parse(text.substr(0, text.find('\n')));
    EXPECT_TRUE(first.contains("rule"));
    EXPECT_TRUE(first.contains("removed"));
  }
}

TEST(ComposedDump, ListsEveryVertexAndEdge) {
  auto prep = prepare_batch({{shapes::path(3), 1}, {shapes::path(3), 1}});
  ComposedInstance ci = compose(std::get<PreparedBatch>(prep));
  const std::string dump = serialize_composed(ci);
  EXPECT_EQ(dump.rfind("pwk-composed v1\n", 0), 0u);
  std::size_t v_lines = 0, e_lines = 0;
  std::istringstream in(dump);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("v ", 0) == 0) ++v_lines;
    if (line.rfind("e ", 0) == 0) ++e_lines;
  }
  EXPECT_EQ(v_lines, 16u);
  EXPECT_EQ(e_lines, ci.gadget.graph().edge_count());
  EXPECT_NE(dump.find(std::to_string(ci.threshold)), std::string::npos);
  EXPECT_NE(dump.find("v d1 A D "), std::string::npos);
}

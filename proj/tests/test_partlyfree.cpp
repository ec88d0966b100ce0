#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "pfree/catalog.hpp"
#include "pfree/partlyfree.hpp"

using namespace pfree;

namespace {

std::shared_ptr<const Graph> entry(const std::string& name) { return std::make_shared<const Graph>(*builtin(name).graph); }

std::vector<std::string> words(const std::vector<Summand>& list) {
  std::vector<std::string> out;
  for (const auto& s : list) out.push_back(format_path(s.word));
  return out;
}

std::vector<std::string> sources(const Graph& g, const std::vector<Summand>& list) {
  std::vector<std::string> out;
  for (const auto& s : list) out.push_back(g.name(s.source));
  return out;
}

std::shared_ptr<const Graph> from_file(const std::string& name) {
  std::ifstream in(std::string(PFREE_DATA_DIR) + "/" + name);
  std::stringstream buf;
  buf << in.rdbuf();
  return std::make_shared<const Graph>(parse_graph(buf.str()));
}

}  // namespace

TEST(DoubleCyclePair, ExampleDRecipe) {
  auto g = entry("partly_free_D");
  auto p = construct_pair_double_cycle(g, double_cycle_witnesses(*g).front());
  EXPECT_EQ(sources(*g, p.u), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(words(p.u), (std::vector<std::string>{"e.g.f", "e.e.e.g.f.g"}));
  EXPECT_EQ(words(p.v), (std::vector<std::string>{"e.e.g.f", "e.e.e.e.g.f.g"}));
  EXPECT_EQ(p.initial_set.size(), 2u);
  EXPECT_EQ(p.max_word_length(), 7u);
  EXPECT_TRUE(p.invariant_violations().empty());
  for (std::size_t n : {7u, 10u, 14u}) EXPECT_TRUE(verify_pair(p, build_basis(g, n)).passed()) << n;
}

TEST(DoubleCyclePair, FreeSemigroupSingleSummand) {
  auto g = entry("n_loops(2)");
  auto p = construct_pair_double_cycle(g, double_cycle_witnesses(*g).front());
  EXPECT_EQ(words(p.u), (std::vector<std::string>{"e.f"}));
  EXPECT_EQ(words(p.v), (std::vector<std::string>{"e.e.f"}));
  EXPECT_TRUE(verify_pair(p, build_basis(g, 6)).passed());
}

TEST(DoubleCyclePair, UnreachableVertexLeftOut) {
  auto g = from_file("unreachable_sink.graph");
  auto p = construct_pair_double_cycle(g, double_cycle_witnesses(*g).front());
  EXPECT_EQ(sources(*g, p.u), (std::vector<std::string>{"x", "y"}));
  EXPECT_FALSE(p.initial_set.contains(*g->find_vertex("z")));
  EXPECT_TRUE(verify_pair(p, build_basis(g, 8)).passed());
}

TEST(DoubleCyclePair, InvalidWitness) {
  auto g = entry("partly_free_D");
  auto w = double_cycle_witnesses(*g).front();
  auto bad = w;
  bad.second = bad.first;
  EXPECT_THROW(construct_pair_double_cycle(g, bad), ConstructionError);
  bad = w;
  bad.first.word = {*g->find_edge("f"), *g->find_edge("f")};
  EXPECT_THROW(construct_pair_double_cycle(g, bad), ConstructionError);
}

TEST(DoubleCyclePair, CrossTermsVanishOnRandomGraphs) {
  std::mt19937_64 rng(53);
  int built = 0;
  for (int round = 0; round < 60 && built < 15; ++round) {
    auto g = std::make_shared<const Graph>(oracle::random_graph(rng, 4, 6));
    auto witnesses = double_cycle_witnesses(*g);
    if (witnesses.empty()) continue;
    auto p = construct_pair_double_cycle(g, witnesses.front());
    if (p.max_word_length() > 9) continue;
    ++built;
    auto b = build_basis(g, p.max_word_length());
    for (const auto* list : {&p.u, &p.v})
      for (std::size_t k = 0; k < list->size(); ++k)
        for (std::size_t j = 0; j < list->size(); ++j)
          if (k != j) {
            EXPECT_TRUE((left_op(b, (*list)[k].word).adjoint() * left_op(b, (*list)[j].word)).is_zero());
          }
    auto report = verify_pair(p, b);
    EXPECT_TRUE(report.passed()) << to_graph_text(*g);
  }
  EXPECT_GT(built, 5);
}

TEST(ShortestPath, LexicographicTieBreak) {
  auto g = parse_graph("vertex a\nvertex b\nvertex c\nedge q a b\nedge p a b\nedge s b c\nedge r b c\n");
  auto p = shortest_path(g, *g.find_vertex("a"), *g.find_vertex("c"));
  ASSERT_TRUE(p);
  EXPECT_EQ(format_path(*p), "r.p");
  EXPECT_FALSE(shortest_path(g, *g.find_vertex("c"), *g.find_vertex("a")));
  EXPECT_TRUE(shortest_path(g, *g.find_vertex("b"), *g.find_vertex("b"))->is_unit());
}

TEST(InfinitePathPair, CycleInfWindow) {
  auto p = construct_pair_infinite_path("cycle_inf", 9);
  const auto& g = *p.graph;
  EXPECT_EQ(sources(g, p.u), (std::vector<std::string>{"x1", "x2", "x3", "x4"}));
  EXPECT_EQ(format_path(p.u[0].word), "e1");
  EXPECT_EQ(format_path(p.v[0].word), "e2.e1");
  EXPECT_EQ(g.name(p.u[3].word.range()), "x8");
  EXPECT_EQ(g.name(p.v[3].word.range()), "x9");
  EXPECT_TRUE(verify_pair(p, build_basis(p.graph, 8)).passed());
}

TEST(InfinitePathPair, WindowTooSmall) {
  try {
    construct_pair_infinite_path("cycle_inf", 2);
    FAIL();
  } catch (const ConstructionError& e) {
    EXPECT_NE(std::string(e.what()).find("too small"), std::string::npos);
  }
}

TEST(InfinitePathPair, FamiliesWithoutCertificate) {
  EXPECT_THROW(construct_pair_infinite_path("star_in", 6), ConstructionError);
  EXPECT_THROW(construct_pair_infinite_path("rationals_Q", 6), ConstructionError);
  EXPECT_THROW(construct_pair_infinite_path("nope", 6), ConstructionError);
}

TEST(InfinitePathPair, IntegerLineTail) {
  auto p = construct_pair_infinite_path("int_line", 4);
  const auto& g = *p.graph;
  EXPECT_EQ(sources(g, p.u), (std::vector<std::string>{"xm1", "x0"}));
  EXPECT_EQ(g.name(p.u[1].word.range()), "x1");
  EXPECT_EQ(g.name(p.v[1].word.range()), "x3");
  EXPECT_EQ(g.name(p.u[0].word.range()), "x2");
  EXPECT_EQ(g.name(p.v[0].word.range()), "x4");
  EXPECT_TRUE(verify_pair(p, build_basis(p.graph, 6)).passed());
}

TEST(InfinitePathPair, TreeAndLoopedLine) {
  for (auto [name, window, depth] : {std::tuple{"tree_Gn(2)", 3u, 3u}, std::tuple{"tree_Gn(1)", 8u, 8u},
                                     std::tuple{"half_line_loops", 9u, 6u}, std::tuple{"int_line_loops", 6u, 8u}}) {
    auto p = construct_pair_infinite_path(name, window);
    auto report = verify_pair(p, build_basis(p.graph, depth));
    EXPECT_TRUE(report.passed()) << name;
  }
}

TEST(UnitalPair, ExampleD) {
  auto g = entry("partly_free_D");
  auto p = construct_pair_unital(g);
  EXPECT_EQ(p.initial_set.size(), g->vertex_count());
  auto b = build_basis(g, 8);
  auto m = materialize(p, b);
  EXPECT_EQ(m.interior_level, 1u);
  auto all = std::vector<char>(b->dim(), 1);
  auto mask = interior_mask(*b, m.interior_level);
  auto interior = interior_projection(b, b->depth() - m.interior_level);
  EXPECT_EQ((m.u.adjoint() * m.u).compress(all, mask), interior);
  EXPECT_EQ((m.v.adjoint() * m.v).compress(all, mask), interior);
  EXPECT_TRUE(verify_pair(p, b).passed());
}

TEST(UnitalPair, CycleRejected) {
  try {
    construct_pair_unital(entry("cycle(3)"));
    FAIL();
  } catch (const ConstructionError& e) {
    EXPECT_NE(std::string(e.what()).find("contains no double-cycle"), std::string::npos);
  }
}

TEST(UnitalPair, NamesOffendingVertex) {
  auto g = from_file("unreachable_sink.graph");
  try {
    construct_pair_unital(g);
    FAIL();
  } catch (const ConstructionError& e) {
    EXPECT_NE(std::string(e.what()).find("vertex z"), std::string::npos);
  }
}

TEST(UnitalPair, DisjointUnionHasTwoParts) {
  auto g = std::make_shared<const Graph>(parse_graph(
      "vertex x\nvertex y\nedge e x x\nedge f x y\nedge g y x\n"
      "vertex x2\nvertex y2\nedge e2 x2 x2\nedge f2 x2 y2\nedge g2 y2 x2\n"));
  auto p = construct_pair_unital(g);
  EXPECT_EQ(p.u.size(), 4u);
  EXPECT_EQ(p.v.size(), 4u);
  EXPECT_EQ(p.initial_set.size(), 4u);
  EXPECT_TRUE(verify_pair(p, build_basis(g, 7)).passed());
}

TEST(QuiverPair, Examples) {
  auto l2 = entry("n_loops(2)");
  auto p = quiver_pair(l2);
  EXPECT_EQ(words(p.u), std::vector<std::string>{"e"});
  EXPECT_EQ(words(p.v), std::vector<std::string>{"f"});
  auto b = build_basis(l2, 4);
  auto m = materialize(p, b);
  EXPECT_EQ(m.u, left_op(b, p.u[0].word));
  auto report = verify_pair(p, b);
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(report.interior_level, 3u);

  auto d = entry("partly_free_D");
  auto q = quiver_pair(d);
  EXPECT_EQ(words(q.u), std::vector<std::string>{"e"});
  EXPECT_EQ(words(q.v), std::vector<std::string>{"g.f"});
  auto bd = build_basis(d, 6);
  EXPECT_TRUE((left_op(bd, q.u[0].word).adjoint() * left_op(bd, q.v[0].word)).is_zero());
  EXPECT_TRUE(verify_pair(q, bd).passed());

  EXPECT_THROW(quiver_pair(entry("cycle(4)")), ConstructionError);
}

TEST(Materialize, DepthTooSmall) {
  auto g = entry("partly_free_D");
  auto p = construct_pair_unital(g);
  try {
    materialize(p, build_basis(g, 6));
    FAIL();
  } catch (const ConstructionError& e) {
    EXPECT_NE(std::string(e.what()).find("at least 7"), std::string::npos);
  }
  auto other = entry("partly_free_D");
  EXPECT_THROW(materialize(p, build_basis(other, 8)), ConstructionError);
}

TEST(VerifyPair, CorruptedPairFailsOrthogonality) {
  auto g = entry("partly_free_D");
  auto p = construct_pair_double_cycle(g, double_cycle_witnesses(*g).front());
  p.u[0] = p.v[0];
  auto report = verify_pair(p, build_basis(g, 8));
  EXPECT_FALSE(report.orthogonal);
  EXPECT_FALSE(report.passed());
}

TEST(VerifyPair, WrongInitialSetFails) {
  auto g = entry("partly_free_D");
  auto p = quiver_pair(g);
  auto b = build_basis(g, 6);
  auto m = materialize(p, b);
  EXPECT_TRUE(verify_pair(m.u, m.v, p.initial_set, m.interior_level).passed());
  std::set<Vertex> both{*g->find_vertex("x"), *g->find_vertex("y")};
  auto r = verify_pair(m.u, m.v, both, m.interior_level);
  EXPECT_FALSE(r.initial_projections);
  EXPECT_FALSE(r.standard_form);
}

TEST(NegativeSearch, ShortCycleFindsNothing) {
  auto r = negative_pair_search(entry("cycle(2)"), 2);
  EXPECT_GT(r.candidates, 0u);
  EXPECT_EQ(r.satisfying, 0u);
}

TEST(NegativeSearch, FreeSemigroupFindsPair) {
  auto r = negative_pair_search(entry("n_loops(2)"), 1);
  EXPECT_EQ(r.candidates, 3u);
  EXPECT_GE(r.satisfying, 1u);
  ASSERT_TRUE(r.example);
}

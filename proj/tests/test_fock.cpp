#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "pfree/catalog.hpp"
#include "pfree/fock.hpp"

using namespace pfree;

namespace {

std::shared_ptr<const Graph> entry(const std::string& name) { return std::make_shared<const Graph>(*builtin(name).graph); }

Path edge(const FockBasis& b, const std::string& name) { return Path::edge(b.graph(), *b.graph().find_edge(name)); }

Path unit(const FockBasis& b, const std::string& name) { return Path::unit(b.graph(), *b.graph().find_vertex(name)); }

std::size_t at(const FockBasis& b, const std::string& literal) { return *b.index_of(parse_path(b.graph(), literal)); }

SparseOp diagonal_mask(const std::shared_ptr<const FockBasis>& b, std::size_t level) {
  SparseMatrix<Rational> m(b->dim());
  for (std::size_t i = 0; i < b->dim(); ++i)
    if (b->length(i) <= level) m.add(i, i, Rational(1));
  return {b, std::move(m)};
}

}  // namespace

TEST(Basis, Dimensions) {
  EXPECT_EQ(build_basis(entry("digraph_T"), 1)->dim(), 5u);
  EXPECT_EQ(build_basis(entry("n_loops(2)"), 3)->dim(), 15u);
  auto c2 = entry("cycle(2)");
  EXPECT_EQ(build_basis(c2, 4)->dim(), oracle::adjacency_path_count(*c2, 4));
  EXPECT_EQ(build_basis(c2, 4)->dim(), 10u);
}

TEST(Basis, IndexIsBijection) {
  auto b = build_basis(entry("partly_free_D"), 6);
  for (std::size_t i = 0; i < b->dim(); ++i) EXPECT_EQ(b->index_of(b->path(i)), i);
}

TEST(Basis, CapGuard) {
  EXPECT_THROW(build_basis(entry("n_loops(3)"), 14, 100000), BasisTooLarge);
  EXPECT_NO_THROW(build_basis(entry("n_loops(3)"), 6, 100000));
}

TEST(Basis, HashDependsOnPaths) {
  auto a = build_basis(entry("cycle(2)"), 3);
  auto b = build_basis(entry("cycle(2)"), 3);
  auto c = build_basis(entry("cycle(2)"), 4);
  EXPECT_EQ(a->hash(), b->hash());
  EXPECT_NE(a->hash(), c->hash());
  EXPECT_EQ(a->hash().size(), 16u);
}

TEST(LeftOp, DigraphSingleEntry) {
  auto b = build_basis(entry("digraph_T"), 1);
  auto l = left_op(b, edge(*b, "e"));
  EXPECT_EQ(l.matrix().nonzeros(), 1u);
  EXPECT_EQ(l.at(at(*b, "e"), at(*b, "@x1")), 1);
}

TEST(LeftOp, UnitOnFreeSemigroupIsIdentity) {
  auto b = build_basis(entry("n_loops(2)"), 4);
  EXPECT_EQ(left_op(b, unit(*b, "x")), SparseOp::identity(b));
  EXPECT_EQ(right_op(b, unit(*b, "x")), SparseOp::identity(b));
}

TEST(LeftOp, SingleLoopShift) {
  auto b = build_basis(entry("single_loop"), 3);
  auto l = left_op(b, edge(*b, "e"));
  EXPECT_EQ(l.matrix().nonzeros(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(l.at(i + 1, i), 1);
  EXPECT_TRUE(l.matrix().row(0).empty());
  EXPECT_EQ(right_op(b, edge(*b, "e")), l);
}

TEST(LeftOp, WrongGraphRejected) {
  auto b = build_basis(entry("single_loop"), 3);
  auto other = entry("single_loop");
  EXPECT_THROW(left_op(b, Path::edge(*other, Edge{0})), PathError);
  EXPECT_THROW(right_op(b, Path::edge(*other, Edge{0})), PathError);
}

TEST(RightOp, TwoCycleEntry) {
  auto b = build_basis(entry("cycle(2)"), 2);
  auto r = right_op(b, edge(*b, "e1"));
  EXPECT_EQ(r.at(at(*b, "e1"), at(*b, "@x2")), 1);
  EXPECT_EQ(r.at(at(*b, "e2.e1"), at(*b, "e2")), 1);
  EXPECT_EQ(r.matrix().nonzeros(), 2u);
}

TEST(Operators, MatchWordConcatenationOracle) {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 15; ++round) {
    auto g = std::make_shared<const Graph>(oracle::random_graph(rng, 4, 7));
    auto b = build_basis(g, 3);
    for (std::size_t i = 0; i < b->dim() && b->length(i) <= 2; ++i) {
      EXPECT_EQ(oracle::dense(left_op(b, b->path(i))), oracle::word_action(*b, b->path(i), true));
      EXPECT_EQ(oracle::dense(right_op(b, b->path(i))), oracle::word_action(*b, b->path(i), false));
    }
  }
}

TEST(Arithmetic, ProductIsConcatenation) {
  auto b = build_basis(entry("partly_free_D"), 5);
  auto e = edge(*b, "e"), f = edge(*b, "f"), g = edge(*b, "g");
  EXPECT_EQ(left_op(b, g) * left_op(b, f), left_op(b, *compose(g, f)));
  EXPECT_TRUE((left_op(b, f) * left_op(b, g) * left_op(b, g)).is_zero());
  EXPECT_TRUE((left_op(b, g) * left_op(b, e)).is_zero());
}

TEST(Arithmetic, HomomorphismOnRandomWords) {
  std::mt19937_64 rng(37);
  for (int round = 0; round < 10; ++round) {
    auto g = std::make_shared<const Graph>(oracle::random_graph(rng, 4, 8));
    auto b = build_basis(g, 4);
    std::uniform_int_distribution<std::size_t> pick(0, b->dim() - 1);
    for (int k = 0; k < 20; ++k) {
      const auto& u = b->path(pick(rng));
      const auto& w = b->path(pick(rng));
      auto uw = compose(u, w);
      auto product = left_op(b, u) * left_op(b, w);
      if (uw)
        EXPECT_EQ(product, left_op(b, *uw));
      else
        EXPECT_TRUE(product.is_zero());
    }
  }
}

TEST(Arithmetic, AdjointInvolutionAndDistinctEdges) {
  auto b = build_basis(entry("n_loops(2)"), 4);
  auto e = left_op(b, edge(*b, "e")), f = left_op(b, edge(*b, "f"));
  auto a = make_rational(3, 2) * e + f * e - f;
  EXPECT_EQ(a.adjoint().adjoint(), a);
  EXPECT_TRUE((e.adjoint() * f).is_zero());
  EXPECT_EQ(a - a, SparseOp::zero(b));
}

TEST(Arithmetic, BasisMismatch) {
  auto a = build_basis(entry("single_loop"), 3);
  auto c = build_basis(entry("single_loop"), 3);
  EXPECT_THROW(SparseOp::identity(a) + SparseOp::identity(c), BasisMismatch);
  EXPECT_THROW(SparseOp::identity(a) * SparseOp::identity(c), BasisMismatch);
}

TEST(Truncation, IsometryDefectIsBoundary) {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 10; ++round) {
    auto g = std::make_shared<const Graph>(oracle::random_graph(rng, 4, 8));
    auto b = build_basis(g, 4);
    for (std::size_t i = 0; i < b->dim() && b->length(i) <= 3; ++i) {
      const auto& w = b->path(i);
      auto l = left_op(b, w);
      EXPECT_EQ(l.adjoint() * l, vertex_projection(b, w.source()) * diagonal_mask(b, 4 - w.length()));
    }
  }
}

TEST(Truncation, LeftRightCommuteExactly) {
  for (auto name : {"partly_free_D", "n_loops(2)", "cycle(3)", "triangle_Lfree"}) {
    auto b = build_basis(entry(name), 5);
    const auto& g = b->graph();
    std::vector<Path> gens;
    for (auto v : g.vertices()) gens.push_back(Path::unit(g, v));
    for (auto e : g.edges()) gens.push_back(Path::edge(g, e));
    for (const auto& a : gens)
      for (const auto& c : gens) EXPECT_EQ(left_op(b, a) * right_op(b, c), right_op(b, c) * left_op(b, a));
  }
}

TEST(Truncation, AdjointProductNonzeroIffPrefixComparable) {
  auto b = build_basis(entry("partly_free_D"), 6);
  for (std::size_t i = 2; i < b->dim() && b->length(i) <= 3; ++i)
    for (std::size_t j = 2; j < b->dim() && b->length(j) <= 3; ++j) {
      auto wi = format_path(b->path(i)) + ".";
      auto wj = format_path(b->path(j)) + ".";
      bool comparable = wi.rfind(wj, 0) == 0 || wj.rfind(wi, 0) == 0;
      EXPECT_EQ(!(left_op(b, b->path(i)).adjoint() * left_op(b, b->path(j))).is_zero(), comparable);
    }
}

TEST(Fourier, ReadsColumns) {
  auto b = build_basis(entry("single_loop"), 3);
  auto a = Rational(2) * vertex_projection(b, *b->graph().find_vertex("x")) + Rational(3) * left_op(b, edge(*b, "e"));
  auto t = fourier_coefficients(a);
  EXPECT_EQ(t.coefficient(unit(*b, "x")), 2);
  EXPECT_EQ(t.coefficient(edge(*b, "e")), 3);
  EXPECT_EQ(t.coefficient(parse_path(b->graph(), "e.e")), 0);
  EXPECT_EQ(t.coefficients().size(), 2u);
}

TEST(Fourier, SingleWord) {
  auto b = build_basis(entry("partly_free_D"), 5);
  auto w = parse_path(b->graph(), "e.g.f");
  auto t = fourier_coefficients(left_op(b, w));
  EXPECT_EQ(t.coefficients().size(), 1u);
  EXPECT_EQ(t.coefficient(w), 1);
}

TEST(Fourier, TriangleProduct) {
  auto b = build_basis(entry("triangle_Lfree"), 4);
  auto a = left_op(b, edge(*b, "f")) * left_op(b, edge(*b, "e"));
  // independent: the column of xi_x holds exactly f.e
  std::size_t col = at(*b, "@x");
  std::size_t hits = 0;
  for (std::size_t r = 0; r < b->dim(); ++r)
    if (a.at(r, col) != 0) {
      ++hits;
      EXPECT_EQ(format_path(b->path(r)), "f.e");
    }
  EXPECT_EQ(hits, 1u);
  EXPECT_EQ(fourier_coefficients(a).coefficient(parse_path(b->graph(), "f.e")), 1);
}

TEST(Fourier, InversionOnInterior) {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> coeff(-6, 6);
  for (auto name : {"partly_free_D", "n_loops(2)", "cycle(3)", "digraph_T"}) {
    auto b = build_basis(entry(name), 6);
    std::vector<std::size_t> low;
    for (std::size_t i = 0; i < b->dim() && b->length(i) <= 3; ++i) low.push_back(i);
    std::uniform_int_distribution<std::size_t> pick(0, low.size() - 1);
    for (int s = 0; s < 10; ++s) {
      auto a = SparseOp::zero(b);
      for (int k = 0; k < 5; ++k) a = a + Rational(coeff(rng), 1 + k) * left_op(b, b->path(low[pick(rng)]));
      auto e = interior_projection(b, 3);
      EXPECT_EQ(reconstruct(fourier_coefficients(a), Summation::plain(3), b) * e, a * e);
    }
  }
}

TEST(Reconstruct, UnitGivesProjection) {
  auto b = build_basis(entry("partly_free_D"), 4);
  FourierTable t(b);
  t.set(unit(*b, "x"), 1);
  EXPECT_EQ(reconstruct(t, Summation::plain(2), b), vertex_projection(b, *b->graph().find_vertex("x")));
  EXPECT_EQ(reconstruct(t, Summation::cesaro(2), b), vertex_projection(b, *b->graph().find_vertex("x")));
}

TEST(Reconstruct, CesaroHalvesEdge) {
  auto b = build_basis(entry("single_loop"), 3);
  FourierTable t(b);
  t.set(edge(*b, "e"), 1);
  EXPECT_EQ(reconstruct(t, Summation::cesaro(1), b), make_rational(1, 2) * left_op(b, edge(*b, "e")));
}

TEST(Reconstruct, CesaroWeights) {
  for (std::size_t k = 0; k <= 6; ++k) {
    auto s = Summation::cesaro(k);
    for (std::size_t len = 0; len <= k; ++len) {
      EXPECT_EQ(s.weight(len), make_rational(static_cast<long>(k + 1 - len), static_cast<long>(k + 1)));
      EXPECT_GT(s.weight(len), 0);
      EXPECT_LE(s.weight(len), 1);
    }
    EXPECT_EQ(s.weight(k + 1), 0);
  }
}

TEST(InteriorProjection, Ranks) {
  auto b = build_basis(entry("single_loop"), 3);
  EXPECT_EQ(interior_projection(b, 0), SparseOp::identity(b));
  EXPECT_EQ(interior_projection(b, 3).matrix().nonzeros(), 1u);
  EXPECT_EQ(interior_projection(b, 1).matrix().nonzeros(), 3u);
  EXPECT_THROW(interior_projection(b, 4), std::invalid_argument);
}

TEST(PartialIsometry, ShiftOnSingleLoop) {
  auto b = build_basis(entry("single_loop"), 3);
  auto r = partial_isometry_report(left_op(b, edge(*b, "e")));
  ASSERT_TRUE(r.is_partial_isometry);
  ASSERT_TRUE(r.form);
  EXPECT_EQ(r.form->interior_level, 2u);
  EXPECT_EQ(*r.initial_projection, interior_projection(b, 1));
}

TEST(PartialIsometry, Projection) {
  auto b = build_basis(entry("partly_free_D"), 4);
  auto x = *b->graph().find_vertex("x");
  auto r = partial_isometry_report(vertex_projection(b, x));
  ASSERT_TRUE(r.form);
  EXPECT_EQ(r.form->vertices, std::set<Vertex>{x});
  EXPECT_EQ(r.form->interior_level, 4u);
}

TEST(PartialIsometry, SumOfLoopsFails) {
  auto b = build_basis(entry("n_loops(2)"), 4);
  auto v = left_op(b, edge(*b, "e")) + left_op(b, edge(*b, "f"));
  auto r = partial_isometry_report(v);
  EXPECT_FALSE(r.is_partial_isometry);
  EXPECT_EQ(*r.initial_projection, Rational(2) * interior_projection(b, 1));
  EXPECT_FALSE(r.failure.empty());
}

TEST(PartialIsometry, NonInitialSegmentReported) {
  auto b = build_basis(entry("single_loop"), 3);
  SparseMatrix<Rational> m(b->dim());
  m.add(1, 1, Rational(1));  // projection onto xi_e alone
  auto r = partial_isometry_report(SparseOp(b, std::move(m)));
  EXPECT_TRUE(r.is_partial_isometry);
  EXPECT_FALSE(r.form);
}

TEST(Export, Format) {
  auto b = build_basis(entry("single_loop"), 2);
  auto text = export_sparse(make_rational(1, 2) * left_op(b, edge(*b, "e")));
  EXPECT_EQ(text, "3 2 " + b->hash() + "\n1 0 1/2\n2 1 1/2\n");
}

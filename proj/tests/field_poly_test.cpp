#include <gtest/gtest.h>

#include <array>

#include "symdet/symdet.hpp"

using namespace symdet;

namespace {

FieldElement q(std::int64_t v) { return FieldElement::from_int({}, v); }

TEST(Field, InverseModSeven) {
  FieldSpec f7 = FieldSpec::prime(7);
  EXPECT_EQ(FieldElement::from_int(f7, 2).inverse(), FieldElement::from_int(f7, 4));
}

TEST(Field, HalfInRationals) { EXPECT_EQ(FieldElement::half({}).to_string(), "1/2"); }

TEST(Field, HalfInCharacteristicTwoThrows) {
  try {
    FieldElement::half(FieldSpec::gf2_16());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::char_two_half);
  }
}

TEST(Field, DoublingVanishesInCharacteristicTwo) {
  Rng rng(3);
  FieldElement a = sample_random(FieldSpec::gf2_16(), rng);
  EXPECT_TRUE((a + a).is_zero());
  EXPECT_EQ(FieldSpec::gf2_16().characteristic(), 2u);
  EXPECT_NE(FieldSpec::mersenne61().characteristic(), 2u);
}

TEST(Field, RationalsInLowestTerms) {
  FieldElement r = q(6) / q(-4);
  EXPECT_EQ(r.to_string(), "-3/2");
}

TEST(Field, DivisionByZero) {
  try {
    (void)(q(1) / q(0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::division_by_zero);
  }
}

TEST(Field, MixedFieldsRejected) {
  FieldElement a = FieldElement::from_int(FieldSpec::prime(7), 1);
  FieldElement b = FieldElement::from_int(FieldSpec::prime(11), 1);
  EXPECT_THROW((void)(a + b), Error);
}

TEST(Field, CompositeModulusRejected) { EXPECT_THROW(FieldSpec::prime(15), Error); }

TEST(Field, ReducibleBinaryModulusRejected) { EXPECT_THROW(FieldSpec::binary(4, 0x15), Error); }

TEST(Field, DefaultPrimeIsLarge) { EXPECT_GT(FieldSpec::mersenne61().modulus(), std::uint64_t{1} << 60); }

TEST(Field, SamplingIsDeterministic) {
  Rng a(42), b(42);
  for (int k = 0; k < 10; ++k) {
    EXPECT_EQ(sample_random(FieldSpec::mersenne61(), a), sample_random(FieldSpec::mersenne61(), b));
  }
}

TEST(Field, BinaryFieldOfTwoElements) {
  Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    FieldElement e = sample_random(FieldSpec::gf2(), rng);
    EXPECT_TRUE(e.is_zero() || e.is_one());
  }
}

TEST(Field, UniformResiduesModSeven) {
  FieldSpec f7 = FieldSpec::prime(7);
  Rng rng(11);
  std::array<int, 7> counts{};
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) ++counts[std::stoul(sample_random(f7, rng).to_string())];
  for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / draws, 1.0 / 7, 0.05 / 7);
}

TEST(Field, RationalsCannotBeSampled) {
  Rng rng(1);
  EXPECT_THROW(sample_random(FieldSpec::rational(), rng), Error);
}

TEST(Field, ParseNames) {
  EXPECT_EQ(FieldSpec::parse("p"), FieldSpec::mersenne61());
  EXPECT_EQ(FieldSpec::parse("gf2k"), FieldSpec::gf2_16());
  EXPECT_EQ(FieldSpec::parse(FieldSpec::prime(101).name()), FieldSpec::prime(101));
  EXPECT_THROW(FieldSpec::parse("reals"), Error);
}

TEST(Field, EmbedRationalIntoPrime) {
  FieldSpec f7 = FieldSpec::prime(7);
  EXPECT_EQ(embed(FieldElement::half({}), f7), FieldElement::from_int(f7, 4));
}

TEST(Poly, DifferenceOfSquares) {
  auto x = DensePolynomial::variable("x"), y = DensePolynomial::variable("y");
  EXPECT_EQ((x + y) * (x - y), x * x - y * y);
}

TEST(Poly, EvaluateTripleProduct) {
  DensePolynomial p = DensePolynomial::parse("2 * x y z");
  Assignment a{{"x", q(1)}, {"y", q(2)}, {"z", q(3)}};
  EXPECT_EQ(p.evaluate(a, {}), q(12));
}

TEST(Poly, SelfDifferenceIsZero) {
  DensePolynomial p = DensePolynomial::parse("x^2 + 3 * x y");
  EXPECT_TRUE((p - p).is_zero());
}

TEST(Poly, TextRoundTrip) {
  DensePolynomial p = DensePolynomial::parse("x^2 + 2 * x y + -1/2 * z");
  EXPECT_EQ(DensePolynomial::parse(p.to_string()), p);
}

TEST(Oracles, TwoCycleDeterminant) {
  SymbolicMatrix m = parse_matrix("2 symmetric\n0 x\nx 0\n");
  EXPECT_EQ(symbolic_det(m), DensePolynomial::parse("-1 * x^2"));
  EXPECT_EQ(cycle_cover_sum(m, true), DensePolynomial::parse("-1 * x^2"));
  EXPECT_EQ(cycle_cover_sum(m, false), DensePolynomial::parse("x^2"));
}

TEST(Oracles, TripleMatrix) {
  SymbolicMatrix m = worked::triple_matrix();
  EXPECT_EQ(symbolic_det(m), DensePolynomial::parse("2 * x y z"));
  EXPECT_EQ(cycle_cover_sum(m, true), DensePolynomial::parse("2 * x y z"));
}

TEST(Oracles, SmallPermanent) {
  SymbolicMatrix m = parse_matrix("2\na b\nc d\n");
  EXPECT_EQ(ryser_permanent(m), DensePolynomial::parse("a d + b c"));
}

TEST(Oracles, IdentityMatrix) {
  SymbolicMatrix m = parse_matrix("3\n1 0 0\n0 1 0\n0 0 1\n");
  EXPECT_EQ(symbolic_det(m), DensePolynomial::parse("1"));
  EXPECT_EQ(ryser_permanent(m), DensePolynomial::parse("1"));
}

TEST(Oracles, SingularMatrix) {
  ValueMatrix m{{q(1), q(2)}, {q(2), q(4)}};
  EXPECT_TRUE(det_value(m, {}).is_zero());
}

TEST(Oracles, SumMatrixAtPoint) {
  Assignment a{{"x", q(3)}, {"y", q(4)}};
  EXPECT_EQ(det_eval(worked::sum_matrix(), a, {}), q(7));
}

TEST(Oracles, PermanentAgreesWithCoverSum) {
  Rng rng(17);
  for (int k = 0; k < 20; ++k) {
    SymbolicMatrix m(4);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        if (rng.chance(0.5)) m.set(i, j, Weight::variable("a" + std::to_string(rng.below(5)), {}));
        else if (rng.chance(0.5)) m.set(i, j, Weight::constant(q(rng.between(-3, 3))));
      }
    }
    EXPECT_EQ(ryser_permanent(m), cycle_cover_sum(m, false));
    EXPECT_EQ(symbolic_det(m), cycle_cover_sum(m, true));
  }
}

TEST(Graph, AdjacencyOfEdge) {
  WeightedGraph g;
  auto a = g.add_vertex(), b = g.add_vertex();
  g.add_edge(a, b, Weight::variable("x", {}));
  SymbolicMatrix m = adjacency(g);
  EXPECT_TRUE(m.symmetric());
  EXPECT_EQ(render_matrix(m), "2 symmetric\n0 x\nx 0\n");
}

TEST(Graph, AdjacencyOfArc) {
  WeightedDigraph g;
  auto a = g.add_vertex(), b = g.add_vertex();
  g.add_arc(a, b, Weight::variable("x", {}));
  SymbolicMatrix m = adjacency(g);
  EXPECT_FALSE(m.symmetric());
  EXPECT_EQ(render_matrix(m), "2\n0 x\n0 0\n");
  EXPECT_NE(export_dot(g).find("->"), std::string::npos);
}

TEST(Graph, TripleGraph) {
  WeightedGraph g;
  for (int k = 0; k < 3; ++k) g.add_vertex();
  g.add_edge(0, 1, Weight::variable("x", {}));
  g.add_edge(0, 2, Weight::variable("y", {}));
  g.add_edge(1, 2, Weight::variable("z", {}));
  EXPECT_EQ(adjacency(g), worked::triple_matrix());
}

TEST(Graph, DotOfNamedVertices) {
  WeightedGraph g;
  auto s = g.add_vertex("s"), t = g.add_vertex("t");
  g.add_edge(s, t, Weight::variable("x", {}));
  const std::string dot = export_dot(g);
  EXPECT_NE(dot.find("s -- t [label=\"x\"]"), std::string::npos);
  EXPECT_EQ(dot, export_dot(g));
}

TEST(Graph, ShortCoverSumOfLoopedEdge) {
  const FieldSpec gf = FieldSpec::gf2_16();
  SymbolicMatrix m(2, gf, true);
  m.set(0, 0, Weight::constant(FieldElement::one(gf)));
  m.set(1, 1, Weight::constant(FieldElement::one(gf)));
  m.set(0, 1, Weight::variable("b", gf));
  m.set(1, 0, Weight::variable("b", gf));
  EXPECT_EQ(cycle_cover_sum_short(m), symbolic_det(m));
  SymbolicMatrix loop(1, gf);
  loop.set(0, 0, Weight::constant(FieldElement::one(gf)));
  EXPECT_EQ(cycle_cover_sum_short(loop), DensePolynomial::constant(FieldElement::one(gf)));
}

TEST(Graph, MatrixTextRoundTrip) {
  SymbolicMatrix m = worked::sum_matrix();
  EXPECT_EQ(parse_matrix(render_matrix(m)), m);
  EXPECT_THROW(parse_matrix("2 symmetric\n0 x\ny 0\n"), Error);
  EXPECT_THROW(parse_matrix("2\n0 x\n"), Error);
}

}  // namespace

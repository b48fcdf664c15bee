#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "symdet/symdet.hpp"

using namespace symdet;

namespace {

FieldElement q(std::int64_t v) { return FieldElement::from_int({}, v); }
DensePolynomial poly(std::string_view text, const FieldSpec& spec = {}) { return DensePolynomial::parse(text, spec); }

bool equal_up_to_order(const SymbolicMatrix& a, const SymbolicMatrix& b) {
  if (a.dim() != b.dim()) return false;
  std::vector<std::size_t> p(a.dim());
  std::iota(p.begin(), p.end(), 0);
  do {
    bool same = true;
    for (std::size_t i = 0; i < a.dim() && same; ++i) {
      for (std::size_t j = 0; j < a.dim() && same; ++j) same = a.at(p[i], p[j]) == b.at(i, j);
    }
    if (same) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

std::vector<Circuit> formulas(std::size_t count, std::uint64_t seed, std::size_t max_ops, bool negative_constants = true) {
  Rng rng(seed);
  RandomCircuitOptions opt;
  opt.palette = {q(1), FieldElement::half({}), q(2), q(3)};
  if (negative_constants) opt.palette.push_back(q(-1));
  std::vector<Circuit> out;
  while (out.size() < count) {
    opt.num_vars = 1 + rng.below(4);
    Circuit f = random_formula(1 + rng.below(max_ops), opt, rng);
    if (!constant_mask(f)[f.outputs()[0].gate]) out.push_back(f);
  }
  return out;
}

std::vector<Circuit> ws_circuits(std::size_t count, std::uint64_t seed, std::size_t max_fat, double weight_prob) {
  Rng rng(seed);
  RandomCircuitOptions opt;
  opt.weight_prob = weight_prob;
  std::vector<Circuit> out;
  while (out.size() < count) {
    Circuit c = random_weakly_skew(max_fat, opt, rng);
    if (!constant_mask(c)[c.outputs()[0].gate]) out.push_back(c);
  }
  return out;
}

TEST(Valiant, SingleVariable) {
  PathSumCertificate cert = build_valiant_digraph(parse_expression("x"));
  EXPECT_EQ(cert.graph.vertex_count(), 2u);
  EXPECT_EQ(cert.graph.arc(cert.s, cert.t), Weight::variable("x", {}));
  EXPECT_EQ(cert.c0, q(1));
  SymbolicMatrix m = valiant_matrix(parse_expression("x"));
  EXPECT_EQ(render_matrix(m), "1\nx\n");
}

TEST(Valiant, ScaledVariable) {
  PathSumCertificate cert = build_valiant_digraph(parse_expression("5*x"));
  EXPECT_EQ(cert.graph.vertex_count(), 2u);
  EXPECT_EQ(cert.c0, q(5));
}

TEST(Valiant, SumOfTwoVariables) {
  Circuit f = parse_expression("x+y");
  PathSumCertificate cert = build_valiant_digraph(f);
  EXPECT_EQ(cert.graph.vertex_count(), 3u);
  EXPECT_EQ(simple_paths(cert.graph, cert.s, cert.t).size(), 2u);
  EXPECT_TRUE(audit_path_sum(cert, expand(f)[0]).empty());
  SymbolicMatrix m = valiant_matrix(f);
  EXPECT_EQ(m.dim(), 2u);
  EXPECT_EQ(symbolic_det(m), poly("x + y"));
}

TEST(Valiant, ProductWithConstant) {
  SymbolicMatrix m = valiant_matrix(parse_expression("3*x1*x2"));
  EXPECT_EQ(render_matrix(m), "3\nx1 0 0\n0 x2 0\n0 0 3\n");
}

TEST(Valiant, RandomFormulas) {
  for (const auto& f : formulas(60, 31, 10)) {
    Circuit m = minimize(f);
    EXPECT_TRUE(audit_path_sum(build_valiant_digraph(m), expand(f)[0]).empty());
    EXPECT_EQ(symbolic_det(valiant_matrix(f)), expand(f)[0]);
  }
}

TEST(SymFormula, SingleVariable) {
  SymPathSumCertificate cert = build_sym_graph(parse_expression("x"), SizeMode::skinny);
  EXPECT_EQ(cert.graph.vertex_count(), 2u);
  EXPECT_EQ(cert.graph.edge(cert.s, cert.t), Weight::variable("x", {}));
  SymbolicMatrix m = sym_matrix(parse_expression("x"), SizeMode::skinny);
  EXPECT_EQ(render_matrix(m), "3 symmetric\n0 x 1\nx 0 1/2\n1 1/2 0\n");
  EXPECT_EQ(symbolic_det(m), poly("x"));
}

TEST(SymFormula, SumMatchesDisplayedMatrix) {
  Circuit f = parse_expression("x+y");
  SymPathSumCertificate cert = build_sym_graph(f, SizeMode::skinny);
  EXPECT_EQ(cert.graph.vertex_count(), 4u);
  bool detour = false;
  for (const auto& [e, w] : cert.graph.edges()) detour = detour || (w.is_constant() && w.coef == q(-1));
  EXPECT_TRUE(detour);
  EXPECT_TRUE(equal_up_to_order(sym_matrix(f, SizeMode::skinny), worked::sum_matrix()));
}

TEST(SymFormula, LongSum) {
  for (std::size_t n = 1; n <= 6; ++n) {
    std::string text = "x1";
    for (std::size_t k = 2; k <= n + 1; ++k) text += "+x" + std::to_string(k);
    Circuit f = parse_expression(text);
    EXPECT_EQ(build_sym_graph(f, SizeMode::skinny).graph.vertex_count(), 2 * n + 2);
    SymbolicMatrix m = sym_matrix(f, SizeMode::skinny);
    EXPECT_EQ(symbolic_det(m), expand(f)[0]);
  }
}

TEST(SymFormula, CertificatesOnRandomFormulas) {
  for (const auto& f : formulas(60, 32, 8)) {
    for (SizeMode mode : {SizeMode::skinny, SizeMode::green}) {
      SymPathSumCertificate cert = build_sym_graph(f, mode);
      EXPECT_TRUE(all_cycles_even(cert.graph));
      EXPECT_EQ(cert.graph.vertex_count() % 2, 0u);
      EXPECT_TRUE(audit_sym_graph(cert, expand(f)[0]).empty());
      SymbolicMatrix m = sym_matrix(f, mode);
      EXPECT_TRUE(m.is_actually_symmetric());
      EXPECT_EQ(symbolic_det(m), expand(f)[0]);
    }
  }
}

TEST(SymFormula, PermanentVariant) {
  std::size_t checked = 0;
  for (const auto& f : formulas(80, 33, 5, false)) {
    SymbolicMatrix a = sym_matrix(f, SizeMode::skinny);
    if (a.dim() > 12) continue;
    ++checked;
    EXPECT_EQ(ryser_permanent(permanent_variant(a)), expand(f)[0]);
  }
  EXPECT_GT(checked, 20u);
}

TEST(SymFormula, CharacteristicTwoRejected) {
  Circuit f = parse_circuit("field gf2k\ng0 = input x\ng1 = input y\ng2 = add g0 g1\noutput g2\n");
  EXPECT_THROW(sym_matrix(f, SizeMode::skinny), Error);
}

TEST(SymFormula, NotAFormula) {
  try {
    sym_matrix(worked::weakly_skew_circuit(), SizeMode::skinny);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_a_formula);
  }
}

TEST(WeaklySkew, SingleInput) {
  WsCertificate cert = build_ws_graph(parse_expression("x"), SizeMode::fat);
  const auto& g = cert.graph;
  ASSERT_EQ(g.vertex_count(), 3u);
  EXPECT_EQ(g.edges().size(), 2u);
  EXPECT_EQ(g.edge(cert.s, 1), Weight::variable("x", {}));
  EXPECT_EQ(g.edge(1, 2), Weight::constant(q(-1)));
  SymbolicMatrix m = ws_sym_matrix(parse_expression("x"), SizeMode::fat);
  EXPECT_EQ(m.dim(), 3u);
  EXPECT_EQ(symbolic_det(m), poly("x"));
  SymbolicMatrix n = ws_nonsym_matrix(parse_expression("x"), SizeMode::fat);
  EXPECT_LE(n.dim(), 2u);
  EXPECT_EQ(symbolic_det(n), poly("x"));
}

TEST(WeaklySkew, RepeatedArgumentMerged) {
  Circuit c = parse_circuit("g0 = input x\ng1 = add g0 g0\noutput g1\n");
  WsCertificate cert = build_ws_graph(c, SizeMode::fat);
  bool two = false;
  for (const auto& [e, w] : cert.graph.edges()) two = two || (w.is_constant() && w.coef == q(2));
  EXPECT_TRUE(two);
  EXPECT_TRUE(audit_ws_certificate(cert).empty());
}

TEST(WeaklySkew, WorkedCircuit) {
  Circuit c = worked::weakly_skew_circuit();
  const DensePolynomial target = expand(c)[0];
  EXPECT_TRUE(audit_ws_certificate(build_ws_graph(c, SizeMode::fat)).empty());
  SymbolicMatrix s = ws_sym_matrix(c, SizeMode::fat);
  EXPECT_LE(s.dim(), 2 * c.size() + 1);
  EXPECT_EQ(symbolic_det(s), target);
  SymbolicMatrix n = ws_nonsym_matrix(c, SizeMode::fat);
  EXPECT_LE(n.dim(), c.size() + 1);
  EXPECT_EQ(symbolic_det(n), target);
}

TEST(WeaklySkew, NotWeaklySkew) {
  try {
    ws_sym_matrix(worked::general_circuit(), SizeMode::fat);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_weakly_skew);
  }
}

TEST(WeaklySkew, CertificatesOnRandomCircuits) {
  for (const auto& c : ws_circuits(60, 34, 12, 0.3)) {
    for (SizeMode mode : {SizeMode::fat, SizeMode::green}) {
      WsCertificate cert = build_ws_graph(c, mode);
      if (cert.graph.vertex_count() > 15) continue;
      auto problems = audit_ws_certificate(cert);
      EXPECT_TRUE(problems.empty()) << render_circuit(c) << problems.front();
    }
  }
}

TEST(WeaklySkew, FormulaInputGreenBound) {
  for (const auto& f : formulas(40, 35, 10)) {
    Circuit m = minimize(f);
    SymbolicMatrix a = ws_nonsym_matrix(f, SizeMode::green);
    EXPECT_LE(a.dim(), skinny_size(m) + variable_inputs(m) + 1);
    EXPECT_EQ(symbolic_det(a), expand(f)[0]);
  }
}

TEST(WeaklySkew, MultipleOutputsShareOneGraph) {
  Circuit c = parse_circuit("g0 = input x\ng1 = input y\ng2 = add g0 g1\ng3 = input z\ng4 = add g2 g3\noutput g2 g4\n");
  WsCertificate cert = build_ws_graph(c, SizeMode::fat);
  EXPECT_TRUE(audit_ws_certificate(cert).empty());
  EXPECT_THROW(ws_sym_matrix(c, SizeMode::fat), Error);
}

TEST(Determinant, LayeredProgram) {
  for (std::size_t n = 1; n <= 4; ++n) {
    LayeredAbp abp = build_det_abp(n);
    const auto& g = abp.graph;
    EXPECT_LE(g.vertex_count(), 2 * n * n * n + 3 + 1);
    for (const auto& [a, w] : g.arcs()) {
      EXPECT_EQ(abp.layer[a.second], abp.layer[a.first] + 1);
      if (a.second != abp.t) EXPECT_TRUE(w.is_plain_variable() || (w.is_constant() && w.coef.is_one()));
    }
    for (std::size_t end : {abp.t_plus, abp.t_minus}) {
      for (const auto& p : simple_paths(g, abp.s, end)) EXPECT_EQ(p.size(), n + 1);
    }
    if (n <= 3) {
      DensePolynomial sum;
      for (const auto& p : simple_paths(g, abp.s, abp.t)) sum += path_weight(g, p);
      EXPECT_EQ(sum, leibniz_det(n));
    }
  }
}

TEST(Determinant, SecondOrderByHand) {
  EXPECT_EQ(leibniz_det(2), poly("x1_1 x2_2 + -1 * x1_2 x2_1"));
}

TEST(Determinant, SymmetrizedAcceptablePaths) {
  LayeredAbp abp = build_det_abp(2);
  SymmetrizedAbp sym = symmetrize_abp(abp);
  const auto& g = sym.graph;
  EXPECT_EQ(g.edges().size(), abp.graph.arcs().size() + sym.inner);
  DensePolynomial sum;
  for (const auto& p : simple_paths(g, sym.s_out, sym.t_in)) {
    auto mask = vertex_mask(g.vertex_count(), p);
    if (cycle_covers(g, mask, 1).empty()) continue;
    EXPECT_EQ(unique_matching_cover(g, mask), "");
    sum += path_weight(g, p);
  }
  EXPECT_EQ(sum, leibniz_det(2));
}

TEST(Determinant, SymmetricMatrices) {
  SymbolicMatrix m1 = det_sym_matrix(1);
  EXPECT_LE(m1.dim(), 11u);
  EXPECT_EQ(symbolic_det(m1), poly("x1_1"));
  SymbolicMatrix m2 = det_sym_matrix(2);
  EXPECT_LE(m2.dim(), 39u);
  EXPECT_TRUE(m2.is_actually_symmetric());
  EXPECT_EQ(symbolic_det(m2), leibniz_det(2));
}

TEST(Determinant, ThirdOrderAtRandomPoints) {
  const FieldSpec p = FieldSpec::mersenne61();
  SymbolicMatrix m = det_sym_matrix(3);
  EXPECT_LE(m.dim(), 115u);
  Rng rng(5);
  for (int k = 0; k < 20; ++k) {
    Assignment a;
    for (const auto& x : m.variables()) a[x] = sample_random(p, rng);
    EXPECT_EQ(det_eval(m, a, p), leibniz_det(3).evaluate(a, p));
  }
}

TEST(CharTwo, DoublingBlockForm) {
  SymbolicMatrix b = parse_matrix("2\na b\nc 1\n");
  BipartiteDoubling d = double_matrix(b);
  ASSERT_EQ(d.matrix.dim(), 4u);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_EQ(d.matrix.at(i, 2 + j), b.at(i, j));
      EXPECT_EQ(d.matrix.at(2 + j, i), b.at(i, j));
      EXPECT_TRUE(d.matrix.at(i, j).is_zero());
      EXPECT_TRUE(d.matrix.at(2 + i, 2 + j).is_zero());
    }
  }
}

TEST(CharTwo, SquareOfVariable) {
  const FieldSpec gf = FieldSpec::gf2_16();
  Circuit c = parse_expression("x");
  SymbolicMatrix a = square_matrix_char2(c);
  for (std::size_t k = 0; k < a.dim(); ++k) EXPECT_TRUE(a.at(k, k).is_zero());
  IdentityOptions opt = default_identity_options(true);
  opt.square_lhs = true;
  EXPECT_TRUE(identity_test(c, a, opt).ok());
  EXPECT_EQ(symbolic_det(square_matrix_char2(parse_expression("x+y"))), poly("x^2 + y^2", gf));
}

TEST(CharTwo, SquareNeedsCharacteristicTwo) {
  EXPECT_THROW(square_matrix_char2(parse_expression("x"), FieldSpec::mersenne61()), Error);
}

TEST(CharTwo, PartialPermanentSmall) {
  EXPECT_EQ(partial_permanent(parse_matrix("1\na\n")), poly("1 + a"));
  EXPECT_EQ(partial_permanent(parse_matrix("2\n0 0\n0 0\n")), poly("1"));
  EXPECT_EQ(partial_permanent(parse_matrix("2\na b\nc d\n")), poly("1 + a + b + c + d + a d + b c"));
}

TEST(CharTwo, OneByOneIdentity) {
  const FieldSpec gf = FieldSpec::gf2();
  SymbolicMatrix b(1, gf);
  b.set(0, 0, Weight::variable("b", gf));
  EXPECT_EQ(symbolic_det(doubled_plus_identity(b)), poly("1 + b^2", gf));
  Rng rng(1);
  EXPECT_TRUE(partial_perm_identity(b, rng).holds);
}

TEST(CharTwo, MatchingParity) {
  const FieldSpec gf = FieldSpec::gf2();
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng.below(5);
    ValueMatrix b(n, std::vector<FieldElement>(n, FieldElement::zero(gf)));
    SymbolicMatrix sb(n, gf);
    std::vector<std::vector<bool>> bit(n, std::vector<bool>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        bit[i][j] = rng.chance(0.5);
        if (bit[i][j]) sb.set(i, j, Weight::constant(FieldElement::one(gf)));
      }
    }
    // Count partial matchings by brute force over row assignments.
    std::size_t count = 0;
    std::vector<long> pick(n, -1);
    std::vector<bool> used(n, false);
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i == n) {
        ++count;
        return;
      }
      self(self, i + 1);
      for (std::size_t j = 0; j < n; ++j) {
        if (used[j] || !bit[i][j]) continue;
        used[j] = true;
        self(self, i + 1);
        used[j] = false;
      }
    };
    rec(rec, 0);
    SymbolicMatrix a = doubled_plus_identity(sb);
    FieldElement det = det_value(a.evaluate({}, gf), gf);
    EXPECT_EQ(det.is_one(), count % 2 == 1);
  }
}

TEST(CharTwo, RandomFiveByFive) {
  const FieldSpec gf = FieldSpec::gf2_16();
  Rng rng(13);
  SymbolicMatrix b = generic_matrix(5, gf);
  PartialPermVerdict v = partial_perm_identity(b, rng, 20);
  EXPECT_TRUE(v.holds);
  EXPECT_FALSE(v.exact);
  EXPECT_EQ(v.trials, 20u);
}

TEST(Dense, TripleProduct) {
  DensePolynomial p = poly("2 * x y z");
  Circuit f = poly_to_formula(p);
  EXPECT_TRUE(classify(f).is_formula);
  Rng rng(3);
  const FieldSpec fp = FieldSpec::mersenne61();
  for (int k = 0; k < 10; ++k) {
    Assignment a{{"x", sample_random(fp, rng)}, {"y", sample_random(fp, rng)}, {"z", sample_random(fp, rng)}};
    EXPECT_EQ(evaluate(f, a, fp)[0], p.evaluate(a, fp));
  }
}

TEST(Dense, LinearForm) {
  Circuit f = poly_to_formula(poly("3 * x1 + -2 * x2 + x3 + 7"));
  EXPECT_LE(skinny_size(f), 3u);
  EXPECT_THROW(poly_to_formula(poly("0")), Error);
}

TEST(Dense, FullCubicInThreeVariables) {
  DensePolynomial p = expand(monomial_sum_circuit(3, 3))[0];
  Circuit f = poly_to_formula(p);
  EXPECT_LE(skinny_size(f), 28u);
  EXPECT_EQ(expand(f)[0], p);
}

TEST(Dense, MonomialSums) {
  EXPECT_EQ(expand(monomial_sum_circuit(1, 1))[0], poly("1 + x1"));
  for (std::size_t n = 1; n <= 5; ++n) {
    for (std::size_t d = 1; d <= 5; ++d) {
      Circuit c = monomial_sum_circuit(n, d);
      EXPECT_EQ(skinny_size(c), 2 * n * d - n + d - 1);
      Assignment ones;
      for (std::size_t k = 1; k <= n; ++k) ones["x" + std::to_string(k)] = q(1);
      EXPECT_EQ(evaluate(c, ones, {})[0], FieldElement::from_big({}, binomial(static_cast<long>(n + d), static_cast<long>(d))));
    }
  }
}

TEST(Dense, BoundsArithmetic) {
  EXPECT_EQ(bounds_report(1, 1).formula, 1);
  for (long n = 1; n <= 10; ++n) {
    for (long d = 1; d <= 10; ++d) {
      // C(n+d-1, n) by the multiplicative formula.
      BigInt c = 1;
      for (long i = 1; i <= n; ++i) c = c * (d - 1 + i) / i;
      EXPECT_EQ(bounds_report(static_cast<std::size_t>(n), static_cast<std::size_t>(d)).symmetric, 4 * c - 2);
    }
  }
  EXPECT_THROW(bounds_report(0, 2), Error);
}

}  // namespace

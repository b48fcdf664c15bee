#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"

using namespace symdet;
using namespace symdet::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 5) problems_ << (failures_ > 1 ? "; " : "") << what;
  }
  std::size_t failures() const { return failures_; }
  std::string problems() const { return problems_.str(); }

 private:
  std::size_t failures_ = 0;
  std::ostringstream problems_;
};

Outcome finish(const Checker& ck, const std::string& summary, double seconds, double limit) {
  Outcome o;
  std::ostringstream d;
  d << summary << ", " << ck.failures() << " failures, " << seconds << " s";
  if (seconds > limit) d << " (limit " << limit << " s)";
  if (ck.failures()) d << " [" << ck.problems() << "]";
  o.pass = ck.failures() == 0 && seconds <= limit;
  o.detail = d.str();
  return o;
}

double since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool allowed_entry(const Weight& w) {
  if (w.is_plain_variable()) return true;
  if (!w.is_constant()) return false;
  const FieldElement& c = w.coef;
  return c.is_zero() || c.is_one() || c == -FieldElement::one(c.spec()) || c == FieldElement::half(c.spec());
}

std::string at(std::size_t k) { return "#" + std::to_string(k); }

Outcome formula_symmetric() {
  auto start = std::chrono::steady_clock::now();
  Checker ck;
  std::size_t exact = 0;
  auto corpus = formula_corpus(200, 101);
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const Circuit& f = corpus[k];
    const std::size_t e = skinny_size(f);
    ck.expect(e <= 30 && f.variables().size() <= 8, at(k) + " outside corpus limits");
    SymbolicMatrix m = sym_matrix(f, SizeMode::skinny);
    ck.expect(m.symmetric() && m.is_actually_symmetric(), at(k) + " not symmetric");
    ck.expect(m.dim() <= 2 * e + 3, at(k) + " dim " + std::to_string(m.dim()) + " > 2e+3");
    for (std::size_t i = 0; i < m.dim(); ++i) {
      for (std::size_t j = 0; j < m.dim(); ++j) ck.expect(allowed_entry(m.at(i, j)), at(k) + " entry " + m.at(i, j).to_string());
    }
    IdentityOptions opt;
    opt.seed = 1000 + k;
    opt.allow_exact = false;
    ck.expect(identity_test(f, m, opt).ok(), at(k) + " identity test failed");
    if (e <= 6) {
      ++exact;
      ck.expect(same_polynomial(symbolic_det(m), target(f)), at(k) + " symbolic det differs");
    }
  }
  return finish(ck, "200 formulas, " + std::to_string(exact) + " exact", since(start), 60);
}

Outcome green_bounds() {
  auto start = std::chrono::steady_clock::now();
  Checker ck;
  auto formulas = formula_corpus(200, 101);
  for (std::size_t k = 0; k < formulas.size(); ++k) {
    const Circuit& f = formulas[k];
    const std::size_t g = skinny_size(minimize(f));
    SymbolicMatrix m = sym_matrix(f, SizeMode::green);
    ck.expect(m.dim() <= 2 * g + 3, "formula " + at(k) + " dim " + std::to_string(m.dim()) + " > 2g+3");
    IdentityOptions opt;
    opt.seed = 2000 + k;
    ck.expect(identity_test(f, m, opt).ok(), "formula " + at(k) + " identity test failed");
  }
  auto circuits = ws_corpus(200, 202, 25, {}, 0.2);
  for (std::size_t k = 0; k < circuits.size(); ++k) {
    const Circuit& c = circuits[k];
    Circuit mc = minimize(c);
    const std::size_t ei = skinny_size(mc) + variable_inputs(mc);
    SymbolicMatrix m = ws_sym_matrix(c, SizeMode::green);
    ck.expect(m.dim() <= 2 * ei + 1, "ws " + at(k) + " dim " + std::to_string(m.dim()) + " > 2(e+i)+1");
    IdentityOptions opt;
    opt.seed = 3000 + k;
    ck.expect(identity_test(c, m, opt).ok(), "ws " + at(k) + " identity test failed");
  }
  return finish(ck, "200 formulas, 200 weakly-skew circuits", since(start), 60);
}

Outcome nonsymmetric_bounds() {
  auto start = std::chrono::steady_clock::now();
  Checker ck;
  std::size_t with_sum = 0;
  auto formulas = formula_corpus(200, 303);
  for (std::size_t k = 0; k < formulas.size(); ++k) {
    const Circuit& f = formulas[k];
    Circuit mf = minimize(f);
    bool has_sum = false;
    for (const auto& g : mf.gates()) has_sum = has_sum || g.kind == GateKind::add;
    SymbolicMatrix m = valiant_matrix(f);
    if (has_sum) {
      ++with_sum;
      ck.expect(m.dim() <= skinny_size(mf) + 1, "valiant " + at(k) + " dim " + std::to_string(m.dim()) + " > e+1");
    }
    IdentityOptions opt;
    opt.seed = 4000 + k;
    ck.expect(identity_test(f, m, opt).ok(), "valiant " + at(k) + " identity test failed");
  }
  auto circuits = ws_corpus(200, 304, 25, {}, 0.2);
  for (std::size_t k = 0; k < circuits.size(); ++k) {
    const Circuit& c = circuits[k];
    const std::size_t fat = unweight(c).size();
    Circuit mc = minimize(c);
    const std::size_t ei = skinny_size(mc) + variable_inputs(mc);
    SymbolicMatrix mf = ws_nonsym_matrix(c, SizeMode::fat);
    SymbolicMatrix mg = ws_nonsym_matrix(c, SizeMode::green);
    ck.expect(mf.dim() <= fat + 1, "ws " + at(k) + " fat dim " + std::to_string(mf.dim()) + " > m+1");
    ck.expect(mg.dim() <= ei + 1, "ws " + at(k) + " green dim " + std::to_string(mg.dim()) + " > e+i+1");
    IdentityOptions opt;
    opt.seed = 5000 + k;
    ck.expect(identity_test(c, mf, opt).ok() && identity_test(c, mg, opt).ok(), "ws " + at(k) + " identity test failed");
  }
  return finish(ck, std::to_string(with_sum) + " formulas with a sum, 200 weakly-skew circuits", since(start), 60);
}

Outcome weakly_skew_symmetric() {
  auto start = std::chrono::steady_clock::now();
  Checker ck;
  std::size_t audited = 0;
  auto circuits = ws_corpus(200, 404, 25);
  for (std::size_t k = 0; k < circuits.size(); ++k) {
    const Circuit& c = circuits[k];
    const std::size_t m = c.size();
    ck.expect(m <= 25 && classify(c).is_weakly_skew, at(k) + " outside corpus limits");
    SymbolicMatrix a = ws_sym_matrix(c, SizeMode::fat);
    ck.expect(a.is_actually_symmetric(), at(k) + " not symmetric");
    ck.expect(a.dim() <= 2 * m + 1, at(k) + " dim " + std::to_string(a.dim()) + " > 2m+1");
    IdentityOptions opt;
    opt.seed = 6000 + k;
    ck.expect(identity_test(c, a, opt).ok(), at(k) + " identity test failed");
    WsCertificate cert = build_ws_graph(c, SizeMode::fat);
    if (cert.graph.vertex_count() <= 14) {
      ++audited;
      for (const auto& p : audit_ws_certificate(cert)) ck.expect(false, at(k) + " audit: " + p);
    }
  }
  return finish(ck, "200 weakly-skew circuits, " + std::to_string(audited) + " audited", since(start), 180);
}

FieldElement generic_det_at(std::size_t n, const Assignment& point, const FieldSpec& spec) {
  return det_value(generic_matrix(n, spec).evaluate(point, spec), spec);
}

Outcome det_symmetrization() {
  auto start = std::chrono::steady_clock::now();
  Checker ck;
  const FieldSpec p = FieldSpec::mersenne61();
  std::ostringstream dims;
  for (std::size_t n = 1; n <= 5; ++n) {
    SymbolicMatrix m = det_sym_matrix(n);
    dims << (n > 1 ? "," : "") << m.dim();
    ck.expect(m.is_actually_symmetric(), "n=" + std::to_string(n) + " not symmetric");
    if (n <= 3) ck.expect(m.dim() <= 4 * n * n * n + 7, "n=" + std::to_string(n) + " dim above 4n^3+7");
    if (n <= 2) {
      LayeredAbp abp = build_det_abp(n);
      DensePolynomial paths;
      for (const auto& path : simple_paths(abp.graph, abp.s, abp.t)) paths += path_weight(abp.graph, path);
      ck.expect(same_polynomial(paths, leibniz_det(n)), "n=" + std::to_string(n) + " path sum differs");
      ck.expect(same_polynomial(symbolic_det(m), leibniz_det(n)), "n=" + std::to_string(n) + " det differs");
    } else {
      Rng rng(700 + n);
      for (std::size_t trial = 0; trial < 20; ++trial) {
        Assignment point;
        for (const auto& x : m.variables()) point[x] = sample_random(p, rng);
        ck.expect(det_eval(m, point, p) == generic_det_at(n, point, p), "n=" + std::to_string(n) + " differs at a point");
      }
    }
  }
  return finish(ck, "dims " + dims.str(), since(start), 120);
}

Outcome characteristic_two() {
  auto start = std::chrono::steady_clock::now();
  Checker ck;
  const FieldSpec gf = FieldSpec::gf2_16();
  auto circuits = ws_corpus(100, 505, 20,
                            {FieldElement::from_int({}, 1), FieldElement::from_int({}, -1), FieldElement::from_int({}, 3)});
  for (std::size_t k = 0; k < circuits.size(); ++k) {
    const Circuit& c = circuits[k];
    const std::size_t m = c.size();
    SymbolicMatrix a = square_matrix_char2(c);
    ck.expect(a.is_actually_symmetric(), at(k) + " not symmetric");
    ck.expect(a.dim() <= 2 * m + 2, at(k) + " dim " + std::to_string(a.dim()) + " > 2m+2");
    IdentityOptions opt = default_identity_options(true);
    opt.seed = 8000 + k;
    opt.square_lhs = true;
    ck.expect(identity_test(c, a, opt).ok(), at(k) + " square identity failed");
  }
  Rng rng(606);
  for (std::size_t n = 1; n <= 6; ++n) {
    SymbolicMatrix sparse(n, gf);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (rng.chance(0.6)) sparse.set(i, j, Weight::variable("y" + std::to_string(i * n + j), gf));
        else if (rng.chance(0.5)) sparse.set(i, j, Weight::constant(sample_random(gf, rng)));
      }
    }
    for (const SymbolicMatrix& b : {generic_matrix(n, gf), sparse}) {
      PartialPermVerdict v = partial_perm_identity(b, rng, 20);
      ck.expect(v.holds && v.exact == (n <= 4), "per* identity n=" + std::to_string(n));
      if (n <= 3) {
        DensePolynomial pp = partial_permanent(b);
        ck.expect(same_polynomial(minor_permanent_square_sum(b), pp * pp), "minor sum n=" + std::to_string(n));
      }
    }
  }
  return finish(ck, "100 weakly-skew circuits, per* for n=1..6", since(start), 120);
}

Outcome worked_examples() {
  auto start = std::chrono::steady_clock::now();
  Checker ck;
  auto poly = [](std::string_view text) { return DensePolynomial::parse(text); };
  ck.expect(same_polynomial(symbolic_det(worked::sum_matrix()), poly("x + y")), "5x5 matrix det is not x+y");
  DensePolynomial small = symbolic_det(worked::small_sum_matrix());
  ck.expect(same_polynomial(small, poly("x + y")), "4x4 matrix det is " + small.to_string() + ", not x+y");
  ck.expect(same_polynomial(symbolic_det(worked::triple_matrix()), poly("2 * x y z")), "3x3 matrix det is not 2xyz");

  Circuit two_xy = parse_expression("2*x*y");
  for (Method method : {Method::valiant, Method::sym}) {
    BuildResult r = build(two_xy, method, default_size_mode(method));
    ck.expect(r.matrix.dim() != 2, "2xy given a 2x2 matrix by " + to_string(method));
    ck.expect(same_polynomial(symbolic_det(r.matrix), poly("2 * x y")), "2xy det differs for " + to_string(method));
  }

  const DensePolynomial fig = poly("x^2 + 2 * x y + y^2 + 2 * y z");
  const Circuit formula = parse_expression(worked::polynomial_expression);
  const Circuit ws = worked::weakly_skew_circuit();
  ck.expect(same_polynomial(target(formula), fig) && same_polynomial(target(ws), fig), "circuits do not compute the polynomial");
  const std::vector<std::pair<Method, SizeMode>> plans{
      {Method::valiant, SizeMode::green}, {Method::sym, SizeMode::skinny},   {Method::sym, SizeMode::green},
      {Method::ws_sym, SizeMode::fat},    {Method::ws_sym, SizeMode::green}, {Method::ws_nonsym, SizeMode::fat},
      {Method::ws_nonsym, SizeMode::green}};
  for (const auto& [method, mode] : plans) {
    const Circuit& c = method == Method::valiant || method == Method::sym ? formula : ws;
    BuildResult r = build(c, method, mode);
    ck.expect(same_polynomial(symbolic_det(r.matrix), fig), to_string(method) + "/" + to_string(mode) + " det differs");
  }
  return finish(ck, "matrices, 2xy remark, 7 builds", since(start), 60);
}

Outcome dense_bounds() {
  auto start = std::chrono::steady_clock::now();
  Checker ck;
  Rng rng(808);
  const FieldSpec q;
  for (std::size_t k = 0; k < 50; ++k) {
    const std::size_t n = 1 + rng.below(5), d = 1 + rng.below(5);
    std::vector<std::string> vars;
    for (std::size_t v = 1; v <= n; ++v) vars.push_back("x" + std::to_string(v));
    DensePolynomial p = DensePolynomial::constant(FieldElement::from_int(q, 1 + static_cast<std::int64_t>(rng.below(9)))).over(vars);
    // All monomials of degree <= d, each present with probability 3/4.
    std::vector<Monomial> layer{Monomial(n, 0)};
    std::set<Monomial> all(layer.begin(), layer.end());
    for (std::size_t deg = 1; deg <= d; ++deg) {
      std::vector<Monomial> next;
      for (const auto& m : layer) {
        for (std::size_t v = 0; v < n; ++v) {
          Monomial r = m;
          ++r[v];
          if (all.insert(r).second) next.push_back(r);
        }
      }
      layer = std::move(next);
    }
    for (const auto& m : all) {
      if (!rng.chance(0.75)) continue;
      DensePolynomial t = DensePolynomial::constant(FieldElement::from_int(q, rng.between(-5, 5)));
      for (std::size_t v = 0; v < n; ++v) {
        for (std::uint32_t e = 0; e < m[v]; ++e) t *= DensePolynomial::variable(vars[v]);
      }
      p += t;
    }
    Circuit f = poly_to_formula(p);
    const BigInt bound = bounds_report(n, d).formula;
    ck.expect(classify(f).is_formula, "dense " + at(k) + " not a formula");
    ck.expect(BigInt(skinny_size(f)) <= bound, "dense " + at(k) + " size " + std::to_string(skinny_size(f)) + " > F");
    ck.expect(same_polynomial(target(f), p), "dense " + at(k) + " computes another polynomial");
  }
  for (std::size_t n = 1; n <= 8; ++n) {
    for (std::size_t d = 1; d <= 8; ++d) {
      Circuit c = monomial_sum_circuit(n, d);
      ck.expect(skinny_size(c) == 2 * n * d - n + d - 1,
                "monomial sum n=" + std::to_string(n) + " d=" + std::to_string(d) + " size " + std::to_string(skinny_size(c)));
      if (n <= 4 && d <= 4) {
        DensePolynomial s = target(c);
        bool ones = true;
        for (const auto& [m, coef] : s.terms()) ones = ones && coef.is_one();
        ck.expect(ones && BigInt(s.terms().size()) == binomial(static_cast<long>(n + d), static_cast<long>(n)),
                  "monomial sum n=" + std::to_string(n) + " d=" + std::to_string(d) + " polynomial");
      }
    }
  }
  struct Hand {
    std::size_t n, d;
    int f, s, quarez, mono, linear;
  };
  for (const Hand& h : {Hand{1, 1, 1, 2, 4, 1, 2}, Hand{2, 2, 7, 10, 12, 8, 10}, Hand{3, 3, 28, 38, 40, 45, 38}}) {
    BoundsReport r = bounds_report(h.n, h.d);
    ck.expect(r.formula == h.f && r.symmetric == h.s && r.quarez == h.quarez && r.monomial_formula == h.mono &&
                  r.linear_entries == h.linear,
              "bounds (" + std::to_string(h.n) + "," + std::to_string(h.d) + ")");
  }
  return finish(ck, "50 dense polynomials, 64 monomial sums, 3 bound rows", since(start), 30);
}

struct Instance {
  Circuit circuit;
  SymbolicMatrix matrix;
};

Outcome oracle_coherence() {
  auto start = std::chrono::steady_clock::now();
  Checker ck;
  std::vector<Instance> instances;
  for (const auto& f : formula_corpus(120, 909, 12)) {
    instances.push_back({f, valiant_matrix(f)});
    instances.push_back({f, sym_matrix(f, SizeMode::skinny)});
    instances.push_back({f, sym_matrix(f, SizeMode::green)});
  }
  for (const auto& c : ws_corpus(120, 910, 12, {}, 0.2)) {
    instances.push_back({c, ws_sym_matrix(c, SizeMode::fat)});
    instances.push_back({c, ws_sym_matrix(c, SizeMode::green)});
    instances.push_back({c, ws_nonsym_matrix(c, SizeMode::fat)});
    instances.push_back({c, ws_nonsym_matrix(c, SizeMode::green)});
  }
  std::vector<SymbolicMatrix> small{worked::sum_matrix(), worked::small_sum_matrix(), worked::triple_matrix()};
  for (const auto& inst : instances) {
    if (inst.matrix.dim() <= 6) small.push_back(inst.matrix);
  }
  for (std::size_t k = 0; k < small.size(); ++k) {
    const SymbolicMatrix& a = small[k];
    ck.expect(same_polynomial(cycle_cover_sum(a, true), symbolic_det(a)), "matrix " + at(k) + " signed sum differs");
    ck.expect(same_polynomial(cycle_cover_sum(a, false), ryser_permanent(a)), "matrix " + at(k) + " unsigned sum differs");
  }

  // A negated entry whose cofactor vanishes leaves the determinant unchanged;
  // such equivalent mutants are told apart by the exact oracle and must pass.
  Rng rng(911);
  std::size_t caught = 0, equivalent = 0, mutations = 0;
  for (std::size_t k = 0; mutations < 1000; ++k) {
    const Instance& inst = instances[rng.below(instances.size())];
    SymbolicMatrix m = inst.matrix;
    std::vector<std::pair<std::size_t, std::size_t>> nonzero;
    for (std::size_t i = 0; i < m.dim(); ++i) {
      for (std::size_t j = 0; j < m.dim(); ++j) {
        if (!m.at(i, j).is_zero()) nonzero.emplace_back(i, j);
      }
    }
    auto [i, j] = nonzero[rng.below(nonzero.size())];
    m.set(i, j, m.at(i, j).times(-FieldElement::one(m.spec())));
    IdentityOptions opt;
    opt.seed = 10000 + k;
    opt.allow_exact = false;
    const bool flagged = !identity_test(inst.circuit, m, opt).ok();
    if (same_polynomial(symbolic_det(m), target(inst.circuit))) {
      ++equivalent;
      ck.expect(!flagged, "equivalent mutant " + at(k) + " flagged");
      continue;
    }
    ++mutations;
    caught += flagged;
  }
  const double rate = static_cast<double>(caught) / static_cast<double>(mutations);
  ck.expect(rate >= 0.99, "catch rate " + std::to_string(rate));
  return finish(ck, std::to_string(small.size()) + " small matrices, " + std::to_string(caught) + "/" +
                        std::to_string(mutations) + " mutations caught, " + std::to_string(equivalent) + " equivalent skipped",
                since(start), 120);
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "formula symmetric bound and identity", formula_symmetric},
      {2, "green-size bounds", green_bounds},
      {3, "non-symmetric bounds", nonsymmetric_bounds},
      {4, "weakly-skew symmetric", weakly_skew_symmetric},
      {5, "determinant symmetrization", det_symmetrization},
      {6, "characteristic 2", characteristic_two},
      {7, "worked examples", worked_examples},
      {8, "dense polynomial bounds", dense_bounds},
      {9, "oracle coherence", oracle_coherence},
  };
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  bool all_pass = true;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all_pass = all_pass && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail << std::endl;
  }
  return all_pass ? 0 : 1;
}

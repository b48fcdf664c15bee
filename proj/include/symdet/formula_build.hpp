#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symdet/circuit.hpp"
#include "symdet/graph.hpp"
#include "symdet/minimize.hpp"

namespace symdet {

enum class SizeMode { skinny, green, fat };

inline std::string to_string(SizeMode m) {
  switch (m) {
    case SizeMode::skinny: return "skinny";
    case SizeMode::green: return "green";
    case SizeMode::fat: return "fat";
  }
  return "?";
}

/// Digraph with c0 * sum over s-t paths P of (-1)^|P| w(P) equal to the formula.
struct PathSumCertificate {
  WeightedDigraph graph;
  std::size_t s = 0;
  std::size_t t = 0;
  FieldElement c0;
  /// A vertex whose only out-arc has constant weight, if any sum was built.
  std::optional<std::size_t> designated;
};

/// Graph with c0 * sum over s-t paths P of (-1)^(|P|/2+1) w(P) equal to the formula.
struct SymPathSumCertificate {
  WeightedGraph graph;
  std::size_t s = 0;
  std::size_t t = 0;
  FieldElement c0;
};

namespace detail {

inline Circuit require_formula(const Circuit& f) {
  Circuit c = validate(f);
  if (!classify(c).is_formula) throw Error(ErrorCode::not_a_formula, "circuit is not a formula");
  return c;
}

inline Weight leaf_weight(const Gate& g, const FieldSpec& spec) {
  return g.kind == GateKind::variable ? Weight::variable(g.name, spec) : Weight::constant(g.value);
}

// Scalar c_alpha carried by each gate when constant factors are kept aside:
// inputs carry 1, products multiply (negated when `negate_products`), and a
// sum keeps its first nonzero branch.
inline std::vector<FieldElement> branch_scalars(const Circuit& f, bool negate_products) {
  std::vector<FieldElement> c;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Gate& g = f.gate(i);
    if (g.is_input()) {
      c.push_back(f.one());
      continue;
    }
    FieldElement c1 = g.args[0].weight * c[g.args[0].from];
    FieldElement c2 = g.args[1].weight * c[g.args[1].from];
    if (g.kind == GateKind::mul) {
      c.push_back(negate_products ? -(c1 * c2) : c1 * c2);
    } else {
      c.push_back(c1.is_zero() ? c2 : c1);
    }
  }
  return c;
}

}  // namespace detail

/// Path-sum digraph of a formula. Constants multiplying sub-formulas (arrow
/// weights) are free. Vertex 0 is s. Merging t1 with s2 in a product drops
/// one vertex from every path, which flips (-1)^|P|; the product therefore
/// carries c0 = -c1*c2.
inline PathSumCertificate build_valiant_digraph(const Circuit& formula) {
  Circuit f = detail::require_formula(formula);
  const FieldSpec& spec = f.field();
  auto c = detail::branch_scalars(f, true);
  PathSumCertificate cert;
  cert.graph = WeightedDigraph(spec);
  cert.s = cert.graph.add_vertex("s");
  auto build = [&](auto&& self, GateId a, std::size_t s) -> std::size_t {
    const Gate& g = f.gate(a);
    if (g.is_input()) {
      std::size_t t = cert.graph.add_vertex();
      cert.graph.add_arc(s, t, detail::leaf_weight(g, spec));
      return t;
    }
    const Arrow& l = g.args[0];
    const Arrow& r = g.args[1];
    if (g.kind == GateKind::mul) {
      std::size_t t1 = self(self, l.from, s);
      return self(self, r.from, t1);
    }
    FieldElement c1 = l.weight * c[l.from];
    if (c1.is_zero()) return self(self, r.from, s);
    FieldElement c2 = r.weight * c[r.from];
    std::size_t t1 = self(self, l.from, s);
    std::size_t t2 = self(self, r.from, s);
    cert.graph.add_arc(t2, t1, Weight::constant(-c2 / c1));
    if (!cert.designated) cert.designated = t2;
    return t1;
  };
  const Output& out = f.outputs().at(0);
  cert.t = build(build, out.gate, cert.s);
  cert.graph.set_role(cert.t, "t");
  cert.c0 = out.weight * c[out.gate];
  return cert;
}

/// Non-symmetric representation of dimension at most gsize+1 (the formula is
/// minimized first). A formula without additions gets the diagonal matrix of
/// its variables and constant factor.
inline SymbolicMatrix valiant_matrix(const Circuit& formula) {
  Circuit f0 = detail::require_formula(formula);
  const FieldSpec& spec = f0.field();
  Circuit f;
  try {
    f = minimize(f0);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::constant_circuit) throw;
    SymbolicMatrix m(1, spec);
    m.set(0, 0, Weight::constant(evaluate(f0, {}, spec).at(0)));
    return m;
  }
  bool has_sum = false;
  for (const auto& g : f.gates()) has_sum = has_sum || g.kind == GateKind::add;
  if (!has_sum) {
    std::vector<Weight> diag;
    for (const auto& g : f.gates()) {
      if (g.is_input()) diag.push_back(detail::leaf_weight(g, spec));
    }
    FieldElement k = f.outputs()[0].weight;
    for (const auto& g : f.gates()) {
      for (const auto& a : g.args) k *= a.weight;
    }
    if (!k.is_one()) diag.push_back(Weight::constant(k));
    SymbolicMatrix m(diag.size(), spec);
    for (std::size_t i = 0; i < diag.size(); ++i) m.set(i, i, diag[i]);
    return m;
  }

  PathSumCertificate cert = build_valiant_digraph(f);
  const auto& g = cert.graph;
  // Merge t into s; every other vertex keeps its relative order.
  std::vector<std::size_t> id(g.vertex_count());
  std::size_t next = 0;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (v != cert.t) id[v] = next++;
  }
  id[cert.t] = id[cert.s];
  const bool fresh = !cert.designated.has_value();
  SymbolicMatrix m(next + (fresh ? 1 : 0), spec);
  for (const auto& [a, w] : g.arcs()) {
    Weight x = w;
    if (cert.designated && a.first == *cert.designated) x = w.times(cert.c0);
    m.set(id[a.first], id[a.second], x);
  }
  const std::size_t v = fresh ? next : id[*cert.designated];
  for (std::size_t k = 0; k < m.dim(); ++k) {
    if (k == id[cert.s]) continue;
    m.set(k, k, Weight::constant(k == v ? cert.c0 : FieldElement::one(spec)));
  }
  return m;
}

/// Symmetric path-sum graph. Skinny mode works on the unweighted formula and
/// uses the u-v detour when both summands would add an s-t edge; green mode
/// works on the minimized formula, keeps constants aside in c0 and joins sums
/// through a fresh vertex u with edges t2-u (1) and u-t1 (-c2/c1).
inline SymPathSumCertificate build_sym_graph(const Circuit& formula, SizeMode mode) {
  Circuit f = detail::require_formula(formula);
  f = mode == SizeMode::green ? minimize(f) : unweight(f);
  const FieldSpec& spec = f.field();
  const FieldElement one = f.one();
  auto c = detail::branch_scalars(f, false);
  std::vector<bool> direct(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Gate& g = f.gate(i);
    direct[i] = g.is_input() || (g.kind == GateKind::add && (direct[g.args[0].from] || direct[g.args[1].from]));
  }

  SymPathSumCertificate cert;
  cert.graph = WeightedGraph(spec);
  auto& G = cert.graph;
  cert.s = G.add_vertex("s");
  cert.t = G.add_vertex("t");
  auto build = [&](auto&& self, GateId a, std::size_t s, std::size_t t) -> void {
    const Gate& g = f.gate(a);
    if (g.is_input()) {
      G.add_edge(s, t, detail::leaf_weight(g, spec));
      return;
    }
    const Arrow& l = g.args[0];
    const Arrow& r = g.args[1];
    if (g.kind == GateKind::mul) {
      std::size_t t1 = G.add_vertex();
      std::size_t s2 = G.add_vertex();
      self(self, l.from, s, t1);
      G.add_edge(t1, s2, Weight::constant(-one));
      self(self, r.from, s2, t);
      return;
    }
    if (mode != SizeMode::green) {
      self(self, l.from, s, t);
      if (direct[l.from] && direct[r.from] && G.has_edge(s, t)) {
        Weight w = G.edge(s, t);
        G.remove_edge(s, t);
        std::size_t u = G.add_vertex();
        std::size_t v = G.add_vertex();
        G.add_edge(s, u, w);
        G.add_edge(u, v, Weight::constant(one));
        G.add_edge(v, t, Weight::constant(-one));
      }
      self(self, r.from, s, t);
      return;
    }
    FieldElement c1 = l.weight * c[l.from];
    if (c1.is_zero()) {
      self(self, r.from, s, t);
      return;
    }
    FieldElement c2 = r.weight * c[r.from];
    self(self, l.from, s, t);
    std::size_t t2 = G.add_vertex();
    self(self, r.from, s, t2);
    std::size_t u = G.add_vertex();
    G.add_edge(t2, u, Weight::constant(one));
    G.add_edge(u, t, Weight::constant(-c2 / c1));
  };
  const Output& out = f.outputs().at(0);
  build(build, out.gate, cert.s, cert.t);
  cert.c0 = out.weight * c[out.gate];
  return cert;
}

/// Symmetric representation: the path-sum graph plus a vertex c joined to t
/// with weight c0/2 and to s with weight (-1)^(|G|/2-1). Dimension at most
/// 2e+3 for the size measure of `mode`.
inline SymbolicMatrix sym_matrix(const Circuit& formula, SizeMode mode) {
  Circuit f = detail::require_formula(formula);
  if (f.field().characteristic() == 2) throw Error(ErrorCode::char_two_half, "symmetric construction needs 1/2");
  if (mode == SizeMode::green && constant_mask(f)[f.outputs()[0].gate]) {
    SymbolicMatrix m(1, f.field(), true);
    m.set(0, 0, Weight::constant(evaluate(f, {}, f.field()).at(0)));
    return m;
  }
  SymPathSumCertificate cert = build_sym_graph(f, mode);
  WeightedGraph g = cert.graph;
  const std::size_t n = g.vertex_count();
  std::size_t cv = g.add_vertex("c");
  g.add_edge(cert.t, cv, Weight::constant(cert.c0 * FieldElement::half(g.spec())));
  FieldElement sign = FieldElement::from_int(g.spec(), (n / 2 - 1) % 2 ? -1 : 1);
  g.add_edge(cv, cert.s, Weight::constant(sign));
  return adjacency(g);
}

/// Every -1 entry replaced by 1.
inline SymbolicMatrix permanent_variant(const SymbolicMatrix& a) {
  SymbolicMatrix b = a;
  const FieldElement minus_one = -FieldElement::one(a.spec());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) {
      if (a.at(i, j).is_constant() && a.at(i, j).coef == minus_one) {
        b.set(i, j, Weight::constant(FieldElement::one(a.spec())));
      }
    }
  }
  return b;
}

}  // namespace symdet

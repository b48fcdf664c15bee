#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "symdet/circuit.hpp"
#include "symdet/formula_build.hpp"
#include "symdet/graph.hpp"
#include "symdet/minimize.hpp"

namespace symdet {

/// Vertex t_alpha and scalar c_alpha of a reusable gate.
struct WsTerminal {
  std::size_t vertex = 0;
  FieldElement scale;
};

/// Graph for a weakly-skew circuit: for every reusable gate alpha,
/// c_alpha * sum over acceptable s-t_alpha paths P of (-1)^((|P|-1)/2) w(P) = f_alpha.
/// Gate ids refer to `circuit`, the circuit the graph was built from.
struct WsCertificate {
  Circuit circuit;
  WeightedGraph graph;
  std::size_t s = 0;
  std::map<GateId, WsTerminal> reusable;
};

namespace detail {

// Fat mode works on the unweighted circuit, green mode on the minimized one.
inline Circuit prepare_weakly_skew(const Circuit& c, SizeMode mode) {
  Circuit p = mode == SizeMode::green ? minimize(c) : unweight(validate(c));
  if (!classify(p).is_weakly_skew) throw Error(ErrorCode::not_weakly_skew, "circuit is not weakly-skew");
  return p;
}

inline Circuit require_weakly_skew(const Circuit& c) {
  Circuit v = validate(c);
  if (!classify(v).is_weakly_skew) throw Error(ErrorCode::not_weakly_skew, "circuit is not weakly-skew");
  return v;
}

struct WsStep {
  GateId gate;
  std::optional<GateId> source;  // gate whose terminal is the local s; none for the global s
};

// Processing order of the inductive constructions. Gates of a region are
// visited in topological order; at a multiplication the closed argument is
// expanded first as its own region whose source is the other argument.
inline std::vector<WsStep> ws_order(const Circuit& c, const WsClassification& cls) {
  std::vector<WsStep> steps;
  auto region = [&](auto&& self, const std::set<GateId>& gates, std::optional<GateId> source) -> void {
    std::set<GateId> nested;
    for (GateId g : gates) {
      auto it = cls.closed.find(g);
      if (it != cls.closed.end()) nested.insert(it->second.gates.begin(), it->second.gates.end());
    }
    for (GateId g : gates) {
      if (nested.count(g)) continue;
      auto it = cls.closed.find(g);
      if (it != cls.closed.end()) {
        GateId other = c.gate(g).args[1 - it->second.arg_index].from;
        self(self, it->second.gates, other);
      }
      steps.push_back({g, source});
    }
  };
  std::set<GateId> all;
  for (std::size_t i = 0; i < c.size(); ++i) all.insert(i);
  region(region, all, std::nullopt);
  return steps;
}

}  // namespace detail

/// Symmetric acceptable-path graph of a weakly-skew circuit (several outputs
/// allowed). Fat mode: 2 vertices per input and addition, so |G| <= 2m+1.
/// Green mode: the circuit is minimized, constant inputs get no vertex and
/// constant factors are carried by c_alpha, so |G| <= 2(e+i)+1.
inline WsCertificate build_ws_graph(const Circuit& circuit, SizeMode mode) {
  detail::require_weakly_skew(circuit);
  WsCertificate cert;
  cert.circuit = detail::prepare_weakly_skew(circuit, mode);
  const Circuit& c = cert.circuit;
  const FieldSpec& spec = c.field();
  const FieldElement one = c.one();
  const bool green = mode == SizeMode::green;
  auto cls = classify(c);
  auto& G = cert.graph;
  G = WeightedGraph(spec);
  cert.s = G.add_vertex("s");

  std::vector<std::size_t> term(c.size(), 0);
  std::vector<FieldElement> scale(c.size(), one);
  for (const auto& [a, src] : detail::ws_order(c, cls)) {
    const Gate& g = c.gate(a);
    const std::size_t s = src ? term[*src] : cert.s;
    if (g.kind == GateKind::constant && green) continue;
    if (g.is_input()) {
      std::size_t v = G.add_vertex();
      term[a] = G.add_vertex();
      G.add_edge(s, v, detail::leaf_weight(g, spec));
      G.add_edge(v, term[a], Weight::constant(-one));
      continue;
    }
    const Arrow& l = g.args[0];
    const Arrow& r = g.args[1];
    if (g.kind == GateKind::mul) {
      const ClosedSub& sub = cls.closed.at(a);
      term[a] = term[sub.root];
      scale[a] = l.weight * r.weight * scale[l.from] * scale[r.from];
      continue;
    }
    std::size_t v = G.add_vertex();
    term[a] = G.add_vertex();
    auto arm = [&](const Arrow& x) {
      if (green && c.gate(x.from).kind == GateKind::constant) return std::make_pair(s, x.weight * c.gate(x.from).value);
      return std::make_pair(term[x.from], x.weight * scale[x.from]);
    };
    auto [u1, w1] = arm(l);
    auto [u2, w2] = arm(r);
    if (u1 == u2) {
      G.add_edge(u1, v, Weight::constant(w1 + w2));
    } else {
      G.add_edge(u1, v, Weight::constant(w1));
      G.add_edge(u2, v, Weight::constant(w2));
    }
    G.add_edge(v, term[a], Weight::constant(-one));
  }
  for (GateId a : cls.reusable) {
    if (green && c.gate(a).kind == GateKind::constant) continue;
    cert.reusable[a] = WsTerminal{term[a], scale[a]};
  }
  for (const auto& o : c.outputs()) G.set_role(term[o.gate], c.outputs().size() == 1 ? "t" : "t" + std::to_string(o.gate));
  return cert;
}

namespace detail {

inline Circuit require_single_output(const Circuit& c) {
  if (c.outputs().size() != 1) throw Error(ErrorCode::bad_arity, "construction needs a single-output circuit");
  return c;
}

inline std::optional<SymbolicMatrix> constant_fallback(const Circuit& c, SizeMode mode, bool symmetric) {
  if (mode != SizeMode::green || !constant_mask(c)[c.outputs()[0].gate]) return std::nullopt;
  SymbolicMatrix m(1, c.field(), symmetric);
  m.set(0, 0, Weight::constant(evaluate(c, {}, c.field()).at(0)));
  return m;
}

}  // namespace detail

/// Symmetric representation of a single-output weakly-skew circuit: the
/// acceptable-path graph plus an edge t-s of weight c_out/2 * (-1)^((|G|-1)/2).
inline SymbolicMatrix ws_sym_matrix(const Circuit& circuit, SizeMode mode) {
  Circuit c = detail::require_single_output(detail::require_weakly_skew(circuit));
  if (c.field().characteristic() == 2) throw Error(ErrorCode::char_two_half, "symmetric construction needs 1/2");
  if (auto m = detail::constant_fallback(c, mode, true)) return *m;
  WsCertificate cert = build_ws_graph(c, mode);
  WeightedGraph g = cert.graph;
  const Output& out = cert.circuit.outputs()[0];
  const WsTerminal& t = cert.reusable.at(out.gate);
  const std::size_t n = g.vertex_count();
  FieldElement w = FieldElement::half(g.spec()) * t.scale * out.weight;
  if ((n - 1) / 2 % 2 == 1) w = -w;
  g.add_edge(t.vertex, cert.s, Weight::constant(w));
  return adjacency(g);
}

/// Branching program of a weakly-skew circuit: the sum of the weights of the
/// s-t paths times `scale` is the output polynomial. One vertex per input
/// (variable inputs only in green mode) and per addition, plus s.
struct WsProgram {
  Circuit circuit;
  WeightedDigraph graph;
  std::size_t s = 0;
  std::size_t t = 0;
  FieldElement scale;
};

inline WsProgram build_ws_program(const Circuit& circuit, SizeMode mode) {
  Circuit c0 = detail::require_single_output(detail::require_weakly_skew(circuit));
  WsProgram p;
  p.circuit = detail::prepare_weakly_skew(c0, mode);
  const Circuit& c = p.circuit;
  const FieldSpec& spec = c.field();
  const FieldElement one = c.one();
  const bool green = mode == SizeMode::green;
  auto cls = classify(c);
  auto& G = p.graph;
  G = WeightedDigraph(spec);
  p.s = G.add_vertex("s");
  std::vector<std::size_t> term(c.size(), 0);
  std::vector<FieldElement> scale(c.size(), one);
  for (const auto& [a, src] : detail::ws_order(c, cls)) {
    const Gate& g = c.gate(a);
    const std::size_t s = src ? term[*src] : p.s;
    if (g.kind == GateKind::constant && green) continue;
    if (g.is_input()) {
      term[a] = G.add_vertex();
      G.add_arc(s, term[a], detail::leaf_weight(g, spec));
      continue;
    }
    const Arrow& l = g.args[0];
    const Arrow& r = g.args[1];
    if (g.kind == GateKind::mul) {
      term[a] = term[cls.closed.at(a).root];
      scale[a] = l.weight * r.weight * scale[l.from] * scale[r.from];
      continue;
    }
    term[a] = G.add_vertex();
    auto arm = [&](const Arrow& x) {
      if (green && c.gate(x.from).kind == GateKind::constant) return std::make_pair(s, x.weight * c.gate(x.from).value);
      return std::make_pair(term[x.from], x.weight * scale[x.from]);
    };
    auto [u1, w1] = arm(l);
    auto [u2, w2] = arm(r);
    if (u1 == u2) {
      G.add_arc(u1, term[a], Weight::constant(w1 + w2));
    } else {
      G.add_arc(u1, term[a], Weight::constant(w1));
      G.add_arc(u2, term[a], Weight::constant(w2));
    }
  }
  const Output& out = c.outputs()[0];
  p.t = term[out.gate];
  G.set_role(p.t, "t");
  p.scale = scale[out.gate] * out.weight;
  return p;
}

/// Non-symmetric representation of dimension at most m+1 (fat) or e+i+1
/// (green): t is merged into s, every other vertex gets a loop -1, and a
/// lone vertex with loop (-1)^(n-1) * scale is added unless that is 1.
inline SymbolicMatrix ws_nonsym_matrix(const Circuit& circuit, SizeMode mode) {
  Circuit c = detail::require_single_output(detail::require_weakly_skew(circuit));
  if (auto m = detail::constant_fallback(c, mode, false)) return *m;
  WsProgram p = build_ws_program(c, mode);
  const auto& g = p.graph;
  std::vector<std::size_t> id(g.vertex_count());
  std::size_t next = 0;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (v != p.t) id[v] = next++;
  }
  id[p.t] = id[p.s];
  FieldElement lambda = (next - 1) % 2 ? -p.scale : p.scale;
  const bool extra = !lambda.is_one();
  SymbolicMatrix m(next + (extra ? 1 : 0), g.spec());
  for (const auto& [a, w] : g.arcs()) m.set(id[a.first], id[a.second], w);
  const FieldElement minus_one = -FieldElement::one(g.spec());
  for (std::size_t k = 0; k < next; ++k) {
    if (k != id[p.s]) m.set(k, k, Weight::constant(minus_one));
  }
  if (extra) m.set(next, next, Weight::constant(lambda));
  return m;
}

}  // namespace symdet

#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "symdet/graph.hpp"
#include "symdet/poly.hpp"

namespace symdet {

/// Name of the (i, j) entry of the generic n x n matrix, 1-based.
inline std::string det_variable(std::size_t i, std::size_t j) {
  return "x" + std::to_string(i) + "_" + std::to_string(j);
}

/// Generic matrix (x_i_j) of dimension n.
inline SymbolicMatrix generic_matrix(std::size_t n, const FieldSpec& spec = {}) {
  SymbolicMatrix m(n, spec);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m.set(i, j, Weight::variable(det_variable(i + 1, j + 1), spec));
  }
  return m;
}

/// DET_n by the Leibniz expansion.
inline DensePolynomial leibniz_det(std::size_t n, const FieldSpec& spec = {}) {
  if (n > 9) throw Error(ErrorCode::too_large, "Leibniz expansion limited to n <= 9");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  DensePolynomial total(spec);
  do {
    DensePolynomial term = DensePolynomial::constant(FieldElement::one(spec));
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
      term *= DensePolynomial::variable(det_variable(i + 1, perm[i] + 1), spec);
    }
    total += inversions % 2 ? -term : term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// Layered branching program for DET_n. Vertex 0 is s (layer 0), t+ and t-
/// form layer n, and t (layer n+1) collects them with arcs of weight 1 and -1.
struct LayeredAbp {
  std::size_t n = 0;
  WeightedDigraph graph;
  std::vector<std::size_t> layer;
  std::size_t s = 0;
  std::size_t t_plus = 0;
  std::size_t t_minus = 0;
  std::size_t t = 0;
};

/// Clow-sequence program. A vertex of layer l (0 < l < n) is a state
/// (h, u, p): the current clow has head h and sits at u >= h (u = h when it
/// has just started), and p is the parity of the number of closed clows.
/// The first clow has head 1, which keeps every arc a single variable. Arcs:
/// (h,u,p) -> (h,v,p) with x_u_v for v > h; closing (h,u,p) -> (h',h',1-p)
/// with x_u_h for h' > h; at the last step closing goes to t+ or t- by the
/// sign (-1)^(n+k) of a sequence of k clows. States that cannot reach t are
/// dropped.
inline LayeredAbp build_det_abp(std::size_t n, const FieldSpec& spec = {}) {
  if (n == 0) throw Error(ErrorCode::invalid_option, "DET_n needs n >= 1");
  using State = std::tuple<std::size_t, std::size_t, std::size_t>;
  // Arcs between states, layer by layer; -1 / -2 mark t+ / t-.
  struct Arc {
    long from, to;
    std::size_t i, j;
  };
  std::vector<std::map<State, long>> index(n);
  std::vector<std::vector<State>> states(n);
  std::vector<std::vector<Arc>> arcs(n);
  auto state_id = [&](std::size_t l, const State& st) {
    auto [it, fresh] = index[l].emplace(st, static_cast<long>(states[l].size()));
    if (fresh) states[l].push_back(st);
    return it->second;
  };
  state_id(0, State{1, 1, 0});
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < states[l].size(); ++k) {
      auto [h, u, p] = states[l][k];
      const long from = static_cast<long>(k);
      if (l + 1 == n) {
        std::size_t clows = p + 1;
        arcs[l].push_back({from, (n + clows) % 2 ? -2 : -1, u, h});
        continue;
      }
      for (std::size_t v = h + 1; v <= n; ++v) arcs[l].push_back({from, state_id(l + 1, State{h, v, p}), u, v});
      for (std::size_t h2 = h + 1; h2 <= n; ++h2) {
        arcs[l].push_back({from, state_id(l + 1, State{h2, h2, 1 - p}), u, h});
      }
    }
  }
  // Keep only states from which t+ or t- is reachable.
  std::vector<std::vector<bool>> alive(n);
  for (std::size_t l = n; l-- > 0;) {
    alive[l].assign(states[l].size(), false);
    for (const auto& a : arcs[l]) {
      if (a.to < 0 || alive[l + 1][static_cast<std::size_t>(a.to)]) alive[l][static_cast<std::size_t>(a.from)] = true;
    }
  }

  LayeredAbp abp;
  abp.n = n;
  abp.graph = WeightedDigraph(spec);
  auto& g = abp.graph;
  std::vector<std::vector<std::size_t>> vertex(n);
  for (std::size_t l = 0; l < n; ++l) {
    vertex[l].assign(states[l].size(), 0);
    for (std::size_t k = 0; k < states[l].size(); ++k) {
      if (!alive[l][k]) continue;
      vertex[l][k] = g.add_vertex(l == 0 ? "s" : "");
      abp.layer.push_back(l);
    }
  }
  abp.s = vertex[0][0];
  abp.t_plus = g.add_vertex("t+");
  abp.t_minus = g.add_vertex("t-");
  abp.layer.push_back(n);
  abp.layer.push_back(n);
  for (std::size_t l = 0; l < n; ++l) {
    for (const auto& a : arcs[l]) {
      if (!alive[l][static_cast<std::size_t>(a.from)]) continue;
      if (a.to >= 0 && !alive[l + 1][static_cast<std::size_t>(a.to)]) continue;
      std::size_t to = a.to == -1 ? abp.t_plus : a.to == -2 ? abp.t_minus : vertex[l + 1][static_cast<std::size_t>(a.to)];
      g.add_arc(vertex[l][static_cast<std::size_t>(a.from)], to, Weight::variable(det_variable(a.i, a.j), spec));
    }
  }
  abp.t = g.add_vertex("t");
  abp.layer.push_back(n + 1);
  const FieldElement one = FieldElement::one(spec);
  g.add_arc(abp.t_plus, abp.t, Weight::constant(one));
  g.add_arc(abp.t_minus, abp.t, Weight::constant(-one));
  for (const auto& [a, w] : g.arcs()) {
    if (abp.layer[a.second] != abp.layer[a.first] + 1) throw Error(ErrorCode::bad_arity, "arc skips a layer");
  }
  return abp;
}

/// Symmetric graph of a layered program: s becomes s_out, t becomes t_in,
/// every other vertex u splits into u_in - u_out (weight 1), and an arc
/// (u, v) becomes the edge u_out - v_in.
struct SymmetrizedAbp {
  WeightedGraph graph;
  std::size_t s_out = 0;
  std::size_t t_in = 0;
  std::size_t inner = 0;  // vertices of the program other than s and t
};

inline SymmetrizedAbp symmetrize_abp(const LayeredAbp& abp) {
  const auto& g = abp.graph;
  SymmetrizedAbp out;
  out.graph = WeightedGraph(g.spec());
  auto& G = out.graph;
  std::vector<std::size_t> in(g.vertex_count()), outv(g.vertex_count());
  out.s_out = G.add_vertex("s_out");
  outv[abp.s] = out.s_out;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (v == abp.s || v == abp.t) continue;
    const std::string base = g.role(v).empty() ? "v" + std::to_string(v) : g.role(v);
    in[v] = G.add_vertex(base + "_in");
    outv[v] = G.add_vertex(base + "_out");
    G.add_edge(in[v], outv[v], Weight::constant(FieldElement::one(g.spec())));
    ++out.inner;
  }
  out.t_in = G.add_vertex("t_in");
  in[abp.t] = out.t_in;
  for (const auto& [a, w] : g.arcs()) G.add_edge(outv[a.first], in[a.second], w);
  return out;
}

/// Symmetric representation of DET_n: the symmetrized program plus a vertex c
/// with edges t_in - c (1/2) and c - s_out. Every acceptable path leaves the
/// same number inner - n of in/out pairs matched, so c - s_out carries
/// (-1)^(inner - n).
inline SymbolicMatrix det_sym_matrix(std::size_t n, const FieldSpec& spec = {}) {
  if (spec.characteristic() == 2) throw Error(ErrorCode::char_two_half, "symmetric construction needs 1/2");
  LayeredAbp abp = build_det_abp(n, spec);
  SymmetrizedAbp sym = symmetrize_abp(abp);
  auto& G = sym.graph;
  std::size_t c = G.add_vertex("c");
  G.add_edge(sym.t_in, c, Weight::constant(FieldElement::half(spec)));
  const FieldElement one = FieldElement::one(spec);
  G.add_edge(c, sym.s_out, Weight::constant((sym.inner - n) % 2 ? -one : one));
  return adjacency(G);
}

}  // namespace symdet

#pragma once

#include <deque>
#include <string>
#include <vector>

#include "symdet/formula_build.hpp"
#include "symdet/graph.hpp"
#include "symdet/ws_build.hpp"

namespace symdet {

using Path = std::vector<std::size_t>;

/// Every cycle is even iff the graph is bipartite (a loop is an odd cycle).
inline bool all_cycles_even(const WeightedGraph& g) {
  std::vector<int> colour(g.vertex_count(), -1);
  auto nb = g.neighbours();
  for (std::size_t root = 0; root < g.vertex_count(); ++root) {
    if (colour[root] >= 0) continue;
    colour[root] = 0;
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v : nb[u]) {
        if (colour[v] < 0) {
          colour[v] = 1 - colour[u];
          queue.push_back(v);
        } else if (colour[v] == colour[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

namespace detail {

template <class Next>
std::vector<Path> enumerate_paths(std::size_t n, std::size_t s, std::size_t t, Next next, std::size_t limit) {
  std::vector<Path> out;
  std::vector<bool> on(n, false);
  Path cur{s};
  on[s] = true;
  auto rec = [&](auto&& self, std::size_t u) -> void {
    if (u == t) {
      out.push_back(cur);
      if (out.size() > limit) throw Error(ErrorCode::too_large, "too many paths to enumerate");
      return;
    }
    for (std::size_t v : next(u)) {
      if (on[v]) continue;
      on[v] = true;
      cur.push_back(v);
      self(self, v);
      cur.pop_back();
      on[v] = false;
    }
  };
  rec(rec, s);
  return out;
}

}  // namespace detail

/// All simple s-t paths, as vertex sequences.
inline std::vector<Path> simple_paths(const WeightedGraph& g, std::size_t s, std::size_t t,
                                      std::size_t limit = 1000000) {
  auto nb = g.neighbours();
  return detail::enumerate_paths(g.vertex_count(), s, t, [&](std::size_t u) { return nb[u]; }, limit);
}

inline std::vector<Path> simple_paths(const WeightedDigraph& g, std::size_t s, std::size_t t,
                                      std::size_t limit = 1000000) {
  return detail::enumerate_paths(g.vertex_count(), s, t, [&](std::size_t u) { return g.successors(u); }, limit);
}

template <class G>
DensePolynomial path_weight(const G& g, const Path& p) {
  DensePolynomial w = DensePolynomial::constant(FieldElement::one(g.spec()));
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    if constexpr (std::is_same_v<G, WeightedGraph>) {
      w *= g.edge(p[k], p[k + 1]).poly();
    } else {
      w *= g.arc(p[k], p[k + 1]).poly();
    }
  }
  return w;
}

/// Cycle covers of the graph with `removed` vertices deleted, each as a
/// successor map; enumeration stops after `stop_at` covers.
inline std::vector<std::vector<std::size_t>> cycle_covers(const WeightedGraph& g, const std::vector<bool>& removed,
                                                          std::size_t stop_at) {
  const std::size_t n = g.vertex_count();
  auto nb = g.neighbours();
  std::vector<std::size_t> succ(n, n);
  std::vector<bool> taken(n, false);
  std::vector<std::vector<std::size_t>> out;
  auto rec = [&](auto&& self, std::size_t u) -> void {
    if (out.size() >= stop_at) return;
    while (u < n && removed[u]) ++u;
    if (u == n) {
      out.push_back(succ);
      return;
    }
    for (std::size_t v : nb[u]) {
      if (removed[v] || taken[v]) continue;
      taken[v] = true;
      succ[u] = v;
      self(self, u + 1);
      taken[v] = false;
    }
    succ[u] = n;
  };
  rec(rec, 0);
  return out;
}

/// Empty string when the graph minus `removed` is empty or has exactly one
/// cycle cover, a perfect matching whose weight (product of squared edge
/// weights) is 1; otherwise the reason.
inline std::string unique_matching_cover(const WeightedGraph& g, const std::vector<bool>& removed) {
  auto covers = cycle_covers(g, removed, 2);
  if (covers.empty()) return "no cycle cover";
  if (covers.size() > 1) return "several cycle covers";
  const auto& succ = covers[0];
  FieldElement w = FieldElement::one(g.spec());
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    if (removed[u]) continue;
    std::size_t v = succ[u];
    if (v == u || succ[v] != u) return "cover is not a perfect matching";
    if (u < v) {
      const Weight& e = g.edge(u, v);
      if (!e.is_constant()) return "matching edge carries a variable";
      w *= e.coef * e.coef;
    }
  }
  if (!w.is_one()) return "matching weight is " + w.to_string();
  return {};
}

inline std::vector<bool> vertex_mask(std::size_t n, const std::vector<std::size_t>& vs) {
  std::vector<bool> m(n, false);
  for (auto v : vs) m[v] = true;
  return m;
}

/// Checks the non-symmetric path-sum identity c0 * sum (-1)^|P| w(P) = target.
inline std::vector<std::string> audit_path_sum(const PathSumCertificate& cert, const DensePolynomial& target) {
  std::vector<std::string> problems;
  DensePolynomial sum(cert.graph.spec());
  for (const auto& p : simple_paths(cert.graph, cert.s, cert.t)) {
    DensePolynomial w = path_weight(cert.graph, p);
    sum += p.size() % 2 ? -w : w;
  }
  if (!(sum * cert.c0 == target)) problems.push_back("path sum is " + (sum * cert.c0).to_string());
  return problems;
}

/// Checks the three conditions of a symmetric formula graph: parity, unique
/// weight-1 matchings of G\{s,t} and of G\P, and the signed path sum.
inline std::vector<std::string> audit_sym_graph(const SymPathSumCertificate& cert, const DensePolynomial& target) {
  std::vector<std::string> problems;
  const auto& g = cert.graph;
  const std::size_t n = g.vertex_count();
  if (n % 2) problems.push_back("odd vertex count");
  if (!all_cycles_even(g)) problems.push_back("odd cycle");
  if (n > 2) {
    std::string why = unique_matching_cover(g, vertex_mask(n, {cert.s, cert.t}));
    if (!why.empty()) problems.push_back("G minus s,t: " + why);
  }
  DensePolynomial sum(g.spec());
  for (const auto& p : simple_paths(g, cert.s, cert.t)) {
    if (p.size() % 2) {
      problems.push_back("odd s-t path");
      continue;
    }
    std::string why = p.size() == n ? std::string() : unique_matching_cover(g, vertex_mask(n, p));
    if (!why.empty()) problems.push_back("G minus a path: " + why);
    DensePolynomial w = path_weight(g, p);
    sum += (p.size() / 2 + 1) % 2 ? -w : w;
  }
  if (!(sum * cert.c0 == target)) problems.push_back("path sum is " + (sum * cert.c0).to_string());
  return problems;
}

/// Checks a weakly-skew certificate: |G| odd, all cycles even, odd s-t_alpha
/// paths, unique weight-1 matchings off every acceptable path and off s, and
/// c_alpha * sum over acceptable paths of (-1)^((|P|-1)/2) w(P) = f_alpha.
inline std::vector<std::string> audit_ws_certificate(const WsCertificate& cert) {
  std::vector<std::string> problems;
  const auto& g = cert.graph;
  const std::size_t n = g.vertex_count();
  if (n % 2 == 0) problems.push_back("even vertex count");
  if (!all_cycles_even(g)) problems.push_back("odd cycle");
  if (n > 1) {
    std::string why = unique_matching_cover(g, vertex_mask(n, {cert.s}));
    if (!why.empty()) problems.push_back("G minus s: " + why);
  }
  auto f = gate_polynomials(cert.circuit);
  for (const auto& [alpha, term] : cert.reusable) {
    DensePolynomial sum(g.spec());
    for (const auto& p : simple_paths(g, cert.s, term.vertex)) {
      if (p.size() % 2 == 0) {
        problems.push_back("even path to gate " + std::to_string(alpha));
        continue;
      }
      auto mask = vertex_mask(n, p);
      if (p.size() < n && cycle_covers(g, mask, 1).empty()) continue;
      std::string why = p.size() == n ? std::string() : unique_matching_cover(g, mask);
      if (!why.empty()) problems.push_back("gate " + std::to_string(alpha) + ", G minus a path: " + why);
      DensePolynomial w = path_weight(g, p);
      sum += ((p.size() - 1) / 2) % 2 ? -w : w;
    }
    if (!(sum * term.scale == f[alpha])) {
      problems.push_back("gate " + std::to_string(alpha) + " path sum is " + (sum * term.scale).to_string());
    }
  }
  return problems;
}

}  // namespace symdet

#pragma once

#include <bit>
#include <string>
#include <unordered_map>
#include <vector>

#include "symdet/oracles.hpp"
#include "symdet/ws_build.hpp"

namespace symdet {

/// Bipartite doubling of a square matrix M: vertex v becomes v^s (index v)
/// and v^t (index n+v), an arc (u, v) becomes the edge u^s - v^t, so the
/// adjacency matrix is [[0, M], [M^T, 0]].
struct BipartiteDoubling {
  SymbolicMatrix source;
  WeightedGraph graph;
  SymbolicMatrix matrix;
};

inline BipartiteDoubling double_matrix(const SymbolicMatrix& m) {
  const std::size_t n = m.dim();
  BipartiteDoubling d;
  d.source = m;
  d.graph = WeightedGraph(m.spec());
  for (std::size_t v = 0; v < n; ++v) d.graph.add_vertex("v" + std::to_string(v) + "s");
  for (std::size_t v = 0; v < n; ++v) d.graph.add_vertex("v" + std::to_string(v) + "t");
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) d.graph.add_edge(u, n + v, m.at(u, v));
  }
  d.matrix = adjacency(d.graph);
  return d;
}

/// Symmetric matrix of dimension at most 2m+2 over a field of characteristic
/// 2 whose determinant is the square of the circuit's polynomial.
inline SymbolicMatrix square_matrix_char2(const Circuit& c, const FieldSpec& spec = FieldSpec::gf2_16()) {
  if (spec.characteristic() != 2) throw Error(ErrorCode::unsupported_field, "squaring construction needs characteristic 2");
  SymbolicMatrix m = ws_nonsym_matrix(c, SizeMode::fat).in(spec);
  return double_matrix(m).matrix;
}

namespace detail {

// Rows are taken in order; each is left out or sent to an unused column.
// Partial sums are merged by the set of used columns.
template <class T, class Entry>
T partial_permanent_dp(std::size_t n, T one, Entry entry) {
  std::unordered_map<std::uint64_t, T> states{{0, one}};
  for (std::size_t i = 0; i < n; ++i) {
    std::unordered_map<std::uint64_t, T> next;
    for (const auto& [mask, acc] : states) {
      auto stay = next.try_emplace(mask, acc);
      if (!stay.second) stay.first->second += acc;
      for (std::size_t j = 0; j < n; ++j) {
        if (mask >> j & 1) continue;
        T term = entry(i, j, acc);
        auto it = next.try_emplace(mask | (std::uint64_t{1} << j), term);
        if (!it.second) it.first->second += term;
      }
    }
    states = std::move(next);
  }
  T total = one - one;
  for (const auto& [mask, acc] : states) total += acc;
  return total;
}

}  // namespace detail

/// per*(B): sum over injective partial maps pi of prod B[i][pi(i)], the empty
/// map contributing 1.
inline DensePolynomial partial_permanent(const SymbolicMatrix& b) {
  if (b.dim() > 8) throw Error(ErrorCode::too_large, "symbolic partial permanent limited to 8 rows");
  const auto vars = b.variables();
  DensePolynomial one = DensePolynomial::constant(FieldElement::one(b.spec())).over(vars);
  return detail::partial_permanent_dp(b.dim(), one,
                                      [&](std::size_t i, std::size_t j, const DensePolynomial& acc) {
                                        return acc * b.at(i, j).poly().over(vars);
                                      })
      .trimmed();
}

inline FieldElement partial_permanent(const ValueMatrix& b, const FieldSpec& spec) {
  if (b.size() > 20) throw Error(ErrorCode::too_large, "partial permanent limited to 20 rows");
  return detail::partial_permanent_dp(b.size(), FieldElement::one(spec),
                                      [&](std::size_t i, std::size_t j, const FieldElement& acc) {
                                        return acc * embed(b[i][j], spec);
                                      });
}

/// A + I for A = [[0, B], [B^T, 0]].
inline SymbolicMatrix doubled_plus_identity(const SymbolicMatrix& b) {
  SymbolicMatrix a = double_matrix(b).matrix;
  for (std::size_t k = 0; k < a.dim(); ++k) a.set(k, k, Weight::constant(FieldElement::one(b.spec())));
  return a;
}

struct PartialPermVerdict {
  bool holds = true;
  bool exact = false;
  std::size_t trials = 0;
  std::string lhs;  // det(A + I), at the failing point when random
  std::string rhs;  // per*(B)^2
  Assignment witness;
};

/// Checks det(A + I_2n) = per*(B)^2 for B over a field of characteristic 2:
/// symbolically when n <= 4, otherwise at `trials` random points.
inline PartialPermVerdict partial_perm_identity(const SymbolicMatrix& b, Rng& rng, std::size_t trials = 20) {
  if (b.spec().characteristic() != 2) throw Error(ErrorCode::unsupported_field, "partial permanent identity needs characteristic 2");
  PartialPermVerdict v;
  SymbolicMatrix a = doubled_plus_identity(b);
  if (b.dim() <= 4) {
    DensePolynomial lhs = symbolic_det(a);
    DensePolynomial p = partial_permanent(b);
    DensePolynomial rhs = p * p;
    v.exact = true;
    v.holds = lhs == rhs;
    v.lhs = lhs.to_string();
    v.rhs = rhs.to_string();
    return v;
  }
  const auto vars = b.variables();
  for (std::size_t k = 0; k < trials; ++k) {
    Assignment point;
    for (const auto& x : vars) point[x] = sample_random(b.spec(), rng);
    FieldElement lhs = det_eval(a, point, b.spec());
    FieldElement p = partial_permanent(b.evaluate(point, b.spec()), b.spec());
    ++v.trials;
    v.lhs = lhs.to_string();
    v.rhs = (p * p).to_string();
    if (!(lhs == p * p)) {
      v.holds = false;
      v.witness = point;
      return v;
    }
  }
  return v;
}

/// Sum of per(M)^2 over the square submatrices M of B, the empty one included.
inline DensePolynomial minor_permanent_square_sum(const SymbolicMatrix& b) {
  const std::size_t n = b.dim();
  if (n > 6) throw Error(ErrorCode::too_large, "minor enumeration limited to 6 rows");
  const auto vars = b.variables();
  DensePolynomial total = DensePolynomial::constant(FieldElement::one(b.spec())).over(vars);
  for (std::uint64_t rows = 1; rows < (std::uint64_t{1} << n); ++rows) {
    for (std::uint64_t cols = 1; cols < (std::uint64_t{1} << n); ++cols) {
      if (std::popcount(rows) != std::popcount(cols)) continue;
      const std::size_t k = static_cast<std::size_t>(std::popcount(rows));
      SymbolicMatrix m(k, b.spec());
      std::size_t r = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(rows >> i & 1)) continue;
        std::size_t s = 0;
        for (std::size_t j = 0; j < n; ++j) {
          if (cols >> j & 1) m.set(r, s++, b.at(i, j));
        }
        ++r;
      }
      DensePolynomial p = ryser_permanent(m).over(vars);
      total += p * p;
    }
  }
  return total.trimmed();
}

}  // namespace symdet

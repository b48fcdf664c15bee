#pragma once

#include <bit>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "symdet/graph.hpp"
#include "symdet/poly.hpp"

namespace symdet {

using ValueMatrix = std::vector<std::vector<FieldElement>>;

namespace detail {

// p * w, where p is indexed over `vars` and w's variable (if any) sits at `var_index`.
inline void add_times_weight(DensePolynomial& acc, const DensePolynomial& p, long var_index, const FieldElement& coef,
                             bool negate) {
  FieldElement k = negate ? -coef : coef;
  for (const auto& [m, c] : p.terms()) {
    if (var_index < 0) {
      acc.add_term(m, c * k);
    } else {
      Monomial n = m;
      ++n[static_cast<std::size_t>(var_index)];
      acc.add_term(n, c * k);
    }
  }
}

}  // namespace detail

/// Exact determinant as a polynomial. Rows are expanded one at a time while
/// partial sums are merged by the set of columns already used, so sparse
/// matrices well beyond the brute-force range stay cheap. Throws TooLarge past
/// 40 rows or `max_states` live column sets.
inline DensePolynomial symbolic_det(const SymbolicMatrix& a, std::size_t max_states = 400000) {
  const std::size_t n = a.dim();
  if (n > 40) throw Error(ErrorCode::too_large, "symbolic determinant limited to 40 rows");
  const auto vars = a.variables();
  std::vector<std::vector<std::pair<std::size_t, long>>> row_entries(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Weight& w = a.at(i, j);
      if (w.is_zero()) continue;
      long idx = -1;
      if (!w.var.empty()) idx = std::find(vars.begin(), vars.end(), w.var) - vars.begin();
      row_entries[i].emplace_back(j, idx);
    }
  }
  DensePolynomial one = DensePolynomial::constant(FieldElement::one(a.spec())).over(vars);
  std::unordered_map<std::uint64_t, DensePolynomial> states{{0, one}};
  for (std::size_t i = 0; i < n; ++i) {
    std::unordered_map<std::uint64_t, DensePolynomial> next;
    for (const auto& [mask, p] : states) {
      for (const auto& [j, idx] : row_entries[i]) {
        std::uint64_t bit = std::uint64_t{1} << j;
        if (mask & bit) continue;
        // Inversions added: earlier rows that took a larger column.
        bool negate = std::popcount(mask >> (j + 1)) % 2 == 1;
        auto it = next.try_emplace(mask | bit, DensePolynomial(a.spec()).over(vars)).first;
        detail::add_times_weight(it->second, p, idx, a.at(i, j).coef, negate);
      }
    }
    for (auto it = next.begin(); it != next.end();) {
      it = it->second.is_zero() ? next.erase(it) : std::next(it);
    }
    if (next.size() > max_states) throw Error(ErrorCode::too_large, "symbolic determinant state space too large");
    states = std::move(next);
  }
  if (states.empty()) return DensePolynomial(a.spec());
  return states.begin()->second.trimmed();
}

/// Determinant of a matrix of field values by elimination; over Q the
/// elimination is fraction-free (Bareiss) on cleared integer rows.
inline FieldElement det_value(ValueMatrix m, const FieldSpec& spec) {
  const std::size_t n = m.size();
  if (n == 0) return FieldElement::one(spec);
  if (spec.kind() == FieldKind::rational) {
    BigInt scale = 1;
    std::vector<std::vector<BigInt>> z(n, std::vector<BigInt>(n));
    for (std::size_t i = 0; i < n; ++i) {
      BigInt l = 1;
      for (const auto& e : m[i]) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(e.rational()));
      scale *= l;
      for (std::size_t j = 0; j < n; ++j) {
        const Rational& q = m[i][j].rational();
        z[i][j] = boost::multiprecision::numerator(q) * (l / boost::multiprecision::denominator(q));
      }
    }
    BigInt prev = 1;
    bool negative = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (z[k][k] == 0) {
        std::size_t p = k + 1;
        while (p < n && z[p][k] == 0) ++p;
        if (p == n) return FieldElement::zero(spec);
        std::swap(z[k], z[p]);
        negative = !negative;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j < n; ++j) z[i][j] = (z[i][j] * z[k][k] - z[i][k] * z[k][j]) / prev;
      }
      prev = z[k][k];
    }
    Rational d(z[n - 1][n - 1], scale);
    return FieldElement::from_rational(spec, negative ? Rational(-d) : d);
  }

  std::vector<std::vector<std::uint64_t>> r(n, std::vector<std::uint64_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) r[i][j] = embed(m[i][j], spec).raw();
  }
  const bool binary = spec.kind() == FieldKind::binary;
  const std::uint64_t p = spec.modulus();
  auto mul = [&](std::uint64_t x, std::uint64_t y) {
    return binary ? detail::gf2_mulmod(x, y, p, spec.degree()) : detail::mulmod(x, y, p);
  };
  auto sub = [&](std::uint64_t x, std::uint64_t y) { return binary ? x ^ y : (x >= y ? x - y : x + p - y); };
  FieldElement det = FieldElement::one(spec);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && r[piv][k] == 0) ++piv;
    if (piv == n) return FieldElement::zero(spec);
    if (piv != k) {
      std::swap(r[piv], r[k]);
      det = -det;
    }
    FieldElement pivot = FieldElement::from_raw(spec, r[k][k]);
    det *= pivot;
    std::uint64_t inv = pivot.inverse().raw();
    for (std::size_t i = k + 1; i < n; ++i) {
      if (r[i][k] == 0) continue;
      std::uint64_t f = mul(r[i][k], inv);
      for (std::size_t j = k; j < n; ++j) r[i][j] = sub(r[i][j], mul(f, r[k][j]));
    }
  }
  return det;
}

inline FieldElement det_eval(const SymbolicMatrix& a, const Assignment& point, const FieldSpec& spec) {
  return det_value(a.evaluate(point, spec), spec);
}

/// Ryser's inclusion-exclusion formula over field values.
inline FieldElement ryser_permanent(const ValueMatrix& m, const FieldSpec& spec) {
  const std::size_t n = m.size();
  if (n > 20) throw Error(ErrorCode::too_large, "permanent limited to 20 rows");
  FieldElement total = FieldElement::zero(spec);
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
    FieldElement prod = FieldElement::one(spec);
    for (std::size_t i = 0; i < n && !prod.is_zero(); ++i) {
      FieldElement row = FieldElement::zero(spec);
      for (std::size_t j = 0; j < n; ++j) {
        if (s >> j & 1) row += embed(m[i][j], spec);
      }
      prod *= row;
    }
    total += ((n - std::popcount(s)) % 2) ? -prod : prod;
  }
  return n == 0 ? FieldElement::one(spec) : total;
}

/// Ryser's formula over polynomial entries.
inline DensePolynomial ryser_permanent(const SymbolicMatrix& a) {
  const std::size_t n = a.dim();
  if (n > 12) throw Error(ErrorCode::too_large, "symbolic permanent limited to 12 rows");
  const auto vars = a.variables();
  DensePolynomial total = DensePolynomial(a.spec()).over(vars);
  if (n == 0) return DensePolynomial::constant(FieldElement::one(a.spec()));
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
    DensePolynomial prod = DensePolynomial::constant(FieldElement::one(a.spec())).over(vars);
    for (std::size_t i = 0; i < n && !prod.is_zero(); ++i) {
      DensePolynomial row = DensePolynomial(a.spec()).over(vars);
      for (std::size_t j = 0; j < n; ++j) {
        if (s >> j & 1) row += a.at(i, j).poly().over(vars);
      }
      prod *= row;
    }
    total += ((n - std::popcount(s)) % 2) ? -prod : prod;
  }
  return total.trimmed();
}

}  // namespace symdet

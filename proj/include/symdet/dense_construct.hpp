#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "symdet/circuit.hpp"
#include "symdet/poly.hpp"

namespace symdet {

/// Weighted formula for p from P_{N,d} = x_N * P_{N,d-1} + P_{N-1,d}, the
/// homogenizing variable x_0 being the constant 1: constants are 1-inputs
/// whose arrow carries the coefficient, a constant cofactor of x_N becomes the
/// weight of the x_N input, and zero parts are skipped.
inline Circuit poly_to_formula(const DensePolynomial& p) {
  DensePolynomial q = p.trimmed();
  if (q.is_zero()) throw Error(ErrorCode::zero_polynomial, "cannot build a formula for the zero polynomial");
  const auto& vars = q.variables();
  Circuit c(q.spec());
  for (const auto& v : vars) c.declare_variable(v);
  using Terms = std::vector<std::pair<Monomial, FieldElement>>;
  auto is_constant = [](const Terms& t) {
    for (const auto& [m, k] : t) {
      for (auto e : m) {
        if (e) return false;
      }
    }
    return true;
  };
  auto build = [&](auto&& self, const Terms& terms, std::size_t n) -> std::optional<Arrow> {
    if (terms.empty()) return std::nullopt;
    if (is_constant(terms)) return Arrow{c.add_constant(c.one()), terms.front().second};
    Terms with, without;
    for (const auto& [m, k] : terms) {
      if (m[n - 1] > 0) {
        Monomial r = m;
        --r[n - 1];
        with.emplace_back(std::move(r), k);
      } else {
        without.emplace_back(m, k);
      }
    }
    if (with.empty()) return self(self, without, n - 1);
    Arrow a;
    if (is_constant(with)) {
      a = Arrow{c.add_variable(vars[n - 1]), with.front().second};
    } else {
      Arrow b = *self(self, with, n);
      a = Arrow{c.add_computation(GateKind::mul, c.add_variable(vars[n - 1]), c.one(), b.from, b.weight), c.one()};
    }
    auto rest = self(self, without, n - 1);
    if (!rest) return a;
    return Arrow{c.add_computation(GateKind::add, a.from, a.weight, rest->from, rest->weight), c.one()};
  };
  Terms all(q.terms().begin(), q.terms().end());
  Arrow top = *build(build, all, vars.size());
  c.add_output(top.from, top.weight);
  return validate(c);
}

/// Skew circuit for the sum of all monomials of degree at most d in x1..xn:
/// M_{k,1} = 1 + x1 + ... + xk, then M_{k,e} = x_k * M_{k,e-1} + M_{k-1,e}
/// with M_{0,e} = 1 * M_{0,e-1}. Size 2nd - n + d - 1 with (n+1)d inputs.
inline Circuit monomial_sum_circuit(std::size_t n, std::size_t d, const FieldSpec& spec = {}) {
  if (n == 0 || d == 0) throw Error(ErrorCode::invalid_option, "monomial sum needs n, d >= 1");
  Circuit c(spec);
  auto name = [](std::size_t k) { return "x" + std::to_string(k); };
  for (std::size_t k = 1; k <= n; ++k) c.declare_variable(name(k));
  auto input = [&](std::size_t k) { return k == 0 ? c.add_constant(c.one()) : c.add_variable(name(k)); };
  std::vector<GateId> m(n + 1);
  m[0] = input(0);
  for (std::size_t k = 1; k <= n; ++k) m[k] = c.add_sum(m[k - 1], input(k));
  for (std::size_t e = 2; e <= d; ++e) {
    std::vector<GateId> next(n + 1);
    next[0] = c.add_product(input(0), m[0]);
    for (std::size_t k = 1; k <= n; ++k) next[k] = c.add_sum(c.add_product(input(k), m[k]), next[k - 1]);
    m = std::move(next);
  }
  c.add_output(m[n]);
  return validate(c);
}

inline BigInt binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct BoundsReport {
  std::size_t n = 0;
  std::size_t d = 0;
  BigInt formula;            // F(n,d) = C(n+d+1,n+1) - C(n+d-1,n+1) - 2
  BigInt symmetric;          // S(n,d) = 4 C(n+d-1,n) - 2
  BigInt quarez;             // 2 C(n+d,n), for degree 2d
  BigInt symmetric_double;   // S(n,2d), the same degree-2d comparison point
  BigInt monomial_formula;   // n C(n+d,n+1)
  BigInt linear_entries;     // 2 [C(n+d+1,n+1) - C(n+d-1,n+1) - C(n+d-1,n-1) - 1]
};

inline BoundsReport bounds_report(std::size_t n, std::size_t d) {
  if (n == 0 || d == 0) throw Error(ErrorCode::invalid_option, "bounds need n, d >= 1");
  const long N = static_cast<long>(n);
  const long D = static_cast<long>(d);
  BoundsReport r;
  r.n = n;
  r.d = d;
  r.formula = binomial(N + D + 1, N + 1) - binomial(N + D - 1, N + 1) - 2;
  r.symmetric = 4 * binomial(N + D - 1, N) - 2;
  r.quarez = 2 * binomial(N + D, N);
  r.symmetric_double = 4 * binomial(N + 2 * D - 1, N) - 2;
  r.monomial_formula = N * binomial(N + D, N + 1);
  r.linear_entries =
      2 * (binomial(N + D + 1, N + 1) - binomial(N + D - 1, N + 1) - binomial(N + D - 1, N - 1) - 1);
  return r;
}

}  // namespace symdet

#pragma once

#include <string>
#include <vector>

#include "symdet/circuit.hpp"
#include "symdet/rng.hpp"

namespace symdet {

struct RandomCircuitOptions {
  std::size_t num_vars = 3;
  double const_prob = 0.15;
  double mul_prob = 0.45;
  double weight_prob = 0.0;
  /// Labels for constant inputs; weights are drawn from the same list.
  std::vector<FieldElement> palette = {
      FieldElement::from_int({}, 1), FieldElement::from_int({}, -1), FieldElement::half({}),
      FieldElement::from_int({}, 2), FieldElement::from_int({}, 3)};
};

namespace detail {

class CircuitGrower {
 public:
  CircuitGrower(const RandomCircuitOptions& opt, Rng& rng) : opt_(opt), rng_(rng) {
    for (std::size_t v = 1; v <= opt.num_vars; ++v) c_.declare_variable("x" + std::to_string(v));
  }

  Circuit& circuit() { return c_; }

  GateId leaf() {
    if (opt_.num_vars == 0 || (!opt_.palette.empty() && rng_.chance(opt_.const_prob))) {
      return c_.add_constant(pick(opt_.palette));
    }
    return c_.add_variable("x" + std::to_string(1 + rng_.below(opt_.num_vars)));
  }

  FieldElement weight() {
    if (opt_.palette.empty() || !rng_.chance(opt_.weight_prob)) return c_.one();
    return pick(opt_.palette);
  }

  GateKind kind() { return rng_.chance(opt_.mul_prob) ? GateKind::mul : GateKind::add; }

  GateId tree(std::size_t ops) {
    if (ops == 0) return leaf();
    std::size_t left_ops = rng_.below(ops);
    GateKind k = kind();
    GateId a = tree(left_ops);
    GateId b = tree(ops - 1 - left_ops);
    return c_.add_computation(k, a, weight(), b, weight());
  }

  // Builds at most `budget` gates with a private pool of reusable gates and
  // returns the last one; every gate built feeds it. Multiplications take a
  // freshly grown closed sub-circuit as their left argument.
  GateId grow(std::size_t budget) {
    std::vector<GateId> pool, dangling;
    GateId last = 0;
    std::size_t made = 0;
    auto take = [&](bool reuse_ok) {
      if (dangling.empty() || (reuse_ok && rng_.chance(0.3))) return pool[rng_.below(pool.size())];
      std::size_t k = rng_.below(dangling.size());
      GateId g = dangling[k];
      dangling.erase(dangling.begin() + static_cast<std::ptrdiff_t>(k));
      return g;
    };
    while (made < budget) {
      const std::size_t remaining = budget - made;
      const std::size_t open = dangling.size();
      if (open == 1 && remaining == 1) break;
      std::size_t before = c_.size();
      GateId g;
      // Every action keeps enough budget to fold the dangling gates together.
      bool can_input = remaining >= open + 1;
      bool can_mul = !pool.empty() && remaining >= open + 2;
      bool must_merge = open >= 2 && !can_input;
      if (pool.empty() || (!must_merge && can_input && rng_.chance(pool.size() < 2 ? 0.6 : 0.3))) {
        g = leaf();
      } else if (!must_merge && can_mul && rng_.chance(opt_.mul_prob)) {
        GateId gamma = take(true);
        std::size_t slack = remaining - std::max<std::size_t>(dangling.size(), 1) - 1;
        GateId beta = grow(1 + rng_.below(std::max<std::size_t>(slack, 1)));
        g = c_.add_computation(GateKind::mul, beta, weight(), gamma, weight());
      } else {
        GateId a = take(!must_merge);
        GateId b = take(!must_merge);
        g = c_.add_computation(GateKind::add, a, weight(), b, weight());
      }
      made += c_.size() - before;
      pool.push_back(g);
      dangling.push_back(g);
      last = g;
    }
    return last;
  }

 private:
  const FieldElement& pick(const std::vector<FieldElement>& v) { return v[rng_.below(v.size())]; }

  const RandomCircuitOptions& opt_;
  Rng& rng_;
  Circuit c_;
};

}  // namespace detail

/// Random formula with exactly `ops` computation gates.
inline Circuit random_formula(std::size_t ops, const RandomCircuitOptions& opt, Rng& rng) {
  detail::CircuitGrower g(opt, rng);
  GateId root = g.tree(ops);
  g.circuit().add_output(root);
  return validate(g.circuit());
}

/// Random single-output weakly-skew circuit with at most `max_fat` gates.
inline Circuit random_weakly_skew(std::size_t max_fat, const RandomCircuitOptions& opt, Rng& rng) {
  detail::CircuitGrower g(opt, rng);
  GateId root = g.grow(1 + rng.below(max_fat));
  g.circuit().add_output(root);
  return prune_unreachable(g.circuit());
}

}  // namespace symdet

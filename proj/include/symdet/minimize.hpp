#pragma once

#include <string>
#include <vector>

#include "symdet/circuit.hpp"

namespace symdet {


/// Weight-pushing normalization. Applies, each to fixpoint and in topological
/// order: (1) constant inputs become fresh 1-inputs, one per outgoing arrow,
/// with the label folded into the arrow weight; (2) computation gates with two
/// constant arguments become fresh weighted 1-inputs; (3) a multiplication
/// with a constant argument and positive out-degree is bypassed, its arrows
/// redirected to the other argument; (4) an output multiplication with a
/// constant argument hands the output to its other argument. The scalar of
/// rule 4 is pushed into the new output's incoming arrows when that gate has no
/// other use, and otherwise kept as the output weight.
inline Circuit minimize(const Circuit& input) {
  Circuit c = validate(input);
  const std::size_t n = c.size();
  bool has_variable = false;
  for (const auto& g : c.gates()) has_variable = has_variable || g.kind == GateKind::variable;
  if (!has_variable) throw Error(ErrorCode::constant_circuit, "circuit has no variable input");
  auto kmask = constant_mask(c);
  for (const auto& o : c.outputs()) {
    if (kmask[o.gate]) throw Error(ErrorCode::constant_circuit, "an output computes a constant");
  }

  std::vector<Gate> g = c.gates();
  std::vector<Output> outs = c.outputs();
  std::vector<bool> dead(n, false);
  const FieldElement one = c.one();
  auto fresh_one = [&] {
    Gate k;
    k.kind = GateKind::constant;
    k.value = one;
    g.push_back(k);
    dead.push_back(false);
    return g.size() - 1;
  };
  // Every arrow leaving `from` now starts at its own fresh 1-input, scaled by `value`.
  auto spread = [&](GateId from, const FieldElement& value) {
    for (std::size_t j = 0; j < n; ++j) {
      if (dead[j]) continue;
      for (std::size_t k = 0; k < g[j].args.size(); ++k) {
        if (g[j].args[k].from != from) continue;
        GateId f = fresh_one();
        g[j].args[k].from = f;
        g[j].args[k].weight *= value;
      }
    }
    dead[from] = true;
  };
  auto is_const_input = [&](GateId id) { return g[id].kind == GateKind::constant; };

  // Rule 1.
  for (std::size_t i = 0; i < n; ++i) {
    if (g[i].kind == GateKind::constant) spread(i, g[i].value);
  }

  // Rule 2.
  for (std::size_t i = 0; i < n; ++i) {
    if (dead[i] || !g[i].is_computation()) continue;
    const Arrow a = g[i].args[0], b = g[i].args[1];
    if (!is_const_input(a.from) || !is_const_input(b.from)) continue;
    FieldElement va = a.weight * g[a.from].value, vb = b.weight * g[b.from].value;
    spread(i, g[i].kind == GateKind::add ? va + vb : va * vb);
    dead[a.from] = dead[b.from] = true;
  }

  std::vector<std::size_t> uses(g.size(), 0);
  auto recount = [&] {
    uses.assign(g.size(), 0);
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (dead[j]) continue;
      for (const auto& a : g[j].args) ++uses[a.from];
    }
  };

  // Rule 3.
  recount();
  for (std::size_t i = 0; i < n; ++i) {
    if (dead[i] || g[i].kind != GateKind::mul || uses[i] == 0) continue;
    std::size_t k = is_const_input(g[i].args[0].from) ? 0 : is_const_input(g[i].args[1].from) ? 1 : 2;
    if (k == 2) continue;
    const Arrow konst = g[i].args[k], other = g[i].args[1 - k];
    FieldElement scale = konst.weight * g[konst.from].value * other.weight;
    for (std::size_t j = 0; j < n; ++j) {
      if (dead[j]) continue;
      for (auto& a : g[j].args) {
        if (a.from == i) {
          a.from = other.from;
          a.weight *= scale;
        }
      }
    }
    for (auto& o : outs) {
      if (o.gate == i) {
        o.gate = other.from;
        o.weight *= scale;
      }
    }
    dead[i] = dead[konst.from] = true;
    recount();
  }

  // Rule 4.
  for (std::size_t oi = 0; oi < outs.size(); ++oi) {
    GateId alpha = outs[oi].gate;
    if (g[alpha].kind != GateKind::mul) continue;
    std::size_t k = is_const_input(g[alpha].args[0].from) ? 0 : is_const_input(g[alpha].args[1].from) ? 1 : 2;
    if (k == 2) continue;
    const Arrow konst = g[alpha].args[k], other = g[alpha].args[1 - k];
    GateId gamma = other.from;
    outs[oi].gate = gamma;
    outs[oi].weight *= konst.weight * g[konst.from].value * other.weight;
    dead[alpha] = dead[konst.from] = true;
    recount();
    std::size_t output_uses = 0;
    for (const auto& o : outs) output_uses += o.gate == gamma;
    if (uses[gamma] == 0 && output_uses == 1 && g[gamma].is_computation()) {
      if (g[gamma].kind == GateKind::add) {
        for (auto& a : g[gamma].args) a.weight *= outs[oi].weight;
      } else {
        g[gamma].args[0].weight *= outs[oi].weight;
      }
      outs[oi].weight = one;
    }
  }

  Circuit out(c.field());
  for (const auto& v : c.variables()) out.declare_variable(v);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (dead[i]) g[i] = Gate{GateKind::constant, {}, one, {}};
    out.add_gate(g[i]);
  }
  for (const auto& o : outs) out.add_output(o.gate, o.weight);
  return prune_unreachable(out);
}

/// Violations of the minimized normal form; empty when all three hold:
/// (1) inputs are variables or the constant 1, constant inputs have out-degree
/// one and are not outputs; (2) an addition has at most one constant argument
/// and it is an input; (3) no multiplication has a constant argument.
inline std::vector<std::string> check_minimized(const Circuit& c) {
  std::vector<std::string> problems;
  auto deg = c.out_degrees();
  auto outs = c.output_mask();
  auto kmask = constant_mask(c);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Gate& g = c.gate(i);
    std::string id = "g" + std::to_string(i);
    if (g.kind == GateKind::constant) {
      if (!g.value.is_one()) problems.push_back(id + ": constant input not labelled 1");
      if (deg[i] != 1 || outs[i]) problems.push_back(id + ": constant input without out-degree 1");
    }
    if (g.kind == GateKind::add) {
      int k = 0;
      for (const auto& a : g.args) {
        if (kmask[a.from]) {
          ++k;
          if (!c.gate(a.from).is_input()) problems.push_back(id + ": constant argument is not an input");
        }
      }
      if (k > 1) problems.push_back(id + ": addition with two constant arguments");
    }
    if (g.kind == GateKind::mul) {
      for (const auto& a : g.args) {
        if (kmask[a.from]) problems.push_back(id + ": multiplication with a constant argument");
      }
    }
  }
  return problems;
}

struct SizeReport {
  std::size_t skinny = 0;
  std::size_t fat = 0;
  std::size_t var_inputs = 0;
  std::size_t green = 0;
};

inline std::size_t skinny_size(const Circuit& c) {
  std::size_t e = 0;
  for (const auto& g : c.gates()) e += g.is_computation();
  return e;
}

inline std::size_t variable_inputs(const Circuit& c) {
  std::size_t i = 0;
  for (const auto& g : c.gates()) i += g.kind == GateKind::variable;
  return i;
}

/// Size measures. The green size of a constant circuit is 0.
inline SizeReport measure(const Circuit& c) {
  SizeReport r;
  r.skinny = skinny_size(c);
  r.fat = c.size();
  r.var_inputs = variable_inputs(c);
  try {
    r.green = skinny_size(minimize(c));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::constant_circuit) throw;
    r.green = 0;
  }
  return r;
}

}  // namespace symdet

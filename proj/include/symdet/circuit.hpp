#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "symdet/error.hpp"
#include "symdet/field.hpp"
#include "symdet/poly.hpp"

namespace symdet {

enum class GateKind { variable, constant, add, mul };

using GateId = std::size_t;

struct Arrow {
  GateId from;
  FieldElement weight;
};

struct Gate {
  GateKind kind = GateKind::variable;
  std::string name;    // variable inputs
  FieldElement value;  // constant inputs
  std::vector<Arrow> args;

  bool is_input() const { return kind == GateKind::variable || kind == GateKind::constant; }
  bool is_computation() const { return !is_input(); }
};

/// An output gate together with a scalar applied to its value.
struct Output {
  GateId gate;
  FieldElement weight;
};

/// Weighted arithmetic circuit. All constants and weights live in field().
/// Gates built through the add_* helpers are numbered topologically; circuits
/// assembled from raw gates must pass through validate() before use.
class Circuit {
 public:
  explicit Circuit(FieldSpec field = {}) : field_(field) {}

  const FieldSpec& field() const { return field_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const Gate& gate(GateId id) const { return gates_.at(id); }
  const std::vector<Output>& outputs() const { return outputs_; }
  std::size_t size() const { return gates_.size(); }

  /// Declared variable names (the `vars` header), extended by every variable input.
  const std::vector<std::string>& variables() const { return variables_; }

  void declare_variable(const std::string& name) {
    if (std::find(variables_.begin(), variables_.end(), name) == variables_.end()) variables_.push_back(name);
  }

  GateId add_variable(const std::string& name) {
    declare_variable(name);
    Gate g;
    g.kind = GateKind::variable;
    g.name = name;
    g.value = one();
    return push(std::move(g));
  }

  GateId add_constant(const FieldElement& c) {
    Gate g;
    g.kind = GateKind::constant;
    g.value = embed(c, field_);
    return push(std::move(g));
  }

  GateId add_constant(std::int64_t c) { return add_constant(FieldElement::from_int(field_, c)); }

  GateId add_sum(GateId a, GateId b) { return add_computation(GateKind::add, a, one(), b, one()); }
  GateId add_product(GateId a, GateId b) { return add_computation(GateKind::mul, a, one(), b, one()); }

  GateId add_computation(GateKind kind, GateId a, const FieldElement& wa, GateId b, const FieldElement& wb) {
    Gate g;
    g.kind = kind;
    g.value = one();
    g.args = {Arrow{a, embed(wa, field_)}, Arrow{b, embed(wb, field_)}};
    return push(std::move(g));
  }

  /// Appends a gate verbatim; references may point anywhere.
  GateId add_gate(Gate g) {
    if (g.kind == GateKind::variable) declare_variable(g.name);
    if (g.kind == GateKind::constant) g.value = embed(g.value, field_);
    for (auto& a : g.args) a.weight = embed(a.weight, field_);
    gates_.push_back(std::move(g));
    return gates_.size() - 1;
  }

  void add_output(GateId id) { add_output(id, one()); }
  void add_output(GateId id, const FieldElement& weight) { outputs_.push_back(Output{id, embed(weight, field_)}); }

  Gate& mutable_gate(GateId id) { return gates_.at(id); }
  std::vector<Output>& mutable_outputs() { return outputs_; }

  FieldElement one() const { return FieldElement::one(field_); }

  /// Number of arrows leaving each gate; outputs are not counted.
  std::vector<std::size_t> out_degrees() const {
    std::vector<std::size_t> deg(gates_.size(), 0);
    for (const auto& g : gates_) {
      for (const auto& a : g.args) {
        if (a.from < deg.size()) ++deg[a.from];
      }
    }
    return deg;
  }

  std::vector<bool> output_mask() const {
    std::vector<bool> mask(gates_.size(), false);
    for (const auto& o : outputs_) mask.at(o.gate) = true;
    return mask;
  }

 private:
  GateId push(Gate g) {
    for (const auto& a : g.args) {
      if (a.from >= gates_.size()) throw Error(ErrorCode::bad_arity, "argument refers to a gate not yet built");
    }
    gates_.push_back(std::move(g));
    return gates_.size() - 1;
  }

  FieldSpec field_;
  std::vector<Gate> gates_;
  std::vector<Output> outputs_;
  std::vector<std::string> variables_;
};

/// Checks arity, acyclicity, reachability and variable declarations, and
/// returns the circuit renumbered in a stable topological order (a gate keeps
/// its relative position among the gates that are ready at the same time).
inline Circuit validate(const Circuit& c) {
  const auto& gates = c.gates();
  const std::size_t n = gates.size();
  if (c.outputs().empty()) throw Error(ErrorCode::unreachable_gate, "circuit has no output");
  {
    std::set<std::string> seen;
    for (const auto& v : c.variables()) {
      if (!seen.insert(v).second) throw Error(ErrorCode::duplicate_variable, "variable " + v + " declared twice");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& g = gates[i];
    std::size_t want = g.is_input() ? 0 : 2;
    if (g.args.size() != want) {
      throw Error(ErrorCode::bad_arity, "gate g" + std::to_string(i) + " has " + std::to_string(g.args.size()) +
                                            " arguments, expected " + std::to_string(want));
    }
    for (const auto& a : g.args) {
      if (a.from >= n) throw Error(ErrorCode::bad_arity, "gate g" + std::to_string(i) + " refers to a missing gate");
    }
  }
  for (const auto& o : c.outputs()) {
    if (o.gate >= n) throw Error(ErrorCode::bad_arity, "output refers to a missing gate");
  }

  // Kahn's algorithm, always taking the smallest ready id.
  std::vector<std::size_t> pending(n, 0);
  std::vector<std::vector<GateId>> users(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& a : gates[i].args) {
      ++pending[i];
      users[a.from].push_back(i);
    }
  }
  std::set<GateId> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (pending[i] == 0) ready.insert(i);
  }
  std::vector<GateId> order;
  while (!ready.empty()) {
    GateId g = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(g);
    for (GateId u : users[g]) {
      if (--pending[u] == 0) ready.insert(u);
    }
  }
  if (order.size() != n) throw Error(ErrorCode::cyclic_circuit, "gate graph has a cycle");

  std::vector<bool> reached(n, false);
  std::vector<GateId> stack;
  for (const auto& o : c.outputs()) stack.push_back(o.gate);
  while (!stack.empty()) {
    GateId g = stack.back();
    stack.pop_back();
    if (reached[g]) continue;
    reached[g] = true;
    for (const auto& a : gates[g].args) stack.push_back(a.from);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!reached[i]) throw Error(ErrorCode::unreachable_gate, "gate g" + std::to_string(i) + " feeds no output");
  }

  std::vector<GateId> new_id(n);
  for (std::size_t k = 0; k < n; ++k) new_id[order[k]] = k;
  Circuit out(c.field());
  for (const auto& v : c.variables()) out.declare_variable(v);
  for (GateId old : order) {
    Gate g = gates[old];
    for (auto& a : g.args) a.from = new_id[a.from];
    out.add_gate(std::move(g));
  }
  for (const auto& o : c.outputs()) out.add_output(new_id[o.gate], o.weight);
  return out;
}

/// Drops gates that feed no output and validates the result.
inline Circuit prune_unreachable(const Circuit& c) {
  std::vector<bool> keep(c.size(), false);
  std::vector<GateId> stack;
  for (const auto& o : c.outputs()) stack.push_back(o.gate);
  while (!stack.empty()) {
    GateId g = stack.back();
    stack.pop_back();
    if (keep[g]) continue;
    keep[g] = true;
    for (const auto& a : c.gate(g).args) stack.push_back(a.from);
  }
  Circuit out(c.field());
  for (const auto& v : c.variables()) out.declare_variable(v);
  std::vector<GateId> id(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (keep[i]) id[i] = out.add_gate(c.gate(i));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (auto& a : out.mutable_gate(i).args) a.from = id[a.from];
  }
  for (const auto& o : c.outputs()) out.add_output(id[o.gate], o.weight);
  return validate(out);
}

/// Sub-circuit of `root`: every gate with a path to it, including itself.
inline std::set<GateId> ancestors(const Circuit& c, GateId root) {
  std::set<GateId> seen;
  std::vector<GateId> stack{root};
  while (!stack.empty()) {
    GateId g = stack.back();
    stack.pop_back();
    if (!seen.insert(g).second) continue;
    for (const auto& a : c.gate(g).args) stack.push_back(a.from);
  }
  return seen;
}

struct ClosedSub {
  std::size_t arg_index;  // 0 = left, 1 = right
  GateId root;
  std::set<GateId> gates;
};

struct WsClassification {
  bool is_formula = false;
  bool is_weakly_skew = false;
  std::map<GateId, ClosedSub> closed;  // mul gate -> closed argument
  std::set<GateId> reusable;
};

/// True iff the sub-circuit of `beta` touches the rest only through a single
/// arrow into `alpha` and contains no output.
inline bool is_closed_argument(const Circuit& c, GateId alpha, GateId beta, const std::vector<bool>& is_output,
                               const std::vector<std::vector<GateId>>& users, std::set<GateId>* members) {
  std::set<GateId> sub = ancestors(c, beta);
  for (GateId g : sub) {
    if (is_output[g]) return false;
    for (GateId u : users[g]) {
      if (g == beta) continue;
      if (!sub.count(u)) return false;
    }
  }
  if (users[beta].size() != 1 || users[beta][0] != alpha) return false;
  if (members) *members = std::move(sub);
  return true;
}

/// Structural classification of a validated circuit. When both arguments of a
/// multiplication are closed, the left one is recorded.
inline WsClassification classify(const Circuit& c) {
  const std::size_t n = c.size();
  std::vector<std::vector<GateId>> users(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& a : c.gate(i).args) users[a.from].push_back(i);
  }
  auto is_output = c.output_mask();

  WsClassification r;
  r.is_weakly_skew = true;
  for (std::size_t i = 0; i < n; ++i) {
    const Gate& g = c.gate(i);
    if (g.kind != GateKind::mul) continue;
    bool found = false;
    for (std::size_t k = 0; k < 2 && !found; ++k) {
      std::set<GateId> members;
      if (is_closed_argument(c, i, g.args[k].from, is_output, users, &members)) {
        r.closed[i] = ClosedSub{k, g.args[k].from, std::move(members)};
        found = true;
      }
    }
    if (!found) r.is_weakly_skew = false;
  }
  std::set<GateId> in_closed;
  for (const auto& [alpha, sub] : r.closed) in_closed.insert(sub.gates.begin(), sub.gates.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_closed.count(i)) r.reusable.insert(i);
  }

  r.is_formula = c.outputs().size() == 1 && users[c.outputs()[0].gate].empty();
  for (std::size_t i = 0; i < n && r.is_formula; ++i) {
    if (i != c.outputs()[0].gate && users[i].size() != 1) r.is_formula = false;
  }
  if (r.is_formula) r.is_weakly_skew = true;
  return r;
}

/// Evaluates every gate bottom-up with caller-supplied leaves.
/// `leaf(gate)` yields the value of an input gate and `lift(weight)` turns a
/// weight into T; T needs + and *.
template <class T, class Leaf, class Lift>
std::vector<T> evaluate_gates(const Circuit& c, Leaf leaf, Lift lift) {
  std::vector<T> val;
  val.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Gate& g = c.gate(i);
    if (g.is_input()) {
      val.push_back(leaf(g));
      continue;
    }
    const auto& a = g.args[0];
    const auto& b = g.args[1];
    T va = a.weight.is_one() ? val[a.from] : lift(a.weight) * val[a.from];
    T vb = b.weight.is_one() ? val[b.from] : lift(b.weight) * val[b.from];
    val.push_back(g.kind == GateKind::add ? va + vb : va * vb);
  }
  return val;
}

/// Value of each output at `point`, computed in `spec`.
inline std::vector<FieldElement> evaluate(const Circuit& c, const Assignment& point, const FieldSpec& spec) {
  auto leaf = [&](const Gate& g) {
    if (g.kind == GateKind::constant) return embed(g.value, spec);
    auto it = point.find(g.name);
    if (it == point.end()) throw Error(ErrorCode::missing_assignment, "no value for " + g.name);
    return embed(it->second, spec);
  };
  auto lift = [&](const FieldElement& w) { return embed(w, spec); };
  auto val = evaluate_gates<FieldElement>(c, leaf, lift);
  std::vector<FieldElement> out;
  for (const auto& o : c.outputs()) out.push_back(embed(o.weight, spec) * val[o.gate]);
  return out;
}

/// Polynomial computed by every gate (arrow weights applied, output weights not).
inline std::vector<DensePolynomial> gate_polynomials(const Circuit& c) {
  const FieldSpec& f = c.field();
  auto leaf = [&](const Gate& g) {
    return g.kind == GateKind::constant ? DensePolynomial::constant(g.value) : DensePolynomial::variable(g.name, f);
  };
  auto lift = [](const FieldElement& w) { return DensePolynomial::constant(w); };
  return evaluate_gates<DensePolynomial>(c, leaf, lift);
}

/// Full expansion of each output as a polynomial over the circuit's field.
inline std::vector<DensePolynomial> expand(const Circuit& c) {
  auto val = gate_polynomials(c);
  std::vector<DensePolynomial> out;
  for (const auto& o : c.outputs()) out.push_back(val[o.gate] * o.weight);
  return out;
}

/// Structurally constant gates: no variable input in their sub-circuit.
inline std::vector<bool> constant_mask(const Circuit& c) {
  std::vector<bool> k(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Gate& g = c.gate(i);
    k[i] = g.kind == GateKind::constant ||
           (g.is_computation() && k[g.args[0].from] && k[g.args[1].from]);
  }
  return k;
}

/// Value of each structurally constant gate (zero elsewhere).
inline std::vector<FieldElement> constant_values(const Circuit& c) {
  auto mask = constant_mask(c);
  std::vector<FieldElement> v(c.size(), FieldElement::zero(c.field()));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!mask[i]) continue;
    const Gate& g = c.gate(i);
    if (g.kind == GateKind::constant) {
      v[i] = g.value;
      continue;
    }
    FieldElement a = g.args[0].weight * v[g.args[0].from];
    FieldElement b = g.args[1].weight * v[g.args[1].from];
    v[i] = g.kind == GateKind::add ? a + b : a * b;
  }
  return v;
}

/// Equivalent circuit with every weight 1 and every output weight 1: an arrow
/// of weight w != 1 becomes a multiplication by a fresh constant input w
/// (constant on the left), and likewise for output weights. Weight-1 circuits
/// are returned unchanged.
inline Circuit unweight(const Circuit& c) {
  bool weighted = false;
  for (const auto& g : c.gates()) {
    for (const auto& a : g.args) weighted = weighted || !a.weight.is_one();
  }
  for (const auto& o : c.outputs()) weighted = weighted || !o.weight.is_one();
  if (!weighted) return c;

  Circuit out(c.field());
  for (const auto& v : c.variables()) out.declare_variable(v);
  std::vector<GateId> id(c.size());
  auto scaled = [&](const Arrow& a) {
    if (a.weight.is_one()) return id[a.from];
    GateId k = out.add_constant(a.weight);
    return out.add_product(k, id[a.from]);
  };
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Gate& g = c.gate(i);
    if (g.kind == GateKind::variable) {
      id[i] = out.add_variable(g.name);
    } else if (g.kind == GateKind::constant) {
      id[i] = out.add_constant(g.value);
    } else {
      GateId a = scaled(g.args[0]);
      GateId b = scaled(g.args[1]);
      id[i] = g.kind == GateKind::add ? out.add_sum(a, b) : out.add_product(a, b);
    }
  }
  for (const auto& o : c.outputs()) out.add_output(scaled(Arrow{o.gate, o.weight}));
  return out;
}

}  // namespace symdet

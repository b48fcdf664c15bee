#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "symdet/circuit.hpp"
#include "symdet/oracles.hpp"
#include "symdet/rng.hpp"

namespace symdet {

enum class VerdictStatus { verified_exact, verified_random, failed };

inline std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::verified_exact: return "verified-exact";
    case VerdictStatus::verified_random: return "verified-random";
    case VerdictStatus::failed: return "FAILED";
  }
  return "?";
}

/// Replayable counterexample: the seed of the run, the trial index and the point.
struct Witness {
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  Assignment point;
  FieldElement lhs;
  FieldElement rhs;
};

struct Verdict {
  VerdictStatus status = VerdictStatus::verified_random;
  std::size_t trials = 0;
  FieldSpec field;
  std::size_t dimension = 0;
  std::optional<Witness> witness;

  bool ok() const { return status != VerdictStatus::failed; }
};

struct IdentityOptions {
  std::size_t trials = 20;
  FieldSpec field = FieldSpec::mersenne61();
  std::uint64_t seed = 1;
  /// Compare det(M) with the square of the circuit's value.
  bool square_lhs = false;
  /// Try the exact comparison for matrices up to 8x8 and circuits up to 8 computation gates.
  bool allow_exact = true;
};

/// Defaults per characteristic: 20 trials over Z_(2^61-1), 40 over GF(2^16).
inline IdentityOptions default_identity_options(bool char_two) {
  IdentityOptions o;
  if (char_two) {
    o.field = FieldSpec::gf2_16();
    o.trials = 40;
  }
  return o;
}

/// Schwartz-Zippel test of det(M) = f (or f^2) at independent uniform points.
/// The field must have at least 2^32 elements, or 2^16 in characteristic 2.
inline Verdict identity_test(const Circuit& c, const SymbolicMatrix& m, const IdentityOptions& opt = {}) {
  if (c.outputs().size() != 1) throw Error(ErrorCode::bad_arity, "identity test needs a single-output circuit");
  const FieldSpec& spec = opt.field;
  if (!spec.is_finite()) throw Error(ErrorCode::field_too_small, "identity test needs a finite field");
  const double need = spec.characteristic() == 2 ? 16 : 32;
  if (spec.log2_size() < need) {
    throw Error(ErrorCode::field_too_small, spec.name() + " is too small for identity testing");
  }
  Verdict v;
  v.field = spec;
  v.dimension = m.dim();

  std::vector<std::string> vars = c.variables();
  for (const auto& x : m.variables()) {
    if (std::find(vars.begin(), vars.end(), x) == vars.end()) vars.push_back(x);
  }
  Rng rng(opt.seed);
  for (std::size_t k = 0; k < opt.trials; ++k) {
    Assignment point;
    for (const auto& x : vars) point[x] = sample_random(spec, rng);
    FieldElement lhs = det_eval(m, point, spec);
    FieldElement f = evaluate(c, point, spec).at(0);
    FieldElement rhs = opt.square_lhs ? f * f : f;
    ++v.trials;
    if (!(lhs == rhs)) {
      v.status = VerdictStatus::failed;
      v.witness = Witness{opt.seed, k, point, lhs, rhs};
      return v;
    }
  }

  std::size_t gates = 0;
  for (const auto& g : c.gates()) gates += g.is_computation();
  if (opt.allow_exact && m.dim() <= 8 && gates <= 8) {
    try {
      DensePolynomial det = symbolic_det(m);
      DensePolynomial f = expand(c).at(0).reduce(m.spec());
      if (opt.square_lhs) f = f * f;
      if (det == f) v.status = VerdictStatus::verified_exact;
    } catch (const Error&) {
      // Constants without an image in the matrix field: keep the random verdict.
    }
  }
  return v;
}

inline nlohmann::json verdict_json(const Verdict& v) {
  nlohmann::json j{{"status", to_string(v.status)},
                   {"trials", v.trials},
                   {"field", v.field.name()},
                   {"dimension", v.dimension}};
  if (v.witness) {
    nlohmann::json point = nlohmann::json::object();
    for (const auto& [x, val] : v.witness->point) point[x] = val.to_string();
    j["witness"] = {{"seed", v.witness->seed},
                    {"trial", v.witness->trial},
                    {"point", point},
                    {"det", v.witness->lhs.to_string()},
                    {"circuit", v.witness->rhs.to_string()}};
  }
  return j;
}

/// Recomputes both sides at a serialized witness point.
inline bool witness_reproduces(const Circuit& c, const SymbolicMatrix& m, const Witness& w, const FieldSpec& spec,
                               bool square_lhs = false) {
  FieldElement lhs = det_eval(m, w.point, spec);
  FieldElement f = evaluate(c, w.point, spec).at(0);
  return !(lhs == (square_lhs ? f * f : f));
}

}  // namespace symdet

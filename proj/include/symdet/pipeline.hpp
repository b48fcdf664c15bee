#pragma once

#include <string>

#include "symdet/formula_build.hpp"
#include "symdet/minimize.hpp"
#include "symdet/ws_build.hpp"

namespace symdet {

enum class Method { valiant, sym, ws_sym, ws_nonsym };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::valiant: return "valiant";
    case Method::sym: return "sym";
    case Method::ws_sym: return "ws-sym";
    case Method::ws_nonsym: return "ws-nonsym";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  if (s == "valiant") return Method::valiant;
  if (s == "sym") return Method::sym;
  if (s == "ws-sym") return Method::ws_sym;
  if (s == "ws-nonsym") return Method::ws_nonsym;
  throw Error(ErrorCode::invalid_option, "unknown method " + s);
}

inline SizeMode parse_size_mode(const std::string& s) {
  if (s == "skinny") return SizeMode::skinny;
  if (s == "green") return SizeMode::green;
  if (s == "fat") return SizeMode::fat;
  throw Error(ErrorCode::invalid_option, "unknown size " + s);
}

/// Size mode used when none is requested.
inline SizeMode default_size_mode(Method m) {
  return m == Method::sym ? SizeMode::skinny : m == Method::valiant ? SizeMode::green : SizeMode::fat;
}

struct BuildResult {
  SymbolicMatrix matrix;
  Method method = Method::sym;
  SizeMode mode = SizeMode::skinny;
  SizeReport sizes;
  /// The measure the bound is stated in (e, m or e+i) and its value.
  std::string measure_name;
  std::size_t measure_value = 0;
  std::string bound_formula;
  std::size_t bound = 0;
  std::string note;
};

namespace detail {

inline void check_mode(Method method, SizeMode mode) {
  bool ok = method == Method::valiant ? mode == SizeMode::green
            : method == Method::sym   ? mode != SizeMode::fat
                                      : mode != SizeMode::skinny;
  if (!ok) throw Error(ErrorCode::invalid_option, "size " + to_string(mode) + " is not available for " + to_string(method));
}

inline bool is_constant_output(const Circuit& c) { return constant_mask(c)[c.outputs().at(0).gate]; }

}  // namespace detail

/// Builds a representation and checks its dimension against the dimension
/// bound for the method and size mode; a violation throws BoundViolation.
/// The symmetric method on a weakly-skew circuit that is not a formula uses
/// the weakly-skew construction (skinny is then read as fat).
inline BuildResult build(const Circuit& input, Method method, SizeMode mode) {
  detail::check_mode(method, mode);
  Circuit c = validate(input);
  if (method == Method::sym && !classify(c).is_formula) {
    BuildResult r = build(c, Method::ws_sym, mode == SizeMode::skinny ? SizeMode::fat : mode);
    r.note = "not a formula; built with ws-sym";
    return r;
  }
  BuildResult r;
  r.method = method;
  r.mode = mode;
  r.sizes = measure(c);
  const bool constant = detail::is_constant_output(c);
  switch (method) {
    case Method::valiant: {
      r.matrix = valiant_matrix(c);
      r.measure_name = "e";
      r.measure_value = r.sizes.green;
      bool has_sum = false;
      if (!constant) {
        for (const auto& g : minimize(c).gates()) has_sum = has_sum || g.kind == GateKind::add;
      }
      if (constant) {
        r.bound_formula = "1";
        r.bound = 1;
      } else if (has_sum) {
        r.bound_formula = "e+1";
        r.bound = r.measure_value + 1;
      } else {
        r.measure_name = "n";
        r.measure_value = r.sizes.var_inputs;
        r.bound_formula = "n+1";
        r.bound = r.measure_value + 1;
      }
      break;
    }
    case Method::sym: {
      r.matrix = sym_matrix(c, mode);
      r.measure_name = "e";
      r.measure_value = mode == SizeMode::green ? r.sizes.green : skinny_size(unweight(c));
      r.bound_formula = "2e+3";
      r.bound = 2 * r.measure_value + 3;
      if (mode == SizeMode::green && constant) r.bound = 1;
      if (mode == SizeMode::green && !constant && r.sizes.green > 0) {
        r.note = "over R or C square-root weights would give 2e+1; not built";
      }
      break;
    }
    case Method::ws_sym:
    case Method::ws_nonsym: {
      const bool sym = method == Method::ws_sym;
      r.matrix = sym ? ws_sym_matrix(c, mode) : ws_nonsym_matrix(c, mode);
      if (mode == SizeMode::green) {
        r.measure_name = "e+i";
        r.measure_value = r.sizes.green + (constant ? 0 : variable_inputs(minimize(c)));
        r.bound_formula = sym ? "2(e+i)+1" : "e+i+1";
      } else {
        r.measure_name = "m";
        r.measure_value = measure(unweight(c)).fat;
        r.bound_formula = sym ? "2m+1" : "m+1";
      }
      r.bound = sym ? 2 * r.measure_value + 1 : r.measure_value + 1;
      if (mode == SizeMode::green && constant) r.bound = 1;
      break;
    }
  }
  if (r.matrix.dim() > r.bound) {
    throw Error(ErrorCode::bound_violation, "dimension " + std::to_string(r.matrix.dim()) + " exceeds " +
                                                r.bound_formula + " = " + std::to_string(r.bound));
  }
  return r;
}

/// DOT text of the intermediate graph behind a build.
inline std::string gadget_dot(const Circuit& c, Method method, SizeMode mode) {
  detail::check_mode(method, mode);
  switch (method) {
    case Method::valiant: return export_dot(build_valiant_digraph(minimize(c)).graph);
    case Method::sym:
      if (!classify(validate(c)).is_formula) return gadget_dot(c, Method::ws_sym, mode == SizeMode::skinny ? SizeMode::fat : mode);
      return export_dot(build_sym_graph(c, mode).graph);
    case Method::ws_sym: return export_dot(build_ws_graph(c, mode).graph);
    case Method::ws_nonsym: return export_dot(build_ws_program(c, mode).graph);
  }
  return {};
}

}  // namespace symdet

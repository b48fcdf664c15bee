#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace symdet {

enum class ErrorCode {
  division_by_zero,
  char_two_half,
  mixed_fields,
  unsupported_field,
  invalid_field,
  parse_error,
  cyclic_circuit,
  bad_arity,
  unreachable_gate,
  duplicate_variable,
  unknown_variable,
  missing_assignment,
  constant_circuit,
  not_a_formula,
  not_weakly_skew,
  too_large,
  zero_polynomial,
  field_too_small,
  bound_violation,
  invalid_option,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::division_by_zero: return "DivisionByZero";
    case ErrorCode::char_two_half: return "CharTwoHalf";
    case ErrorCode::mixed_fields: return "MixedFields";
    case ErrorCode::unsupported_field: return "UnsupportedField";
    case ErrorCode::invalid_field: return "InvalidField";
    case ErrorCode::parse_error: return "SyntaxError";
    case ErrorCode::cyclic_circuit: return "CyclicCircuit";
    case ErrorCode::bad_arity: return "BadArity";
    case ErrorCode::unreachable_gate: return "UnreachableGate";
    case ErrorCode::duplicate_variable: return "DuplicateVariable";
    case ErrorCode::unknown_variable: return "UnknownVariable";
    case ErrorCode::missing_assignment: return "MissingAssignment";
    case ErrorCode::constant_circuit: return "ConstantCircuit";
    case ErrorCode::not_a_formula: return "NotAFormula";
    case ErrorCode::not_weakly_skew: return "NotWeaklySkew";
    case ErrorCode::too_large: return "TooLarge";
    case ErrorCode::zero_polynomial: return "ZeroPolynomial";
    case ErrorCode::field_too_small: return "FieldTooSmall";
    case ErrorCode::bound_violation: return "BoundViolation";
    case ErrorCode::invalid_option: return "InvalidOption";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace symdet

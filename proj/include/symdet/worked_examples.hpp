#pragma once

#include <string_view>

#include "symdet/circuit_io.hpp"
#include "symdet/graph.hpp"

namespace symdet::worked {

/// (x+y)^2 + 2yz with x+y computed once and squared; y is shared, so the
/// circuit is not weakly-skew.
inline constexpr std::string_view general_circuit_text = R"(vars x y z
g0 = input x
g1 = input y
g2 = input z
g3 = add g0 g1
g4 = mul g3 g3
g5 = mul g1 g2
g6 = add g4 g5*2
output g6
)";

/// The same polynomial as a weakly-skew circuit with two closed
/// sub-circuits: a private copy of x+y, and z+z on the right.
inline constexpr std::string_view weakly_skew_text = R"(vars x y z
g0 = input x
g1 = input y
g2 = add g0 g1
g3 = input x
g4 = input y
g5 = add g3 g4
g6 = mul g5 g2
g7 = input z
g8 = add g7 g7
g9 = mul g1 g8
g10 = add g6 g9
output g10
)";

inline constexpr std::string_view formula_text = R"(vars x y z
g0 = input x
g1 = input y
g2 = add g0 g1
g3 = input x
g4 = input y
g5 = add g3 g4
g6 = mul g2 g5
g7 = input y
g8 = input z
g9 = mul g7*2 g8
g10 = add g6 g9
output g10
)";

inline constexpr std::string_view polynomial_expression = "(x+y)*(x+y) + 2*y*z";

/// Symmetric 5x5 matrix with determinant x+y.
inline constexpr std::string_view sum_matrix_text = R"(5 symmetric
0 x 0 y -1
x 0 1 0 0
0 1 0 -1 0
y 0 -1 0 1/2
-1 0 0 1/2 0
)";

/// Non-symmetric 4x4 matrix quoted next to the 5x5 one for x+y.
inline constexpr std::string_view small_sum_matrix_text = R"(4
x 0 0 1
0 y 0 1
0 0 1 0
1 1 0 0
)";

/// Symmetric 3x3 matrix with determinant 2xyz.
inline constexpr std::string_view triple_matrix_text = R"(3 symmetric
0 x y
x 0 z
y z 0
)";

inline Circuit general_circuit() { return parse_circuit(general_circuit_text); }
inline Circuit weakly_skew_circuit() { return parse_circuit(weakly_skew_text); }
inline Circuit formula() { return parse_circuit(formula_text); }
inline SymbolicMatrix sum_matrix() { return parse_matrix(sum_matrix_text); }
inline SymbolicMatrix small_sum_matrix() { return parse_matrix(small_sum_matrix_text); }
inline SymbolicMatrix triple_matrix() { return parse_matrix(triple_matrix_text); }

}  // namespace symdet::worked

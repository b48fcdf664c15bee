#pragma once

#include "symdet/audit.hpp"
#include "symdet/char2.hpp"
#include "symdet/circuit.hpp"
#include "symdet/circuit_io.hpp"
#include "symdet/dense_construct.hpp"
#include "symdet/det_sym.hpp"
#include "symdet/error.hpp"
#include "symdet/field.hpp"
#include "symdet/formula_build.hpp"
#include "symdet/graph.hpp"
#include "symdet/minimize.hpp"
#include "symdet/oracles.hpp"
#include "symdet/pipeline.hpp"
#include "symdet/poly.hpp"
#include "symdet/random_circuit.hpp"
#include "symdet/rng.hpp"
#include "symdet/verify.hpp"
#include "symdet/worked_examples.hpp"
#include "symdet/ws_build.hpp"

#pragma once

#include "gauge/structure.hpp"
#include "gauge/syntax.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace gauge::selftest {

using Rng = std::mt19937_64;

/// Symbols of the random corpus: predicates P/1 and R/2, function f/1 and constant c.
Signature corpus_signature();

/// Points of a small rational grid in the plane with the ℓ1 metric, gauge = distance to a hidden
/// centre plus an offset, Lipschitz predicate tables, random function tables, and every symbol
/// modulus fitted to its table. Validates by construction.
GaugedStructure random_structure(Rng& rng, std::size_t points, bool with_functions = true);

/// Well-formed random formula over the given variables. Quantifier bodies that are not
/// eventually constant are capped at 1 and reduced by the gauge of the bound variable.
Formula random_formula(Rng& rng, const std::vector<std::string>& vars, unsigned depth, bool with_functions = true);

/// Syntactically bounded well-formed random formula.
Formula random_bounded_formula(Rng& rng, const std::vector<std::string>& vars, unsigned depth,
                               bool with_functions = true);

/// Every assignment of `vars` to points of m when there are at most `limit`, otherwise `limit`
/// random ones.
std::vector<Assignment> assignments(Rng& rng, const GaugedStructure& m, const std::vector<std::string>& vars,
                                    std::size_t limit);

Rational random_rational(Rng& rng, long max_numerator, long max_denominator);

/// Theory text shipped as data/measure_algebra.thy.
extern const char* const kMeasureAlgebraTheory;

}  // namespace gauge::selftest

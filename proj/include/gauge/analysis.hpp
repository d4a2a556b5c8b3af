#pragma once

#include "gauge/modulus.hpp"
#include "gauge/syntax.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gauge {

/// Syntactic boundedness of a formula.
bool is_bounded(const Formula& phi);

/// B_φ; throws DomainError when φ is not syntactically bounded.
Rational bound(const Formula& phi);

/// Syntactic eventual constancy in x. True whenever x is not free.
bool eventually_constant(const Formula& phi, std::string_view x);

/// C_{φ,x}; throws DomainError when φ is not eventually constant in x.
Rational threshold(const Formula& phi, std::string_view x);

/// φ(∞, ȳ): free variables exclude x, size at most that of φ. Throws DomainError when φ is
/// not eventually constant in x.
Formula limit_formula(const Formula& phi, std::string_view x);

struct WellFormedReport {
    bool ok = true;
    std::vector<std::string> diagnostics;
};

/// Every quantifier body is eventually constant in its bound variable.
WellFormedReport well_formed(const Formula& phi);

/// Throws IllFormed with the first diagnostic when φ is not well formed.
void require_well_formed(const Formula& phi);

/// Modulus below the identity respected by the term, as a map on the product of its variables.
Modulus synthesize_modulus(const Term& t, const Signature& sig);

/// Modulus below the identity respected by the formula. Throws IllFormed on ill-formed input.
Modulus synthesize_modulus(const Formula& phi, const Signature& sig);

struct VariableReport {
    bool eventually_constant = false;
    std::optional<Rational> threshold;  ///< present iff eventually constant
};

struct AnalysisResult {
    bool bounded = false;
    std::optional<Rational> bound;  ///< present iff bounded
    std::map<std::string, VariableReport> variables;
    Modulus modulus = Modulus::identity();
};

/// Full report over the free variables of φ plus `extra` variables. Throws IllFormed.
AnalysisResult classify(const Formula& phi, const Signature& sig, const std::vector<std::string>& extra = {});

}  // namespace gauge

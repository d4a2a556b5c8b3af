#pragma once

#include "gauge/structure.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gauge {

/// x / (x + 1) for x >= 0.
Rational theta(const Rational& x);
/// y / (1 - y) for 0 <= y < 1.
Rational theta_inv(const Rational& y);

/// M^∞: the points of M plus a marked point at infinity, gauge identically 0, and
///   d(a, b) = θ(d(a, b)) / (1 + ν(a) ∧ ν(b)),  d(a, ∞) = 1 / (1 + ν(a)),
///   P(ā) = θ(P(ā)) / (1 + ν(ā)),             P(…, ∞, …) = 0.
/// Symbol moduli are fitted to the new tables. Throws DomainError on function symbols.
GaugedStructure embound(const GaugedStructure& m, std::string infinity_name = "inf");

/// Inverse of embound. The infinity point is the marked one unless a name is given.
GaugedStructure recover(const GaugedStructure& n, const std::optional<std::string>& infinity_name = std::nullopt);

struct ComparisonReport {
    bool pass = true;
    std::size_t pairs = 0;        ///< pairs compared for d^M >= d^∞
    std::size_t containments = 0; ///< (r, r', a, b) instances checked for the ball property
    std::vector<std::string> failures;
};

/// d^M >= d^∞ on all pairs, and for sampled r < r' every point within d^∞-distance
/// θ(r' - r)/(1 + r) of {ν <= r} has ν < r'.
ComparisonReport check_comparison(const GaugedStructure& m);

/// Every predicate (d included) and the gauge passed through θ.
GaugedStructure naive_theta_transform(const GaugedStructure& m);

/// Triangle inequality over all triples, returning the first failing triple as text.
std::optional<std::string> triangle_violation(const GaugedStructure& m);

/// Fits every predicate modulus (nu excepted) to the structure's own tables.
void fit_moduli(GaugedStructure& m);

}  // namespace gauge

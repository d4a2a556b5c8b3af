#pragma once

#include "gauge/norm.hpp"
#include "gauge/structure.hpp"
#include "gauge/syntax.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gauge {

/// Quantification radius: a rational, a scheme parameter, a sum, or a rational multiple.
class RadiusExpr {
public:
    enum class Kind { Constant, Parameter, Sum, Multiple };

    static RadiusExpr constant(Rational q);
    static RadiusExpr parameter(std::string name);
    static RadiusExpr sum(RadiusExpr a, RadiusExpr b);
    static RadiusExpr multiple(Rational q, RadiusExpr a);

    Rational eval(const std::map<std::string, Rational>& params) const;
    std::string to_string() const;

private:
    Kind kind_ = Kind::Constant;
    Rational value_;
    std::string name_;
    std::vector<RadiusExpr> children_;
};

struct SchemeQuantifier {
    bool universal = true;  ///< ∀^{<r} when true, ∃^{≤r} otherwise
    std::vector<std::string> variables;
    RadiusExpr radius;
};

/// ∀^{<r}x̄ ∃^{≤s}ȳ … (φ = 0), instantiated at ε as sup_x^{r−ε,r} inf_y^{s,s+ε} … φ.
struct Scheme {
    std::string label;
    std::vector<std::pair<std::string, std::vector<Rational>>> params;
    std::vector<SchemeQuantifier> prefix;
    Formula matrix = Formula::one();
};

struct Theory {
    std::optional<Signature> declared;
    std::vector<Condition> conditions;
    std::vector<Scheme> schemes;
    std::vector<GraphAxiom> graph_axioms;
};

/// Theory file: optional (signature …), then (cond [(label L)] φ <= r | = r),
/// (scheme (label L) (params n q…)… (forall (x…) R) (exists (y…) R)… φ) and
/// (graph G arity modulus) entries, where R is a rational, a parameter, (+ R R) or (* q R).
/// Formulas are read against `sig`; a declared signature must agree with it.
Theory load_theory(std::string_view text, const Signature& sig);

/// Closed condition sup/inf windows … φ = 0. Throws DomainError when ε ≥ r for a universal
/// radius r or when a parameter is unbound.
Condition instantiate_scheme(const Scheme& s, const Rational& eps, const std::map<std::string, Rational>& params = {});

/// Closed condition for one graph axiom at ε.
Condition instantiate_graph_axiom(const GraphAxiom& a, const Rational& eps);

/// Largest dyadic with 20 fractional bits that is <= q, and smallest that is >= q.
Rational dyadic_below(const Rational& q, unsigned bits = 20);
Rational dyadic_above(const Rational& q, unsigned bits = 20);

struct DefectEntry {
    std::string label;
    std::optional<Rational> eps;
    std::map<std::string, Rational> params;
    Rational value = 0;
    Rational defect = 0;
    bool skipped = false;
    std::string note;
};

struct DefectReport {
    bool pass = true;
    std::vector<DefectEntry> entries;
};

Rational defect(const Condition& c, const Rational& value);

/// Evaluates every condition once and every scheme and graph axiom at each ε (and each
/// parameter combination). Instances whose ε is not below a universal radius are skipped.
DefectReport check_theory(const GaugedStructure& m, const Theory& t, const std::vector<Rational>& eps);

struct Caps {
    std::size_t atoms = 4;
    std::size_t points = 125;
};

/// Defaults overridden by GAUGE_LOGIC_CAP ("atoms=A,points=P").
Caps caps_from_environment();

/// Measure algebra of a finite set with atom weights: points are subsets, μ = ν, d is the
/// measure of the symmetric difference, zero/join/meet/diff are function tables.
GaugedStructure measure_algebra(const std::vector<Rational>& weights, const Caps& caps = caps_from_environment());

/// Signature {zero, join, meet, diff} with standard moduli.
Signature measure_algebra_signature();

/// Lattice points of ℚ^dim with coordinates in [−radius, radius] spaced 1/grid, the ℓ_p
/// metric, ν = norm, in graph form: G_zero, G_add, G_m_neg1, G_m_half, G_m_2, with every
/// table computed in the ambient space.
GaugedStructure sampled_normed_structure(unsigned dim, NormKind p, unsigned radius, unsigned grid,
                                         const Caps& caps = caps_from_environment());

/// Function signature {zero, add, m_neg1, m_half, m_2} whose graph form the sample uses.
Signature banach_signature();

}  // namespace gauge

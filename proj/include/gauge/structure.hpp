#pragma once

#include "gauge/modulus.hpp"
#include "gauge/syntax.hpp"

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gauge {

using Point = std::size_t;

/// Finite gauged metric structure with total rational tables. Distances are stored
/// symmetrically; d and nu are read through the same interface as other predicates.
class GaugedStructure {
public:
    explicit GaugedStructure(Signature sig, std::vector<std::string> points = {});

    const Signature& signature() const { return sig_; }
    /// Replaces the modulus declared for a predicate or function symbol; tables are unaffected.
    void set_modulus(std::string_view symbol, Modulus modulus);
    std::size_t size() const { return points_.size(); }
    const std::vector<std::string>& points() const { return points_; }
    const std::string& name(Point p) const { return points_.at(p); }
    std::optional<Point> find(std::string_view name) const;

    const Rational& distance(Point a, Point b) const;
    void set_distance(Point a, Point b, Rational q);
    const Rational& gauge(Point a) const;
    void set_gauge(Point a, Rational q);

    /// Value of a predicate (including d and nu) at a tuple of points.
    const Rational& predicate(std::string_view name, std::span<const Point> args) const;
    void set_predicate(std::string_view name, std::span<const Point> args, Rational q);
    Point function(std::string_view name, std::span<const Point> args) const;
    void set_function(std::string_view name, std::span<const Point> args, Point value);

    /// False while some table entry of a non-distinguished symbol has never been set.
    bool complete() const;
    /// First unset entry as "symbol(a, b)", if any.
    std::optional<std::string> first_missing() const;

    /// Marked point of an embounded structure.
    std::optional<Point> infinity() const { return infinity_; }
    void set_infinity(std::optional<Point> p) { infinity_ = p; }
    /// Signature of the structure an embounded structure came from.
    const Signature* source_signature() const { return source_.get(); }
    void set_source_signature(std::optional<Signature> sig);

    friend bool operator==(const GaugedStructure& a, const GaugedStructure& b);

private:
    std::size_t index(std::span<const Point> args, unsigned arity) const;

    Signature sig_;
    std::vector<std::string> points_;
    std::vector<std::vector<Rational>> distance_;
    std::vector<Rational> gauge_;
    std::map<std::string, std::vector<std::optional<Rational>>, std::less<>> predicates_;
    std::map<std::string, std::vector<std::optional<Point>>, std::less<>> functions_;
    std::optional<Point> infinity_;
    std::shared_ptr<const Signature> source_;
};

/// Structure file: (signature …), (points …), (dist a b q), (gauge a q), (pred P a… q),
/// (fun f a… b), optionally (infinity a) and (source-signature …).
GaugedStructure parse_structure(std::string_view text);
std::string write_structure(const GaugedStructure& m);

/// Tuples of M^n (max distance, max gauge) mapped through a predicate or function symbol.
class SymbolMap final : public FiniteMapView {
public:
    SymbolMap(const GaugedStructure& m, const Symbol& symbol, bool is_function);
    std::size_t size() const override { return count_; }
    Rational domain_gauge(std::size_t i) const override;
    Rational domain_distance(std::size_t i, std::size_t j) const override;
    Rational image_gauge(std::size_t i) const override;
    Rational image_distance(std::size_t i, std::size_t j) const override;
    std::vector<Point> tuple(std::size_t i) const;

private:
    const GaugedStructure& m_;
    const Symbol& symbol_;
    bool is_function_;
    std::size_t count_ = 1;
    std::vector<Rational> image_gauge_;
    std::vector<Point> image_point_;
};

struct ValidationIssue {
    std::string kind;  ///< metric, lipschitz, modulus, table
    std::string detail;
};

struct ValidationReport {
    bool pass = true;
    std::vector<ValidationIssue> issues;
};

/// Metric axioms, 1-Lipschitz gauge, totality, and every symbol against its modulus.
ValidationReport validate(const GaugedStructure& m, std::size_t max_issues = 16);

/// Variable to point. Later entries shadow earlier ones.
using Assignment = std::vector<std::pair<std::string, Point>>;

Point eval_term(const GaugedStructure& m, const Term& t, const Assignment& sigma);

/// Exact value with quantifiers ranging over M and the ideal point at infinity.
/// Throws IllFormed or DomainError (unassigned variable).
Rational eval_formula(const GaugedStructure& m, const Formula& phi, const Assignment& sigma = {});

/// Evaluator that caches limit formulas across calls. The formulas passed in must outlive it.
class Evaluator {
public:
    explicit Evaluator(const GaugedStructure& m) : m_(m) {}
    Rational operator()(const Formula& phi, Assignment& sigma);

private:
    Rational eval(const Formula& phi, Assignment& sigma);
    Point term(const Term& t, const Assignment& sigma) const;
    const Formula& limit(const Formula& quantified);

    const GaugedStructure& m_;
    // keyed by quantifier node; the node itself is held so its address stays unique
    std::map<const void*, std::pair<Formula, Formula>> limits_;
};

/// Least m admitting r ≤ ℓ/2^m < (ℓ+1)/2^m ≤ r', and the least such s = ℓ/2^m.
std::pair<unsigned, Rational> dyadic_window(const Rational& r, const Rational& r_prime);

/// φ ∸ k·2^m(ν(x) ∸ s), k = max(1, ⌈B_φ⌉), encoded so that it is syntactically bounded and
/// eventually constant in x, with syntactic bound k. An unbounded φ is first truncated at 1.
Formula build_down(const Formula& phi, const std::string& x, const Rational& r, const Rational& r_prime);
/// k ∸ (k ∸ φ)↓ with k as above.
Formula build_up(const Formula& phi, const std::string& x, const Rational& r, const Rational& r_prime);
Formula sup_window(const Formula& phi, const std::string& x, const Rational& r, const Rational& r_prime);
Formula inf_window(const Formula& phi, const std::string& x, const Rational& r, const Rational& r_prime);
/// The integer k used by build_down and build_up.
Integer window_multiplier(const Formula& phi);

/// Quantifier prefix over a quantifier-free matrix, with equal value everywhere.
Formula prenex(const Formula& phi);
/// True when φ is a (possibly empty) quantifier prefix over a quantifier-free formula.
bool is_prenex(const Formula& phi);

/// Ultraproduct over the principal ultrafilter at j, which is M_j itself.
GaugedStructure principal_ultraproduct(std::span<const GaugedStructure> ms, std::size_t j);

struct LosReport {
    bool pass = true;
    std::size_t checked = 0;  ///< formula-assignment pairs compared
    std::vector<std::string> mismatches;
};

/// Compares every formula under every assignment of its free variables in the ultraproduct
/// against the selected factor.
LosReport los_check(std::span<const GaugedStructure> ms, std::size_t j, std::span<const Formula> formulas);

/// Relational structure over graph_signature(sig) with G_f(ā, b) = d(f(ā), b).
GaugedStructure graph_transform(const GaugedStructure& m);

}  // namespace gauge

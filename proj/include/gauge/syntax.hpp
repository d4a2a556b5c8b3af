#pragma once

#include "gauge/modulus.hpp"
#include "gauge/rational.hpp"
#include "gauge/sexpr.hpp"

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gauge {

inline constexpr std::string_view kDistance = "d";
inline constexpr std::string_view kGauge = "nu";

struct Symbol {
    std::string name;
    unsigned arity = 0;
    Modulus modulus = Modulus::identity();
};

/// Single-sorted unbounded signature. The distance `d` (binary) and the gauge `nu` (unary)
/// are always present.
class Signature {
public:
    /// Signature holding only d (modulus std 2) and nu (modulus id).
    Signature();

    void add_predicate(std::string name, unsigned arity, Modulus modulus);
    void add_function(std::string name, unsigned arity, Modulus modulus);
    /// Replaces the modulus of an existing predicate (used for d and nu).
    void set_predicate_modulus(std::string_view name, Modulus modulus);
    void set_function_modulus(std::string_view name, Modulus modulus);

    const Symbol* predicate(std::string_view name) const;
    const Symbol* function(std::string_view name) const;
    bool has_symbol(std::string_view name) const { return predicate(name) || function(name); }

    const std::vector<Symbol>& predicates() const { return predicates_; }
    const std::vector<Symbol>& functions() const { return functions_; }
    bool relational() const { return functions_.empty(); }

private:
    std::vector<Symbol> predicates_;
    std::vector<Symbol> functions_;
};

/// Reads `(pred name arity modulus)` and `(fun name arity modulus)` entries.
Signature parse_signature(std::span<const SExpr> entries);
Signature parse_signature(std::string_view text);
SExpr to_sexpr(const Signature& sig);

class Term {
public:
    enum class Kind { Variable, Application };

    static Term variable(std::string name);
    static Term apply(std::string function, std::vector<Term> args);

    Kind kind() const;
    bool is_variable() const { return kind() == Kind::Variable; }
    /// Variable name or function symbol.
    const std::string& name() const;
    std::span<const Term> args() const;

    bool same_node(const Term& other) const { return node_ == other.node_; }
    friend bool operator==(const Term& a, const Term& b);

    struct Node;

private:
    explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Formula over the connectives {1, ∸, +, ·/2} with sup/inf. Subtrees may be shared;
/// algorithms treat a binary node whose children are the same object in one pass.
class Formula {
public:
    enum class Kind { Atomic, One, Half, Add, Sub, Sup, Inf };

    static Formula atomic(std::string predicate, std::vector<Term> terms);
    static Formula one();
    static Formula half(Formula child);
    static Formula add(Formula lhs, Formula rhs);
    static Formula sub(Formula lhs, Formula rhs);
    static Formula sup(std::string variable, Formula body);
    static Formula inf(std::string variable, Formula body);
    static Formula quantifier(Kind kind, std::string variable, Formula body);

    Kind kind() const;
    bool is_quantifier() const { return kind() == Kind::Sup || kind() == Kind::Inf; }
    bool is_binary() const { return kind() == Kind::Add || kind() == Kind::Sub; }

    const std::string& predicate() const;  ///< Atomic
    std::span<const Term> terms() const;   ///< Atomic
    const Formula& lhs() const;            ///< Add, Sub
    const Formula& rhs() const;            ///< Add, Sub
    const Formula& child() const;          ///< Half
    const Formula& body() const;           ///< Sup, Inf
    const std::string& variable() const;   ///< Sup, Inf

    bool same_node(const Formula& other) const { return node_ == other.node_; }
    const void* identity() const { return node_.get(); }
    friend bool operator==(const Formula& a, const Formula& b);

    struct Node;

private:
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// ν(t)
Formula gauge_of(Term t);
/// d(s, t)
Formula distance(Term s, Term t);
/// 1 ∸ 1
Formula zero_formula();
/// True for the literal shape ν(x) with x the given variable.
bool is_gauge_of_variable(const Formula& f, std::string_view variable);

enum class Relation { AtMost, Equal };

/// φ ≤ r or φ = r.
struct Condition {
    std::string label;
    Formula formula = Formula::one();
    Relation relation = Relation::AtMost;
    Rational threshold = 0;
};

/// Formula built from One, Add and Half denoting k/2^m. Shares subtrees.
Formula dyadic_const(const Integer& k, unsigned m);
/// Same for a nonnegative dyadic rational; throws DomainError otherwise.
Formula dyadic_const(const Rational& r);
/// Exponent m and numerator k with r = k/2^m and k odd (or r = 0 with m = 0).
std::pair<Integer, unsigned> dyadic_parts(const Rational& r);
bool is_dyadic(const Rational& r);

/// r ∸ (r ∸ φ), i.e. φ ∧ r.
Formula truncate_at(const Formula& phi, const Rational& r);

std::set<std::string> free_vars(const Term& t);
std::set<std::string> free_vars(const Formula& phi);
bool occurs_free(const Formula& phi, std::string_view variable);
bool has_quantifier(const Formula& phi);

/// Substitutes a term for the free occurrences of a variable. Bound variables of φ must not
/// occur in the term.
Formula substitute(const Formula& phi, std::string_view variable, const Term& term);

/// Renames bound variables so that every binder is distinct and no binder shadows a free
/// variable. Returns the input object when nothing needs to change.
Formula rename_bound(const Formula& phi);

/// Extends a signature with zero-ary function symbols; a constant of gauge g gets the modulus
/// id ∧ 1/g (id when g = 0).
Signature name_constants(const Signature& sig, const std::map<std::string, Rational>& gauges);

/// One of the four axioms tying a graph predicate G_f to a function f with modulus δ_f.
struct GraphAxiom {
    enum class Kind {
        Triangle,     ///< G(x̄,y) ≤ G(x̄,z) + d(y,z)
        Separation,   ///< d(y,z) ≤ G(x̄,y) + G(x̄,z)
        Existence,    ///< ∀^{<1/ε} x̄ ∃^{≤1/δ(ε)} y  G(x̄,y) = 0
        Continuity,   ///< ∀^{<1/ε} x̄ȳ ∀^{<1/δ(ε)+1} z  (δ(ε) ∸ d(x̄,ȳ)) ∧ (G(x̄,z) ∸ G(ȳ,z) ∸ ε) = 0
    };
    Kind kind = Kind::Triangle;
    std::string function;
    std::string graph;
    unsigned arity = 0;  ///< arity of f
    Modulus modulus = Modulus::identity();
};

struct GraphTransform {
    Signature signature;
    std::vector<GraphAxiom> axioms;
};

/// Name of the graph predicate of f.
std::string graph_name(std::string_view function);

/// Replaces every n-ary function symbol by an (n+1)-ary predicate G_f whose modulus is the one
/// synthesized for d(f(x̄), y), and lists the four axioms per function.
GraphTransform graph_signature(const Signature& sig);

std::string to_string(GraphAxiom::Kind kind);

SExpr to_sexpr(const Term& t);
SExpr to_sexpr(const Formula& phi);
std::string to_string(const Term& t);
std::string to_string(const Formula& phi);

/// Formula grammar: (P t…), (const q) with q a nonnegative dyadic, (half φ), (add φ ψ),
/// (sub φ ψ), (sup x φ), (inf x φ), (nu t), (d s t). Terms are variables or (f t…); a bare atom
/// naming a zero-ary function is that constant.
Formula parse_formula(const SExpr& e, const Signature& sig);
Formula parse_formula(std::string_view text, const Signature& sig);
Term parse_term(const SExpr& e, const Signature& sig);

}  // namespace gauge

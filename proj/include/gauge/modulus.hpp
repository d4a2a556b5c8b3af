#pragma once

#include "gauge/rational.hpp"
#include "gauge/sexpr.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gauge {

/// A uniform continuity modulus, i.e. a continuous increasing map (0,inf) -> (0,inf),
/// kept as an immutable expression tree over a fixed set of generators.
///
/// Every tree built from these generators denotes eps -> min(slope * eps, cap) for some
/// slope, cap in (0, inf] (not both infinite). That closed form is computed once at
/// construction and is what evaluation and suprema use; the tree itself is kept for
/// serialisation and structural comparison.
class Modulus {
public:
    enum class Kind { Identity, Constant, Scale, Min, Compose, Clamp, StandardArity };

    static Modulus identity();
    /// eps -> c
    static Modulus constant(Rational c);
    /// eps -> c * child(eps)
    static Modulus scale(Rational c, Modulus child);
    /// pointwise minimum; nested Min nodes are flattened
    static Modulus min(std::vector<Modulus> children);
    /// eps -> outer(inner(eps))
    static Modulus compose(Modulus outer, Modulus inner);
    /// eps -> min(c, child(eps))
    static Modulus clamp(Rational c, Modulus child);
    /// eps -> eps / n
    static Modulus standard(unsigned n);
    /// Smallest tree denoting eps -> min(slope * eps, cap).
    static Modulus from_closed_form(const ExtendedValue& slope, const ExtendedValue& cap);

    Kind kind() const;
    const Rational& coefficient() const;  ///< Constant, Scale, Clamp
    unsigned arity() const;               ///< StandardArity
    std::span<const Modulus> children() const;

    const ExtendedValue& slope() const;
    const ExtendedValue& cap() const;
    bool below_identity() const { return slope() <= ExtendedValue(1L); }

    Rational operator()(const Rational& eps) const;

    bool same_node(const Modulus& other) const { return node_ == other.node_; }
    friend bool operator==(const Modulus& a, const Modulus& b);

    struct Node;

private:
    explicit Modulus(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Exact value at eps > 0; throws DomainError otherwise.
Rational eval_modulus(const Modulus& m, const Rational& eps);

/// Value computed by walking the tree node by node. Independent of the closed form,
/// used to cross-check it.
Rational eval_by_tree(const Modulus& m, const Rational& eps);

/// Supremum over (0, inf).
ExtendedValue sup_modulus(const Modulus& m);

/// eps ∧ δ(eps)
Modulus normalize(const Modulus& m);

/// Modulus of a tuple of maps: pointwise minimum. Throws on an empty list.
Modulus pair_modulus(std::span<const Modulus> moduli);

/// Modulus for g ∘ f given moduli of f and g, both below the identity:
/// δ_f ∘ δ_g ∘ δ_f.
Modulus compose_modulus(const Modulus& inner_f, const Modulus& outer_g);

/// Modulus of sup_x / inf_x of a map f(x, y) eventually equal to g(y) once ν(x) >= C:
/// δ_g(ε) ∧ δ_f(ε ∧ 1/C). C = 0 drops the clamp.
Modulus quantifier_modulus(const Modulus& body_f, const Modulus& limit_g, const Rational& threshold);

/// Replaces a tree by the smallest tree with the same closed form.
Modulus simplify(const Modulus& m);

SExpr to_sexpr(const Modulus& m);
std::string to_string(const Modulus& m);
Modulus parse_modulus(const SExpr& e);
Modulus parse_modulus(std::string_view text);

/// A map between finite gauged spaces given by its distance and gauge tables on both sides.
/// Tuples of a Cartesian power appear as single domain elements.
class FiniteMapView {
public:
    virtual ~FiniteMapView() = default;
    virtual std::size_t size() const = 0;
    virtual Rational domain_gauge(std::size_t i) const = 0;
    virtual Rational domain_distance(std::size_t i, std::size_t j) const = 0;
    virtual Rational image_gauge(std::size_t i) const = 0;
    virtual Rational image_distance(std::size_t i, std::size_t j) const = 0;
};

/// Fully tabulated finite map.
class FiniteMap final : public FiniteMapView {
public:
    FiniteMap(std::vector<Rational> domain_gauge, std::vector<std::vector<Rational>> domain_distance,
              std::vector<Rational> image_gauge, std::vector<std::vector<Rational>> image_distance);

    /// Map into R+ gauged by (|x - y|, |x|).
    static FiniteMap real_valued(std::vector<Rational> domain_gauge,
                                 std::vector<std::vector<Rational>> domain_distance,
                                 const std::vector<Rational>& values);

    std::size_t size() const override { return domain_gauge_.size(); }
    Rational domain_gauge(std::size_t i) const override { return domain_gauge_[i]; }
    Rational domain_distance(std::size_t i, std::size_t j) const override { return domain_distance_[i][j]; }
    Rational image_gauge(std::size_t i) const override { return image_gauge_[i]; }
    Rational image_distance(std::size_t i, std::size_t j) const override { return image_distance_[i][j]; }

private:
    std::vector<Rational> domain_gauge_;
    std::vector<std::vector<Rational>> domain_distance_;
    std::vector<Rational> image_gauge_;
    std::vector<std::vector<Rational>> image_distance_;
};

enum class Clause { Distance, Gauge };

struct Violation {
    std::size_t first = 0;
    std::size_t second = 0;
    Clause clause = Clause::Distance;
    std::optional<Rational> witness;  ///< an eps at which the implication fails
};

struct CheckReport {
    bool pass = true;
    std::vector<Violation> violations;
};

/// Decides whether the map respects δ under ν, pair by pair, using the closed-form criterion.
/// Stops after `max_violations` counterexamples.
CheckReport respects_check(const FiniteMapView& map, const Modulus& delta, std::size_t max_violations = 1);

/// Checks the defining implication directly at every eps of `grid`.
CheckReport respects_check_grid(const FiniteMapView& map, const Modulus& delta, std::span<const Rational> grid,
                                std::size_t max_violations = 1);

/// A modulus min(a·ε, b) that the given map respects. Throws DomainError when two domain
/// points at distance 0 have distinct images.
Modulus fit_modulus(const FiniteMapView& map);

std::string to_string(Clause c);

}  // namespace gauge

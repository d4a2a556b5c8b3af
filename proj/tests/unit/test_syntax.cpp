#include "helpers.hpp"

#include "gauge/analysis.hpp"
#include "gauge/error.hpp"
#include "gauge/syntax.hpp"

#include <doctest.h>

#include <functional>

using namespace gauge;
using test::q;

namespace {

Formula nu(const char* x) { return gauge_of(Term::variable(x)); }
Formula d(const char* x, const char* y) { return distance(Term::variable(x), Term::variable(y)); }

std::set<std::string> bound_vars(const Formula& phi) {
    std::set<std::string> out;
    std::function<void(const Formula&)> walk = [&](const Formula& f) {
        switch (f.kind()) {
            case Formula::Kind::Sup:
            case Formula::Kind::Inf:
                out.insert(f.variable());
                walk(f.body());
                break;
            case Formula::Kind::Half:
                walk(f.child());
                break;
            case Formula::Kind::Add:
            case Formula::Kind::Sub:
                walk(f.lhs());
                walk(f.rhs());
                break;
            default:
                break;
        }
    };
    walk(phi);
    return out;
}

std::size_t binder_count(const Formula& phi) {
    switch (phi.kind()) {
        case Formula::Kind::Sup:
        case Formula::Kind::Inf:
            return 1 + binder_count(phi.body());
        case Formula::Kind::Half:
            return binder_count(phi.child());
        case Formula::Kind::Add:
        case Formula::Kind::Sub:
            return binder_count(phi.lhs()) + binder_count(phi.rhs());
        default:
            return 0;
    }
}

}  // namespace

TEST_CASE("parse_formula") {
    Signature sig;
    CHECK(parse_formula("(sub (const 1) (nu x))", sig) == Formula::sub(Formula::one(), nu("x")));
    Formula sentence = parse_formula("(sup x (sub (const 1) (nu x)))", sig);
    CHECK(sentence == Formula::sup("x", Formula::sub(Formula::one(), nu("x"))));
    CHECK(free_vars(sentence).empty());
    CHECK_THROWS_AS(parse_formula("(d x y z)", sig), ArityError);
    CHECK_THROWS_AS(parse_formula("(Q x)", sig), UnknownSymbol);
    CHECK_THROWS_AS(parse_formula("(add (nu x)", sig), ParseError);
    CHECK_THROWS_AS(parse_formula("(const 1/3)", sig), Error);
}

TEST_CASE("formula text round trip") {
    Signature sig;
    sig.add_predicate("P", 1, Modulus::identity());
    sig.add_function("f", 1, Modulus::identity());
    sig.add_function("c", 0, Modulus::identity());
    for (const char* text : {"(sup x (sub (P (f x)) (nu x)))", "(half (add (d c y) (const 3/4)))",
                             "(inf y (sub (const 1) (sub (sub (const 1) (d x y)) (nu y))))"}) {
        Formula phi = parse_formula(text, sig);
        CHECK(parse_formula(to_string(phi), sig) == phi);
    }
}

TEST_CASE("dyadic_const") {
    GaugedStructure m = test::line({0, 2});
    CHECK(eval_formula(m, dyadic_const(0, 0)) == 0);
    CHECK(dyadic_const(1, 0) == Formula::one());
    CHECK(eval_formula(m, dyadic_const(3, 1)) == q("3/2"));
    for (int k = 0; k < 40; ++k)
        for (unsigned e = 0; e < 5; ++e) {
            Formula c = dyadic_const(k, e);
            Rational expected(k, 1 << e);
            expected.canonicalize();
            CHECK(eval_formula(m, c) == expected);
            CHECK(is_bounded(c));
            // zero is 1 ∸ 1, whose syntactic bound is 1
            CHECK(bound(c) == (k == 0 ? Rational(1) : expected));
        }
}

TEST_CASE("truncate_at") {
    GaugedStructure m = test::line({0, 1, 3});
    Formula t = truncate_at(nu("x"), 1);
    CHECK(is_bounded(t));
    CHECK(bound(t) == 1);
    for (Point a = 0; a < m.size(); ++a) CHECK(eval_formula(m, t, {{"x", a}}) == min(m.gauge(a), Rational(1)));
    CHECK(eval_formula(m, truncate_at(Formula::one(), 2)) == 1);
    CHECK(eval_formula(m, truncate_at(Formula::one(), q("1/2"))) == q("1/2"));
    CHECK(bound(truncate_at(d("x", "y"), q("3/4"))) == q("3/4"));
}

TEST_CASE("free_vars") {
    CHECK(free_vars(Formula::one()).empty());
    CHECK(free_vars(Formula::sup("x", Formula::sub(Formula::one(), nu("x")))).empty());
    Formula phi = Formula::add(nu("x"), distance(Term::variable("y"), Term::variable("z")));
    CHECK(free_vars(phi) == std::set<std::string>{"x", "y", "z"});
}

TEST_CASE("rename_bound") {
    Formula body = Formula::sub(truncate_at(d("x", "y"), 1), nu("x"));
    SUBCASE("binder clashing with a free variable is renamed") {
        Formula phi = Formula::add(Formula::sup("y", Formula::sub(truncate_at(d("y", "y"), 1), nu("y"))), nu("y"));
        Formula r = rename_bound(phi);
        CHECK(free_vars(r) == std::set<std::string>{"y"});
        CHECK_FALSE(bound_vars(r).count("y"));
        GaugedStructure m = test::line({0, 1, 3});
        for (Point a = 0; a < m.size(); ++a) CHECK(eval_formula(m, r, {{"y", a}}) == eval_formula(m, phi, {{"y", a}}));
    }
    SUBCASE("repeated binders become distinct") {
        Formula phi = Formula::add(Formula::sup("x", body), Formula::inf("x", body));
        Formula r = rename_bound(phi);
        CHECK(bound_vars(r).size() == binder_count(r));
        CHECK_FALSE(bound_vars(r).count("y"));
        GaugedStructure m = test::line({0, 1, 3});
        for (Point a = 0; a < m.size(); ++a) CHECK(eval_formula(m, r, {{"y", a}}) == eval_formula(m, phi, {{"y", a}}));
    }
    SUBCASE("already distinct input is returned as is") {
        Formula phi = Formula::add(Formula::sup("x", body), nu("y"));
        CHECK(rename_bound(phi).same_node(phi));
    }
}

TEST_CASE("name_constants") {
    Signature sig = name_constants({}, {{"a", 0}, {"b", 2}, {"c", q("1/2")}});
    CHECK(sig.function("a")->modulus(q("7")) == 7);
    for (const char* e : {"1/8", "1/2", "1", "3", "10"}) CHECK(sig.function("b")->modulus(q(e)) == min(q(e), q("1/2")));
    CHECK(sup_modulus(sig.function("c")->modulus) == ExtendedValue(2L));
    CHECK_THROWS(name_constants(sig, {{"a", 1}}));

    // the constant map onto a point of gauge g respects id ∧ 1/g
    GaugedStructure m = test::line({0, 1, 3});
    for (Point target = 0; target < m.size(); ++target) {
        Signature named = name_constants({}, {{"k", m.gauge(target)}});
        std::vector<Rational> one{0};
        std::vector<std::vector<Rational>> zero{{0}};
        FiniteMap constant(one, zero, std::vector<Rational>{m.gauge(target)}, zero);
        CHECK(respects_check(constant, named.function("k")->modulus).pass);
    }
}

TEST_CASE("graph_signature") {
    Signature rel;
    rel.add_predicate("P", 1, Modulus::identity());
    GraphTransform same = graph_signature(rel);
    CHECK(same.axioms.empty());
    CHECK(same.signature.predicates().size() == rel.predicates().size());
    CHECK(same.signature.functions().empty());

    Signature banach;
    banach.add_function("zero", 0, Modulus::identity());
    banach.add_function("add", 2, Modulus::standard(2));
    banach.add_function("m_2", 1, Modulus::standard(2));
    GraphTransform g = graph_signature(banach);
    CHECK(g.signature.relational());
    CHECK(g.signature.predicate("G_zero")->arity == 1);
    CHECK(g.signature.predicate("G_add")->arity == 3);
    CHECK(g.signature.predicate("G_m_2")->arity == 2);
    CHECK(g.axioms.size() == 12);
    for (const auto& a : g.axioms) CHECK(g.signature.predicate(a.graph));
}

#include "helpers.hpp"

#include "corpus.hpp"
#include "gauge/analysis.hpp"
#include "gauge/error.hpp"

#include <doctest.h>

using namespace gauge;
using test::q;

namespace {

Formula nu(const char* x) { return gauge_of(Term::variable(x)); }
Formula d(const char* x, const char* y) { return distance(Term::variable(x), Term::variable(y)); }

/// Tree nodes, counting a term as one node.
std::size_t size(const Formula& phi) {
    switch (phi.kind()) {
        case Formula::Kind::Half:
            return 1 + size(phi.child());
        case Formula::Kind::Add:
        case Formula::Kind::Sub:
            return 1 + size(phi.lhs()) + size(phi.rhs());
        case Formula::Kind::Sup:
        case Formula::Kind::Inf:
            return 1 + size(phi.body());
        default:
            return 1;
    }
}

std::vector<std::string> vars_of(const Formula& phi) {
    auto fv = free_vars(phi);
    return {fv.begin(), fv.end()};
}

}  // namespace

TEST_CASE("classify examples") {
    Signature sig;
    AnalysisResult atom = classify(d("x", "y"), sig, {"z"});
    CHECK_FALSE(atom.bounded);
    CHECK_FALSE(atom.bound);
    CHECK_FALSE(atom.variables.at("x").eventually_constant);
    CHECK_FALSE(atom.variables.at("y").eventually_constant);
    CHECK(atom.variables.at("z").eventually_constant);
    CHECK(atom.variables.at("z").threshold == Rational(0));

    AnalysisResult cut = classify(Formula::sub(Formula::one(), nu("x")), sig);
    CHECK(cut.bounded);
    CHECK(cut.bound == Rational(1));
    CHECK(cut.variables.at("x").eventually_constant);
    CHECK(cut.modulus.below_identity());

    CHECK_THROWS_AS(classify(Formula::sup("x", nu("x")), sig), IllFormed);
}

TEST_CASE("the gauge rule needs the literal gauge of the bare variable") {
    Signature sig;
    sig.add_function("f", 1, Modulus::identity());
    Formula compound = Formula::sub(Formula::one(), gauge_of(Term::apply("f", {Term::variable("x")})));
    CHECK_FALSE(eventually_constant(compound, "x"));
    CHECK_FALSE(eventually_constant(Formula::sub(nu("x"), nu("x")), "x"));
    CHECK(eventually_constant(Formula::sub(truncate_at(nu("x"), 1), nu("x")), "x"));
}

TEST_CASE("bound examples") {
    CHECK(bound(Formula::one()) == 1);
    CHECK(bound(Formula::half(Formula::add(Formula::one(), Formula::one()))) == 1);
    for (const char* r : {"1/4", "1", "5/2"}) CHECK(bound(truncate_at(d("x", "y"), q(r))) == q(r));
    CHECK_THROWS(bound(d("x", "y")));
}

TEST_CASE("threshold examples") {
    CHECK(threshold(d("y", "z"), "x") == 0);
    CHECK(threshold(Formula::sub(Formula::one(), nu("x")), "x") == 1);
    Formula two = Formula::add(Formula::sub(Formula::one(), nu("x")), Formula::sub(dyadic_const(3, 1), nu("x")));
    CHECK(threshold(two, "x") == q("3/2"));
    CHECK_THROWS(threshold(nu("x"), "x"));
}

TEST_CASE("limit_formula examples") {
    Formula free_of_x = Formula::add(nu("y"), d("y", "z"));
    CHECK(limit_formula(free_of_x, "x") == free_of_x);
    CHECK(limit_formula(Formula::sub(Formula::one(), nu("x")), "x") == zero_formula());
    Formula q_body = Formula::sup("z", Formula::sub(Formula::one(), nu("x")));
    CHECK(limit_formula(q_body, "x") == Formula::sup("z", zero_formula()));
    CHECK_THROWS(limit_formula(nu("x"), "x"));
}

TEST_CASE("synthesize_modulus examples") {
    Signature sig;
    Modulus var = synthesize_modulus(Term::variable("x"), sig);
    for (const char* e : {"1/8", "1", "9"}) CHECK(var(q(e)) == q(e));
    Modulus g = synthesize_modulus(nu("x"), sig);
    Modulus expected = normalize(Modulus::identity());
    for (const char* e : {"1/8", "1", "9"}) CHECK(g(q(e)) == expected(q(e)));

    Formula body = Formula::sub(Formula::one(), nu("x"));
    Modulus sup = synthesize_modulus(Formula::sup("x", body), sig);
    Modulus rule = quantifier_modulus(synthesize_modulus(body, sig), synthesize_modulus(zero_formula(), sig), 1);
    for (const char* e : {"1/8", "1/2", "1", "2", "9"}) CHECK(sup(q(e)) == rule(q(e)));
    CHECK_THROWS_AS(synthesize_modulus(Formula::sup("x", nu("x")), sig), IllFormed);
}

TEST_CASE("well_formed examples") {
    CHECK(well_formed(Formula::sup("x", Formula::sub(truncate_at(nu("x"), 1), nu("x")))).ok);
    WellFormedReport bad = well_formed(Formula::sup("x", d("x", "y")));
    CHECK_FALSE(bad.ok);
    CHECK_FALSE(bad.diagnostics.empty());
    CHECK(well_formed(Formula::add(d("x", "y"), nu("z"))).ok);
    CHECK_THROWS_AS(require_well_formed(Formula::inf("y", d("x", "y"))), IllFormed);
}

TEST_CASE("bound and threshold are sound on random structures") {
    selftest::Rng rng(101);
    const std::vector<std::string> vars{"x", "y"};
    for (int s = 0; s < 8; ++s) {
        GaugedStructure m = selftest::random_structure(rng, 4);
        for (int f = 0; f < 20; ++f) {
            Formula phi = selftest::random_formula(rng, vars, 3);
            auto fv = vars_of(phi);
            for (const auto& sigma : selftest::assignments(rng, m, vars, 16)) {
                const Rational v = eval_formula(m, phi, sigma);
                if (is_bounded(phi)) CHECK(v <= bound(phi));
                for (const auto& x : vars) {
                    if (!eventually_constant(phi, x)) continue;
                    Point b = std::find_if(sigma.begin(), sigma.end(), [&](auto& e) { return e.first == x; })->second;
                    if (m.gauge(b) >= threshold(phi, x)) CHECK(v == eval_formula(m, limit_formula(phi, x), sigma));
                }
            }
        }
    }
}

TEST_CASE("limit formulas lose the variable and do not grow") {
    selftest::Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        Formula phi = selftest::random_formula(rng, {"x", "y"}, 4);
        for (const char* x : {"x", "y"}) {
            if (!eventually_constant(phi, x)) continue;
            Formula lim = limit_formula(phi, x);
            CHECK_FALSE(occurs_free(lim, x));
            CHECK(size(lim) <= size(phi));
        }
    }
}

TEST_CASE("synthesized moduli lie below the identity and are respected on one variable") {
    selftest::Rng rng(17);
    for (int s = 0; s < 6; ++s) {
        GaugedStructure m = selftest::random_structure(rng, 5);
        for (int f = 0; f < 15; ++f) {
            Formula phi = selftest::random_formula(rng, {"x"}, 3);
            if (!occurs_free(phi, "x")) continue;
            Modulus delta = synthesize_modulus(phi, m.signature());
            CHECK(delta.below_identity());
            std::vector<Rational> gauges, values;
            std::vector<std::vector<Rational>> dist(m.size(), std::vector<Rational>(m.size()));
            for (Point a = 0; a < m.size(); ++a) {
                gauges.push_back(m.gauge(a));
                values.push_back(eval_formula(m, phi, {{"x", a}}));
                for (Point b = 0; b < m.size(); ++b) dist[a][b] = m.distance(a, b);
            }
            CHECK(respects_check(FiniteMap::real_valued(gauges, dist, values), delta).pass);
        }
    }
}

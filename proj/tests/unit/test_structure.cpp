#include "helpers.hpp"

#include "corpus.hpp"
#include "gauge/analysis.hpp"
#include "gauge/error.hpp"
#include "gauge/structure.hpp"

#include <doctest.h>

#include <functional>
#include <optional>

using namespace gauge;
using test::q;

namespace {

Formula nu(const char* x) { return gauge_of(Term::variable(x)); }
Formula d(const char* x, const char* y) { return distance(Term::variable(x), Term::variable(y)); }

bool has_issue(const ValidationReport& r, const std::string& kind) {
    return std::any_of(r.issues.begin(), r.issues.end(), [&](const ValidationIssue& i) { return i.kind == kind; });
}

/// max of φ over points whose gauge satisfies `keep`, or 0 when none does.
Rational max_where(const GaugedStructure& m, const Formula& phi, const std::string& x, const Assignment& rest,
                   const std::function<bool(const Rational&)>& keep, bool take_min) {
    std::optional<Rational> best;
    for (Point b = 0; b < m.size(); ++b) {
        if (!keep(m.gauge(b))) continue;
        Assignment sigma = rest;
        sigma.emplace_back(x, b);
        Rational v = eval_formula(m, phi, sigma);
        if (!best || (take_min ? v < *best : v > *best)) best = v;
    }
    return best.value_or(0);
}

}  // namespace

TEST_CASE("validate examples") {
    CHECK(validate(test::line({0})).pass);

    GaugedStructure steep = test::line({0, 1});
    steep.set_gauge(1, 5);
    ValidationReport r = validate(steep);
    CHECK_FALSE(r.pass);
    CHECK(has_issue(r, "lipschitz"));

    Signature sig;
    sig.add_predicate("P", 1, Modulus::identity());
    GaugedStructure jump = test::line({0, 1}, sig);
    const Point a[] = {0}, b[] = {1};
    jump.set_predicate("P", a, 0);
    jump.set_predicate("P", b, 10);
    ValidationReport rj = validate(jump);
    CHECK_FALSE(rj.pass);
    CHECK(has_issue(rj, "modulus"));

    GaugedStructure missing = test::line({0, 1}, sig);
    missing.set_predicate("P", a, 0);
    CHECK(has_issue(validate(missing), "table"));
}

TEST_CASE("structure files round trip") {
    GaugedStructure m = parse_structure(test::data_file("graph_example.struct"));
    CHECK(validate(m).pass);
    CHECK(parse_structure(write_structure(m)) == m);
    selftest::Rng rng(2);
    for (int i = 0; i < 10; ++i) {
        GaugedStructure r = selftest::random_structure(rng, 4);
        CHECK(validate(r).pass);
        CHECK(parse_structure(write_structure(r)) == r);
    }
    CHECK_THROWS_AS(parse_structure("(points a b) (dist a c 1)"), Error);
}

TEST_CASE("eval_term examples") {
    GaugedStructure m = parse_structure(test::data_file("graph_example.struct"));
    const Point p2 = *m.find("p2");
    CHECK(eval_term(m, Term::variable("x"), {{"x", p2}}) == p2);
    CHECK(eval_term(m, Term::apply("c", {}), {}) == *m.find("p1"));
    Term ff = Term::apply("f", {Term::apply("f", {Term::variable("x")})});
    CHECK(eval_term(m, ff, {{"x", p2}}) == *m.find("p0"));
    CHECK_THROWS_AS(eval_term(m, Term::variable("y"), {}), DomainError);
}

TEST_CASE("eval_formula examples") {
    Formula sup = Formula::sup("x", Formula::sub(Formula::one(), nu("x")));
    Formula inf = Formula::inf("x", Formula::sub(Formula::one(), nu("x")));
    for (int n = 1; n <= 4; ++n) {
        GaugedStructure m = test::line({0, Rational(n)});
        CHECK(eval_formula(m, sup) == 1);
        // the ideal point contributes the limit 0
        CHECK(eval_formula(m, inf) == 0);
    }
    GaugedStructure empty(Signature{}, {});
    CHECK(eval_formula(empty, sup) == 0);
    CHECK(eval_formula(test::line({0, 2}), dyadic_const(3, 1)) == q("3/2"));
    CHECK_THROWS_AS(eval_formula(test::line({0}), Formula::sup("x", d("x", "y")), {{"y", 0}}), IllFormed);
}

TEST_CASE("dyadic_window examples and the enumeration oracle") {
    CHECK(dyadic_window(1, 2) == std::pair<unsigned, Rational>{0, 1});
    CHECK(dyadic_window(q("1/3"), q("2/3")) == std::pair<unsigned, Rational>{3, q("3/8")});
    CHECK(dyadic_window(q("1/2"), 1) == std::pair<unsigned, Rational>{1, q("1/2")});
    CHECK_THROWS(dyadic_window(1, 1));
    for (int a = 0; a < 12; ++a)
        for (int b = a + 1; b < 14; ++b) {
            Rational r(a, 4), rp(b, 5);
            r.canonicalize();
            rp.canonicalize();
            if (r >= rp || r <= 0) continue;
            // least m, least ℓ with r <= ℓ/2^m and (ℓ+1)/2^m <= r'
            for (unsigned m = 0;; ++m) {
                Rational scale(Integer(1) << m);
                Integer l = ceil(r * scale);
                if (Rational(l + 1) <= rp * scale) {
                    Rational s(l, Integer(1) << m);
                    s.canonicalize();
                    CHECK(dyadic_window(r, rp) == std::pair<unsigned, Rational>{m, s});
                    break;
                }
            }
        }
}

TEST_CASE("build_down values inside and outside the window") {
    GaugedStructure m = test::line({0, q("1/2"), 1, q("3/2"), 2, 3});
    Formula phi = truncate_at(d("x", "y"), 1);
    Formula down = build_down(phi, "x", 1, 2);
    CHECK(is_bounded(down));
    CHECK(eventually_constant(down, "x"));
    CHECK(threshold(down, "x") <= 2);
    for (Point a = 0; a < m.size(); ++a)
        for (Point b = 0; b < m.size(); ++b) {
            Assignment sigma{{"x", a}, {"y", b}};
            if (m.gauge(a) <= 1) CHECK(eval_formula(m, down, sigma) == eval_formula(m, phi, sigma));
            if (m.gauge(a) >= 2) CHECK(eval_formula(m, down, sigma) == 0);
            CHECK(eval_formula(m, down, sigma) <= eval_formula(m, phi, sigma));
        }
    CHECK_THROWS(build_down(phi, "x", 2, 1));
}

TEST_CASE("window sandwich on random structures") {
    selftest::Rng rng(23);
    const Rational radii[][2] = {{q("1/2"), 1}, {1, q("5/2")}, {q("1/3"), q("2/3")}, {2, 3}};
    for (int s = 0; s < 20; ++s) {
        GaugedStructure m = selftest::random_structure(rng, 5);
        for (int f = 0; f < 4; ++f) {
            Formula phi = selftest::random_bounded_formula(rng, {"x", "y"}, 2);
            for (const auto& rr : radii) {
                const Rational r = rr[0], rp = rr[1];
                Formula up = sup_window(phi, "x", r, rp), lo = inf_window(phi, "x", r, rp);
                CHECK(well_formed(up).ok);
                for (Point b = 0; b < m.size(); ++b) {
                    Assignment rest{{"y", b}};
                    const Rational v = eval_formula(m, up, rest);
                    CHECK(max_where(m, phi, "x", rest, [&](const Rational& g) { return g <= r; }, false) <= v);
                    CHECK(v <= max_where(m, phi, "x", rest, [&](const Rational& g) { return g < rp; }, false));
                    // inf over the window sits between inf over ν < r' and inf over ν <= r, empty inf = bound
                    const Rational w = eval_formula(m, lo, rest);
                    auto inner = [&](const Rational& g) { return g <= r; };
                    bool any_inner = false;
                    for (Point a = 0; a < m.size(); ++a) any_inner = any_inner || inner(m.gauge(a));
                    if (any_inner) CHECK(w <= max_where(m, phi, "x", rest, inner, true));
                }
            }
        }
    }
}

TEST_CASE("sup_window on far points and on a single point") {
    Formula phi = truncate_at(Formula::add(nu("x"), Formula::one()), 2);
    GaugedStructure far = test::line({5, 6});
    CHECK(eval_formula(far, sup_window(phi, "x", 1, 2)) == 0);
    GaugedStructure single = test::line({0});
    CHECK(eval_formula(single, sup_window(phi, "x", 1, 2)) == eval_formula(single, phi, {{"x", 0}}));
}

TEST_CASE("prenex") {
    Formula qf = Formula::add(nu("x"), d("x", "y"));
    CHECK(prenex(qf) == qf);
    Formula beta = Formula::sub(truncate_at(d("x", "y"), 1), nu("x"));
    Formula added = prenex(Formula::add(Formula::one(), Formula::sup("x", beta)));
    CHECK(added == Formula::sup("x", Formula::add(Formula::one(), beta)));
    Formula subbed = prenex(Formula::sub(Formula::one(), Formula::sup("x", beta)));
    CHECK(subbed == Formula::inf("x", Formula::sub(Formula::one(), beta)));

    selftest::Rng rng(31);
    for (int s = 0; s < 10; ++s) {
        GaugedStructure m = selftest::random_structure(rng, 4);
        for (int f = 0; f < 10; ++f) {
            Formula phi = selftest::random_formula(rng, {"x", "y"}, 3);
            Formula p = prenex(phi);
            CHECK(is_prenex(p));
            CHECK(well_formed(p).ok);
            for (const auto& sigma : selftest::assignments(rng, m, {"x", "y"}, 16))
                CHECK(eval_formula(m, p, sigma) == eval_formula(m, phi, sigma));
        }
    }
}

TEST_CASE("principal ultraproduct") {
    selftest::Rng rng(41);
    GaugedStructure a = selftest::random_structure(rng, 3), b = selftest::random_structure(rng, 4);
    std::vector<GaugedStructure> one{a}, two{a, b};
    CHECK(principal_ultraproduct(one, 0) == a);
    CHECK(principal_ultraproduct(two, 1) == b);
    CHECK_THROWS(principal_ultraproduct(two, 2));
    std::vector<Formula> formulas;
    for (int i = 0; i < 20; ++i) formulas.push_back(selftest::random_formula(rng, {"x", "y"}, 3));
    LosReport r = los_check(two, 1, formulas);
    CHECK(r.pass);
    CHECK(r.checked > 0);
}

TEST_CASE("graph transform tables") {
    GaugedStructure m = parse_structure(test::data_file("graph_example.struct"));
    GaugedStructure g = graph_transform(m);
    CHECK(g.signature().relational());
    CHECK(validate(g).pass);
    for (Point a = 0; a < m.size(); ++a)
        for (Point b = 0; b < m.size(); ++b) {
            const Point one[] = {a}, pair[] = {a, b};
            CHECK(g.predicate("G_f", pair) == m.distance(m.function("f", one), b));
        }
}

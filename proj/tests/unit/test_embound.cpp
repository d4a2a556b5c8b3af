#include "helpers.hpp"

#include "corpus.hpp"
#include "gauge/embound.hpp"
#include "gauge/error.hpp"

#include <doctest.h>

#include <algorithm>

using namespace gauge;
using test::q;

namespace {

GaugedStructure relational(selftest::Rng& rng, std::size_t n) { return selftest::random_structure(rng, n, false); }

}  // namespace

TEST_CASE("theta and its inverse") {
    CHECK(theta(0) == 0);
    CHECK(theta(1) == q("1/2"));
    CHECK(theta(3) == q("3/4"));
    CHECK(theta_inv(q("1/2")) == 1);
    CHECK(theta_inv(0) == 0);
    CHECK(theta_inv(q("3/4")) == 3);
    CHECK_THROWS_AS(theta_inv(1), DomainError);
    for (int n = 0; n <= 40; ++n) {
        Rational x(n, 3);
        x.canonicalize();
        CHECK(theta_inv(theta(x)) == x);
    }
}

TEST_CASE("theta is subadditive on a grid") {
    for (int a = 0; a <= 10; ++a)
        for (int b = 0; b <= 10; ++b) {
            Rational x(a, 4), y(b, 4);
            x.canonicalize();
            y.canonicalize();
            CHECK(theta(x + y) <= theta(x) + theta(y));
        }
}

TEST_CASE("embound examples") {
    GaugedStructure one = embound(test::line({0}));
    const Point inf = *one.infinity();
    CHECK(one.distance(0, inf) == 1);

    GaugedStructure pair = test::line({0, 0});
    pair.set_distance(0, 1, 1);
    GaugedStructure e = embound(pair);
    CHECK(e.distance(0, 1) == q("1/2"));

    // bounded input: θ-rescaled distances and an isolated point at distance 1
    GaugedStructure flat = test::line({0, 0, 0});
    flat.set_distance(0, 1, 2);
    flat.set_distance(0, 2, 3);
    flat.set_distance(1, 2, 1);
    GaugedStructure ef = embound(flat);
    for (Point a = 0; a < 3; ++a) {
        CHECK(ef.distance(a, *ef.infinity()) == 1);
        for (Point b = 0; b < 3; ++b) CHECK(ef.distance(a, b) == theta(flat.distance(a, b)));
    }

    CHECK_THROWS(embound(parse_structure(test::data_file("graph_example.struct"))));
}

TEST_CASE("recover examples") {
    GaugedStructure n = embound(test::line({0, 2}));
    CHECK(n.distance(0, *n.infinity()) == 1);
    CHECK(n.distance(1, *n.infinity()) == q("1/3"));
    GaugedStructure m = recover(n);
    CHECK(m.gauge(0) == 0);
    CHECK(m.gauge(1) == 2);
}

TEST_CASE("embound properties on random structures") {
    selftest::Rng rng(53);
    for (int i = 0; i < 30; ++i) {
        GaugedStructure m = relational(rng, 1 + i % 6);
        GaugedStructure e = embound(m);
        const Point inf = *e.infinity();
        CHECK(validate(e).pass);
        CHECK_FALSE(triangle_violation(e));
        CHECK(recover(e) == m);
        CHECK(check_comparison(m).pass);
        for (Point a = 0; a < m.size(); ++a) {
            CHECK(e.gauge(a) == 0);
            CHECK(e.distance(a, inf) <= 1);
            for (Point b = 0; b < m.size(); ++b) CHECK(m.distance(a, b) >= e.distance(a, b));
            const Point with_inf[] = {a, inf};
            CHECK(e.predicate("R", with_inf) == 0);
        }
        // d(a, ∞) strictly decreases as ν(a) grows
        for (Point a = 0; a < m.size(); ++a)
            for (Point b = 0; b < m.size(); ++b)
                if (m.gauge(a) < m.gauge(b)) CHECK(e.distance(a, inf) > e.distance(b, inf));
    }
}

TEST_CASE("comparison on two points") {
    GaugedStructure m = test::line({0, 3});
    ComparisonReport r = check_comparison(m);
    CHECK(r.pass);
    CHECK(r.pairs > 0);
    CHECK(r.containments > 0);
    // the containment radius for r = 1, r' = 2 excludes the far point
    GaugedStructure e = embound(m);
    CHECK(e.distance(0, 1) >= theta(Rational(1)) / 2);
    CHECK(check_comparison(test::line({0})).pass);
}

TEST_CASE("naive theta transform") {
    GaugedStructure zero = test::line({0, 0});
    CHECK(naive_theta_transform(zero) == zero);
    GaugedStructure pair = test::line({0, 1});
    GaugedStructure t = naive_theta_transform(pair);
    CHECK(t.distance(0, 1) == q("1/2"));
    CHECK(t.gauge(1) == q("1/2"));
    selftest::Rng rng(59);
    for (int i = 0; i < 10; ++i) CHECK_FALSE(triangle_violation(naive_theta_transform(relational(rng, 5))));
}

#include "helpers.hpp"

#include "corpus.hpp"
#include "gauge/analysis.hpp"
#include "gauge/error.hpp"
#include "gauge/theories.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdlib>

using namespace gauge;
using test::q;

namespace {

const Scheme& scheme(const Theory& t, const std::string& label) {
    auto it = std::find_if(t.schemes.begin(), t.schemes.end(), [&](const Scheme& s) { return s.label == label; });
    REQUIRE(it != t.schemes.end());
    return *it;
}

Theory measure_theory() { return load_theory(test::data_file("measure_algebra.thy"), measure_algebra_signature()); }

Theory only(const Scheme& s) {
    Theory t;
    t.schemes.push_back(s);
    return t;
}

Rational max_defect(const DefectReport& r) {
    Rational worst = 0;
    for (const auto& e : r.entries)
        if (!e.skipped) worst = std::max(worst, e.defect);
    return worst;
}

Rational atomless_defect(const std::vector<Rational>& weights, long n, const Rational& eps) {
    const Theory t = measure_theory();
    Scheme s = scheme(t, "atomless");
    s.params = {{"n", {Rational(n)}}};
    return max_defect(check_theory(measure_algebra(weights), only(s), {eps}));
}

bool all_zero(const DefectReport& r) {
    return std::all_of(r.entries.begin(), r.entries.end(), [](const DefectEntry& e) { return e.skipped || e.defect == 0; });
}

}  // namespace

TEST_CASE("shipped theory text matches the embedded copy") {
    CHECK(std::string(selftest::kMeasureAlgebraTheory) == test::data_file("measure_algebra.thy"));
}

TEST_CASE("load_theory") {
    Theory empty = load_theory("", Signature{});
    CHECK(empty.conditions.empty());
    CHECK(empty.schemes.empty());
    CHECK(empty.graph_axioms.empty());

    Theory ma = measure_theory();
    CHECK(ma.conditions.size() == 1);
    CHECK(ma.schemes.size() == 4);
    for (const char* label : {"lattice", "modularity", "metric", "atomless"}) scheme(ma, label);

    GaugedStructure sample = sampled_normed_structure(1, NormKind::L1, 1, 1);
    Theory banach = load_theory(test::data_file("banach.thy"), sample.signature());
    scheme(banach, "triangle");
    CHECK(banach.graph_axioms.size() == 20);

    CHECK_THROWS(load_theory("(cond (sup x (nu x)) <= 0)", Signature{}));
    CHECK_THROWS(load_theory("(cond (nu x) <= 1)", Signature{}));
    CHECK_THROWS_AS(load_theory("(cond (nu x) <= ", Signature{}), ParseError);
    CHECK_THROWS(load_theory("(signature (pred P 1 id))", Signature{}));
}

TEST_CASE("instantiate_scheme") {
    const Theory ma = measure_theory();
    const Scheme& atomless = scheme(ma, "atomless");
    Condition c = instantiate_scheme(atomless, q("1/2"), {{"n", 1}});
    CHECK(free_vars(c.formula).empty());
    CHECK(well_formed(c.formula).ok);
    CHECK(c.threshold == 0);
    // windows (1/2, 1) for the universal block and (1, 3/2) for the existential one
    const Formula& matrix = atomless.matrix;
    Formula expected = sup_window(inf_window(matrix, "y", 1, q("3/2")), "x", q("1/2"), 1);
    CHECK(c.formula == expected);
    CHECK_THROWS_AS(instantiate_scheme(atomless, 1, {{"n", 1}}), DomainError);
    CHECK_THROWS_AS(instantiate_scheme(atomless, q("1/2")), DomainError);

    Theory bare = load_theory("(scheme (label bare) (sub (const 1) (const 1/2)))", Signature{});
    CHECK(instantiate_scheme(bare.schemes.front(), 1).formula == bare.schemes.front().matrix);

    for (const auto& s : ma.schemes)
        for (const char* eps : {"1/2", "1/4"}) {
            Condition inst = instantiate_scheme(s, q(eps), {{"n", 2}});
            CHECK(well_formed(inst.formula).ok);
            CHECK(is_bounded(inst.formula));
        }
}

TEST_CASE("graph axiom instantiation") {
    Signature sig;
    sig.add_function("f", 1, Modulus::identity());
    GraphTransform g = graph_signature(sig);
    auto existence = std::find_if(g.axioms.begin(), g.axioms.end(),
                                  [](const GraphAxiom& a) { return a.kind == GraphAxiom::Kind::Existence; });
    REQUIRE(existence != g.axioms.end());
    Condition c = instantiate_graph_axiom(*existence, 1);
    CHECK(free_vars(c.formula).empty());
    CHECK(well_formed(c.formula).ok);
    CHECK(c.threshold == 0);
    CHECK(to_string(c.formula).find("G_f") != std::string::npos);
    for (const auto& a : g.axioms)
        for (const char* eps : {"1", "1/2", "1/4"}) {
            Condition inst = instantiate_graph_axiom(a, q(eps));
            CHECK(well_formed(inst.formula).ok);
            CHECK(is_bounded(inst.formula));
        }
}

TEST_CASE("defect") {
    Condition le{"le", Formula::one(), Relation::AtMost, q("1/2")};
    CHECK(defect(le, q("3/4")) == q("1/4"));
    CHECK(defect(le, q("1/4")) == 0);
    Condition eq{"eq", Formula::one(), Relation::Equal, q("1/2")};
    CHECK(defect(eq, q("1/4")) == q("1/4"));
}

TEST_CASE("measure algebras") {
    GaugedStructure one = measure_algebra({1});
    CHECK(one.size() == 2);
    CHECK(one.distance(0, 1) == 1);
    for (const auto& w : std::vector<std::vector<Rational>>{{1}, {q("1/2"), q("1/2")}, {q("1/3"), q("1/2"), 2}}) {
        GaugedStructure m = measure_algebra(w);
        CHECK(m.size() == (std::size_t{1} << w.size()));
        CHECK(validate(m).pass);
        CHECK(m.gauge(m.function("zero", {})) == 0);
    }
    CHECK_THROWS(measure_algebra({}));
    CHECK_THROWS(measure_algebra({1, 1, 1, 1, 1}, Caps{4, 125}));
}

TEST_CASE("universal measure-algebra axioms have zero defect") {
    Theory t = measure_theory();
    t.schemes.erase(std::remove_if(t.schemes.begin(), t.schemes.end(), [](const Scheme& s) { return s.label == "atomless"; }),
                    t.schemes.end());
    for (const auto& w : std::vector<std::vector<Rational>>{{q("1/2"), q("1/2")}, {1}, {q("1/4"), 1, q("3/2")}}) {
        DefectReport r = check_theory(measure_algebra(w), t, {1, q("1/2"), q("1/4")});
        CHECK(r.pass);
        CHECK(all_zero(r));
    }
}

TEST_CASE("atomless scheme on a single atom") {
    CHECK(atomless_defect({1}, 2, q("1/2")) == q("1/2"));
    CHECK(atomless_defect({1}, 2, q("1/2")) > 0);
}

TEST_CASE("atomless defect does not grow when an atom is split") {
    // n = 4 puts every element of these algebras (total mass at most 3) inside the windows
    const std::vector<std::vector<Rational>> chains[] = {
        {{1}, {q("1/2"), q("1/2")}, {q("1/4"), q("1/4"), q("1/2")}, {q("1/4"), q("1/4"), q("1/4"), q("1/4")}},
        {{q("3/2")}, {q("3/4"), q("3/4")}, {q("3/8"), q("3/8"), q("3/4")}},
        {{q("1/2"), 1}, {q("1/2"), q("1/2"), q("1/2")}},
        {{2, 1}, {1, 1, 1}, {1, 1, q("1/2"), q("1/2")}},
    };
    for (const auto& chain : chains)
        for (const char* eps : {"1/2", "1/4"}) {
            Rational previous = atomless_defect(chain.front(), 4, q(eps));
            for (std::size_t i = 1; i < chain.size(); ++i) {
                Rational next = atomless_defect(chain[i], 4, q(eps));
                CHECK(next <= previous);
                previous = next;
            }
        }
}

TEST_CASE("a small universal radius can hide an atom") {
    // at n = 1 the single atom of mass 1 lies outside ∀^{<1}, so the scheme sees only zero
    CHECK(atomless_defect({1}, 1, q("1/2")) == 0);
    CHECK(atomless_defect({q("1/2"), q("1/2")}, 1, q("1/2")) == q("1/4"));
}

TEST_CASE("empty structure against a universal theory") {
    Theory t = load_theory("(scheme (label triangle) (forall (x y z) 2) (sub (d x z) (add (d x y) (d y z))))", Signature{});
    DefectReport r = check_theory(GaugedStructure(Signature{}, {}), t, {1, q("1/2")});
    CHECK(r.pass);
    CHECK(all_zero(r));
}

TEST_CASE("sampled normed structures") {
    GaugedStructure s = sampled_normed_structure(1, NormKind::L1, 1, 1);
    CHECK(s.size() == 3);
    CHECK(validate(s).pass);
    Theory banach = load_theory(test::data_file("banach.thy"), s.signature());
    Theory universal;
    for (const char* label : {"triangle", "scale-half", "metric"}) universal.schemes.push_back(scheme(banach, label));
    CHECK(all_zero(check_theory(s, universal, {q("1/2"), q("1/4")})));
    GaugedStructure s2 = sampled_normed_structure(2, NormKind::LInf, 1, 2);
    CHECK(s2.size() == 25);
    CHECK(s2.signature().relational());
    GaugedStructure s3 = sampled_normed_structure(1, NormKind::LInf, 1, 2);
    CHECK(s3.size() == 5);
    CHECK(all_zero(check_theory(s3, universal, {q("1/2")})));
    CHECK_THROWS(sampled_normed_structure(3, NormKind::L1, 2, 2, Caps{4, 125}));
}

TEST_CASE("graph axioms hold on genuine function graphs") {
    GaugedStructure m = graph_transform(parse_structure(test::data_file("graph_example.struct")));
    Theory t = load_theory(test::data_file("graph_axioms.thy"), m.signature());
    DefectReport r = check_theory(m, t, {1, q("1/2"), q("1/4")});
    CHECK(r.pass);
    CHECK(r.entries.size() == 24);
}

TEST_CASE("caps from the environment") {
    ::setenv("GAUGE_LOGIC_CAP", "atoms=2,points=9", 1);
    Caps c = caps_from_environment();
    CHECK(c.atoms == 2);
    CHECK(c.points == 9);
    CHECK_THROWS(measure_algebra({1, 1, 1}));
    ::unsetenv("GAUGE_LOGIC_CAP");
    CHECK(caps_from_environment().atoms == Caps{}.atoms);
}

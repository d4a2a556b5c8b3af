#include "corpus.hpp"

#include "gauge/analysis.hpp"

#include <algorithm>
#include <set>

namespace gauge::selftest {

namespace {

using Coord = std::pair<long, long>;  // halves

Rational l1(const Coord& a, const Coord& b) {
    Rational q(std::labs(a.first - b.first) + std::labs(a.second - b.second), 2);
    q.canonicalize();
    return q;
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
    return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

bool chance(Rng& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

Coord random_coord(Rng& rng) {
    std::uniform_int_distribution<long> c(-8, 8);
    return {c(rng), c(rng)};
}

}  // namespace

Rational random_rational(Rng& rng, long max_numerator, long max_denominator) {
    Rational q(std::uniform_int_distribution<long>(0, max_numerator)(rng),
               std::uniform_int_distribution<long>(1, max_denominator)(rng));
    q.canonicalize();
    return q;
}

Signature corpus_signature() {
    Signature sig;
    sig.add_predicate("P", 1, Modulus::identity());
    sig.add_predicate("R", 2, Modulus::standard(2));
    sig.add_function("f", 1, Modulus::identity());
    sig.add_function("c", 0, Modulus::identity());
    return sig;
}

GaugedStructure random_structure(Rng& rng, std::size_t n, bool with_functions) {
    std::set<Coord> chosen;
    while (chosen.size() < n) chosen.insert(random_coord(rng));
    std::vector<Coord> pts(chosen.begin(), chosen.end());
    std::shuffle(pts.begin(), pts.end(), rng);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("a" + std::to_string(i));

    Signature sig = corpus_signature();
    if (!with_functions) {
        Signature rel;
        rel.add_predicate("P", 1, Modulus::identity());
        rel.add_predicate("R", 2, Modulus::standard(2));
        sig = rel;
    }
    GaugedStructure m(sig, names);
    const Coord centre = random_coord(rng);
    Rational offset(std::uniform_int_distribution<long>(0, 2)(rng), 2);
    offset.canonicalize();
    const Coord p = random_coord(rng), q = random_coord(rng);
    Rational r(std::uniform_int_distribution<long>(0, 2)(rng), 2);
    r.canonicalize();
    for (Point a = 0; a < n; ++a) {
        m.set_gauge(a, l1(pts[a], centre) + offset);
        for (Point b = a + 1; b < n; ++b) m.set_distance(a, b, l1(pts[a], pts[b]));
        const Point one[] = {a};
        m.set_predicate("P", one, abs(l1(pts[a], p) - r));
        for (Point b = 0; b < n; ++b) {
            const Point two[] = {a, b};
            m.set_predicate("R", two, (l1(pts[a], q) + l1(pts[b], q)) / 2);
        }
    }
    if (with_functions) {
        std::uniform_int_distribution<Point> any(0, n - 1);
        for (Point a = 0; a < n; ++a) {
            const Point one[] = {a};
            m.set_function("f", one, any(rng));
        }
        m.set_function("c", std::span<const Point>{}, any(rng));
    }
    std::vector<std::pair<std::string, Modulus>> fitted;
    for (const auto& s : m.signature().predicates())
        if (s.name != kDistance && s.name != kGauge) fitted.emplace_back(s.name, fit_modulus(SymbolMap(m, s, false)));
    for (const auto& s : m.signature().functions()) fitted.emplace_back(s.name, fit_modulus(SymbolMap(m, s, true)));
    for (auto& [name, modulus] : fitted) m.set_modulus(name, modulus);
    return m;
}

namespace {

Term random_term(Rng& rng, const std::vector<std::string>& vars, bool with_functions) {
    Term v = Term::variable(pick(rng, vars));
    if (!with_functions) return v;
    double u = std::uniform_real_distribution<double>(0, 1)(rng);
    if (u < 0.6) return v;
    if (u < 0.85) return Term::apply("f", {v});
    return Term::apply("c", {});
}

Formula random_atomic(Rng& rng, const std::vector<std::string>& vars, bool with_functions) {
    auto t = [&] { return random_term(rng, vars, with_functions); };
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
        case 0:
            return Formula::atomic("P", {t()});
        case 1:
            return Formula::atomic("R", {t(), t()});
        case 2:
            return distance(t(), t());
        default:
            return gauge_of(t());
    }
}

}  // namespace

Formula random_formula(Rng& rng, const std::vector<std::string>& vars, unsigned depth, bool with_functions) {
    if (depth == 0 || chance(rng, 0.2))
        return chance(rng, 0.8) ? random_atomic(rng, vars, with_functions) : Formula::one();
    auto sub = [&] { return random_formula(rng, vars, depth - 1, with_functions); };
    switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
        case 0:
            return Formula::half(sub());
        case 1: {
            Formula a = sub();
            return Formula::add(a, chance(rng, 0.125) ? a : sub());
        }
        case 2:
        case 3: {
            Formula a = sub();
            return Formula::sub(a, chance(rng, 0.125) ? a : sub());
        }
        default: {
            const std::string& x = pick(rng, vars);
            Formula body = sub();
            if (!eventually_constant(body, x)) body = Formula::sub(truncate_at(body, 1), gauge_of(Term::variable(x)));
            return chance(rng, 0.5) ? Formula::sup(x, body) : Formula::inf(x, body);
        }
    }
}

Formula random_bounded_formula(Rng& rng, const std::vector<std::string>& vars, unsigned depth, bool with_functions) {
    for (int attempt = 0; attempt < 4; ++attempt) {
        Formula phi = random_formula(rng, vars, depth, with_functions);
        if (is_bounded(phi)) return phi;
    }
    static const std::vector<Rational> caps{Rational(1, 2), Rational(1), Rational(3, 2), Rational(2)};
    return truncate_at(random_formula(rng, vars, depth, with_functions), pick(rng, caps));
}

std::vector<Assignment> assignments(Rng& rng, const GaugedStructure& m, const std::vector<std::string>& vars,
                                    std::size_t limit) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < vars.size() && total <= limit; ++i) total *= m.size();
    std::vector<Assignment> out;
    if (total <= limit) {
        for (std::size_t idx = 0; idx < total; ++idx) {
            Assignment a;
            std::size_t r = idx;
            for (const auto& v : vars) {
                a.emplace_back(v, r % m.size());
                r /= m.size();
            }
            out.push_back(std::move(a));
        }
        return out;
    }
    std::uniform_int_distribution<Point> any(0, m.size() - 1);
    for (std::size_t i = 0; i < limit; ++i) {
        Assignment a;
        for (const auto& v : vars) a.emplace_back(v, any(rng));
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace gauge::selftest

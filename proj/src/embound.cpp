#include "gauge/embound.hpp"

#include "gauge/error.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace gauge {

Rational theta(const Rational& x) {
    if (x < 0) throw DomainError("theta is defined on nonnegative rationals");
    return x / (x + 1);
}

Rational theta_inv(const Rational& y) {
    if (y < 0 || y >= 1) throw DomainError("theta_inv is defined on [0, 1), got " + to_string(y));
    return y / (1 - y);
}

namespace {

void for_each_tuple(std::size_t n, unsigned k, const std::function<void(const std::vector<Point>&)>& fn) {
    std::size_t total = 1;
    for (unsigned i = 0; i < k; ++i) total *= n;
    std::vector<Point> t(k, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t r = idx;
        for (unsigned i = k; i-- > 0;) {
            t[i] = r % n;
            r /= n;
        }
        fn(t);
    }
}

Rational tuple_gauge(const GaugedStructure& m, const std::vector<Point>& t) {
    Rational g = 0;
    for (Point p : t) g = std::max(g, m.gauge(p));
    return g;
}

}  // namespace

void fit_moduli(GaugedStructure& m) {
    std::vector<Symbol> preds = m.signature().predicates();
    for (const auto& p : preds) {
        if (p.name == kGauge) continue;
        Modulus fitted = fit_modulus(SymbolMap(m, *m.signature().predicate(p.name), false));
        m.set_modulus(p.name, fitted);
    }
}

GaugedStructure embound(const GaugedStructure& m, std::string infinity_name) {
    if (!m.signature().relational())
        throw DomainError("embound needs a relational signature; replace functions by their graphs first");
    std::vector<std::string> names = m.points();
    std::set<std::string> taken(names.begin(), names.end());
    std::string inf = infinity_name;
    for (unsigned i = 1; taken.count(inf); ++i) inf = infinity_name + "_" + std::to_string(i);
    names.push_back(inf);

    GaugedStructure out(m.signature(), names);
    const std::size_t n = m.size();
    const Point infinity = n;
    for (Point a = 0; a < n; ++a) {
        for (Point b = a + 1; b < n; ++b)
            out.set_distance(a, b, theta(m.distance(a, b)) / (1 + std::min(m.gauge(a), m.gauge(b))));
        out.set_distance(a, infinity, 1 / (1 + m.gauge(a)));
    }
    for (const auto& p : m.signature().predicates()) {
        if (p.name == kDistance || p.name == kGauge) continue;
        for_each_tuple(n + 1, p.arity, [&](const std::vector<Point>& t) {
            if (std::find(t.begin(), t.end(), infinity) != t.end()) {
                out.set_predicate(p.name, t, 0);
                return;
            }
            out.set_predicate(p.name, t, theta(m.predicate(p.name, t)) / (1 + tuple_gauge(m, t)));
        });
    }
    out.set_infinity(infinity);
    out.set_source_signature(m.signature());
    fit_moduli(out);
    return out;
}

GaugedStructure recover(const GaugedStructure& nstruct, const std::optional<std::string>& infinity_name) {
    std::optional<Point> inf = nstruct.infinity();
    if (infinity_name) {
        inf = nstruct.find(*infinity_name);
        if (!inf) throw DomainError("no point named '" + *infinity_name + "'");
    }
    if (!inf) throw DomainError("structure has no marked infinity point");

    std::vector<std::string> names;
    std::vector<Point> real;
    for (Point p = 0; p < nstruct.size(); ++p) {
        if (p == *inf) continue;
        names.push_back(nstruct.name(p));
        real.push_back(p);
    }
    Signature sig = nstruct.source_signature() ? *nstruct.source_signature() : nstruct.signature();
    GaugedStructure out(sig, names);
    const std::size_t n = real.size();
    for (Point a = 0; a < n; ++a) {
        const Rational& t = nstruct.distance(real[a], *inf);
        if (t == 0 || t > 1) throw DomainError("distance to infinity out of (0, 1] at '" + names[a] + "'");
        out.set_gauge(a, 1 / t - 1);
    }
    for (Point a = 0; a < n; ++a)
        for (Point b = a + 1; b < n; ++b)
            out.set_distance(a, b, theta_inv(nstruct.distance(real[a], real[b]) * (1 + std::min(out.gauge(a), out.gauge(b)))));
    for (const auto& p : sig.predicates()) {
        if (p.name == kDistance || p.name == kGauge) continue;
        for_each_tuple(n, p.arity, [&](const std::vector<Point>& t) {
            std::vector<Point> src(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) src[i] = real[t[i]];
            out.set_predicate(p.name, t, theta_inv(nstruct.predicate(p.name, src) * (1 + tuple_gauge(out, t))));
        });
    }
    if (!nstruct.source_signature()) {
        out.set_modulus(kDistance, Modulus::standard(2));
        fit_moduli(out);
        out.set_modulus(kDistance, Modulus::standard(2));
    }
    return out;
}

std::optional<std::string> triangle_violation(const GaugedStructure& m) {
    const std::size_t n = m.size();
    for (Point a = 0; a < n; ++a)
        for (Point b = 0; b < n; ++b)
            for (Point c = 0; c < n; ++c)
                if (m.distance(a, c) > m.distance(a, b) + m.distance(b, c))
                    return m.name(a) + ", " + m.name(b) + ", " + m.name(c);
    return std::nullopt;
}

ComparisonReport check_comparison(const GaugedStructure& m) {
    ComparisonReport report;
    GaugedStructure e = embound(m);
    const std::size_t n = m.size();
    const Point infinity = *e.infinity();
    for (Point a = 0; a < n; ++a) {
        for (Point b = 0; b < n; ++b) {
            ++report.pairs;
            if (m.distance(a, b) < e.distance(a, b)) {
                report.pass = false;
                report.failures.push_back("d^M < d^inf at " + m.name(a) + ", " + m.name(b));
            }
        }
    }
    std::set<Rational> radii{Rational(0)};
    for (Point a = 0; a < n; ++a) radii.insert(m.gauge(a));
    const Rational steps[] = {Rational(1, 4), Rational(1, 2), Rational(1), Rational(2)};
    for (const Rational& r : radii) {
        for (const Rational& step : steps) {
            Rational r_prime = r + step;
            Rational radius = theta(step) / (1 + r);
            for (Point a = 0; a < n; ++a) {
                if (m.gauge(a) > r) continue;
                for (Point b = 0; b <= n; ++b) {
                    Point target = b == n ? infinity : b;
                    if (!(e.distance(a, target) < radius)) continue;
                    ++report.containments;
                    if (target == infinity || m.gauge(b) >= r_prime) {
                        report.pass = false;
                        report.failures.push_back("ball around " + m.name(a) + " of radius " + to_string(radius) +
                                                  " leaves nu < " + to_string(r_prime));
                    }
                }
            }
        }
    }
    return report;
}

GaugedStructure naive_theta_transform(const GaugedStructure& m) {
    GaugedStructure out(m.signature(), m.points());
    const std::size_t n = m.size();
    for (Point a = 0; a < n; ++a) {
        out.set_gauge(a, theta(m.gauge(a)));
        for (Point b = a + 1; b < n; ++b) out.set_distance(a, b, theta(m.distance(a, b)));
    }
    for (const auto& p : m.signature().predicates()) {
        if (p.name == kDistance || p.name == kGauge) continue;
        for_each_tuple(n, p.arity, [&](const std::vector<Point>& t) { out.set_predicate(p.name, t, theta(m.predicate(p.name, t))); });
    }
    for (const auto& f : m.signature().functions())
        for_each_tuple(n, f.arity, [&](const std::vector<Point>& t) { out.set_function(f.name, t, m.function(f.name, t)); });
    return out;
}

}  // namespace gauge

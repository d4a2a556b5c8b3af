#include "gauge/structure.hpp"

#include "gauge/analysis.hpp"
#include "gauge/error.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace gauge {

namespace {

std::size_t power(std::size_t n, unsigned k) {
    std::size_t r = 1;
    for (unsigned i = 0; i < k; ++i) r *= n;
    return r;
}

bool is_distinguished(std::string_view name) { return name == kDistance || name == kGauge; }

void require_nonnegative(const Rational& q, std::string_view what) {
    if (q < 0) throw DomainError(std::string(what) + " must be nonnegative, got " + to_string(q));
}

}  // namespace

GaugedStructure::GaugedStructure(Signature sig, std::vector<std::string> points)
    : sig_(std::move(sig)), points_(std::move(points)) {
    const std::size_t n = points_.size();
    std::set<std::string> seen;
    for (const auto& p : points_)
        if (!seen.insert(p).second) throw DomainError("duplicate point name '" + p + "'");
    distance_.assign(n, std::vector<Rational>(n, Rational(0)));
    gauge_.assign(n, Rational(0));
    for (const auto& p : sig_.predicates())
        if (!is_distinguished(p.name)) predicates_.emplace(p.name, std::vector<std::optional<Rational>>(power(n, p.arity)));
    for (const auto& f : sig_.functions())
        functions_.emplace(f.name, std::vector<std::optional<Point>>(power(n, f.arity)));
}

void GaugedStructure::set_modulus(std::string_view symbol, Modulus modulus) {
    if (sig_.function(symbol))
        sig_.set_function_modulus(symbol, std::move(modulus));
    else
        sig_.set_predicate_modulus(symbol, std::move(modulus));
}

std::optional<Point> GaugedStructure::find(std::string_view name) const {
    for (Point i = 0; i < points_.size(); ++i)
        if (points_[i] == name) return i;
    return std::nullopt;
}

const Rational& GaugedStructure::distance(Point a, Point b) const { return distance_.at(a).at(b); }

void GaugedStructure::set_distance(Point a, Point b, Rational q) {
    require_nonnegative(q, "distance");
    q.canonicalize();
    distance_.at(a).at(b) = q;
    distance_.at(b).at(a) = std::move(q);
}

const Rational& GaugedStructure::gauge(Point a) const { return gauge_.at(a); }

void GaugedStructure::set_gauge(Point a, Rational q) {
    require_nonnegative(q, "gauge");
    q.canonicalize();
    gauge_.at(a) = std::move(q);
}

std::size_t GaugedStructure::index(std::span<const Point> args, unsigned arity) const {
    if (args.size() != arity) throw ArityError("expected " + std::to_string(arity) + " arguments");
    std::size_t idx = 0;
    for (Point p : args) {
        if (p >= points_.size()) throw DomainError("point index out of range");
        idx = idx * points_.size() + p;
    }
    return idx;
}

const Rational& GaugedStructure::predicate(std::string_view name, std::span<const Point> args) const {
    if (name == kDistance) {
        if (args.size() != 2) throw ArityError("d expects 2 arguments");
        return distance(args[0], args[1]);
    }
    if (name == kGauge) {
        if (args.size() != 1) throw ArityError("nu expects 1 argument");
        return gauge(args[0]);
    }
    auto it = predicates_.find(name);
    if (it == predicates_.end()) throw UnknownSymbol("unknown predicate '" + std::string(name) + "'");
    const auto& entry = it->second[index(args, sig_.predicate(name)->arity)];
    if (!entry) throw DomainError("predicate table of '" + std::string(name) + "' is incomplete");
    return *entry;
}

void GaugedStructure::set_predicate(std::string_view name, std::span<const Point> args, Rational q) {
    if (name == kDistance) {
        if (args.size() != 2) throw ArityError("d expects 2 arguments");
        set_distance(args[0], args[1], std::move(q));
        return;
    }
    if (name == kGauge) {
        if (args.size() != 1) throw ArityError("nu expects 1 argument");
        set_gauge(args[0], std::move(q));
        return;
    }
    auto it = predicates_.find(name);
    if (it == predicates_.end()) throw UnknownSymbol("unknown predicate '" + std::string(name) + "'");
    require_nonnegative(q, "predicate value");
    q.canonicalize();
    it->second[index(args, sig_.predicate(name)->arity)] = std::move(q);
}

Point GaugedStructure::function(std::string_view name, std::span<const Point> args) const {
    auto it = functions_.find(name);
    if (it == functions_.end()) throw UnknownSymbol("unknown function '" + std::string(name) + "'");
    const auto& entry = it->second[index(args, sig_.function(name)->arity)];
    if (!entry) throw DomainError("function table of '" + std::string(name) + "' is incomplete");
    return *entry;
}

void GaugedStructure::set_function(std::string_view name, std::span<const Point> args, Point value) {
    auto it = functions_.find(name);
    if (it == functions_.end()) throw UnknownSymbol("unknown function '" + std::string(name) + "'");
    if (value >= points_.size()) throw DomainError("function value out of range");
    it->second[index(args, sig_.function(name)->arity)] = value;
}

std::optional<std::string> GaugedStructure::first_missing() const {
    auto describe = [&](const std::string& name, std::size_t idx, unsigned arity) {
        std::vector<std::string> coords(arity);
        for (unsigned i = arity; i-- > 0;) {
            coords[i] = points_[idx % points_.size()];
            idx /= points_.size();
        }
        std::string s = name + "(";
        for (unsigned i = 0; i < arity; ++i) s += (i ? ", " : "") + coords[i];
        return s + ")";
    };
    for (const auto& [name, table] : predicates_)
        for (std::size_t i = 0; i < table.size(); ++i)
            if (!table[i]) return describe(name, i, sig_.predicate(name)->arity);
    for (const auto& [name, table] : functions_)
        for (std::size_t i = 0; i < table.size(); ++i)
            if (!table[i]) return describe(name, i, sig_.function(name)->arity);
    return std::nullopt;
}

bool GaugedStructure::complete() const { return !first_missing().has_value(); }

void GaugedStructure::set_source_signature(std::optional<Signature> sig) {
    source_ = sig ? std::make_shared<const Signature>(std::move(*sig)) : nullptr;
}

bool operator==(const GaugedStructure& a, const GaugedStructure& b) {
    if (a.points_ != b.points_ || a.distance_ != b.distance_ || a.gauge_ != b.gauge_) return false;
    if (a.predicates_ != b.predicates_ || a.functions_ != b.functions_ || a.infinity_ != b.infinity_) return false;
    auto same_symbols = [](const std::vector<Symbol>& x, const std::vector<Symbol>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i].name != y[i].name || x[i].arity != y[i].arity || !(x[i].modulus == y[i].modulus)) return false;
        return true;
    };
    return same_symbols(a.sig_.predicates(), b.sig_.predicates()) && same_symbols(a.sig_.functions(), b.sig_.functions());
}

// ---------------------------------------------------------------------------
// Files

namespace {

Rational rational_atom(const SExpr& e) {
    if (!e.is_atom()) throw ParseError("expected a rational", e.offset);
    try {
        return parse_rational(e.atom);
    } catch (const ParseError&) {
        throw ParseError("malformed rational '" + e.atom + "'", e.offset);
    }
}

}  // namespace

GaugedStructure parse_structure(std::string_view text) {
    auto forms = read_all(text);
    Signature sig;
    std::optional<Signature> source;
    std::vector<std::string> names;
    bool have_points = false;
    for (const auto& f : forms) {
        if (f.has_head("signature")) {
            sig = parse_signature(std::span<const SExpr>(f.items).subspan(1));
        } else if (f.has_head("source-signature")) {
            source = parse_signature(std::span<const SExpr>(f.items).subspan(1));
        } else if (f.has_head("points")) {
            if (have_points) throw ParseError("duplicate (points ...)", f.offset);
            have_points = true;
            for (std::size_t i = 1; i < f.items.size(); ++i) {
                if (!f.items[i].is_atom()) throw ParseError("point names are atoms", f.items[i].offset);
                names.push_back(f.items[i].atom);
            }
        }
    }
    GaugedStructure m(sig, names);
    auto point = [&](const SExpr& e) {
        if (!e.is_atom()) throw ParseError("expected a point name", e.offset);
        auto p = m.find(e.atom);
        if (!p) throw ParseError("unknown point '" + e.atom + "'", e.offset);
        return *p;
    };
    std::vector<std::vector<bool>> dist_set(names.size(), std::vector<bool>(names.size(), false));
    std::vector<bool> gauge_set(names.size(), false);
    for (const auto& f : forms) {
        if (f.has_head("signature") || f.has_head("source-signature") || f.has_head("points")) continue;
        try {
            if (f.has_head("dist") || f.has_head("d")) {
                if (f.items.size() != 4) throw ParseError("expected (dist a b q)", f.offset);
                Point a = point(f.items[1]);
                Point b = point(f.items[2]);
                m.set_distance(a, b, rational_atom(f.items[3]));
                dist_set[a][b] = dist_set[b][a] = true;
            } else if (f.has_head("gauge") || f.has_head("nu")) {
                if (f.items.size() != 3) throw ParseError("expected (gauge a q)", f.offset);
                Point a = point(f.items[1]);
                m.set_gauge(a, rational_atom(f.items[2]));
                gauge_set[a] = true;
            } else if (f.has_head("pred")) {
                if (f.items.size() < 3 || !f.items[1].is_atom()) throw ParseError("expected (pred P a... q)", f.offset);
                std::vector<Point> args;
                for (std::size_t i = 2; i + 1 < f.items.size(); ++i) args.push_back(point(f.items[i]));
                const std::string& name = f.items[1].atom;
                m.set_predicate(name, args, rational_atom(f.items.back()));
                if (name == kDistance) dist_set[args[0]][args[1]] = dist_set[args[1]][args[0]] = true;
                if (name == kGauge) gauge_set[args[0]] = true;
            } else if (f.has_head("fun")) {
                if (f.items.size() < 3 || !f.items[1].is_atom()) throw ParseError("expected (fun f a... b)", f.offset);
                std::vector<Point> args;
                for (std::size_t i = 2; i + 1 < f.items.size(); ++i) args.push_back(point(f.items[i]));
                m.set_function(f.items[1].atom, args, point(f.items.back()));
            } else if (f.has_head("infinity")) {
                if (f.items.size() != 2) throw ParseError("expected (infinity a)", f.offset);
                m.set_infinity(point(f.items[1]));
            } else {
                throw ParseError("unknown structure entry", f.offset);
            }
        } catch (const ParseError&) {
            throw;
        } catch (const Error& err) {
            throw ParseError(err.what(), f.offset);
        }
    }
    for (std::size_t a = 0; a < names.size(); ++a) {
        if (!gauge_set[a]) throw ParseError("missing gauge of '" + names[a] + "'", 0);
        for (std::size_t b = a + 1; b < names.size(); ++b)
            if (!dist_set[a][b]) throw ParseError("missing distance between '" + names[a] + "' and '" + names[b] + "'", 0);
    }
    if (auto missing = m.first_missing()) throw ParseError("missing table entry " + *missing, 0);
    m.set_source_signature(std::move(source));
    return m;
}

namespace {

void for_each_tuple(std::size_t n, unsigned k, const std::function<void(const std::vector<Point>&)>& fn) {
    std::vector<Point> t(k, 0);
    std::size_t total = power(n, k);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t r = idx;
        for (unsigned i = k; i-- > 0;) {
            t[i] = r % n;
            r /= n;
        }
        fn(t);
    }
}

}  // namespace

std::string write_structure(const GaugedStructure& m) {
    std::ostringstream out;
    out << to_string(to_sexpr(m.signature())) << "\n";
    if (const Signature* src = m.source_signature()) {
        SExpr s = to_sexpr(*src);
        s.items.front().atom = "source-signature";
        out << to_string(s) << "\n";
    }
    out << "(points";
    for (const auto& p : m.points()) out << ' ' << p;
    out << ")\n";
    if (m.infinity()) out << "(infinity " << m.name(*m.infinity()) << ")\n";
    const std::size_t n = m.size();
    for (Point a = 0; a < n; ++a) out << "(gauge " << m.name(a) << ' ' << to_string(m.gauge(a)) << ")\n";
    for (Point a = 0; a < n; ++a)
        for (Point b = a + 1; b < n; ++b)
            out << "(dist " << m.name(a) << ' ' << m.name(b) << ' ' << to_string(m.distance(a, b)) << ")\n";
    for (const auto& p : m.signature().predicates()) {
        if (is_distinguished(p.name)) continue;
        for_each_tuple(n, p.arity, [&](const std::vector<Point>& t) {
            out << "(pred " << p.name;
            for (Point x : t) out << ' ' << m.name(x);
            out << ' ' << to_string(m.predicate(p.name, t)) << ")\n";
        });
    }
    for (const auto& f : m.signature().functions()) {
        for_each_tuple(n, f.arity, [&](const std::vector<Point>& t) {
            out << "(fun " << f.name;
            for (Point x : t) out << ' ' << m.name(x);
            out << ' ' << m.name(m.function(f.name, t)) << ")\n";
        });
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Symbol maps and validation

SymbolMap::SymbolMap(const GaugedStructure& m, const Symbol& symbol, bool is_function)
    : m_(m), symbol_(symbol), is_function_(is_function) {
    count_ = power(m.size(), symbol.arity);
    image_gauge_.reserve(count_);
    for (std::size_t i = 0; i < count_; ++i) {
        auto t = tuple(i);
        if (is_function_) {
            Point p = m.function(symbol.name, t);
            image_point_.push_back(p);
            image_gauge_.push_back(m.gauge(p));
        } else {
            image_gauge_.push_back(m.predicate(symbol.name, t));
        }
    }
}

std::vector<Point> SymbolMap::tuple(std::size_t i) const {
    std::vector<Point> t(symbol_.arity);
    for (unsigned k = symbol_.arity; k-- > 0;) {
        t[k] = i % m_.size();
        i /= m_.size();
    }
    return t;
}

Rational SymbolMap::domain_gauge(std::size_t i) const {
    Rational g = 0;
    for (unsigned k = 0; k < symbol_.arity; ++k) {
        g = std::max(g, m_.gauge(i % m_.size()));
        i /= m_.size();
    }
    return g;
}

Rational SymbolMap::domain_distance(std::size_t i, std::size_t j) const {
    Rational d = 0;
    for (unsigned k = 0; k < symbol_.arity; ++k) {
        const Rational& c = m_.distance(i % m_.size(), j % m_.size());
        if (c > d) d = c;
        i /= m_.size();
        j /= m_.size();
    }
    return d;
}

Rational SymbolMap::image_gauge(std::size_t i) const { return image_gauge_[i]; }

Rational SymbolMap::image_distance(std::size_t i, std::size_t j) const {
    if (is_function_) return m_.distance(image_point_[i], image_point_[j]);
    return abs(image_gauge_[i] - image_gauge_[j]);
}

ValidationReport validate(const GaugedStructure& m, std::size_t max_issues) {
    ValidationReport report;
    auto issue = [&](std::string kind, std::string detail) {
        report.pass = false;
        if (report.issues.size() < max_issues) report.issues.push_back({std::move(kind), std::move(detail)});
    };
    if (auto missing = m.first_missing()) {
        issue("table", "missing entry " + *missing);
        return report;
    }
    const std::size_t n = m.size();
    for (Point a = 0; a < n; ++a) {
        if (m.distance(a, a) != 0) issue("metric", "d(" + m.name(a) + ", " + m.name(a) + ") != 0");
        for (Point b = 0; b < n; ++b) {
            if (a != b && m.distance(a, b) == 0)
                issue("metric", "distinct points " + m.name(a) + ", " + m.name(b) + " at distance 0");
            if (abs(m.gauge(a) - m.gauge(b)) > m.distance(a, b))
                issue("lipschitz", "|nu(" + m.name(a) + ") - nu(" + m.name(b) + ")| > d(" + m.name(a) + ", " +
                                       m.name(b) + ")");
            for (Point c = 0; c < n; ++c)
                if (m.distance(a, c) > m.distance(a, b) + m.distance(b, c))
                    issue("metric", "triangle inequality fails at " + m.name(a) + ", " + m.name(b) + ", " + m.name(c));
        }
    }
    if (!report.pass) return report;
    auto check_symbol = [&](const Symbol& s, bool is_function) {
        SymbolMap map(m, s, is_function);
        CheckReport r = respects_check(map, s.modulus);
        if (r.pass) return;
        const Violation& v = r.violations.front();
        auto show = [&](std::size_t i) {
            auto t = map.tuple(i);
            std::string out = "(";
            for (std::size_t k = 0; k < t.size(); ++k) out += (k ? " " : "") + m.name(t[k]);
            return out + ")";
        };
        std::string detail = s.name + " does not respect " + to_string(s.modulus) + ": " + to_string(v.clause) +
                             " clause at " + show(v.first) + ", " + show(v.second);
        if (v.witness) detail += ", eps = " + to_string(*v.witness);
        issue("modulus", detail);
    };
    for (const auto& p : m.signature().predicates()) check_symbol(p, false);
    for (const auto& f : m.signature().functions()) check_symbol(f, true);
    return report;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

Point lookup(const Assignment& sigma, const std::string& name) {
    for (auto it = sigma.rbegin(); it != sigma.rend(); ++it)
        if (it->first == name) return it->second;
    throw DomainError("unassigned variable '" + name + "'");
}

}  // namespace

Point eval_term(const GaugedStructure& m, const Term& t, const Assignment& sigma) {
    if (t.is_variable()) {
        Point p = lookup(sigma, t.name());
        if (p >= m.size()) throw DomainError("assigned point out of range");
        return p;
    }
    std::vector<Point> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(eval_term(m, a, sigma));
    return m.function(t.name(), args);
}

Point Evaluator::term(const Term& t, const Assignment& sigma) const { return eval_term(m_, t, sigma); }

const Formula& Evaluator::limit(const Formula& quantified) {
    auto it = limits_.find(quantified.identity());
    if (it != limits_.end()) return it->second.second;
    auto [pos, inserted] = limits_.emplace(
        quantified.identity(), std::make_pair(quantified, limit_formula(quantified.body(), quantified.variable())));
    return pos->second.second;
}

Rational Evaluator::eval(const Formula& phi, Assignment& sigma) {
    using K = Formula::Kind;
    switch (phi.kind()) {
        case K::One:
            return 1;
        case K::Atomic: {
            std::vector<Point> args;
            args.reserve(phi.terms().size());
            for (const auto& t : phi.terms()) args.push_back(term(t, sigma));
            return m_.predicate(phi.predicate(), args);
        }
        case K::Half:
            return eval(phi.child(), sigma) / 2;
        case K::Add: {
            Rational l = eval(phi.lhs(), sigma);
            if (phi.lhs().same_node(phi.rhs())) return 2 * l;
            return l + eval(phi.rhs(), sigma);
        }
        case K::Sub: {
            Rational l = eval(phi.lhs(), sigma);
            if (phi.lhs().same_node(phi.rhs())) return 0;
            return monus(l, eval(phi.rhs(), sigma));
        }
        case K::Sup:
        case K::Inf: {
            const bool is_sup = phi.kind() == K::Sup;
            const Formula& lim = limit(phi);
            Rational best = eval(lim, sigma);
            for (Point b = 0; b < m_.size(); ++b) {
                sigma.emplace_back(phi.variable(), b);
                Rational v = eval(phi.body(), sigma);
                sigma.pop_back();
                if (is_sup ? v > best : v < best) best = std::move(v);
            }
            return best;
        }
    }
    return 0;
}

Rational Evaluator::operator()(const Formula& phi, Assignment& sigma) { return eval(phi, sigma); }

Rational eval_formula(const GaugedStructure& m, const Formula& phi, const Assignment& sigma) {
    require_well_formed(phi);
    Evaluator ev(m);
    Assignment s = sigma;
    return ev(phi, s);
}

// ---------------------------------------------------------------------------
// Ultraproducts and graphs

namespace {

bool same_shape(const Signature& a, const Signature& b) {
    auto same = [](const std::vector<Symbol>& x, const std::vector<Symbol>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i].name != y[i].name || x[i].arity != y[i].arity) return false;
        return true;
    };
    return same(a.predicates(), b.predicates()) && same(a.functions(), b.functions());
}

}  // namespace

GaugedStructure principal_ultraproduct(std::span<const GaugedStructure> ms, std::size_t j) {
    if (j >= ms.size()) throw DomainError("ultrafilter index out of range");
    for (const auto& m : ms)
        if (!same_shape(m.signature(), ms[j].signature()))
            throw DomainError("ultraproduct factors must share a signature");
    // Every ultralimit along the principal ultrafilter at j is the j-th coordinate.
    return ms[j];
}

LosReport los_check(std::span<const GaugedStructure> ms, std::size_t j, std::span<const Formula> formulas) {
    GaugedStructure u = principal_ultraproduct(ms, j);
    const GaugedStructure& factor = ms[j];
    LosReport report;
    Evaluator in_u(u);
    Evaluator in_factor(factor);
    for (const auto& phi : formulas) {
        require_well_formed(phi);
        auto fv = free_vars(phi);
        std::vector<std::string> vars(fv.begin(), fv.end());
        for_each_tuple(u.size(), static_cast<unsigned>(vars.size()), [&](const std::vector<Point>& t) {
            Assignment sigma;
            for (std::size_t i = 0; i < vars.size(); ++i) sigma.emplace_back(vars[i], t[i]);
            Assignment s1 = sigma;
            Rational a = in_u(phi, s1);
            Rational b = in_factor(phi, sigma);
            ++report.checked;
            if (a != b) {
                report.pass = false;
                report.mismatches.push_back(to_string(phi) + ": " + to_string(a) + " vs " + to_string(b));
            }
        });
    }
    return report;
}

GaugedStructure graph_transform(const GaugedStructure& m) {
    GraphTransform gt = graph_signature(m.signature());
    GaugedStructure out(gt.signature, m.points());
    const std::size_t n = m.size();
    for (Point a = 0; a < n; ++a) {
        out.set_gauge(a, m.gauge(a));
        for (Point b = a + 1; b < n; ++b) out.set_distance(a, b, m.distance(a, b));
    }
    for (const auto& p : m.signature().predicates()) {
        if (is_distinguished(p.name)) continue;
        for_each_tuple(n, p.arity, [&](const std::vector<Point>& t) { out.set_predicate(p.name, t, m.predicate(p.name, t)); });
    }
    for (const auto& f : m.signature().functions()) {
        std::string g = graph_name(f.name);
        for_each_tuple(n, f.arity + 1, [&](const std::vector<Point>& t) {
            std::span<const Point> args(t.data(), f.arity);
            out.set_predicate(g, t, m.distance(m.function(f.name, args), t.back()));
        });
    }
    return out;
}

}  // namespace gauge

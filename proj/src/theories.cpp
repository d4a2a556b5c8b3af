#include "gauge/theories.hpp"

#include "gauge/analysis.hpp"
#include "gauge/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

namespace gauge {

// ---------------------------------------------------------------------------
// Radius expressions

RadiusExpr RadiusExpr::constant(Rational q) {
    RadiusExpr r;
    r.kind_ = Kind::Constant;
    r.value_ = std::move(q);
    return r;
}

RadiusExpr RadiusExpr::parameter(std::string name) {
    RadiusExpr r;
    r.kind_ = Kind::Parameter;
    r.name_ = std::move(name);
    return r;
}

RadiusExpr RadiusExpr::sum(RadiusExpr a, RadiusExpr b) {
    RadiusExpr r;
    r.kind_ = Kind::Sum;
    r.children_ = {std::move(a), std::move(b)};
    return r;
}

RadiusExpr RadiusExpr::multiple(Rational q, RadiusExpr a) {
    RadiusExpr r;
    r.kind_ = Kind::Multiple;
    r.value_ = std::move(q);
    r.children_ = {std::move(a)};
    return r;
}

Rational RadiusExpr::eval(const std::map<std::string, Rational>& params) const {
    switch (kind_) {
        case Kind::Constant:
            return value_;
        case Kind::Parameter: {
            auto it = params.find(name_);
            if (it == params.end()) throw DomainError("unbound scheme parameter '" + name_ + "'");
            return it->second;
        }
        case Kind::Sum:
            return children_[0].eval(params) + children_[1].eval(params);
        case Kind::Multiple:
            return value_ * children_[0].eval(params);
    }
    return 0;
}

std::string RadiusExpr::to_string() const {
    switch (kind_) {
        case Kind::Constant:
            return gauge::to_string(value_);
        case Kind::Parameter:
            return name_;
        case Kind::Sum:
            return "(+ " + children_[0].to_string() + " " + children_[1].to_string() + ")";
        case Kind::Multiple:
            return "(* " + gauge::to_string(value_) + " " + children_[0].to_string() + ")";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Theory files

namespace {

ParseError parse_error(const SExpr& at, const std::string& message) { return ParseError(message, at.offset); }

Rational parse_number(const SExpr& e) {
    if (!e.is_atom()) throw parse_error(e, "expected a rational");
    try {
        return parse_rational(e.atom);
    } catch (const ParseError&) {
        throw parse_error(e, "expected a rational, got '" + e.atom + "'");
    }
}

RadiusExpr parse_radius(const SExpr& e, const std::set<std::string>& params) {
    if (e.is_atom()) {
        if (params.count(e.atom)) return RadiusExpr::parameter(e.atom);
        return RadiusExpr::constant(parse_number(e));
    }
    if (e.has_head("+") && e.items.size() == 3)
        return RadiusExpr::sum(parse_radius(e.items[1], params), parse_radius(e.items[2], params));
    if (e.has_head("*") && e.items.size() == 3)
        return RadiusExpr::multiple(parse_number(e.items[1]), parse_radius(e.items[2], params));
    throw parse_error(e, "malformed radius " + to_string(e));
}

std::vector<std::string> parse_variables(const SExpr& e) {
    std::vector<std::string> vars;
    if (e.is_atom()) return {e.atom};
    for (const auto& v : e.items) {
        if (!v.is_atom()) throw parse_error(v, "expected a variable name");
        vars.push_back(v.atom);
    }
    if (vars.empty()) throw parse_error(e, "empty variable list");
    return vars;
}

std::string parse_label(const SExpr& e) {
    if (e.items.size() != 2 || !e.items[1].is_atom()) throw parse_error(e, "expected (label name)");
    return e.items[1].atom;
}

void check_declared(const Signature& declared, const Signature& sig) {
    for (const auto& p : declared.predicates()) {
        const Symbol* s = sig.predicate(p.name);
        if (!s || s->arity != p.arity)
            throw DomainError("signature mismatch: predicate '" + p.name + "' of arity " + std::to_string(p.arity));
    }
    for (const auto& f : declared.functions()) {
        const Symbol* s = sig.function(f.name);
        if (!s || s->arity != f.arity)
            throw DomainError("signature mismatch: function '" + f.name + "' of arity " + std::to_string(f.arity));
    }
}

Condition parse_condition(const SExpr& e, const Signature& sig, std::size_t index) {
    std::size_t i = 1;
    Condition c;
    c.label = "cond" + std::to_string(index);
    if (i < e.items.size() && e.items[i].has_head("label")) c.label = parse_label(e.items[i++]);
    if (e.items.size() != i + 3) throw parse_error(e, "expected (cond [(label L)] phi <= r) or (cond phi = r)");
    c.formula = parse_formula(e.items[i], sig);
    const SExpr& rel = e.items[i + 1];
    if (rel.is_atom("<="))
        c.relation = Relation::AtMost;
    else if (rel.is_atom("="))
        c.relation = Relation::Equal;
    else
        throw parse_error(rel, "expected <= or =");
    c.threshold = parse_number(e.items[i + 2]);
    if (c.threshold < 0) throw parse_error(e.items[i + 2], "threshold must be nonnegative");
    require_well_formed(c.formula);
    if (!free_vars(c.formula).empty()) throw IllFormed("condition '" + c.label + "' has free variables");
    return c;
}

Scheme parse_scheme(const SExpr& e, const Signature& sig, std::size_t index) {
    Scheme s;
    s.label = "scheme" + std::to_string(index);
    if (e.items.size() < 2) throw parse_error(e, "scheme needs a formula");
    std::set<std::string> params;
    for (std::size_t i = 1; i + 1 < e.items.size(); ++i) {
        const SExpr& item = e.items[i];
        if (item.has_head("label")) {
            s.label = parse_label(item);
        } else if (item.has_head("params")) {
            if (item.items.size() < 3 || !item.items[1].is_atom())
                throw parse_error(item, "expected (params name value…)");
            std::vector<Rational> values;
            for (std::size_t k = 2; k < item.items.size(); ++k) values.push_back(parse_number(item.items[k]));
            params.insert(item.items[1].atom);
            s.params.emplace_back(item.items[1].atom, std::move(values));
        } else if (item.has_head("forall") || item.has_head("exists")) {
            if (item.items.size() != 3) throw parse_error(item, "expected (forall vars radius)");
            s.prefix.push_back({item.has_head("forall"), parse_variables(item.items[1]), parse_radius(item.items[2], params)});
        } else {
            throw parse_error(item, "unexpected scheme entry " + to_string(item));
        }
    }
    s.matrix = parse_formula(e.items.back(), sig);
    require_well_formed(s.matrix);
    std::set<std::string> bound;
    for (const auto& q : s.prefix) bound.insert(q.variables.begin(), q.variables.end());
    for (const auto& v : free_vars(s.matrix))
        if (!bound.count(v)) throw IllFormed("scheme '" + s.label + "' leaves '" + v + "' free");
    return s;
}

GraphAxiom::Kind parse_graph_kind(const std::string& name, const SExpr& at) {
    for (auto k : {GraphAxiom::Kind::Triangle, GraphAxiom::Kind::Separation, GraphAxiom::Kind::Existence,
                   GraphAxiom::Kind::Continuity})
        if (to_string(k) == name) return k;
    throw parse_error(at, "unknown graph axiom '" + name + "'");
}

void parse_graph(const SExpr& e, const Signature& sig, std::vector<GraphAxiom>& out) {
    // (graph G arity modulus [kind…])
    if (e.items.size() < 4 || !e.items[1].is_atom()) throw parse_error(e, "expected (graph G arity modulus)");
    const std::string& g = e.items[1].atom;
    Rational arity_q = parse_number(e.items[2]);
    if (arity_q < 0 || arity_q.get_den() != 1 || arity_q > 8) throw parse_error(e.items[2], "bad arity");
    unsigned arity = static_cast<unsigned>(arity_q.get_num().get_ui());
    const Symbol* p = sig.predicate(g);
    if (!p) throw UnknownSymbol("unknown graph predicate '" + g + "'");
    if (p->arity != arity + 1) throw ArityError("graph predicate '" + g + "' must have arity " + std::to_string(arity + 1));
    Modulus delta = parse_modulus(e.items[3]);
    std::string f = g.rfind("G_", 0) == 0 ? g.substr(2) : g;
    std::vector<GraphAxiom::Kind> kinds;
    for (std::size_t i = 4; i < e.items.size(); ++i) {
        if (!e.items[i].is_atom()) throw parse_error(e.items[i], "expected an axiom name");
        kinds.push_back(parse_graph_kind(e.items[i].atom, e.items[i]));
    }
    if (kinds.empty())
        kinds = {GraphAxiom::Kind::Triangle, GraphAxiom::Kind::Separation, GraphAxiom::Kind::Existence,
                 GraphAxiom::Kind::Continuity};
    for (auto k : kinds) out.push_back({k, f, g, arity, delta});
}

}  // namespace

Theory load_theory(std::string_view text, const Signature& sig) {
    Theory t;
    std::vector<SExpr> items = read_all(text);
    for (const auto& e : items) {
        if (e.has_head("signature")) {
            t.declared = parse_signature(std::span<const SExpr>(e.items).subspan(1));
            check_declared(*t.declared, sig);
        } else if (e.has_head("cond")) {
            t.conditions.push_back(parse_condition(e, sig, t.conditions.size()));
        } else if (e.has_head("scheme")) {
            t.schemes.push_back(parse_scheme(e, sig, t.schemes.size()));
        } else if (e.has_head("graph")) {
            parse_graph(e, sig, t.graph_axioms);
        } else {
            throw parse_error(e, "unexpected theory entry " + to_string(e));
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Instantiation

namespace {

Formula close_universal(Formula body, const std::vector<std::string>& vars, const Rational& r, const Rational& w) {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = sup_window(body, *it, r - w, r);
    return body;
}

Formula close_existential(Formula body, const std::vector<std::string>& vars, const Rational& s, const Rational& w) {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = inf_window(body, *it, s, s + w);
    return body;
}

Condition zero_condition(std::string label, Formula f) { return {std::move(label), std::move(f), Relation::Equal, 0}; }

Integer floor_of(const Rational& q) {
    Integer out;
    mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return out;
}

}  // namespace

Condition instantiate_scheme(const Scheme& s, const Rational& eps, const std::map<std::string, Rational>& params) {
    if (eps <= 0) throw DomainError("eps must be positive");
    std::vector<Rational> radii;
    for (const auto& q : s.prefix) {
        Rational r = q.radius.eval(params);
        if (r <= 0) throw DomainError("radius " + q.radius.to_string() + " is not positive");
        if (q.universal && eps >= r)
            throw DomainError("eps " + to_string(eps) + " is not below the radius " + to_string(r));
        radii.push_back(r);
    }
    Formula body = s.matrix;
    for (std::size_t i = s.prefix.size(); i-- > 0;) {
        const auto& q = s.prefix[i];
        body = q.universal ? close_universal(body, q.variables, radii[i], eps)
                           : close_existential(body, q.variables, radii[i], eps);
    }
    return zero_condition(s.label, body);
}

Rational dyadic_below(const Rational& q, unsigned bits) {
    Integer scale = 1;
    scale <<= bits;
    Rational out(floor_of(q * scale), scale);
    out.canonicalize();
    return out;
}

Rational dyadic_above(const Rational& q, unsigned bits) {
    Integer scale = 1;
    scale <<= bits;
    Rational out(ceil(Rational(q * scale)), scale);
    out.canonicalize();
    return out;
}

Condition instantiate_graph_axiom(const GraphAxiom& a, const Rational& eps) {
    if (eps <= 0) throw DomainError("eps must be positive");
    const Rational r = 1 / eps;
    const Rational delta = eval_modulus(a.modulus, eps);
    const Rational z_radius = 1 / delta + 1;
    Rational smallest = a.kind == GraphAxiom::Kind::Continuity ? std::min(r, z_radius) : r;
    const Rational w = eps < smallest ? eps : smallest / 2;

    std::vector<Term> xs, ys;
    std::vector<std::string> xn, yn;
    for (unsigned i = 0; i < a.arity; ++i) {
        xn.push_back("x" + std::to_string(i));
        yn.push_back("y" + std::to_string(i));
        xs.push_back(Term::variable(xn.back()));
        ys.push_back(Term::variable(yn.back()));
    }
    auto graph = [&](std::vector<Term> args, const std::string& last) {
        args.push_back(Term::variable(last));
        return Formula::atomic(a.graph, std::move(args));
    };
    const std::string label = a.graph + "/" + to_string(a.kind);

    switch (a.kind) {
        case GraphAxiom::Kind::Triangle: {
            Formula m = Formula::sub(graph(xs, "y"),
                                     Formula::add(graph(xs, "z"), distance(Term::variable("y"), Term::variable("z"))));
            std::vector<std::string> vars = xn;
            vars.insert(vars.end(), {"y", "z"});
            return zero_condition(label, close_universal(m, vars, r, w));
        }
        case GraphAxiom::Kind::Separation: {
            Formula m = Formula::sub(distance(Term::variable("y"), Term::variable("z")),
                                     Formula::add(graph(xs, "y"), graph(xs, "z")));
            std::vector<std::string> vars = xn;
            vars.insert(vars.end(), {"y", "z"});
            return zero_condition(label, close_universal(m, vars, r, w));
        }
        case GraphAxiom::Kind::Existence: {
            const Rational s = 1 / delta;
            Formula m = close_existential(graph(xs, "y"), {"y"}, s, w);
            return zero_condition(label, close_universal(m, xn, r, w));
        }
        case GraphAxiom::Kind::Continuity: {
            // max(a, b) = a + (b ∸ a), a ∧ b = a ∸ (a ∸ b)
            Formula dist = zero_formula();
            for (unsigned i = 0; i < a.arity; ++i) {
                Formula di = distance(xs[i], ys[i]);
                dist = i == 0 ? di : Formula::add(dist, Formula::sub(di, dist));
            }
            Formula near = Formula::sub(dyadic_const(dyadic_below(delta)), dist);
            Formula moved = Formula::sub(Formula::sub(graph(xs, "z"), graph(ys, "z")), dyadic_const(dyadic_above(eps)));
            Formula m = Formula::sub(near, Formula::sub(near, moved));
            m = close_universal(m, {"z"}, z_radius, w);
            std::vector<std::string> vars = xn;
            vars.insert(vars.end(), yn.begin(), yn.end());
            return zero_condition(label, close_universal(m, vars, r, w));
        }
    }
    throw DomainError("unknown graph axiom");
}

// ---------------------------------------------------------------------------
// Defects

Rational defect(const Condition& c, const Rational& value) {
    if (c.relation == Relation::AtMost) return monus(value, c.threshold);
    return abs(value - c.threshold);
}

namespace {

DefectEntry measure(const GaugedStructure& m, const Condition& c) {
    DefectEntry e;
    e.label = c.label;
    e.value = eval_formula(m, c.formula);
    e.defect = defect(c, e.value);
    return e;
}

void for_each_params(const std::vector<std::pair<std::string, std::vector<Rational>>>& params,
                     const std::function<void(const std::map<std::string, Rational>&)>& fn) {
    std::map<std::string, Rational> current;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == params.size()) {
            fn(current);
            return;
        }
        for (const auto& v : params[i].second) {
            current[params[i].first] = v;
            rec(i + 1);
        }
    };
    rec(0);
}

}  // namespace

DefectReport check_theory(const GaugedStructure& m, const Theory& t, const std::vector<Rational>& eps) {
    DefectReport report;
    auto record = [&](DefectEntry e) {
        if (!e.skipped && e.defect != 0) report.pass = false;
        report.entries.push_back(std::move(e));
    };
    for (const auto& c : t.conditions) record(measure(m, c));
    for (const auto& s : t.schemes) {
        for_each_params(s.params, [&](const std::map<std::string, Rational>& params) {
            for (const auto& e : eps) {
                DefectEntry entry;
                try {
                    entry = measure(m, instantiate_scheme(s, e, params));
                } catch (const DomainError& err) {
                    entry.label = s.label;
                    entry.skipped = true;
                    entry.note = err.what();
                }
                entry.eps = e;
                entry.params = params;
                record(std::move(entry));
            }
        });
    }
    for (const auto& a : t.graph_axioms) {
        for (const auto& e : eps) {
            DefectEntry entry = measure(m, instantiate_graph_axiom(a, e));
            entry.eps = e;
            record(std::move(entry));
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Sample structures

Caps caps_from_environment() {
    Caps caps;
    const char* env = std::getenv("GAUGE_LOGIC_CAP");
    if (!env) return caps;
    std::string_view text(env);
    while (!text.empty()) {
        std::size_t comma = text.find(',');
        std::string_view item = text.substr(0, comma);
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
        std::size_t eq = item.find('=');
        if (eq == std::string_view::npos) throw DomainError("GAUGE_LOGIC_CAP expects key=value entries");
        std::string key(item.substr(0, eq));
        std::size_t value = std::stoul(std::string(item.substr(eq + 1)));
        if (key == "atoms")
            caps.atoms = value;
        else if (key == "points")
            caps.points = value;
        else
            throw DomainError("GAUGE_LOGIC_CAP: unknown key '" + key + "'");
    }
    return caps;
}

Signature measure_algebra_signature() {
    Signature sig;
    sig.add_function("zero", 0, Modulus::identity());
    sig.add_function("join", 2, Modulus::standard(2));
    sig.add_function("meet", 2, Modulus::standard(2));
    sig.add_function("diff", 2, Modulus::standard(2));
    return sig;
}

namespace {

std::string subset_name(unsigned mask, std::size_t n) {
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(mask & (1u << i))) continue;
        if (!first) s += ",";
        s += std::to_string(i);
        first = false;
    }
    return s + "}";
}

}  // namespace

GaugedStructure measure_algebra(const std::vector<Rational>& weights, const Caps& caps) {
    const std::size_t n = weights.size();
    if (n == 0) throw DomainError("a measure algebra needs at least one atom");
    if (n > caps.atoms) throw DomainError("measure algebra with " + std::to_string(n) + " atoms exceeds the cap of " +
                                          std::to_string(caps.atoms));
    for (const auto& w : weights)
        if (w <= 0) throw DomainError("atom weights must be positive");
    const unsigned count = 1u << n;
    std::vector<std::string> names;
    std::vector<Rational> mu(count, 0);
    for (unsigned mask = 0; mask < count; ++mask) {
        names.push_back(subset_name(mask, n));
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) mu[mask] += weights[i];
    }
    GaugedStructure m(measure_algebra_signature(), names);
    for (Point a = 0; a < count; ++a) {
        m.set_gauge(a, mu[a]);
        for (Point b = a + 1; b < count; ++b) m.set_distance(a, b, mu[a ^ b]);
    }
    m.set_function("zero", std::span<const Point>{}, 0);
    for (Point a = 0; a < count; ++a) {
        for (Point b = 0; b < count; ++b) {
            const Point args[] = {a, b};
            m.set_function("join", args, a | b);
            m.set_function("meet", args, a & b);
            m.set_function("diff", args, a & ~b & (count - 1));
        }
    }
    return m;
}

Signature banach_signature() {
    Signature sig;
    sig.add_function("zero", 0, Modulus::identity());
    sig.add_function("add", 2, Modulus::standard(2));
    sig.add_function("m_neg1", 1, Modulus::identity());
    sig.add_function("m_half", 1, Modulus::scale(2, Modulus::identity()));
    sig.add_function("m_2", 1, Modulus::standard(2));
    return sig;
}

GaugedStructure sampled_normed_structure(unsigned dim, NormKind p, unsigned radius, unsigned grid, const Caps& caps) {
    if (dim == 0 || grid == 0) throw DomainError("dimension and grid must be positive");
    const std::size_t per_axis = 2 * static_cast<std::size_t>(radius) * grid + 1;
    std::size_t count = 1;
    for (unsigned i = 0; i < dim; ++i) {
        count *= per_axis;
        if (count > caps.points)
            throw DomainError("sample exceeds the cap of " + std::to_string(caps.points) + " points");
    }
    using Vec = std::vector<Rational>;
    std::vector<Vec> pts(count, Vec(dim));
    std::vector<std::string> names;
    for (std::size_t idx = 0; idx < count; ++idx) {
        std::size_t r = idx;
        std::string name = "[";
        for (unsigned i = 0; i < dim; ++i) {
            Rational c(static_cast<long>(r % per_axis) - static_cast<long>(radius * grid), static_cast<long>(grid));
            c.canonicalize();
            r /= per_axis;
            pts[idx][i] = c;
            name += (i ? "," : "") + to_string(c);
        }
        names.push_back(name + "]");
    }
    auto norm = [&](const Vec& v) {
        Rational out = 0;
        for (const auto& c : v) out = p == NormKind::L1 ? out + abs(c) : std::max(out, Rational(abs(c)));
        return out;
    };
    auto combo = [&](const Rational& s, const Vec& x, const Rational& t, const Vec& y, const Vec& z) {
        Vec v(dim);
        for (unsigned i = 0; i < dim; ++i) v[i] = s * x[i] + t * y[i] - z[i];
        return norm(v);
    };
    const Vec origin(dim, 0);

    GaugedStructure m(graph_signature(banach_signature()).signature, names);
    for (Point a = 0; a < count; ++a) {
        m.set_gauge(a, norm(pts[a]));
        for (Point b = a + 1; b < count; ++b) m.set_distance(a, b, combo(1, pts[a], 0, origin, pts[b]));
        const Point one[] = {a};
        m.set_predicate("G_zero", one, norm(pts[a]));
    }
    const std::pair<const char*, Rational> scalars[] = {{"G_m_neg1", -1}, {"G_m_half", Rational(1, 2)}, {"G_m_2", 2}};
    for (Point a = 0; a < count; ++a) {
        for (Point b = 0; b < count; ++b) {
            const Point two[] = {a, b};
            for (const auto& [g, s] : scalars) m.set_predicate(g, two, combo(s, pts[a], 0, origin, pts[b]));
            for (Point c = 0; c < count; ++c) {
                const Point three[] = {a, b, c};
                m.set_predicate("G_add", three, combo(1, pts[a], 1, pts[b], pts[c]));
            }
        }
    }
    return m;
}

}  // namespace gauge

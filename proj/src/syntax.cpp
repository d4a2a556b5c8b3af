#include "gauge/syntax.hpp"

#include "gauge/analysis.hpp"
#include "gauge/error.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace gauge {

// ---------------------------------------------------------------------------
// Signature

Signature::Signature() {
    predicates_.push_back({std::string(kDistance), 2, Modulus::standard(2)});
    predicates_.push_back({std::string(kGauge), 1, Modulus::identity()});
}

void Signature::add_predicate(std::string name, unsigned arity, Modulus modulus) {
    if (has_symbol(name)) throw DomainError("symbol '" + name + "' is already declared");
    predicates_.push_back({std::move(name), arity, std::move(modulus)});
}

void Signature::add_function(std::string name, unsigned arity, Modulus modulus) {
    if (has_symbol(name)) throw DomainError("symbol '" + name + "' is already declared");
    functions_.push_back({std::move(name), arity, std::move(modulus)});
}

void Signature::set_predicate_modulus(std::string_view name, Modulus modulus) {
    for (auto& p : predicates_) {
        if (p.name == name) {
            p.modulus = std::move(modulus);
            return;
        }
    }
    throw UnknownSymbol("unknown predicate '" + std::string(name) + "'");
}

void Signature::set_function_modulus(std::string_view name, Modulus modulus) {
    for (auto& f : functions_) {
        if (f.name == name) {
            f.modulus = std::move(modulus);
            return;
        }
    }
    throw UnknownSymbol("unknown function '" + std::string(name) + "'");
}

const Symbol* Signature::predicate(std::string_view name) const {
    for (const auto& p : predicates_)
        if (p.name == name) return &p;
    return nullptr;
}

const Symbol* Signature::function(std::string_view name) const {
    for (const auto& f : functions_)
        if (f.name == name) return &f;
    return nullptr;
}

namespace {

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    unsigned char c = static_cast<unsigned char>(s.front());
    if (std::isdigit(c) || c == '-' || c == '+' || c == '.') return false;
    return true;
}

unsigned parse_arity(const SExpr& e) {
    if (!e.is_atom()) throw ParseError("expected an arity", e.offset);
    Rational q;
    try {
        q = parse_rational(e.atom);
    } catch (const ParseError&) {
        throw ParseError("malformed arity '" + e.atom + "'", e.offset);
    }
    if (q.get_den() != 1 || q < 0 || q > 64) throw ParseError("arity out of range '" + e.atom + "'", e.offset);
    return static_cast<unsigned>(q.get_num().get_ui());
}

}  // namespace

Signature parse_signature(std::span<const SExpr> entries) {
    Signature sig;
    for (const auto& e : entries) {
        bool pred = e.has_head("pred");
        if (!pred && !e.has_head("fun")) throw ParseError("expected (pred ...) or (fun ...)", e.offset);
        if (e.items.size() != 4 || !e.items[1].is_atom() || !is_identifier(e.items[1].atom))
            throw ParseError("expected (pred|fun name arity modulus)", e.offset);
        const std::string& name = e.items[1].atom;
        unsigned arity = parse_arity(e.items[2]);
        Modulus m = parse_modulus(e.items[3]);
        if (pred && (name == kDistance || name == kGauge)) {
            unsigned expected = name == kDistance ? 2 : 1;
            if (arity != expected) throw ParseError("'" + name + "' has fixed arity", e.offset);
            sig.set_predicate_modulus(name, std::move(m));
            continue;
        }
        try {
            if (pred)
                sig.add_predicate(name, arity, std::move(m));
            else
                sig.add_function(name, arity, std::move(m));
        } catch (const DomainError& err) {
            throw ParseError(err.what(), e.offset);
        }
    }
    return sig;
}

Signature parse_signature(std::string_view text) {
    auto entries = read_all(text);
    return parse_signature(entries);
}

SExpr to_sexpr(const Signature& sig) {
    std::vector<SExpr> items{SExpr::make_atom("signature")};
    auto entry = [](const char* head, const Symbol& s) {
        return SExpr::make_list({SExpr::make_atom(head), SExpr::make_atom(s.name),
                                 SExpr::make_atom(std::to_string(s.arity)), to_sexpr(s.modulus)});
    };
    for (const auto& p : sig.predicates()) items.push_back(entry("pred", p));
    for (const auto& f : sig.functions()) items.push_back(entry("fun", f));
    return SExpr::make_list(std::move(items));
}

// ---------------------------------------------------------------------------
// Terms

struct Term::Node {
    Kind kind = Kind::Variable;
    std::string name;
    std::vector<Term> args;
};

Term Term::variable(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Variable;
    n->name = std::move(name);
    return Term(std::move(n));
}

Term Term::apply(std::string function, std::vector<Term> args) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Application;
    n->name = std::move(function);
    n->args = std::move(args);
    return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
std::span<const Term> Term::args() const { return node_->args; }

bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.name() != b.name()) return false;
    auto x = a.args();
    auto y = b.args();
    return std::equal(x.begin(), x.end(), y.begin(), y.end());
}

// ---------------------------------------------------------------------------
// Formulas

struct Formula::Node {
    Kind kind = Kind::One;
    std::string name;  // predicate or bound variable
    std::vector<Term> terms;
    std::vector<Formula> children;
};

Formula Formula::atomic(std::string predicate, std::vector<Term> terms) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Atomic;
    n->name = std::move(predicate);
    n->terms = std::move(terms);
    return Formula(std::move(n));
}

Formula Formula::one() {
    static const Formula f = [] {
        auto n = std::make_shared<Node>();
        n->kind = Kind::One;
        return Formula(std::move(n));
    }();
    return f;
}

Formula Formula::half(Formula child) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Half;
    n->children.push_back(std::move(child));
    return Formula(std::move(n));
}

Formula Formula::add(Formula lhs, Formula rhs) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Add;
    n->children = {std::move(lhs), std::move(rhs)};
    return Formula(std::move(n));
}

Formula Formula::sub(Formula lhs, Formula rhs) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sub;
    n->children = {std::move(lhs), std::move(rhs)};
    return Formula(std::move(n));
}

Formula Formula::quantifier(Kind kind, std::string variable, Formula body) {
    if (kind != Kind::Sup && kind != Kind::Inf) throw DomainError("quantifier kind must be Sup or Inf");
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->name = std::move(variable);
    n->children.push_back(std::move(body));
    return Formula(std::move(n));
}

Formula Formula::sup(std::string variable, Formula body) { return quantifier(Kind::Sup, std::move(variable), std::move(body)); }
Formula Formula::inf(std::string variable, Formula body) { return quantifier(Kind::Inf, std::move(variable), std::move(body)); }

Formula::Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::predicate() const { return node_->name; }
std::span<const Term> Formula::terms() const { return node_->terms; }
const Formula& Formula::lhs() const { return node_->children.at(0); }
const Formula& Formula::rhs() const { return node_->children.at(1); }
const Formula& Formula::child() const { return node_->children.at(0); }
const Formula& Formula::body() const { return node_->children.at(0); }
const std::string& Formula::variable() const { return node_->name; }

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.node_->name != b.node_->name) return false;
    using K = Formula::Kind;
    switch (a.kind()) {
        case K::One:
            return true;
        case K::Atomic: {
            auto x = a.terms();
            auto y = b.terms();
            return std::equal(x.begin(), x.end(), y.begin(), y.end());
        }
        case K::Add:
        case K::Sub: {
            bool shared_a = a.lhs().same_node(a.rhs());
            bool shared_b = b.lhs().same_node(b.rhs());
            if (shared_a && shared_b) return a.lhs() == b.lhs();
            return a.lhs() == b.lhs() && a.rhs() == b.rhs();
        }
        default:
            return a.node_->children.front() == b.node_->children.front();
    }
}

Formula gauge_of(Term t) { return Formula::atomic(std::string(kGauge), {std::move(t)}); }
Formula distance(Term s, Term t) { return Formula::atomic(std::string(kDistance), {std::move(s), std::move(t)}); }
Formula zero_formula() { return Formula::sub(Formula::one(), Formula::one()); }

bool is_gauge_of_variable(const Formula& f, std::string_view variable) {
    if (f.kind() != Formula::Kind::Atomic || f.predicate() != kGauge || f.terms().size() != 1) return false;
    const Term& t = f.terms()[0];
    return t.is_variable() && t.name() == variable;
}

// ---------------------------------------------------------------------------
// Dyadic constants

bool is_dyadic(const Rational& r) {
    const Integer& den = r.get_den();
    return mpz_popcount(den.get_mpz_t()) == 1;
}

std::pair<Integer, unsigned> dyadic_parts(const Rational& r) {
    if (r < 0 || !is_dyadic(r)) throw DomainError("not a nonnegative dyadic rational: " + to_string(r));
    if (r == 0) return {Integer(0), 0u};
    unsigned m = static_cast<unsigned>(mpz_scan1(r.get_den_mpz_t(), 0));
    return {r.get_num(), m};
}

namespace {

// n >= 1 by binary doubling: One, then acc + acc (shared) and acc + 1 per bit.
Formula integer_formula(const Integer& n) {
    std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    Formula acc = Formula::one();
    for (std::size_t i = bits - 1; i-- > 0;) {
        acc = Formula::add(acc, acc);
        if (mpz_tstbit(n.get_mpz_t(), i)) acc = Formula::add(acc, Formula::one());
    }
    return acc;
}

}  // namespace

Formula dyadic_const(const Integer& k_in, unsigned m_in) {
    if (k_in < 0) throw DomainError("dyadic_const needs k >= 0");
    if (k_in == 0) return zero_formula();
    Integer k = k_in;
    unsigned m = m_in;
    while (m > 0 && mpz_even_p(k.get_mpz_t())) {
        k /= 2;
        --m;
    }
    Integer whole = k;
    mpz_fdiv_q_2exp(whole.get_mpz_t(), k.get_mpz_t(), m);
    Integer frac = k;
    mpz_fdiv_r_2exp(frac.get_mpz_t(), k.get_mpz_t(), m);
    std::optional<Formula> fractional;
    if (frac != 0) {
        // 0.b1 b2 … bm by Horner from the last bit, which is 1 since k is odd.
        Formula acc = Formula::half(Formula::one());
        for (unsigned i = 1; i < m; ++i) {
            bool bit = mpz_tstbit(frac.get_mpz_t(), i);
            acc = Formula::half(bit ? Formula::add(Formula::one(), acc) : acc);
        }
        fractional = acc;
    }
    if (whole == 0) return *fractional;
    Formula integral = integer_formula(whole);
    return fractional ? Formula::add(integral, *fractional) : integral;
}

Formula dyadic_const(const Rational& r) {
    auto [k, m] = dyadic_parts(r);
    return dyadic_const(k, m);
}

Formula truncate_at(const Formula& phi, const Rational& r) {
    Formula c = dyadic_const(r);
    return Formula::sub(c, Formula::sub(c, phi));
}

// ---------------------------------------------------------------------------
// Variables

namespace {

void collect_term_vars(const Term& t, const std::set<std::string>& bound, std::set<std::string>& out) {
    if (t.is_variable()) {
        if (!bound.count(t.name())) out.insert(t.name());
        return;
    }
    for (const auto& a : t.args()) collect_term_vars(a, bound, out);
}

void collect_vars(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::One:
            return;
        case K::Atomic:
            for (const auto& t : f.terms()) collect_term_vars(t, bound, out);
            return;
        case K::Half:
            collect_vars(f.child(), bound, out);
            return;
        case K::Add:
        case K::Sub:
            collect_vars(f.lhs(), bound, out);
            if (!f.rhs().same_node(f.lhs())) collect_vars(f.rhs(), bound, out);
            return;
        case K::Sup:
        case K::Inf: {
            bool inserted = bound.insert(f.variable()).second;
            collect_vars(f.body(), bound, out);
            if (inserted) bound.erase(f.variable());
            return;
        }
    }
}

void collect_all_names(const Formula& f, std::set<std::string>& out) {
    std::set<std::string> none;
    collect_vars(f, none, out);
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        switch (g.kind()) {
            case Formula::Kind::Sup:
            case Formula::Kind::Inf:
                out.insert(g.variable());
                walk(g.body());
                break;
            case Formula::Kind::Half:
                walk(g.child());
                break;
            case Formula::Kind::Add:
            case Formula::Kind::Sub:
                walk(g.lhs());
                if (!g.rhs().same_node(g.lhs())) walk(g.rhs());
                break;
            default:
                break;
        }
    };
    walk(f);
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
    std::set<std::string> out;
    collect_term_vars(t, {}, out);
    return out;
}

std::set<std::string> free_vars(const Formula& phi) {
    std::set<std::string> bound;
    std::set<std::string> out;
    collect_vars(phi, bound, out);
    return out;
}

bool occurs_free(const Formula& phi, std::string_view variable) { return free_vars(phi).count(std::string(variable)) > 0; }

bool has_quantifier(const Formula& phi) {
    using K = Formula::Kind;
    switch (phi.kind()) {
        case K::Sup:
        case K::Inf:
            return true;
        case K::Half:
            return has_quantifier(phi.child());
        case K::Add:
        case K::Sub:
            return has_quantifier(phi.lhs()) || (!phi.rhs().same_node(phi.lhs()) && has_quantifier(phi.rhs()));
        default:
            return false;
    }
}

namespace {

Term rename_in_term(const Term& t, const std::map<std::string, Term>& env, bool& changed) {
    if (t.is_variable()) {
        auto it = env.find(t.name());
        if (it == env.end()) return t;
        changed = true;
        return it->second;
    }
    bool local = false;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(rename_in_term(a, env, local));
    if (!local) return t;
    changed = true;
    return Term::apply(t.name(), std::move(args));
}

Formula rebuild_binary(const Formula& f, Formula l, Formula r) {
    if (l.same_node(f.lhs()) && r.same_node(f.rhs())) return f;
    return f.kind() == Formula::Kind::Add ? Formula::add(std::move(l), std::move(r)) : Formula::sub(std::move(l), std::move(r));
}

// Replaces free variables according to env; binders of env keys shadow them.
Formula apply_env(const Formula& f, const std::map<std::string, Term>& env) {
    if (env.empty()) return f;
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::One:
            return f;
        case K::Atomic: {
            bool changed = false;
            std::vector<Term> terms;
            for (const auto& t : f.terms()) terms.push_back(rename_in_term(t, env, changed));
            return changed ? Formula::atomic(f.predicate(), std::move(terms)) : f;
        }
        case K::Half: {
            Formula c = apply_env(f.child(), env);
            return c.same_node(f.child()) ? f : Formula::half(std::move(c));
        }
        case K::Add:
        case K::Sub: {
            Formula l = apply_env(f.lhs(), env);
            Formula r = f.rhs().same_node(f.lhs()) ? l : apply_env(f.rhs(), env);
            return rebuild_binary(f, std::move(l), std::move(r));
        }
        case K::Sup:
        case K::Inf: {
            if (!env.count(f.variable())) {
                Formula b = apply_env(f.body(), env);
                return b.same_node(f.body()) ? f : Formula::quantifier(f.kind(), f.variable(), std::move(b));
            }
            auto inner = env;
            inner.erase(f.variable());
            Formula b = apply_env(f.body(), inner);
            return b.same_node(f.body()) ? f : Formula::quantifier(f.kind(), f.variable(), std::move(b));
        }
    }
    return f;
}

class Renamer {
public:
    explicit Renamer(const Formula& phi) {
        used_ = free_vars(phi);
        collect_all_names(phi, avoid_);
    }

    Formula run(const Formula& f, const std::map<std::string, Term>& env) {
        using K = Formula::Kind;
        switch (f.kind()) {
            case K::One:
            case K::Atomic:
                return apply_env(f, env);
            case K::Half: {
                Formula c = run(f.child(), env);
                return c.same_node(f.child()) ? f : Formula::half(std::move(c));
            }
            case K::Add:
            case K::Sub: {
                Formula l = run(f.lhs(), env);
                Formula r = (f.rhs().same_node(f.lhs()) && !has_quantifier(f.lhs())) ? l : run(f.rhs(), env);
                return rebuild_binary(f, std::move(l), std::move(r));
            }
            case K::Sup:
            case K::Inf: {
                std::string name = f.variable();
                auto inner = env;
                if (used_.count(name)) {
                    name = fresh(name);
                    inner.insert_or_assign(f.variable(), Term::variable(name));
                } else {
                    inner.erase(name);
                }
                used_.insert(name);
                Formula b = run(f.body(), inner);
                if (name == f.variable() && b.same_node(f.body())) return f;
                return Formula::quantifier(f.kind(), name, std::move(b));
            }
        }
        return f;
    }

private:
    std::string fresh(const std::string& base) {
        for (unsigned i = 1;; ++i) {
            std::string candidate = base + "_" + std::to_string(i);
            if (!used_.count(candidate) && !avoid_.count(candidate)) {
                avoid_.insert(candidate);
                return candidate;
            }
        }
    }

    std::set<std::string> used_;
    std::set<std::string> avoid_;
};

}  // namespace

Formula substitute(const Formula& phi, std::string_view variable, const Term& term) {
    std::map<std::string, Term> env{{std::string(variable), term}};
    return apply_env(phi, env);
}

Formula rename_bound(const Formula& phi) {
    Renamer r(phi);
    return r.run(phi, {});
}

// ---------------------------------------------------------------------------
// Signature extensions

Signature name_constants(const Signature& sig, const std::map<std::string, Rational>& gauges) {
    Signature out = sig;
    for (const auto& [name, g] : gauges) {
        if (g < 0) throw DomainError("constant '" + name + "' has a negative gauge");
        if (out.has_symbol(name)) throw DomainError("constant name '" + name + "' collides with an existing symbol");
        Modulus m = g == 0 ? Modulus::identity()
                           : Modulus::min({Modulus::identity(), Modulus::constant(Rational(1 / g))});
        out.add_function(name, 0, std::move(m));
    }
    return out;
}

std::string graph_name(std::string_view function) { return "G_" + std::string(function); }

GraphTransform graph_signature(const Signature& sig) {
    GraphTransform out;
    for (const auto& p : sig.predicates()) {
        if (p.name == kDistance || p.name == kGauge)
            out.signature.set_predicate_modulus(p.name, p.modulus);
        else
            out.signature.add_predicate(p.name, p.arity, p.modulus);
    }
    for (const auto& f : sig.functions()) {
        std::vector<Term> xs;
        for (unsigned i = 0; i < f.arity; ++i) xs.push_back(Term::variable("x" + std::to_string(i)));
        Formula defining = distance(Term::apply(f.name, xs), Term::variable("y"));
        std::string g = graph_name(f.name);
        if (out.signature.has_symbol(g)) throw DomainError("graph symbol '" + g + "' collides with an existing symbol");
        out.signature.add_predicate(g, f.arity + 1, synthesize_modulus(defining, sig));
        for (auto kind : {GraphAxiom::Kind::Triangle, GraphAxiom::Kind::Separation, GraphAxiom::Kind::Existence,
                          GraphAxiom::Kind::Continuity})
            out.axioms.push_back({kind, f.name, g, f.arity, f.modulus});
    }
    return out;
}

std::string to_string(GraphAxiom::Kind kind) {
    switch (kind) {
        case GraphAxiom::Kind::Triangle:
            return "triangle";
        case GraphAxiom::Kind::Separation:
            return "separation";
        case GraphAxiom::Kind::Existence:
            return "existence";
        case GraphAxiom::Kind::Continuity:
            return "continuity";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Printing and parsing

SExpr to_sexpr(const Term& t) {
    if (t.is_variable() || t.args().empty()) return SExpr::make_atom(t.name());
    std::vector<SExpr> items{SExpr::make_atom(t.name())};
    for (const auto& a : t.args()) items.push_back(to_sexpr(a));
    return SExpr::make_list(std::move(items));
}

SExpr to_sexpr(const Formula& phi) {
    using K = Formula::Kind;
    auto atom = [](std::string s) { return SExpr::make_atom(std::move(s)); };
    switch (phi.kind()) {
        case K::One:
            return SExpr::make_list({atom("const"), atom("1")});
        case K::Atomic: {
            std::vector<SExpr> items{atom(phi.predicate())};
            for (const auto& t : phi.terms()) items.push_back(to_sexpr(t));
            return SExpr::make_list(std::move(items));
        }
        case K::Half:
            return SExpr::make_list({atom("half"), to_sexpr(phi.child())});
        case K::Add:
        case K::Sub: {
            SExpr l = to_sexpr(phi.lhs());
            SExpr r = phi.rhs().same_node(phi.lhs()) ? l : to_sexpr(phi.rhs());
            return SExpr::make_list({atom(phi.kind() == K::Add ? "add" : "sub"), std::move(l), std::move(r)});
        }
        case K::Sup:
        case K::Inf:
            return SExpr::make_list(
                {atom(phi.kind() == K::Sup ? "sup" : "inf"), atom(phi.variable()), to_sexpr(phi.body())});
    }
    return atom("?");
}

std::string to_string(const Term& t) { return to_string(to_sexpr(t)); }
std::string to_string(const Formula& phi) { return to_string(to_sexpr(phi)); }

namespace {

std::string at(const SExpr& e) { return " (at offset " + std::to_string(e.offset) + ")"; }

}  // namespace

Term parse_term(const SExpr& e, const Signature& sig) {
    if (e.is_atom()) {
        if (const Symbol* f = sig.function(e.atom)) {
            if (f->arity != 0)
                throw ArityError("function '" + e.atom + "' expects " + std::to_string(f->arity) + " arguments" + at(e));
            return Term::apply(e.atom, {});
        }
        if (!is_identifier(e.atom)) throw ParseError("expected a variable, found '" + e.atom + "'", e.offset);
        return Term::variable(e.atom);
    }
    if (e.items.empty() || !e.items.front().is_atom()) throw ParseError("expected (function args...)", e.offset);
    const std::string& name = e.items.front().atom;
    const Symbol* f = sig.function(name);
    if (!f) throw UnknownSymbol("unknown function symbol '" + name + "'" + at(e));
    if (e.items.size() - 1 != f->arity)
        throw ArityError("function '" + name + "' expects " + std::to_string(f->arity) + " arguments, got " +
                         std::to_string(e.items.size() - 1) + at(e));
    std::vector<Term> args;
    for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(parse_term(e.items[i], sig));
    return Term::apply(name, std::move(args));
}

Formula parse_formula(const SExpr& e, const Signature& sig) {
    if (e.is_atom()) throw ParseError("expected a formula, found atom '" + e.atom + "'", e.offset);
    if (e.items.empty() || !e.items.front().is_atom()) throw ParseError("expected (connective ...)", e.offset);
    const std::string& head = e.items.front().atom;
    const std::size_t argc = e.items.size() - 1;
    auto expect = [&](std::size_t n) {
        if (argc != n)
            throw ArityError("'" + head + "' expects " + std::to_string(n) + " arguments, got " +
                             std::to_string(argc) + at(e));
    };
    if (head == "const") {
        expect(1);
        if (!e.items[1].is_atom()) throw ParseError("expected a constant", e.items[1].offset);
        Rational q;
        try {
            q = parse_rational(e.items[1].atom);
        } catch (const ParseError&) {
            throw ParseError("malformed constant '" + e.items[1].atom + "'", e.items[1].offset);
        }
        if (q < 0 || !is_dyadic(q))
            throw ParseError("constants must be nonnegative dyadic rationals, got " + to_string(q), e.items[1].offset);
        return q == 1 ? Formula::one() : dyadic_const(q);
    }
    if (head == "half") {
        expect(1);
        return Formula::half(parse_formula(e.items[1], sig));
    }
    if (head == "add" || head == "sub") {
        expect(2);
        Formula l = parse_formula(e.items[1], sig);
        Formula r = parse_formula(e.items[2], sig);
        return head == "add" ? Formula::add(std::move(l), std::move(r)) : Formula::sub(std::move(l), std::move(r));
    }
    if (head == "sup" || head == "inf") {
        expect(2);
        if (!e.items[1].is_atom() || !is_identifier(e.items[1].atom) || sig.function(e.items[1].atom))
            throw ParseError("expected a variable after '" + head + "'", e.items[1].offset);
        Formula body = parse_formula(e.items[2], sig);
        return head == "sup" ? Formula::sup(e.items[1].atom, std::move(body))
                             : Formula::inf(e.items[1].atom, std::move(body));
    }
    const Symbol* p = sig.predicate(head);
    if (!p) {
        if (sig.function(head)) throw ParseError("function symbol '" + head + "' used as a formula", e.offset);
        throw UnknownSymbol("unknown predicate symbol '" + head + "'" + at(e));
    }
    expect(p->arity);
    std::vector<Term> terms;
    for (std::size_t i = 1; i < e.items.size(); ++i) terms.push_back(parse_term(e.items[i], sig));
    return Formula::atomic(head, std::move(terms));
}

Formula parse_formula(std::string_view text, const Signature& sig) { return parse_formula(read_one(text), sig); }

}  // namespace gauge

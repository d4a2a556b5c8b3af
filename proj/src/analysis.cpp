#include "gauge/analysis.hpp"

#include "gauge/error.hpp"

namespace gauge {

namespace {

using K = Formula::Kind;

bool binary_shared(const Formula& f) { return f.lhs().same_node(f.rhs()); }

bool is_sub_gauge(const Formula& f, std::string_view x) {
    return f.kind() == K::Sub && is_gauge_of_variable(f.rhs(), x) && is_bounded(f.lhs());
}

}  // namespace

bool is_bounded(const Formula& phi) {
    switch (phi.kind()) {
        case K::One:
            return true;
        case K::Atomic:
            return false;
        case K::Half:
            return is_bounded(phi.child());
        case K::Add:
            return is_bounded(phi.lhs()) && (binary_shared(phi) || is_bounded(phi.rhs()));
        case K::Sub:
            return is_bounded(phi.lhs());
        case K::Sup:
        case K::Inf:
            return is_bounded(phi.body());
    }
    return false;
}

Rational bound(const Formula& phi) {
    switch (phi.kind()) {
        case K::One:
            return 1;
        case K::Atomic:
            throw DomainError("atomic formulas are not bounded: " + to_string(phi));
        case K::Half:
            return bound(phi.child()) / 2;
        case K::Add: {
            Rational l = bound(phi.lhs());
            return binary_shared(phi) ? Rational(2 * l) : Rational(l + bound(phi.rhs()));
        }
        case K::Sub:
            return bound(phi.lhs());
        case K::Sup:
        case K::Inf:
            return bound(phi.body());
    }
    return 0;
}

bool eventually_constant(const Formula& phi, std::string_view x) {
    if (!occurs_free(phi, x)) return true;
    switch (phi.kind()) {
        case K::One:
        case K::Atomic:
            return false;
        case K::Half:
            return eventually_constant(phi.child(), x);
        case K::Add:
        case K::Sub:
            if (is_sub_gauge(phi, x)) return true;
            return eventually_constant(phi.lhs(), x) && (binary_shared(phi) || eventually_constant(phi.rhs(), x));
        case K::Sup:
        case K::Inf:
            return eventually_constant(phi.body(), x);
    }
    return false;
}

Rational threshold(const Formula& phi, std::string_view x) {
    if (!occurs_free(phi, x)) return 0;
    switch (phi.kind()) {
        case K::Half:
            return threshold(phi.child(), x);
        case K::Add:
        case K::Sub: {
            if (is_sub_gauge(phi, x)) return bound(phi.lhs());
            Rational l = threshold(phi.lhs(), x);
            if (binary_shared(phi)) return l;
            return std::max(l, threshold(phi.rhs(), x));
        }
        case K::Sup:
        case K::Inf:
            return threshold(phi.body(), x);
        default:
            break;
    }
    throw DomainError("formula is not eventually constant in '" + std::string(x) + "': " + to_string(phi));
}

Formula limit_formula(const Formula& phi, std::string_view x) {
    if (!occurs_free(phi, x)) return phi;
    switch (phi.kind()) {
        case K::Half:
            return Formula::half(limit_formula(phi.child(), x));
        case K::Add:
        case K::Sub: {
            if (is_sub_gauge(phi, x)) return zero_formula();
            Formula l = limit_formula(phi.lhs(), x);
            Formula r = binary_shared(phi) ? l : limit_formula(phi.rhs(), x);
            return phi.kind() == K::Add ? Formula::add(std::move(l), std::move(r))
                                        : Formula::sub(std::move(l), std::move(r));
        }
        case K::Sup:
        case K::Inf:
            return Formula::quantifier(phi.kind(), phi.variable(), limit_formula(phi.body(), x));
        default:
            break;
    }
    throw DomainError("formula is not eventually constant in '" + std::string(x) + "': " + to_string(phi));
}

namespace {

void check_well_formed(const Formula& phi, WellFormedReport& report) {
    switch (phi.kind()) {
        case K::One:
        case K::Atomic:
            return;
        case K::Half:
            check_well_formed(phi.child(), report);
            return;
        case K::Add:
        case K::Sub:
            check_well_formed(phi.lhs(), report);
            if (!binary_shared(phi)) check_well_formed(phi.rhs(), report);
            return;
        case K::Sup:
        case K::Inf:
            check_well_formed(phi.body(), report);
            if (!eventually_constant(phi.body(), phi.variable())) {
                report.ok = false;
                std::string text = to_string(phi);
                if (text.size() > 160) text = text.substr(0, 157) + "...";
                report.diagnostics.push_back("body of quantifier over '" + phi.variable() +
                                             "' is not eventually constant in it: " + text);
            }
            return;
    }
}

const Symbol& lookup_function(const Signature& sig, const std::string& name) {
    const Symbol* f = sig.function(name);
    if (!f) throw UnknownSymbol("unknown function symbol '" + name + "'");
    return *f;
}

Modulus apply_symbol(std::span<const Term> args, const Modulus& symbol_modulus, const Signature& sig) {
    Modulus outer = simplify(normalize(symbol_modulus));
    if (args.empty()) return outer;
    std::vector<Modulus> parts;
    parts.reserve(args.size());
    for (const auto& a : args) parts.push_back(synthesize_modulus(a, sig));
    Modulus inner = simplify(pair_modulus(parts));
    return simplify(compose_modulus(inner, outer));
}

Modulus synthesize(const Formula& phi, const Signature& sig) {
    switch (phi.kind()) {
        case K::One:
            return Modulus::min({Modulus::identity(), Modulus::constant(1)});
        case K::Atomic: {
            const Symbol* p = sig.predicate(phi.predicate());
            if (!p) throw UnknownSymbol("unknown predicate symbol '" + phi.predicate() + "'");
            return apply_symbol(phi.terms(), p->modulus, sig);
        }
        case K::Half:
            return simplify(compose_modulus(synthesize(phi.child(), sig), Modulus::standard(1)));
        case K::Add:
        case K::Sub: {
            Modulus l = synthesize(phi.lhs(), sig);
            Modulus r = binary_shared(phi) ? l : synthesize(phi.rhs(), sig);
            std::vector<Modulus> both{l, r};
            return simplify(compose_modulus(simplify(pair_modulus(both)), Modulus::standard(2)));
        }
        case K::Sup:
        case K::Inf: {
            const std::string& x = phi.variable();
            Modulus body = synthesize(phi.body(), sig);
            Modulus limit = synthesize(limit_formula(phi.body(), x), sig);
            return simplify(quantifier_modulus(body, limit, threshold(phi.body(), x)));
        }
    }
    return Modulus::identity();
}

}  // namespace

WellFormedReport well_formed(const Formula& phi) {
    WellFormedReport report;
    check_well_formed(phi, report);
    return report;
}

void require_well_formed(const Formula& phi) {
    auto report = well_formed(phi);
    if (!report.ok) throw IllFormed(report.diagnostics.front());
}

Modulus synthesize_modulus(const Term& t, const Signature& sig) {
    if (t.is_variable()) return Modulus::identity();
    return apply_symbol(t.args(), lookup_function(sig, t.name()).modulus, sig);
}

Modulus synthesize_modulus(const Formula& phi, const Signature& sig) {
    require_well_formed(phi);
    return synthesize(phi, sig);
}

AnalysisResult classify(const Formula& phi, const Signature& sig, const std::vector<std::string>& extra) {
    require_well_formed(phi);
    AnalysisResult out;
    out.bounded = is_bounded(phi);
    if (out.bounded) out.bound = bound(phi);
    std::set<std::string> vars = free_vars(phi);
    vars.insert(extra.begin(), extra.end());
    for (const auto& v : vars) {
        VariableReport r;
        r.eventually_constant = eventually_constant(phi, v);
        if (r.eventually_constant) r.threshold = threshold(phi, v);
        out.variables.emplace(v, std::move(r));
    }
    out.modulus = synthesize(phi, sig);
    return out;
}

}  // namespace gauge

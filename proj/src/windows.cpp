#include "gauge/analysis.hpp"
#include "gauge/error.hpp"
#include "gauge/structure.hpp"

namespace gauge {

std::pair<unsigned, Rational> dyadic_window(const Rational& r, const Rational& r_prime) {
    if (r <= 0 || r >= r_prime) throw DomainError("dyadic window needs 0 < r < r'");
    Integer scale = 1;
    for (unsigned m = 0;; ++m) {
        Integer ell = ceil(Rational(r * scale));
        if (Rational(ell + 1) <= r_prime * scale) {
            Rational s(ell, scale);
            s.canonicalize();
            return {m, s};
        }
        scale *= 2;
    }
}

Integer window_multiplier(const Formula& phi) {
    Rational b = is_bounded(phi) ? bound(phi) : Rational(1);
    Integer k = ceil(b);
    return k < 1 ? Integer(1) : k;
}

Formula build_down(const Formula& phi_in, const std::string& x, const Rational& r, const Rational& r_prime) {
    auto [m, s] = dyadic_window(r, r_prime);
    Formula phi = is_bounded(phi_in) ? phi_in : truncate_at(phi_in, 1);
    Integer k = window_multiplier(phi);
    if (!k.fits_uint_p() || k > 4096) throw DomainError("window multiplier too large: " + k.get_str());

    // 2^-m φ ∸ k(ν(x) ∸ s), one (ψ + (ν(x) ∧ s)) ∸ ν(x) step per unit of k, then doubled m times.
    Formula nu = gauge_of(Term::variable(x));
    Formula s_const = dyadic_const(s);
    Formula capped = Formula::sub(s_const, Formula::sub(s_const, nu));
    Formula psi = phi;
    for (unsigned i = 0; i < m; ++i) psi = Formula::half(psi);
    for (unsigned long i = 0; i < k.get_ui(); ++i) psi = Formula::sub(Formula::add(psi, capped), nu);
    for (unsigned i = 0; i < m; ++i) psi = Formula::add(psi, psi);
    // φ↓ <= φ <= k, so capping at k keeps the value and the syntactic bound at k.
    return truncate_at(psi, Rational(k));
}

Formula build_up(const Formula& phi_in, const std::string& x, const Rational& r, const Rational& r_prime) {
    Formula phi = is_bounded(phi_in) ? phi_in : truncate_at(phi_in, 1);
    Formula k = dyadic_const(window_multiplier(phi), 0);
    return Formula::sub(k, build_down(Formula::sub(k, phi), x, r, r_prime));
}

Formula sup_window(const Formula& phi, const std::string& x, const Rational& r, const Rational& r_prime) {
    return Formula::sup(x, build_down(phi, x, r, r_prime));
}

Formula inf_window(const Formula& phi, const std::string& x, const Rational& r, const Rational& r_prime) {
    return Formula::inf(x, build_up(phi, x, r, r_prime));
}

// ---------------------------------------------------------------------------
// Prenex form

namespace {

using K = Formula::Kind;

struct Prefixed {
    std::vector<std::pair<K, std::string>> prefix;  // outermost first
    Formula matrix;
};

Formula wrap(const std::vector<std::pair<K, std::string>>& prefix, Formula matrix) {
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) matrix = Formula::quantifier(it->first, it->second, matrix);
    return matrix;
}

K dual(K k) { return k == K::Sup ? K::Inf : K::Sup; }

// Bound variables are pairwise distinct and distinct from free ones, so every pull is sound.
Prefixed pull(const Formula& f) {
    if (!has_quantifier(f)) return {{}, f};
    switch (f.kind()) {
        case K::Half: {
            Prefixed p = pull(f.child());
            p.matrix = Formula::half(p.matrix);
            return p;
        }
        case K::Add:
        case K::Sub: {
            Prefixed l = pull(f.lhs());
            Prefixed r = pull(f.rhs());
            Prefixed out{l.prefix,
                         f.kind() == K::Add ? Formula::add(l.matrix, r.matrix) : Formula::sub(l.matrix, r.matrix)};
            for (const auto& [q, v] : r.prefix) out.prefix.emplace_back(f.kind() == K::Sub ? dual(q) : q, v);
            return out;
        }
        case K::Sup:
        case K::Inf: {
            Prefixed p = pull(f.body());
            p.prefix.insert(p.prefix.begin(), {f.kind(), f.variable()});
            return p;
        }
        default:
            return {{}, f};
    }
}

}  // namespace

Formula prenex(const Formula& phi) {
    require_well_formed(phi);
    Prefixed p = pull(rename_bound(phi));
    return wrap(p.prefix, p.matrix);
}

bool is_prenex(const Formula& phi) {
    const Formula* f = &phi;
    while (f->is_quantifier()) f = &f->body();
    return !has_quantifier(*f);
}

}  // namespace gauge

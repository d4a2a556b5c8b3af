#include "gauge/modulus.hpp"

#include "gauge/error.hpp"

#include <algorithm>

namespace gauge {

struct Modulus::Node {
    Kind kind = Kind::Identity;
    Rational coefficient;
    unsigned arity = 0;
    std::vector<Modulus> children;
    ExtendedValue slope;
    ExtendedValue cap;
};

namespace {

void require_positive(const Rational& c, const char* what) {
    if (c <= 0) throw DomainError(std::string(what) + " coefficient must be positive, got " + to_string(c));
}

}  // namespace

Modulus Modulus::identity() {
    static const Modulus id = [] {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Identity;
        n->slope = ExtendedValue(1L);
        n->cap = ExtendedValue::infinity();
        return Modulus(std::move(n));
    }();
    return id;
}

Modulus Modulus::constant(Rational c) {
    require_positive(c, "constant");
    c.canonicalize();
    auto n = std::make_shared<Node>();
    n->kind = Kind::Constant;
    n->slope = ExtendedValue::infinity();
    n->cap = ExtendedValue(c);
    n->coefficient = std::move(c);
    return Modulus(std::move(n));
}

Modulus Modulus::scale(Rational c, Modulus child) {
    require_positive(c, "scale");
    c.canonicalize();
    auto n = std::make_shared<Node>();
    n->kind = Kind::Scale;
    n->slope = ExtendedValue(c) * child.slope();
    n->cap = ExtendedValue(c) * child.cap();
    n->coefficient = std::move(c);
    n->children.push_back(std::move(child));
    return Modulus(std::move(n));
}

Modulus Modulus::min(std::vector<Modulus> children) {
    if (children.empty()) throw DomainError("min of an empty list of moduli");
    std::vector<Modulus> flat;
    for (auto& c : children) {
        if (c.kind() == Kind::Min) {
            for (const auto& g : c.children()) flat.push_back(g);
        } else {
            flat.push_back(std::move(c));
        }
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Min;
    n->slope = flat.front().slope();
    n->cap = flat.front().cap();
    for (const auto& c : flat) {
        n->slope = gauge::min(n->slope, c.slope());
        n->cap = gauge::min(n->cap, c.cap());
    }
    n->children = std::move(flat);
    return Modulus(std::move(n));
}

Modulus Modulus::compose(Modulus outer, Modulus inner) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Compose;
    // min(a_o * min(a_i e, c_i), c_o) = min(a_o a_i e, min(a_o c_i, c_o))
    n->slope = outer.slope() * inner.slope();
    n->cap = gauge::min(outer.slope() * inner.cap(), outer.cap());
    n->children.push_back(std::move(outer));
    n->children.push_back(std::move(inner));
    return Modulus(std::move(n));
}

Modulus Modulus::clamp(Rational c, Modulus child) {
    require_positive(c, "clamp");
    c.canonicalize();
    auto n = std::make_shared<Node>();
    n->kind = Kind::Clamp;
    n->slope = child.slope();
    n->cap = gauge::min(child.cap(), ExtendedValue(c));
    n->coefficient = std::move(c);
    n->children.push_back(std::move(child));
    return Modulus(std::move(n));
}

Modulus Modulus::standard(unsigned arity) {
    if (arity == 0) throw DomainError("standard modulus needs arity >= 1");
    auto n = std::make_shared<Node>();
    n->kind = Kind::StandardArity;
    n->arity = arity;
    n->slope = ExtendedValue(Rational(1, arity));
    n->cap = ExtendedValue::infinity();
    return Modulus(std::move(n));
}

Modulus Modulus::from_closed_form(const ExtendedValue& slope, const ExtendedValue& cap) {
    if (slope.is_infinite() && cap.is_infinite()) throw DomainError("modulus with infinite slope and cap");
    if (slope.is_infinite()) return constant(cap.value());
    Modulus linear = identity();
    const Rational& a = slope.value();
    if (a != 1) {
        if (a.get_num() == 1 && a.get_den().fits_uint_p())
            linear = standard(static_cast<unsigned>(a.get_den().get_ui()));
        else
            linear = scale(a, identity());
    }
    if (cap.is_infinite()) return linear;
    return min({linear, constant(cap.value())});
}

Modulus::Kind Modulus::kind() const { return node_->kind; }
const Rational& Modulus::coefficient() const { return node_->coefficient; }
unsigned Modulus::arity() const { return node_->arity; }
std::span<const Modulus> Modulus::children() const { return node_->children; }
const ExtendedValue& Modulus::slope() const { return node_->slope; }
const ExtendedValue& Modulus::cap() const { return node_->cap; }

Rational Modulus::operator()(const Rational& eps) const {
    if (slope().is_infinite()) return cap().value();
    Rational v = slope().value() * eps;
    if (cap().is_finite() && cap().value() < v) return cap().value();
    return v;
}

bool operator==(const Modulus& a, const Modulus& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case Modulus::Kind::Identity:
            return true;
        case Modulus::Kind::StandardArity:
            return a.arity() == b.arity();
        case Modulus::Kind::Constant:
            return a.coefficient() == b.coefficient();
        default:
            break;
    }
    if (a.coefficient() != b.coefficient()) return false;
    auto ca = a.children();
    auto cb = b.children();
    return std::equal(ca.begin(), ca.end(), cb.begin(), cb.end());
}

Rational eval_modulus(const Modulus& m, const Rational& eps) {
    if (eps <= 0) throw DomainError("moduli are evaluated at positive arguments, got " + to_string(eps));
    return m(eps);
}

Rational eval_by_tree(const Modulus& m, const Rational& eps) {
    using K = Modulus::Kind;
    switch (m.kind()) {
        case K::Identity:
            return eps;
        case K::Constant:
            return m.coefficient();
        case K::StandardArity:
            return eps / m.arity();
        case K::Scale:
            return m.coefficient() * eval_by_tree(m.children()[0], eps);
        case K::Clamp:
            return std::min(m.coefficient(), eval_by_tree(m.children()[0], eps));
        case K::Compose:
            return eval_by_tree(m.children()[0], eval_by_tree(m.children()[1], eps));
        case K::Min: {
            Rational best = eval_by_tree(m.children()[0], eps);
            for (const auto& c : m.children().subspan(1)) best = std::min(best, eval_by_tree(c, eps));
            return best;
        }
    }
    return eps;
}

ExtendedValue sup_modulus(const Modulus& m) { return m.cap(); }

Modulus normalize(const Modulus& m) {
    if (m.kind() == Modulus::Kind::Identity) return m;
    return Modulus::min({Modulus::identity(), m});
}

Modulus pair_modulus(std::span<const Modulus> moduli) {
    if (moduli.empty()) throw DomainError("pair_modulus needs at least one modulus");
    std::vector<Modulus> distinct;
    for (const auto& m : moduli) {
        bool seen = std::any_of(distinct.begin(), distinct.end(), [&](const Modulus& d) { return d.same_node(m); });
        if (!seen) distinct.push_back(m);
    }
    if (distinct.size() == 1) return distinct.front();
    return Modulus::min(std::move(distinct));
}

Modulus compose_modulus(const Modulus& inner_f, const Modulus& outer_g) {
    if (!inner_f.below_identity() || !outer_g.below_identity())
        throw DomainError("compose_modulus requires both moduli to lie below the identity");
    using K = Modulus::Kind;
    bool f_id = inner_f.kind() == K::Identity;
    bool g_id = outer_g.kind() == K::Identity;
    if (f_id && g_id) return Modulus::identity();
    if (f_id) return outer_g;
    if (g_id) return Modulus::compose(inner_f, inner_f);
    return Modulus::compose(inner_f, Modulus::compose(outer_g, inner_f));
}

Modulus quantifier_modulus(const Modulus& body_f, const Modulus& limit_g, const Rational& threshold) {
    if (threshold < 0) throw DomainError("constancy threshold must be nonnegative");
    if (threshold == 0) return Modulus::min({limit_g, body_f});
    Modulus clamped = Modulus::compose(body_f, Modulus::clamp(1 / threshold, Modulus::identity()));
    return Modulus::min({limit_g, std::move(clamped)});
}

Modulus simplify(const Modulus& m) { return Modulus::from_closed_form(m.slope(), m.cap()); }

SExpr to_sexpr(const Modulus& m) {
    using K = Modulus::Kind;
    auto atom = [](std::string s) { return SExpr::make_atom(std::move(s)); };
    switch (m.kind()) {
        case K::Identity:
            return atom("id");
        case K::Constant:
            return SExpr::make_list({atom("const"), atom(to_string(m.coefficient()))});
        case K::StandardArity:
            return SExpr::make_list({atom("std"), atom(std::to_string(m.arity()))});
        case K::Scale:
            return SExpr::make_list({atom("scale"), atom(to_string(m.coefficient())), to_sexpr(m.children()[0])});
        case K::Clamp:
            return SExpr::make_list({atom("clamp"), atom(to_string(m.coefficient())), to_sexpr(m.children()[0])});
        case K::Compose:
            return SExpr::make_list({atom("compose"), to_sexpr(m.children()[0]), to_sexpr(m.children()[1])});
        case K::Min: {
            std::vector<SExpr> items{atom("min")};
            for (const auto& c : m.children()) items.push_back(to_sexpr(c));
            return SExpr::make_list(std::move(items));
        }
    }
    return atom("id");
}

std::string to_string(const Modulus& m) { return to_string(to_sexpr(m)); }

Modulus parse_modulus(const SExpr& e) {
    auto fail = [&](const std::string& msg) -> Modulus { throw ParseError("modulus: " + msg, e.offset); };
    if (e.is_atom()) {
        if (e.atom == "id") return Modulus::identity();
        return fail("unknown modulus '" + e.atom + "'");
    }
    if (e.items.empty() || !e.items.front().is_atom()) return fail("expected (head ...)");
    const std::string& head = e.items.front().atom;
    auto rational_at = [&](std::size_t i) {
        if (i >= e.items.size() || !e.items[i].is_atom()) throw ParseError("modulus: expected a rational", e.offset);
        try {
            return parse_rational(e.items[i].atom);
        } catch (const ParseError&) {
            throw ParseError("modulus: malformed rational '" + e.items[i].atom + "'", e.items[i].offset);
        }
    };
    auto expect_size = [&](std::size_t n) {
        if (e.items.size() != n) throw ParseError("modulus: wrong number of arguments to '" + head + "'", e.offset);
    };
    try {
        if (head == "const") {
            expect_size(2);
            return Modulus::constant(rational_at(1));
        }
        if (head == "scale") {
            expect_size(3);
            return Modulus::scale(rational_at(1), parse_modulus(e.items[2]));
        }
        if (head == "clamp") {
            expect_size(3);
            return Modulus::clamp(rational_at(1), parse_modulus(e.items[2]));
        }
        if (head == "compose") {
            expect_size(3);
            return Modulus::compose(parse_modulus(e.items[1]), parse_modulus(e.items[2]));
        }
        if (head == "std") {
            expect_size(2);
            Rational n = rational_at(1);
            if (n.get_den() != 1 || n < 1 || !n.get_num().fits_uint_p())
                return fail("std needs a positive integer arity");
            return Modulus::standard(static_cast<unsigned>(n.get_num().get_ui()));
        }
        if (head == "min") {
            if (e.items.size() < 2) return fail("min needs at least one argument");
            std::vector<Modulus> children;
            for (std::size_t i = 1; i < e.items.size(); ++i) children.push_back(parse_modulus(e.items[i]));
            return Modulus::min(std::move(children));
        }
    } catch (const DomainError& err) {
        throw ParseError(std::string("modulus: ") + err.what(), e.offset);
    }
    return fail("unknown modulus head '" + head + "'");
}

Modulus parse_modulus(std::string_view text) { return parse_modulus(read_one(text)); }

// ---------------------------------------------------------------------------
// (UC_ν) checks

FiniteMap::FiniteMap(std::vector<Rational> domain_gauge, std::vector<std::vector<Rational>> domain_distance,
                     std::vector<Rational> image_gauge, std::vector<std::vector<Rational>> image_distance)
    : domain_gauge_(std::move(domain_gauge)),
      domain_distance_(std::move(domain_distance)),
      image_gauge_(std::move(image_gauge)),
      image_distance_(std::move(image_distance)) {
    const std::size_t n = domain_gauge_.size();
    auto square = [n](const std::vector<std::vector<Rational>>& t) {
        if (t.size() != n) return false;
        for (const auto& row : t)
            if (row.size() != n) return false;
        return true;
    };
    if (image_gauge_.size() != n || !square(domain_distance_) || !square(image_distance_))
        throw DomainError("malformed finite map: table sizes disagree");
    auto nonneg = [](const std::vector<Rational>& v) {
        return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q >= 0; });
    };
    if (!nonneg(domain_gauge_) || !nonneg(image_gauge_)) throw DomainError("malformed finite map: negative gauge");
    for (std::size_t i = 0; i < n; ++i)
        if (!nonneg(domain_distance_[i]) || !nonneg(image_distance_[i]))
            throw DomainError("malformed finite map: negative distance");
}

FiniteMap FiniteMap::real_valued(std::vector<Rational> domain_gauge, std::vector<std::vector<Rational>> domain_distance,
                                 const std::vector<Rational>& values) {
    const std::size_t n = values.size();
    std::vector<std::vector<Rational>> image(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) image[i][j] = abs(values[i] - values[j]);
    return FiniteMap(std::move(domain_gauge), std::move(domain_distance), values, std::move(image));
}

namespace {

// Some eps in (0, bound) with δ(eps) > floor; bound may be infinite.
std::optional<Rational> find_witness(const Modulus& delta, const ExtendedValue& bound, const Rational& floor) {
    if (bound.is_finite()) {
        Rational step = bound.value() / 2;
        for (int t = 0; t < 256; ++t) {
            Rational eps = bound.value() - step;
            if (delta(eps) > floor) return eps;
            step /= 2;
        }
        return std::nullopt;
    }
    Rational eps = 1;
    for (int t = 0; t < 256; ++t) {
        if (delta(eps) > floor) return eps;
        eps *= 2;
    }
    return std::nullopt;
}

}  // namespace

CheckReport respects_check(const FiniteMapView& map, const Modulus& delta, std::size_t max_violations) {
    CheckReport report;
    const std::size_t n = map.size();
    for (std::size_t i = 0; i < n; ++i) {
        Rational gauge_i = map.domain_gauge(i);
        Rational image_gauge_i = map.image_gauge(i);
        for (std::size_t j = 0; j < n; ++j) {
            Rational g = std::max(gauge_i, map.domain_gauge(j));
            ExtendedValue eps_hat = ExtendedValue(g).reciprocal();
            Rational dx = map.domain_distance(i, j);

            // Distance clause: some eps < min(d_Y, eps_hat) with δ(eps) > d_X.
            ExtendedValue eps_star = gauge::min(ExtendedValue(map.image_distance(i, j)), eps_hat);
            if (eps_star > ExtendedValue(0L) && dx < delta(eps_star.value())) {
                report.pass = false;
                report.violations.push_back({i, j, Clause::Distance, find_witness(delta, eps_star, dx)});
                if (report.violations.size() >= max_violations) return report;
                continue;
            }

            // Gauge clause: some eps < eps_hat with δ(eps) > max(d_X, 1/ν_Y(f x)).
            if (image_gauge_i > 0) {
                Rational floor = std::max(dx, Rational(1 / image_gauge_i));
                ExtendedValue sup_below = eps_hat.is_finite() ? ExtendedValue(delta(eps_hat.value())) : sup_modulus(delta);
                if (sup_below > ExtendedValue(floor)) {
                    report.pass = false;
                    report.violations.push_back({i, j, Clause::Gauge, find_witness(delta, eps_hat, floor)});
                    if (report.violations.size() >= max_violations) return report;
                }
            }
        }
    }
    return report;
}

CheckReport respects_check_grid(const FiniteMapView& map, const Modulus& delta, std::span<const Rational> grid,
                                std::size_t max_violations) {
    CheckReport report;
    const std::size_t n = map.size();
    for (const Rational& eps : grid) {
        if (eps <= 0) throw DomainError("grid points must be positive");
        Rational d = eval_by_tree(delta, eps);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                Rational g = std::max(map.domain_gauge(i), map.domain_gauge(j));
                if (g * eps >= 1) continue;
                if (!(map.domain_distance(i, j) < d)) continue;
                if (map.image_distance(i, j) > eps) {
                    report.pass = false;
                    report.violations.push_back({i, j, Clause::Distance, eps});
                } else if (map.image_gauge(i) * d > 1) {
                    report.pass = false;
                    report.violations.push_back({i, j, Clause::Gauge, eps});
                } else {
                    continue;
                }
                if (report.violations.size() >= max_violations) return report;
            }
        }
    }
    return report;
}

Modulus fit_modulus(const FiniteMapView& map) {
    const std::size_t n = map.size();
    std::optional<Rational> slope;
    Rational top = 0;
    for (std::size_t i = 0; i < n; ++i) {
        top = std::max(top, map.image_gauge(i));
        for (std::size_t j = i + 1; j < n; ++j) {
            Rational dy = map.image_distance(i, j);
            if (dy == 0) continue;
            Rational dx = map.domain_distance(i, j);
            if (dx == 0) throw DomainError("cannot fit a modulus: points at distance 0 have distinct images");
            Rational ratio = dx / dy;
            if (!slope || ratio < *slope) slope = ratio;
        }
    }
    ExtendedValue a = slope ? ExtendedValue(*slope) : ExtendedValue(1L);
    ExtendedValue cap = top > 0 ? ExtendedValue(Rational(1 / top)) : ExtendedValue::infinity();
    return Modulus::from_closed_form(a, cap);
}

std::string to_string(Clause c) { return c == Clause::Distance ? "distance" : "gauge"; }

}  // namespace gauge

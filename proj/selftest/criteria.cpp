#include "criteria.hpp"

#include "corpus.hpp"
#include "gauge/analysis.hpp"
#include "gauge/banach_mazur.hpp"
#include "gauge/embound.hpp"
#include "gauge/error.hpp"
#include "gauge/theories.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace gauge::selftest {

namespace {

// Pinned tolerances for the floating-point criterion.
constexpr double kNormTolerance = 1e-9;
constexpr double kOracleTolerance = 1e-6;

// Atomless-scheme value on the one-atom algebra of weight 1 at n = 2, ε = 1/2.
const Rational kAtomlessDefect(1, 2);

Rational frac(long p, long q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
}

struct Sizes {
    std::size_t formulas, structures, tables, draws, algebra_length, graph_structures, bm_trials, oracle_instances;
};

Sizes sizes(const Options& o) {
    if (o.quick) return {100, 20, 200, 100, 2, 5, 100, 10};
    return {500, 100, 1000, 500, 3, 20, 1000, 50};
}

std::vector<GaugedStructure> corpus_structures(Rng& rng, std::size_t count, bool with_functions = true) {
    std::vector<GaugedStructure> out;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(random_structure(rng, std::uniform_int_distribution<std::size_t>(1, 6)(rng), with_functions));
    return out;
}

std::vector<std::string> free_list(const Formula& phi) {
    auto fv = free_vars(phi);
    return {fv.begin(), fv.end()};
}

Assignment with(Assignment sigma, const std::string& x, Point b) {
    sigma.emplace_back(x, b);
    return sigma;
}

std::string summary(std::initializer_list<std::pair<const char*, std::size_t>> counts) {
    std::ostringstream out;
    bool first = true;
    for (const auto& [name, value] : counts) {
        out << (first ? "" : ", ") << value << " " << name;
        first = false;
    }
    return out.str();
}

CriterionResult result(int id, std::string name, std::size_t failures, const std::string& detail,
                       const std::string& first_failure) {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    r.pass = failures == 0;
    r.detail = detail + ", " + std::to_string(failures) + " failures";
    if (!first_failure.empty()) r.detail += "; first: " + first_failure;
    return r;
}

struct Failures {
    std::size_t count = 0;
    std::string first;
    void add(const std::string& what) {
        if (count++ == 0) first = what;
    }
};

// ---------------------------------------------------------------------------

CriterionResult bound_soundness(const Options& o) {
    Rng rng(o.seed + 1);
    const Sizes s = sizes(o);
    auto ms = corpus_structures(rng, s.structures);
    const std::vector<std::string> vars{"x", "y", "z"};
    Failures fail;
    std::size_t evaluations = 0;
    for (std::size_t i = 0; i < s.formulas; ++i) {
        Formula phi = random_bounded_formula(rng, vars, 3);
        const Rational b = bound(phi);
        for (std::size_t j = 0; j < 3; ++j) {
            const GaugedStructure& m = ms[(i + 37 * j) % ms.size()];
            for (const auto& sigma : assignments(rng, m, free_list(phi), 12)) {
                Rational v = eval_formula(m, phi, sigma);
                ++evaluations;
                if (v > b || v < 0) fail.add(to_string(phi) + " = " + to_string(v) + " > " + to_string(b));
            }
        }
    }
    return result(1, "bound soundness", fail.count,
                  summary({{"formulas", s.formulas}, {"structures", ms.size()}, {"evaluations", evaluations}}), fail.first);
}

CriterionResult constancy_soundness(const Options& o) {
    Rng rng(o.seed + 2);
    const Sizes s = sizes(o);
    auto ms = corpus_structures(rng, s.structures);
    const std::vector<std::string> vars{"x", "y", "z"};
    Failures fail;
    std::size_t checks = 0;
    for (std::size_t i = 0; i < s.formulas; ++i) {
        Formula phi = random_formula(rng, vars, 3);
        for (const auto& x : vars) {
            if (!eventually_constant(phi, x)) continue;
            const Rational c = threshold(phi, x);
            Formula lim = limit_formula(phi, x);
            std::vector<std::string> others;
            for (const auto& v : free_list(phi))
                if (v != x) others.push_back(v);
            for (std::size_t j = 0; j < 3; ++j) {
                const GaugedStructure& m = ms[(i + 11 * j) % ms.size()];
                for (Point b = 0; b < m.size(); ++b) {
                    if (m.gauge(b) < c) continue;
                    for (const auto& sigma : assignments(rng, m, others, 6)) {
                        ++checks;
                        Rational at_b = eval_formula(m, phi, with(sigma, x, b));
                        Rational at_inf = eval_formula(m, lim, sigma);
                        if (at_b != at_inf)
                            fail.add(to_string(phi) + " at " + x + " = " + m.name(b) + ": " + to_string(at_b) + " vs " +
                                     to_string(at_inf));
                    }
                }
            }
        }
    }
    return result(2, "constancy soundness", fail.count, summary({{"formulas", s.formulas}, {"checks", checks}}),
                  fail.first);
}

// Breakpoints of both clauses of the implication are the only places its truth value can change,
// so testing each breakpoint and each gap between consecutive ones decides every ε.
std::vector<Rational> critical_grid(const FiniteMapView& map, const Modulus& delta) {
    std::set<Rational> cuts;
    const Rational a = delta.slope().is_finite() ? delta.slope().value() : Rational(1);
    auto add = [&](const Rational& q) {
        if (q > 0) cuts.insert(q);
    };
    for (std::size_t i = 0; i < map.size(); ++i) {
        const Rational gx = map.domain_gauge(i), gy = map.image_gauge(i);
        if (gx > 0) add(1 / gx);
        if (gy > 0) add(1 / (a * gy));
        for (std::size_t j = 0; j < map.size(); ++j) {
            add(map.domain_distance(i, j) / a);
            add(map.image_distance(i, j));
        }
    }
    if (delta.cap().is_finite()) add(delta.cap().value() / a);
    std::vector<Rational> grid;
    Rational prev = 0;
    for (const auto& c : cuts) {
        grid.push_back((prev + c) / 2);
        grid.push_back(c);
        prev = c;
    }
    grid.push_back(prev + 1);
    return grid;
}

CriterionResult modulus_soundness(const Options& o) {
    Rng rng(o.seed + 3);
    const Sizes s = sizes(o);
    auto ms = corpus_structures(rng, s.structures / 2);
    const std::vector<std::string> vars{"x", "y"};
    Failures fail;
    std::size_t maps = 0;
    for (std::size_t i = 0; i < s.formulas / 2; ++i) {
        Formula phi = random_formula(rng, vars, 3);
        const GaugedStructure& m = ms[i % ms.size()];
        Modulus delta = synthesize_modulus(phi, m.signature());
        std::vector<std::string> fv = free_list(phi);
        std::vector<Assignment> tuples = assignments(rng, m, fv, 1000);
        std::vector<Rational> gauges, values;
        std::vector<std::vector<Rational>> dist(tuples.size(), std::vector<Rational>(tuples.size(), 0));
        for (std::size_t a = 0; a < tuples.size(); ++a) {
            Rational g = 0;
            for (const auto& [v, p] : tuples[a]) g = std::max(g, m.gauge(p));
            gauges.push_back(g);
            values.push_back(eval_formula(m, phi, tuples[a]));
            for (std::size_t b = 0; b < tuples.size(); ++b) {
                Rational d = 0;
                for (std::size_t k = 0; k < fv.size(); ++k) d = std::max(d, m.distance(tuples[a][k].second, tuples[b][k].second));
                dist[a][b] = d;
            }
        }
        ++maps;
        CheckReport r = respects_check(FiniteMap::real_valued(gauges, dist, values), delta);
        if (!r.pass) fail.add(to_string(phi) + " against " + to_string(delta));
    }

    std::size_t agreements = 0;
    const std::vector<Rational> slopes{Rational(1, 2), Rational(1), Rational(2)};
    const std::vector<Rational> caps{Rational(1, 4), Rational(1, 2), Rational(1), Rational(2)};
    for (std::size_t t = 0; t < s.tables; ++t) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 5)(rng);
        std::set<long> pos;
        while (pos.size() < n) pos.insert(std::uniform_int_distribution<long>(-8, 8)(rng));
        std::vector<long> p(pos.begin(), pos.end());
        const long centre = std::uniform_int_distribution<long>(-8, 8)(rng);
        const Rational offset = frac(std::uniform_int_distribution<long>(0, 4)(rng), 4);
        std::vector<Rational> gauges, values;
        std::vector<std::vector<Rational>> dist(n, std::vector<Rational>(n));
        for (std::size_t i = 0; i < n; ++i) {
            gauges.push_back(frac(std::labs(p[i] - centre), 4) + offset);
            values.push_back(frac(std::uniform_int_distribution<long>(0, 12)(rng), 4));
            for (std::size_t j = 0; j < n; ++j) dist[i][j] = frac(std::labs(p[i] - p[j]), 4);
        }
        const Rational a = slopes[std::uniform_int_distribution<std::size_t>(0, 2)(rng)];
        Modulus delta = std::uniform_int_distribution<int>(0, 4)(rng) == 0
                            ? Modulus::scale(a, Modulus::identity())
                            : Modulus::from_closed_form(a, caps[std::uniform_int_distribution<std::size_t>(0, 3)(rng)]);
        FiniteMap map = FiniteMap::real_valued(gauges, dist, values);
        std::vector<Rational> grid = critical_grid(map, delta);
        bool closed = respects_check(map, delta).pass;
        bool sampled = respects_check_grid(map, delta, grid).pass;
        ++agreements;
        if (closed != sampled) fail.add("closed form and grid disagree on a table of " + std::to_string(n) + " points");
    }
    return result(3, "modulus soundness", fail.count, summary({{"formula maps", maps}, {"random tables", agreements}}),
                  fail.first);
}

CriterionResult window_sandwich(const Options& o) {
    Rng rng(o.seed + 4);
    const Sizes s = sizes(o);
    auto ms = corpus_structures(rng, s.structures);
    const std::vector<std::string> vars{"x", "y"};
    const std::vector<Rational> gaps{Rational(1, 8), Rational(1, 4), Rational(1, 2), Rational(1), Rational(3, 2)};
    Failures fail;
    std::size_t boundary = 0;
    for (std::size_t i = 0; i < s.draws; ++i) {
        const GaugedStructure& m = ms[i % ms.size()];
        Formula phi = random_formula(rng, vars, 2);
        Formula capped = is_bounded(phi) ? phi : truncate_at(phi, 1);
        Rational r = std::uniform_int_distribution<int>(0, 1)(rng) == 0
                         ? m.gauge(std::uniform_int_distribution<Point>(0, m.size() - 1)(rng))
                         : random_rational(rng, 24, 4);
        if (r == 0) r = Rational(1, 3);
        const Rational r2 = r + gaps[std::uniform_int_distribution<std::size_t>(0, gaps.size() - 1)(rng)];
        const Rational k = Rational(window_multiplier(capped));
        Assignment sigma;
        for (const auto& v : free_list(phi))
            if (v != "x") sigma.emplace_back(v, std::uniform_int_distribution<Point>(0, m.size() - 1)(rng));

        Formula down = build_down(phi, "x", r, r2);
        Formula up = build_up(phi, "x", r, r2);
        std::optional<Rational> sup_in, sup_out, inf_in, inf_out;
        for (Point b = 0; b < m.size(); ++b) {
            const Rational v = eval_formula(m, capped, with(sigma, "x", b));
            const Rational g = m.gauge(b);
            if (g <= r) {
                sup_in = sup_in ? std::max(*sup_in, v) : v;
                inf_in = inf_in ? std::min(*inf_in, v) : v;
            }
            if (g < r2) {
                sup_out = sup_out ? std::max(*sup_out, v) : v;
                inf_out = inf_out ? std::min(*inf_out, v) : v;
            }
            const Rational dv = eval_formula(m, down, with(sigma, "x", b));
            const Rational uv = eval_formula(m, up, with(sigma, "x", b));
            if (g <= r) {
                ++boundary;
                if (dv != v || uv != v) fail.add("window changes " + to_string(phi) + " inside the radius");
            }
            if (g >= r2) {
                ++boundary;
                if (dv != 0 || uv != k) fail.add("window does not vanish outside the radius for " + to_string(phi));
            }
        }
        const Rational w_sup = eval_formula(m, sup_window(phi, "x", r, r2), sigma);
        const Rational w_inf = eval_formula(m, inf_window(phi, "x", r, r2), sigma);
        const Rational lo_sup = sup_in.value_or(0), hi_sup = sup_out.value_or(0);
        const Rational lo_inf = inf_out.value_or(k), hi_inf = inf_in.value_or(k);
        if (w_sup < lo_sup || w_sup > hi_sup)
            fail.add("sup window " + to_string(w_sup) + " outside [" + to_string(lo_sup) + ", " + to_string(hi_sup) + "]");
        if (w_inf < lo_inf || w_inf > hi_inf)
            fail.add("inf window " + to_string(w_inf) + " outside [" + to_string(lo_inf) + ", " + to_string(hi_inf) + "]");
    }
    return result(4, "restricted-quantifier sandwich", fail.count,
                  summary({{"draws", s.draws}, {"boundary points", boundary}}), fail.first);
}

CriterionResult prenex_equivalence(const Options& o) {
    Rng rng(o.seed + 5);
    const Sizes s = sizes(o);
    auto ms = corpus_structures(rng, s.structures);
    const std::vector<std::string> vars{"x", "y", "z"};
    Failures fail;
    std::size_t evaluations = 0;
    for (std::size_t i = 0; i < s.formulas; ++i) {
        Formula phi = random_formula(rng, vars, 3);
        Formula p = prenex(phi);
        if (!is_prenex(p)) fail.add("not prenex: " + to_string(p));
        if (!well_formed(p).ok) fail.add("ill-formed prenex form of " + to_string(phi));
        for (std::size_t j = 0; j < 2; ++j) {
            const GaugedStructure& m = ms[(i + 53 * j) % ms.size()];
            for (const auto& sigma : assignments(rng, m, free_list(phi), 6)) {
                ++evaluations;
                Rational a = eval_formula(m, phi, sigma), b = eval_formula(m, p, sigma);
                if (a != b) fail.add(to_string(phi) + ": " + to_string(a) + " vs " + to_string(b));
            }
        }
    }
    return result(5, "prenex equivalence", fail.count, summary({{"formulas", s.formulas}, {"evaluations", evaluations}}),
                  fail.first);
}

CriterionResult emboundment(const Options& o) {
    Rng rng(o.seed + 6);
    const Sizes s = sizes(o);
    auto ms = corpus_structures(rng, s.structures);
    Failures fail;
    for (const auto& m0 : ms) {
        GaugedStructure m = graph_transform(m0);
        GaugedStructure e = embound(m);
        if (auto t = triangle_violation(e)) fail.add("triangle fails in the emboundment at " + *t);
        ValidationReport v = validate(e);
        if (!v.pass) fail.add("emboundment invalid: " + v.issues.front().detail);
        ComparisonReport c = check_comparison(m);
        if (!c.pass) fail.add(c.failures.front());
        if (!(recover(e) == m)) fail.add("recover does not invert embound");
    }
    std::size_t grid = 0;
    for (long i = 0; i <= 40; ++i) {
        for (long j = 0; j <= 40; ++j) {
            const Rational a = frac(i, 8), b = frac(j, 8);
            ++grid;
            if (theta(a + b) > theta(a) + theta(b)) fail.add("theta not subadditive at " + to_string(a) + ", " + to_string(b));
        }
    }
    return result(6, "emboundment", fail.count, summary({{"structures", ms.size()}, {"grid pairs", grid}}), fail.first);
}

// Value of sup_x^{n−ε,n} inf_y^{n,n+ε} |μ(x∧y) − μ(x)/2| ∧ 1 computed from the window definition.
Rational atomless_oracle(const std::vector<Rational>& weights, const Rational& n, const Rational& eps) {
    auto window = [](const Rational& r, const Rational& r2) {
        Integer scale = 1;
        for (unsigned m = 0;; ++m, scale *= 2) {
            Integer ell = ceil(Rational(r * scale));
            if (Rational(ell + 1) <= r2 * scale) return std::pair<Rational, Rational>{Rational(scale), Rational(ell) / scale};
        }
    };
    const Rational k = 1;
    auto down = [&](const Rational& v, const Rational& g, const std::pair<Rational, Rational>& w) {
        return monus(v, k * w.first * monus(g, w.second));
    };
    const auto outer = window(n - eps, n), inner = window(n, n + eps);
    const unsigned count = 1u << weights.size();
    auto mu = [&](unsigned set) {
        Rational s = 0;
        for (std::size_t i = 0; i < weights.size(); ++i)
            if (set & (1u << i)) s += weights[i];
        return s;
    };
    Rational best = 0;  // the point at infinity contributes 0 to the outer supremum
    for (unsigned x = 0; x < count; ++x) {
        Rational least = k;  // and k to the inner infimum
        for (unsigned y = 0; y < count; ++y) {
            Rational phi = std::min(Rational(1), Rational(abs(mu(x & y) - mu(x) / 2)));
            least = std::min(least, Rational(k - down(k - phi, mu(y), inner)));
        }
        best = std::max(best, down(least, mu(x), outer));
    }
    return best;
}

CriterionResult theories(const Options& o) {
    const Sizes s = sizes(o);
    std::vector<Rational> values;
    for (long q = 1; q <= 8; ++q)
        for (long p = 1; p <= q; ++p)
            if (std::gcd(p, q) == 1) values.push_back(Rational(p, q));
    std::vector<std::vector<Rational>> weight_lists;
    std::function<void(std::vector<Rational>&, std::size_t)> build = [&](std::vector<Rational>& cur, std::size_t from) {
        if (!cur.empty()) weight_lists.push_back(cur);
        if (cur.size() == s.algebra_length) return;
        for (std::size_t i = from; i < values.size(); ++i) {
            cur.push_back(values[i]);
            build(cur, i);
            cur.pop_back();
        }
    };
    std::vector<Rational> cur;
    build(cur, 0);

    Failures fail;
    const Rational eps(1, 2);
    std::size_t instances = 0;
    for (const auto& w : weight_lists) {
        GaugedStructure m = measure_algebra(w);
        ValidationReport v = validate(m);
        if (!v.pass) fail.add("measure algebra invalid: " + v.issues.front().detail);
        Theory t = load_theory(kMeasureAlgebraTheory, m.signature());
        for (const auto& c : t.conditions) {
            ++instances;
            if (eval_formula(m, c.formula) != 0) fail.add(c.label + " fails");
        }
        for (const auto& sc : t.schemes) {
            if (sc.label == "atomless") continue;
            // n = 4 exceeds every gauge of an algebra with at most three atoms of weight <= 1.
            Condition c = instantiate_scheme(sc, eps, {{"n", Rational(4)}});
            ++instances;
            Rational value = eval_formula(m, c.formula);
            if (value != 0) fail.add(sc.label + " has defect " + to_string(value));
        }
    }

    GaugedStructure atom = measure_algebra({Rational(1)});
    Theory t = load_theory(kMeasureAlgebraTheory, atom.signature());
    auto it = std::find_if(t.schemes.begin(), t.schemes.end(), [](const Scheme& sc) { return sc.label == "atomless"; });
    Rational measured = -1;
    if (it == t.schemes.end()) {
        fail.add("atomless scheme missing");
    } else {
        measured = eval_formula(atom, instantiate_scheme(*it, eps, {{"n", Rational(2)}}).formula);
        const Rational oracle = atomless_oracle({Rational(1)}, 2, eps);
        if (measured != oracle) fail.add("atomless defect " + to_string(measured) + " differs from oracle " + to_string(oracle));
        if (measured != kAtomlessDefect) fail.add("atomless defect " + to_string(measured) + " differs from the pinned value");
        if (!(measured > 0)) fail.add("atomless defect is not positive");
    }
    return result(7, "theories", fail.count,
                  summary({{"algebras", weight_lists.size()}, {"axiom instances", instances}}) + ", atomless defect " +
                      to_string(measured),
                  fail.first);
}

CriterionResult graph_axioms(const Options& o) {
    Rng rng(o.seed + 8);
    const Sizes s = sizes(o);
    std::vector<GaugedStructure> ms = corpus_structures(rng, s.graph_structures);
    ms.push_back(measure_algebra({Rational(1, 2), Rational(1, 2)}));
    ms.push_back(measure_algebra({Rational(1, 3), Rational(3, 4)}));
    Failures fail;
    std::size_t instances = 0;
    for (const auto& m : ms) {
        GaugedStructure g = graph_transform(m);
        for (const auto& a : graph_signature(m.signature()).axioms) {
            for (const Rational eps : {Rational(1), Rational(1, 2), Rational(1, 4)}) {
                ++instances;
                Rational v = eval_formula(g, instantiate_graph_axiom(a, eps).formula);
                if (v != 0) fail.add(a.graph + "/" + to_string(a.kind) + " at " + to_string(eps) + " = " + to_string(v));
            }
        }
    }
    return result(8, "graph transform", fail.count, summary({{"structures", ms.size()}, {"axiom instances", instances}}),
                  fail.first);
}

CriterionResult los(const Options& o) {
    Rng rng(o.seed + 9);
    std::vector<Formula> formulas;
    for (int i = 0; i < 20; ++i) formulas.push_back(random_formula(rng, {"x", "y"}, 3));
    Failures fail;
    std::size_t checked = 0, families = 0;
    for (int f = 0; f < (o.quick ? 2 : 5); ++f) {
        std::vector<GaugedStructure> ms = corpus_structures(rng, 3);
        ++families;
        for (std::size_t j = 0; j < ms.size(); ++j) {
            LosReport r = los_check(ms, j, formulas);
            checked += r.checked;
            if (!r.pass) fail.add(r.mismatches.front());
        }
    }
    return result(9, "principal ultraproduct", fail.count,
                  summary({{"formulas", formulas.size()}, {"families", families}, {"comparisons", checked}}), fail.first);
}

// Nested golden-section search over each face of the ℓ1 sphere; exact up to 1e-12 for convex norms.
double golden_min(const std::function<double(double)>& f, double lo, double hi) {
    const double g = (std::sqrt(5.0) - 1) / 2;
    double a = lo, b = hi;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < 60; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return std::min({f(lo), f(hi), fc, fd});
}

double sphere_oracle(const std::vector<bm::Vector>& b, NormKind kind) {
    const std::size_t k = b.size();
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        std::vector<bm::Vector> signed_b;
        for (std::size_t i = 0; i < k; ++i) signed_b.push_back((mask & (1u << i)) ? bm::Vector(-b[i]) : b[i]);
        std::function<double(std::size_t, bm::Vector, double)> face = [&](std::size_t i, bm::Vector acc, double mass) {
            if (i + 1 == k) return bm::norm(acc + mass * signed_b[i], kind);
            return golden_min([&](double t) { return face(i + 1, acc + t * signed_b[i], mass - t); }, 0.0, mass);
        };
        best = std::min(best, face(0, bm::Vector::Zero(b[0].size()), 1.0));
    }
    return best;
}

std::vector<bm::Vector> random_basis(Rng& rng, unsigned dim, std::size_t k, NormKind kind) {
    std::uniform_real_distribution<double> u(-1, 1);
    for (;;) {
        std::vector<bm::Vector> b;
        for (std::size_t i = 0; i < k; ++i) {
            bm::Vector v(dim);
            for (unsigned j = 0; j < dim; ++j) v(j) = u(rng);
            b.push_back(v);
        }
        try {
            if (bm::simplex_min_norm(b, {dim, kind}) > 1e-2) return b;
        } catch (const DomainError&) {
        }
    }
}

bm::Matrix signed_permutation(Rng& rng, unsigned n) {
    std::vector<unsigned> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), rng);
    bm::Matrix m = bm::Matrix::Zero(n, n);
    for (unsigned i = 0; i < n; ++i) m(i, perm[i]) = std::uniform_int_distribution<int>(0, 1)(rng) ? 1.0 : -1.0;
    return m;
}

CriterionResult banach_mazur(const Options& o) {
    Rng rng(o.seed + 10);
    const Sizes s = sizes(o);
    const std::vector<Rational> epsilons{Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(3, 8),
                                         Rational(1, 16), Rational(1, 3), Rational(1, 5)};
    std::uniform_real_distribution<double> u(-1, 1), unit(0, 1);
    Failures fail;
    std::size_t trials = 0, oracle_checks = 0, isometry_checks = 0;
    double worst_gap = 0;
    for (NormKind kind : {NormKind::L1, NormKind::LInf}) {
        for (unsigned dim = 1; dim <= 4; ++dim) {
            const bm::NormedSpace space{dim, kind};
            for (std::size_t t = 0; t < s.bm_trials; ++t) {
                const std::size_t k = std::uniform_int_distribution<std::size_t>(1, dim)(rng);
                auto b = random_basis(rng, dim, k, kind);
                const Rational eps = epsilons[std::uniform_int_distribution<std::size_t>(0, epsilons.size() - 1)(rng)];
                const double delta = bm::certify_delta(b, eps, space);
                std::vector<bm::Vector> c;
                for (const auto& bi : b) {
                    bm::Vector dir(dim);
                    for (unsigned j = 0; j < dim; ++j) dir(j) = u(rng);
                    const double len = bm::norm(dir, kind);
                    const double scale = t % 4 == 0 ? 1.0 : unit(rng);
                    c.push_back(len > 0 ? bm::Vector(bi + dir * (delta * scale / len)) : bi);
                }
                ++trials;
                bm::Perturbation p = bm::build_perturbation(b, c, space);
                const double norm_s = bm::op_norm(p.s, space);
                if (norm_s > eps.get_d() / 2 + kNormTolerance)
                    fail.add("||S|| = " + std::to_string(norm_s) + " exceeds eps/2 in " + bm::to_string(space));
                if (!bm::eps_iso_check(p.t, eps, space).pass)
                    fail.add("I - S is not an eps-isomorphism in " + bm::to_string(space));
            }
            for (std::size_t t = 0; t < s.oracle_instances; ++t) {
                const std::size_t k = std::uniform_int_distribution<std::size_t>(1, std::min(3u, dim))(rng);
                auto b = random_basis(rng, dim, k, kind);
                const double lp = bm::simplex_min_norm(b, space);
                const double oracle = sphere_oracle(b, kind);
                ++oracle_checks;
                worst_gap = std::max(worst_gap, std::abs(lp - oracle));
                if (std::abs(lp - oracle) > kOracleTolerance)
                    fail.add("LP " + std::to_string(lp) + " vs oracle " + std::to_string(oracle));
            }
            for (std::size_t t = 0; t < s.oracle_instances; ++t) {
                bm::Matrix f = signed_permutation(rng, dim);
                if (t % 2 == 1) f = f * (bm::Matrix::Identity(dim, dim) + 0.25 * bm::Matrix::Identity(dim, dim) * unit(rng));
                ++isometry_checks;
                bm::IsoReport r = bm::eps_iso_check(f, 0, space);
                const bool isometry = t % 2 == 0;
                if (isometry && !r.pass) fail.add("signed permutation rejected at eps = 0");
                if (r.pass && (std::abs(r.norm - 1) > kNormTolerance || std::abs(r.inverse_norm - 1) > kNormTolerance))
                    fail.add("0-isomorphism with operator norm away from 1");
            }
        }
    }
    std::ostringstream gap;
    gap << worst_gap;
    return result(10, "Banach-Mazur", fail.count,
                  summary({{"perturbation trials", trials}, {"oracle comparisons", oracle_checks},
                           {"isometry checks", isometry_checks}}) +
                      ", worst LP gap " + gap.str(),
                  fail.first);
}

}  // namespace

CriterionResult run_criterion(int id, const Options& options) {
    using Fn = CriterionResult (*)(const Options&);
    static const Fn table[] = {bound_soundness, constancy_soundness, modulus_soundness, window_sandwich,
                               prenex_equivalence, emboundment, theories, graph_axioms, los, banach_mazur};
    if (id < 1 || id > kCriterionCount) throw DomainError("no criterion " + std::to_string(id));
    try {
        return table[id - 1](options);
    } catch (const std::exception& e) {
        return {id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what()};
    }
}

std::vector<CriterionResult> run_all(const Options& options) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, options));
    return out;
}

std::string format(const CriterionResult& r) {
    std::string id = std::to_string(r.id);
    if (id.size() < 2) id = " " + id;
    return std::string(r.pass ? "PASS " : "FAIL ") + id + " " + r.name + ": " + r.detail;
}

}  // namespace gauge::selftest

#include "helpers.hpp"

#include "gauge/banach_mazur.hpp"
#include "gauge/error.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace gauge;
using namespace gauge::bm;
using test::q;

namespace {

const NormedSpace l1_2{2, NormKind::L1};
const NormedSpace linf_2{2, NormKind::LInf};

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

std::vector<Vector> standard_basis(unsigned n) {
    std::vector<Vector> out;
    for (unsigned i = 0; i < n; ++i) out.push_back(Vector::Unit(n, i));
    return out;
}

/// min of ‖Σλ_i b_i‖ over Σ|λ_i| = 1 for two vectors: a dense grid per sign pattern, refined by
/// ternary search inside the best cell (the norm is convex along each edge of the sphere).
double grid_min_norm(const std::vector<Vector>& b, NormKind kind) {
    double best = INFINITY;
    const int steps = 2000;
    for (double s0 : {-1.0, 1.0})
        for (double s1 : {-1.0, 1.0}) {
            auto f = [&](double t) { return norm(Vector(s0 * t * b[0] + s1 * (1 - t) * b[1]), kind); };
            int arg = 0;
            for (int i = 1; i <= steps; ++i)
                if (f(double(i) / steps) < f(double(arg) / steps)) arg = i;
            double lo = std::max(0, arg - 1) / double(steps), hi = std::min(steps, arg + 1) / double(steps);
            for (int it = 0; it < 200; ++it) {
                const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
                if (f(m1) < f(m2))
                    hi = m2;
                else
                    lo = m1;
            }
            best = std::min(best, f((lo + hi) / 2));
        }
    return best;
}

}  // namespace

TEST_CASE("norms") {
    CHECK(parse_norm_kind("l1") == NormKind::L1);
    CHECK(parse_norm_kind("linf") == NormKind::LInf);
    CHECK_THROWS(parse_norm_kind("l2"));
    CHECK(to_string(parse_space("linf:3")) == "linf:3");
    CHECK_THROWS(parse_space("l1:0"));
    CHECK(norm(vec({1, -2}), NormKind::L1) == 3);
    CHECK(norm(vec({1, -2}), NormKind::LInf) == 2);
    CHECK(dual_norm(vec({1, -2}), NormKind::L1) == 2);
}

TEST_CASE("op_norm examples") {
    CHECK(op_norm(Matrix::Identity(3, 3), NormedSpace{3, NormKind::L1}) == 1);
    RationalMatrix diag{{2, 0}, {0, q("1/2")}};
    CHECK(op_norm(diag, linf_2) == 2);
    CHECK(op_norm(to_matrix(diag), linf_2) == 2);
    RationalMatrix swap{{0, 1}, {1, 0}};
    CHECK(op_norm(swap, l1_2) == 1);
    RationalMatrix skew{{1, 2}, {0, 3}};
    CHECK(op_norm(skew, l1_2) == 5);
    CHECK(op_norm(skew, linf_2) == 3);
}

TEST_CASE("op_norm equals the supremum over unit vectors") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 50; ++t) {
        Matrix a(3, 3);
        for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = u(rng);
        for (NormKind kind : {NormKind::L1, NormKind::LInf}) {
            const NormedSpace space{3, kind};
            double best = 0;
            // extreme points of the unit ball: ±e_i for ℓ1, sign vectors for ℓ∞
            if (kind == NormKind::L1) {
                for (int i = 0; i < 3; ++i) best = std::max(best, norm(Vector(a.col(i)), kind));
            } else {
                for (int s = 0; s < 8; ++s) {
                    Vector v(3);
                    for (int i = 0; i < 3; ++i) v(i) = (s >> i) & 1 ? 1 : -1;
                    best = std::max(best, norm(Vector(a * v), kind));
                }
            }
            CHECK(op_norm(a, space) == doctest::Approx(best).epsilon(1e-12));
        }
    }
}

TEST_CASE("exp bounds and directed rounding") {
    for (const char* x : {"0", "1/4", "1/2", "1", "-1/2", "3"}) {
        auto [lo, hi] = exp_bounds(q(x));
        CHECK(lo <= hi);
        CHECK(lo.get_d() <= std::exp(q(x).get_d()) * (1 + 1e-15));
        CHECK(hi.get_d() >= std::exp(q(x).get_d()) * (1 - 1e-15));
        CHECK(hi - lo < Rational(1, 1000000));
    }
    for (const char* x : {"1/3", "2/7", "10/3"}) {
        CHECK(Rational(round_up(q(x))) >= q(x));
        CHECK(Rational(round_down(q(x))) <= q(x));
    }
}

TEST_CASE("eps_iso_check examples") {
    CHECK(eps_iso_check(Matrix::Identity(2, 2), 0, l1_2).pass);
    RationalMatrix identity{{1, 0}, {0, 1}};
    CHECK(eps_iso_check(identity, 0, l1_2).pass);

    const Rational eps = q("1/4");
    const double e = std::exp(0.25);
    IsoReport scaled = eps_iso_check(Matrix(e * Matrix::Identity(2, 2)), eps, l1_2);
    CHECK(scaled.pass);
    CHECK(scaled.upper_margin == doctest::Approx(0).epsilon(1e-12).scale(1));
    IsoReport doubled = eps_iso_check(Matrix(std::exp(0.5) * Matrix::Identity(2, 2)), eps, l1_2);
    CHECK_FALSE(doubled.pass);

    RationalMatrix diag{{2, 0}, {0, q("1/2")}};
    CHECK_FALSE(eps_iso_check(diag, q("1/2"), l1_2).pass);
    CHECK(eps_iso_check(diag, q("3/4"), l1_2).pass);
    CHECK_THROWS(eps_iso_check(Matrix::Zero(2, 2), eps, l1_2));
    CHECK_THROWS(eps_iso_check(RationalMatrix{{1, 1}, {1, 1}}, eps, l1_2));
}

TEST_CASE("exact and double checks agree away from the boundary") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> entry(-8, 8);
    for (int t = 0; t < 100; ++t) {
        RationalMatrix f(2, std::vector<Rational>(2));
        for (auto& row : f)
            for (auto& x : row) {
                x = Rational(entry(rng), 4);
                x.canonicalize();
            }
        if (f[0][0] * f[1][1] == f[0][1] * f[1][0]) continue;
        for (NormKind kind : {NormKind::L1, NormKind::LInf}) {
            const NormedSpace space{2, kind};
            ExactIsoReport exact = eps_iso_check(f, q("1/2"), space);
            IsoReport approx = eps_iso_check(to_matrix(f), q("1/2"), space);
            if (std::abs(approx.upper_margin) > 1e-6 && std::abs(approx.lower_margin) > 1e-6) CHECK(exact.pass == approx.pass);
            CHECK(exact.norm.get_d() == doctest::Approx(approx.norm));
            CHECK(exact.inverse_norm.get_d() == doctest::Approx(approx.inverse_norm));
        }
    }
}

TEST_CASE("simplex_min_norm examples") {
    CHECK(simplex_min_norm(standard_basis(3), NormedSpace{3, NormKind::L1}) == doctest::Approx(1));
    CHECK(simplex_min_norm({vec({3, 0})}, l1_2) == doctest::Approx(3));
    CHECK(simplex_min_norm({vec({0, -3})}, linf_2) == doctest::Approx(3));
    std::vector<Vector> b{vec({1, 0}), vec({1, 1})};
    CHECK(simplex_min_norm(b, linf_2) == doctest::Approx(grid_min_norm(b, NormKind::LInf)).epsilon(1e-6));
    CHECK(simplex_min_norm(b, l1_2) == doctest::Approx(grid_min_norm(b, NormKind::L1)).epsilon(1e-6));
    CHECK_THROWS(simplex_min_norm({vec({1, 1}), vec({2, 2})}, l1_2));
    CHECK_THROWS(simplex_min_norm(standard_basis(7), NormedSpace{7, NormKind::L1}));
}

TEST_CASE("dual functionals") {
    auto eta = dual_functionals(standard_basis(3), NormedSpace{3, NormKind::LInf});
    for (unsigned i = 0; i < 3; ++i)
        for (unsigned j = 0; j < 3; ++j) CHECK(eta[i](j) == doctest::Approx(i == j ? 1 : 0));

    const NormedSpace l1_3{3, NormKind::L1};
    std::vector<Vector> b{vec({1, 1, 0}), vec({0, 1, -1})};
    auto d = dual_functionals(b, l1_3);
    const double s = simplex_min_norm(b, l1_3);
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) CHECK(d[i].dot(b[j]) == doctest::Approx(i == j ? 1 : 0));
        CHECK(dual_norm(d[i], NormKind::L1) <= 1 / s + kTolerance);
    }
}

TEST_CASE("build_perturbation") {
    auto same = build_perturbation(standard_basis(2), standard_basis(2), l1_2);
    CHECK(same.s.norm() == doctest::Approx(0));
    CHECK((same.t - Matrix::Identity(2, 2)).norm() == doctest::Approx(0));

    const double delta = 0.125;
    auto one = build_perturbation({vec({1})}, {vec({1 - delta})}, NormedSpace{1, NormKind::L1});
    CHECK(one.s(0, 0) == doctest::Approx(delta));
    CHECK(one.t(0, 0) == doctest::Approx(1 - delta));

    std::vector<Vector> b{vec({1, 0}), vec({1, 1})}, c{vec({1.01, 0}), vec({1, 0.98})};
    for (const auto& space : {l1_2, linf_2}) {
        auto p = build_perturbation(b, c, space);
        for (std::size_t i = 0; i < b.size(); ++i) CHECK((p.t * b[i] - c[i]).norm() == doctest::Approx(0).scale(1));
        double rhs = 0;
        for (std::size_t i = 0; i < b.size(); ++i) rhs += norm(Vector(b[i] - c[i]), space.norm);
        CHECK(op_norm(p.s, space) <= rhs / simplex_min_norm(b, space) + kTolerance);
    }
}

TEST_CASE("certify_delta examples and randomized certification") {
    CHECK(certify_delta(standard_basis(2), q("1/4"), l1_2) == doctest::Approx(1.0 / 16));
    CHECK(certify_delta({vec({1, 0})}, q("1/2"), l1_2) == doctest::Approx(0.25));
    CHECK_THROWS(certify_delta(standard_basis(2), q("3/4"), l1_2));
    CHECK_THROWS(certify_delta(standard_basis(2), 0, l1_2));

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1, 1), unit(0, 1);
    std::vector<Vector> b{vec({1, 0}), vec({1, 1})};
    for (const auto& space : {l1_2, linf_2})
        for (const char* e : {"1/2", "1/4", "1/16"}) {
            const Rational eps = q(e);
            const double delta = certify_delta(b, eps, space);
            for (int t = 0; t < 200; ++t) {
                std::vector<Vector> c;
                for (const auto& bi : b) {
                    Vector dir = vec({u(rng), u(rng)});
                    c.push_back(bi + dir * (delta * unit(rng) / norm(dir, space.norm)));
                }
                CHECK(eps_iso_check(build_perturbation(b, c, space).t, eps, space).pass);
            }
        }
}

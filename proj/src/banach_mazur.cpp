#include "gauge/banach_mazur.hpp"

#include "gauge/error.hpp"
#include "gauge/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gauge {

NormKind parse_norm_kind(std::string_view text) {
    if (text == "l1") return NormKind::L1;
    if (text == "linf") return NormKind::LInf;
    throw DomainError("unsupported norm '" + std::string(text) + "' (expected l1 or linf)");
}

std::string to_string(NormKind kind) { return kind == NormKind::L1 ? "l1" : "linf"; }

namespace bm {

NormedSpace parse_space(std::string_view text) {
    std::size_t colon = text.find(':');
    if (colon == std::string_view::npos) throw DomainError("space must look like l1:3 or linf:2");
    NormedSpace s;
    s.norm = parse_norm_kind(text.substr(0, colon));
    std::string dim(text.substr(colon + 1));
    if (dim.empty() || dim.find_first_not_of("0123456789") != std::string::npos)
        throw DomainError("bad dimension '" + dim + "'");
    s.dimension = static_cast<unsigned>(std::stoul(dim));
    if (s.dimension == 0) throw DomainError("dimension must be at least 1");
    return s;
}

std::string to_string(const NormedSpace& space) {
    return gauge::to_string(space.norm) + ":" + std::to_string(space.dimension);
}

double norm(const Vector& v, NormKind kind) { return kind == NormKind::L1 ? v.lpNorm<1>() : v.lpNorm<Eigen::Infinity>(); }

double dual_norm(const Vector& v, NormKind kind) { return norm(v, kind == NormKind::L1 ? NormKind::LInf : NormKind::L1); }

double op_norm(const Matrix& a, const NormedSpace& space) {
    if (a.rows() != space.dimension || a.cols() != space.dimension) throw DomainError("matrix does not match the space");
    if (space.norm == NormKind::L1) return a.cwiseAbs().colwise().sum().maxCoeff();
    return a.cwiseAbs().rowwise().sum().maxCoeff();
}

namespace {

void check_square(const RationalMatrix& a, unsigned n) {
    if (a.size() != n) throw DomainError("matrix does not match the space");
    for (const auto& row : a)
        if (row.size() != n) throw DomainError("matrix does not match the space");
}

}  // namespace

Rational op_norm(const RationalMatrix& a, const NormedSpace& space) {
    const unsigned n = space.dimension;
    check_square(a, n);
    Rational best = 0;
    for (unsigned i = 0; i < n; ++i) {
        Rational sum = 0;
        for (unsigned j = 0; j < n; ++j) sum += abs(space.norm == NormKind::L1 ? a[j][i] : a[i][j]);
        best = std::max(best, sum);
    }
    return best;
}

RationalMatrix inverse(const RationalMatrix& a) {
    const std::size_t n = a.size();
    RationalMatrix m = a;
    RationalMatrix inv(n, std::vector<Rational>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) throw DomainError("matrix is not square");
        inv[i][i] = 1;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) ++pivot;
        if (pivot == n) throw DomainError("matrix is singular");
        std::swap(m[pivot], m[col]);
        std::swap(inv[pivot], inv[col]);
        const Rational p = m[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0) continue;
            const Rational f = m[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                m[r][j] -= f * m[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

Matrix to_matrix(const RationalMatrix& a) {
    const std::size_t n = a.size();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = a.at(i).at(j).get_d();
    return out;
}

std::pair<Rational, Rational> exp_bounds(const Rational& x) {
    if (x < 0) {
        auto [lo, hi] = exp_bounds(-x);
        return {1 / hi, 1 / lo};
    }
    const Integer whole = ceil(x);
    const unsigned long terms = 30 + 3 * whole.get_ui();
    Rational sum = 0, term = 1;
    for (unsigned long k = 0; k <= terms; ++k) {
        sum += term;
        term = term * x / static_cast<long>(k + 1);
    }
    // remainder <= x^{N+1}/(N+1)! · e^x <= term · 3^⌈x⌉
    Integer three;
    mpz_ui_pow_ui(three.get_mpz_t(), 3, whole.get_ui());
    return {sum, sum + term * three};
}

double round_up(const Rational& q) {
    double d = q.get_d();
    if (Rational(d) >= q) return d;
    return std::nextafter(d, std::numeric_limits<double>::infinity());
}

double round_down(const Rational& q) {
    double d = q.get_d();
    if (Rational(d) <= q) return d;
    return std::nextafter(d, -std::numeric_limits<double>::infinity());
}

IsoReport eps_iso_check(const Matrix& f, const Rational& eps, const NormedSpace& space) {
    if (eps < 0) throw DomainError("eps must be nonnegative");
    Eigen::FullPivLU<Matrix> lu(f);
    lu.setThreshold(1e-12);
    if (f.rows() != f.cols() || !lu.isInvertible()) throw DomainError("map is singular");
    IsoReport r;
    r.norm = op_norm(f, space);
    r.inverse_norm = op_norm(Matrix(lu.inverse()), space);
    r.bound = round_up(exp_bounds(eps).second);
    r.upper_margin = r.bound - r.norm;
    r.lower_margin = r.bound - r.inverse_norm;
    r.pass = r.norm <= r.bound + r.tolerance && r.inverse_norm <= r.bound + r.tolerance;
    return r;
}

ExactIsoReport eps_iso_check(const RationalMatrix& f, const Rational& eps, const NormedSpace& space) {
    if (eps < 0) throw DomainError("eps must be nonnegative");
    check_square(f, space.dimension);
    ExactIsoReport r;
    r.norm = op_norm(f, space);
    r.inverse_norm = op_norm(inverse(f), space);
    r.bound = exp_bounds(eps).second;
    r.pass = r.norm <= r.bound && r.inverse_norm <= r.bound;
    return r;
}

namespace {

Matrix columns(const std::vector<Vector>& b, const NormedSpace& space) {
    if (b.empty()) throw DomainError("need at least one vector");
    Matrix m(space.dimension, b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i].size() != space.dimension) throw DomainError("vector does not match the space");
        m.col(i) = b[i];
    }
    return m;
}

void require_independent(const Matrix& m) {
    Eigen::FullPivLU<Matrix> lu(m);
    lu.setThreshold(1e-12);
    if (lu.rank() < m.cols()) throw DomainError("vectors are linearly dependent");
}

}  // namespace

double simplex_min_norm(const std::vector<Vector>& b, const NormedSpace& space) {
    if (b.size() > 6) throw DomainError("at most 6 vectors are supported");
    const Matrix bm = columns(b, space);
    require_independent(bm);
    const std::size_t k = b.size();
    const std::size_t n = space.dimension;
    const std::size_t tcount = space.norm == NormKind::L1 ? n : 1;
    double best = std::numeric_limits<double>::infinity();
    // σ and −σ give the same value, so the sign of λ_1 is fixed.
    for (unsigned mask = 0; mask < (1u << (k - 1)); ++mask) {
        lp::Problem p;
        p.objective.assign(k + tcount, 0.0);
        for (std::size_t j = 0; j < tcount; ++j) p.objective[k + j] = 1;
        for (std::size_t row = 0; row < n; ++row) {
            lp::Constraint up, down;
            up.coefficients.assign(k + tcount, 0.0);
            down.coefficients.assign(k + tcount, 0.0);
            for (std::size_t i = 0; i < k; ++i) {
                const double sign = i > 0 && (mask & (1u << (i - 1))) ? -1.0 : 1.0;
                up.coefficients[i] = sign * bm(row, i);
                down.coefficients[i] = -sign * bm(row, i);
            }
            const std::size_t t = space.norm == NormKind::L1 ? k + row : k;
            up.coefficients[t] = -1;
            down.coefficients[t] = -1;
            p.constraints.push_back(up);
            p.constraints.push_back(down);
        }
        lp::Constraint simplex;
        simplex.coefficients.assign(k + tcount, 0.0);
        for (std::size_t i = 0; i < k; ++i) simplex.coefficients[i] = 1;
        simplex.sense = lp::Sense::Equal;
        simplex.rhs = 1;
        p.constraints.push_back(simplex);
        lp::Solution sol = lp::solve(p);
        if (sol.status != lp::Status::Optimal) throw Error("orthant program did not reach an optimum");
        best = std::min(best, sol.value);
    }
    return best;
}

std::vector<Vector> dual_functionals(const std::vector<Vector>& b, const NormedSpace& space) {
    const Matrix bm = columns(b, space);
    require_independent(bm);
    const std::size_t k = b.size();
    const std::size_t n = space.dimension;
    // η = η⁺ − η⁻; minimize ‖η‖_∞ (space ℓ1) through an extra t, or ‖η‖_1 (space ℓ∞) directly.
    const bool sup_dual = space.norm == NormKind::L1;
    const std::size_t vars = 2 * n + (sup_dual ? 1 : 0);
    std::vector<Vector> out;
    for (std::size_t i = 0; i < k; ++i) {
        lp::Problem p;
        p.objective.assign(vars, 0.0);
        if (sup_dual)
            p.objective[2 * n] = 1;
        else
            std::fill(p.objective.begin(), p.objective.begin() + 2 * n, 1.0);
        for (std::size_t j = 0; j < k; ++j) {
            lp::Constraint c;
            c.coefficients.assign(vars, 0.0);
            for (std::size_t l = 0; l < n; ++l) {
                c.coefficients[l] = bm(l, j);
                c.coefficients[n + l] = -bm(l, j);
            }
            c.sense = lp::Sense::Equal;
            c.rhs = i == j ? 1.0 : 0.0;
            p.constraints.push_back(c);
        }
        if (sup_dual) {
            for (std::size_t l = 0; l < n; ++l) {
                lp::Constraint up, down;
                up.coefficients.assign(vars, 0.0);
                down.coefficients.assign(vars, 0.0);
                up.coefficients[l] = 1;
                up.coefficients[n + l] = -1;
                up.coefficients[2 * n] = -1;
                down.coefficients[l] = -1;
                down.coefficients[n + l] = 1;
                down.coefficients[2 * n] = -1;
                p.constraints.push_back(up);
                p.constraints.push_back(down);
            }
        }
        lp::Solution sol = lp::solve(p);
        if (sol.status != lp::Status::Optimal) throw Error("extension program did not reach an optimum");
        Vector eta(n);
        for (std::size_t l = 0; l < n; ++l) eta(l) = sol.x[l] - sol.x[n + l];
        out.push_back(eta);
    }
    return out;
}

Perturbation build_perturbation(const std::vector<Vector>& b, const std::vector<Vector>& c, const NormedSpace& space) {
    if (b.size() != c.size()) throw DomainError("b and c differ in length");
    columns(c, space);
    std::vector<Vector> eta = dual_functionals(b, space);
    const std::size_t n = space.dimension;
    Perturbation out;
    out.s = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < b.size(); ++i) out.s += (b[i] - c[i]) * eta[i].transpose();
    out.t = Matrix::Identity(n, n) - out.s;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double err = (out.s * b[i] - (b[i] - c[i])).lpNorm<Eigen::Infinity>();
        if (err > kTolerance * std::max(1.0, b[i].lpNorm<Eigen::Infinity>()))
            throw Error("perturbation misses b_" + std::to_string(i) + " by " + std::to_string(err));
    }
    return out;
}

double certify_delta(const std::vector<Vector>& b, const Rational& eps, const NormedSpace& space) {
    if (eps <= 0 || eps > Rational(1, 2)) throw DomainError("eps must lie in (0, 1/2]");
    // e^{−ε} <= 1 − ε/2 and 1 + ε/2 <= e^ε
    if (exp_bounds(-eps).second > 1 - eps / 2 || exp_bounds(eps).first < 1 + eps / 2)
        throw DomainError("eps too large for the perturbation bound");
    const double s = simplex_min_norm(b, space);
    return s * eps.get_d() / (2.0 * static_cast<double>(b.size()));
}

}  // namespace bm
}  // namespace gauge

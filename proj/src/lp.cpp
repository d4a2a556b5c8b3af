#include "gauge/lp.hpp"

#include "gauge/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gauge::lp {

namespace {

// Tableau rows 0..m-1 are constraints, row m is the objective (reduced costs, value in the last column).
struct Tableau {
    std::size_t rows = 0;
    std::size_t cols = 0;  // including the rhs column
    std::vector<double> a;
    std::vector<std::size_t> basis;

    double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double p = at(pr, pc);
        for (std::size_t c = 0; c < cols; ++c) at(pr, c) /= p;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0) continue;
            for (std::size_t c = 0; c < cols; ++c) at(r, c) -= f * at(pr, c);
        }
        basis[pr] = pc;
    }

    // Minimizes the objective row over columns [0, usable); returns false when unbounded.
    bool run(std::size_t usable, double tol) {
        const std::size_t m = rows - 1;
        const std::size_t rhs = cols - 1;
        for (;;) {
            std::size_t enter = usable;
            for (std::size_t c = 0; c < usable; ++c) {
                if (at(m, c) < -tol) {
                    enter = c;
                    break;
                }
            }
            if (enter == usable) return true;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < m; ++r)
                if (at(r, enter) > tol) best = std::min(best, at(r, rhs) / at(r, enter));
            std::size_t leave = m;
            for (std::size_t r = 0; r < m; ++r) {
                if (at(r, enter) <= tol || at(r, rhs) / at(r, enter) > best + tol) continue;
                if (leave == m || basis[r] < basis[leave]) leave = r;
            }
            if (leave == m) return false;
            pivot(leave, enter);
        }
    }
};

}  // namespace

Solution solve(const Problem& p, double tol) {
    const std::size_t n = p.objective.size();
    const std::size_t m = p.constraints.size();
    for (const auto& c : p.constraints)
        if (c.coefficients.size() != n) throw DomainError("constraint width does not match the objective");

    // Normalize to nonnegative right-hand sides.
    std::vector<Constraint> rows = p.constraints;
    for (auto& c : rows) {
        if (c.rhs < 0) {
            for (auto& v : c.coefficients) v = -v;
            c.rhs = -c.rhs;
            if (c.sense == Sense::LessEqual)
                c.sense = Sense::GreaterEqual;
            else if (c.sense == Sense::GreaterEqual)
                c.sense = Sense::LessEqual;
        }
    }
    std::size_t slacks = 0, artificials = 0;
    for (const auto& c : rows) {
        if (c.sense != Sense::Equal) ++slacks;
        if (c.sense != Sense::LessEqual) ++artificials;
    }
    const std::size_t art0 = n + slacks;
    Tableau t;
    t.rows = m + 1;
    t.cols = n + slacks + artificials + 1;
    t.a.assign(t.rows * t.cols, 0.0);
    t.basis.assign(m, 0);
    const std::size_t rhs = t.cols - 1;
    std::size_t s = n, art = art0;
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < n; ++c) t.at(r, c) = rows[r].coefficients[c];
        t.at(r, rhs) = rows[r].rhs;
        if (rows[r].sense == Sense::LessEqual) {
            t.at(r, s) = 1;
            t.basis[r] = s++;
        } else {
            if (rows[r].sense == Sense::GreaterEqual) t.at(r, s++) = -1;
            t.at(r, art) = 1;
            t.basis[r] = art++;
        }
    }

    Solution out;
    if (artificials > 0) {
        // Phase one: minimize the sum of artificials, expressed in nonbasic columns.
        for (std::size_t r = 0; r < m; ++r) {
            if (t.basis[r] < art0) continue;
            for (std::size_t c = 0; c < t.cols; ++c)
                if (c < art0 || c == rhs) t.at(m, c) -= t.at(r, c);
        }
        t.run(t.cols - 1, tol);
        if (-t.at(m, rhs) > 1e-9) return out;
        // Drive remaining artificials out of the basis; rows that cannot be pivoted are redundant.
        for (std::size_t r = 0; r < m; ++r) {
            if (t.basis[r] < art0) continue;
            for (std::size_t c = 0; c < art0; ++c) {
                if (std::abs(t.at(r, c)) > tol) {
                    t.pivot(r, c);
                    break;
                }
            }
        }
    }

    for (std::size_t c = 0; c < t.cols; ++c) t.at(m, c) = 0;
    for (std::size_t c = 0; c < n; ++c) t.at(m, c) = p.objective[c];
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t b = t.basis[r];
        if (b >= art0) continue;
        const double f = t.at(m, b);
        if (f == 0) continue;
        for (std::size_t c = 0; c < t.cols; ++c) t.at(m, c) -= f * t.at(r, c);
    }
    if (!t.run(art0, tol)) {
        out.status = Status::Unbounded;
        return out;
    }
    out.status = Status::Optimal;
    out.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        if (t.basis[r] < n) out.x[t.basis[r]] = t.at(r, rhs);
    out.value = 0;
    for (std::size_t c = 0; c < n; ++c) out.value += p.objective[c] * out.x[c];
    return out;
}

}  // namespace gauge::lp

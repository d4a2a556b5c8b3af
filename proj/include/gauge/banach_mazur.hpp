#pragma once

#include "gauge/norm.hpp"
#include "gauge/rational.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace gauge::bm {

/// ℝ^n with the ℓ1 or ℓ∞ norm.
struct NormedSpace {
    unsigned dimension = 1;
    NormKind norm = NormKind::L1;
};

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RationalMatrix = std::vector<std::vector<Rational>>;

inline constexpr double kTolerance = 1e-9;

/// Parses "l1:3" or "linf:2".
NormedSpace parse_space(std::string_view text);
std::string to_string(const NormedSpace& space);

double norm(const Vector& v, NormKind kind);
/// Norm of the dual space (ℓ∞ for ℓ1 and the reverse).
double dual_norm(const Vector& v, NormKind kind);

/// ℓ1: largest column absolute sum. ℓ∞: largest row absolute sum.
double op_norm(const Matrix& a, const NormedSpace& space);
Rational op_norm(const RationalMatrix& a, const NormedSpace& space);

/// Exact inverse over ℚ; throws DomainError when singular.
RationalMatrix inverse(const RationalMatrix& a);
Matrix to_matrix(const RationalMatrix& a);

/// Rational bounds lo <= e^x <= hi for rational x, from a Taylor sum with remainder.
std::pair<Rational, Rational> exp_bounds(const Rational& x);
/// Double that is >= q, and one that is <= q.
double round_up(const Rational& q);
double round_down(const Rational& q);

struct IsoReport {
    bool pass = false;
    double norm = 0;          ///< ‖f‖
    double inverse_norm = 0;  ///< ‖f⁻¹‖
    double bound = 0;         ///< upper bound on e^ε
    double upper_margin = 0;  ///< bound − ‖f‖
    double lower_margin = 0;  ///< bound − ‖f⁻¹‖
    double tolerance = kTolerance;
};

/// ‖f‖ <= e^ε + tol and ‖f⁻¹‖ <= e^ε + tol. Throws DomainError when f is singular.
IsoReport eps_iso_check(const Matrix& f, const Rational& eps, const NormedSpace& space);

struct ExactIsoReport {
    bool pass = false;
    Rational norm;
    Rational inverse_norm;
    Rational bound;  ///< rational upper bound on e^ε
};

/// Same test in exact arithmetic, against a rational upper bound on e^ε.
ExactIsoReport eps_iso_check(const RationalMatrix& f, const Rational& eps, const NormedSpace& space);

/// min ‖Σ λ_i b_i‖ over Σ|λ_i| = 1, one LP per sign orthant. Requires 1 <= k <= 6 independent
/// vectors of the space's dimension.
double simplex_min_norm(const std::vector<Vector>& b, const NormedSpace& space);

/// Covectors η_i with η_i(b_j) = [i = j] of least dual norm.
std::vector<Vector> dual_functionals(const std::vector<Vector>& b, const NormedSpace& space);

struct Perturbation {
    Matrix s;  ///< Σ (b_i − c_i) η_iᵀ
    Matrix t;  ///< I − S
};

/// Throws Error when S(b_i) = b_i − c_i fails beyond the tolerance.
Perturbation build_perturbation(const std::vector<Vector>& b, const std::vector<Vector>& c, const NormedSpace& space);

/// s·ε/(2k) with s = simplex_min_norm(b). Requires 0 < ε <= 1/2.
double certify_delta(const std::vector<Vector>& b, const Rational& eps, const NormedSpace& space);

}  // namespace gauge::bm

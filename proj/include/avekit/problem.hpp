#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "avekit/linalg.hpp"

namespace avekit {

/// The absolute value equation A x - |x| - b = 0.
///
/// When a known solution is attached, construction verifies that b really was
/// produced from it (infinity norm of the residual at x* below 1e-12).
class AveProblem {
public:
    AveProblem(DenseMatrix A, Vector b, std::optional<Vector> known_solution = {});

    const DenseMatrix& A() const { return A_; }
    const Vector& b() const { return b_; }
    const std::optional<Vector>& known_solution() const { return known_solution_; }
    std::size_t dim() const { return b_.size(); }

    /// provenance, carried through serialization
    std::string generator = "custom";
    std::uint64_t seed = 0;

private:
    DenseMatrix A_;
    Vector b_;
    std::optional<Vector> known_solution_;
};

/// r(x) = A x - |x| - b
Vector residual(const AveProblem& p, const Vector& x);
double residual_norm(const AveProblem& p, const Vector& x);

struct GlcpParts {
    Vector Q;               // A x + x - b
    Vector F;               // A x - x - b
    double complementarity; // <Q, F>
};
GlcpParts glcp_parts(const AveProblem& p, const Vector& x);

/// Change of variables u = (A-I)x - b turning the AVE into the LCP with
/// M = (A+I)(A-I)^{-1} and q = (M-I)b.
class LcpTransform {
public:
    explicit LcpTransform(const AveProblem& p);

    const DenseMatrix& M() const { return M_; }
    const Vector& q() const { return q_; }
    std::size_t dim() const { return q_.size(); }

    Vector to_u(const Vector& x) const;
    /// x = (A-I)^{-1}(u + b), via the stored factorization
    Vector to_x(const Vector& u) const;

private:
    DenseMatrix M_;
    Vector q_;
    DenseMatrix a_minus_i_;
    LuFactorization a_minus_i_lu_;
    Vector b_;
};

LcpTransform lcp_transform(const AveProblem& p);

/// Constants of the residual error bound; both readings of mu are kept
/// side by side (see SettlingReport for which one a computation used).
struct ErrorBoundConstants {
    double L1;       // ||A+I||
    double L2;       // ||A-I||
    double mu_lemma; // sigma_min(A)^2 - 1
    double mu_table; // sigma_min(A) - 1
};
ErrorBoundConstants error_bound_constants(const AveProblem& p);

/// (lower, upper) with lower = ||r(x)||/(L1+L2) and
/// upper = (L1+L2)/mu_lemma * ||r(x)||; brackets ||x - x*||.
/// Throws PreconditionError unless sigma_min(A) > 1.
std::pair<double, double> error_bounds(const AveProblem& p, const ErrorBoundConstants& consts,
                                       const Vector& x);

/// lhs = (x-x*)^T A^T r(x), rhs = ||r(x)||^2 / 2; lhs >= rhs whenever
/// sigma_min(A) > 1. Throws PreconditionError when no known solution is set.
std::pair<double, double> contraction_lhs_rhs(const AveProblem& p, const Vector& x);

/// Example problem: A = tridiag(-1,8,-1), x* = (-1,1,...,-1,1), b = Ax*-|x*|.
/// n must be even and at least 2.
AveProblem make_tridiag_problem(std::size_t n);

/// Random problem with all singular values in [sigma_floor, 10*sigma_floor]
/// (smallest pinned to sigma_floor exactly), built from two seeded orthogonal
/// factors; x* has components of magnitude [0.5, 2] with random signs.
AveProblem make_random_problem(std::size_t n, double sigma_floor, std::uint64_t seed);

/// sigma_min(A) - 1; positive iff unique solvability is certified.
double solvability_margin(const AveProblem& p);

} // namespace avekit

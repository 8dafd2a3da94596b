#include "avekit/problem.hpp"

#include <cmath>

#include "avekit/rng.hpp"

namespace avekit {

AveProblem::AveProblem(DenseMatrix A, Vector b, std::optional<Vector> known_solution)
    : A_(std::move(A)), b_(std::move(b)), known_solution_(std::move(known_solution)) {
    if (!A_.square()) throw DimensionError("AveProblem: A must be square");
    if (A_.rows() != b_.size()) throw DimensionError("AveProblem: dim(b) != n");
    A_.check_finite();
    for (double v : b_)
        if (!std::isfinite(v)) throw ValidationError("AveProblem: non-finite entry in b");
    if (known_solution_) {
        if (known_solution_->size() != b_.size())
            throw DimensionError("AveProblem: dim(known_solution) != n");
        Vector r = matvec(A_, *known_solution_);
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] -= std::abs((*known_solution_)[i]) + b_[i];
        if (norm_inf(r) > 1e-12)
            throw ValidationError("AveProblem: known_solution is not consistent with b");
    }
}

Vector residual(const AveProblem& p, const Vector& x) {
    if (x.size() != p.dim()) throw DimensionError("residual: dim(x) != n");
    Vector r = matvec(p.A(), x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= std::abs(x[i]) + p.b()[i];
    return r;
}

double residual_norm(const AveProblem& p, const Vector& x) { return norm2(residual(p, x)); }

GlcpParts glcp_parts(const AveProblem& p, const Vector& x) {
    if (x.size() != p.dim()) throw DimensionError("glcp_parts: dim(x) != n");
    const Vector ax = matvec(p.A(), x);
    GlcpParts parts{Vector(x.size()), Vector(x.size()), 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        parts.Q[i] = ax[i] + x[i] - p.b()[i];
        parts.F[i] = ax[i] - x[i] - p.b()[i];
        parts.complementarity += parts.Q[i] * parts.F[i];
    }
    return parts;
}

LcpTransform::LcpTransform(const AveProblem& p)
    : M_(1, 1),
      a_minus_i_(add_scaled_identity(p.A(), -1.0)),
      a_minus_i_lu_(lu_factor(a_minus_i_)),
      b_(p.b()) {
    const DenseMatrix inv = solve_matrix(a_minus_i_lu_, DenseMatrix::identity(p.dim()));
    M_ = matmul(add_scaled_identity(p.A(), 1.0), inv);
    q_ = matvec(M_, b_);
    for (std::size_t i = 0; i < q_.size(); ++i) q_[i] -= b_[i];
}

Vector LcpTransform::to_u(const Vector& x) const {
    if (x.size() != dim()) throw DimensionError("LcpTransform::to_u: dim(x) != n");
    Vector u = matvec(a_minus_i_, x);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] -= b_[i];
    return u;
}

Vector LcpTransform::to_x(const Vector& u) const {
    if (u.size() != dim()) throw DimensionError("LcpTransform::to_x: dim(u) != n");
    Vector rhs = u;
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += b_[i];
    return a_minus_i_lu_.solve(rhs);
}

LcpTransform lcp_transform(const AveProblem& p) { return LcpTransform(p); }

ErrorBoundConstants error_bound_constants(const AveProblem& p) {
    const double smin = sigma_min(p.A());
    return ErrorBoundConstants{
        spectral_norm(add_scaled_identity(p.A(), 1.0)),
        spectral_norm(add_scaled_identity(p.A(), -1.0)),
        smin * smin - 1.0,
        smin - 1.0,
    };
}

std::pair<double, double> error_bounds(const AveProblem& p, const ErrorBoundConstants& consts,
                                       const Vector& x) {
    if (consts.mu_table <= 0.0)
        throw PreconditionError("error_bounds: requires sigma_min(A) > 1");
    const double rn = residual_norm(p, x);
    const double sum = consts.L1 + consts.L2;
    return {rn / sum, sum / consts.mu_lemma * rn};
}

std::pair<double, double> contraction_lhs_rhs(const AveProblem& p, const Vector& x) {
    if (!p.known_solution())
        throw PreconditionError("contraction_lhs_rhs: requires a known solution");
    const Vector r = residual(p, x);
    const Vector d = subtract(x, *p.known_solution());
    const double lhs = dot(matvec(p.A(), d), r);
    return {lhs, 0.5 * dot(r, r)};
}

AveProblem make_tridiag_problem(std::size_t n) {
    if (n < 2 || n % 2 != 0)
        throw ValidationError("make_tridiag_problem: n must be even and >= 2");
    DenseMatrix A(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        A(i, i) = 8.0;
        if (i > 0) A(i, i - 1) = -1.0;
        if (i + 1 < n) A(i, i + 1) = -1.0;
    }
    Vector xstar(n);
    for (std::size_t i = 0; i < n; ++i) xstar[i] = (i % 2 == 0) ? -1.0 : 1.0;
    Vector b = matvec(A, xstar);
    for (std::size_t i = 0; i < n; ++i) b[i] -= std::abs(xstar[i]);
    AveProblem p(std::move(A), std::move(b), std::move(xstar));
    p.generator = "tridiag";
    return p;
}

AveProblem make_random_problem(std::size_t n, double sigma_floor, std::uint64_t seed) {
    if (n == 0) throw ValidationError("make_random_problem: n must be positive");
    if (sigma_floor <= 1.0)
        throw ValidationError("make_random_problem: sigma_floor must exceed 1");
    Rng rng(seed);
    const DenseMatrix U = random_orthogonal(n, rng);
    const DenseMatrix V = random_orthogonal(n, rng);
    Vector sigma(n);
    sigma[0] = sigma_floor;
    for (std::size_t i = 1; i < n; ++i) sigma[i] = rng.uniform(sigma_floor, 10.0 * sigma_floor);
    DenseMatrix A(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += U(i, k) * sigma[k] * V(j, k);
            A(i, j) = s;
        }
    Vector xstar(n);
    for (std::size_t i = 0; i < n; ++i) xstar[i] = rng.sign() * rng.uniform(0.5, 2.0);
    Vector b = matvec(A, xstar);
    for (std::size_t i = 0; i < n; ++i) b[i] -= std::abs(xstar[i]);
    AveProblem p(std::move(A), std::move(b), std::move(xstar));
    p.generator = "random";
    p.seed = seed;
    return p;
}

double solvability_margin(const AveProblem& p) { return sigma_min(p.A()) - 1.0; }

} // namespace avekit

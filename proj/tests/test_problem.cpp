#include <cmath>
#include <numbers>

#include "doctest.h"

#include "avekit/problem.hpp"
#include "avekit/rng.hpp"

using namespace avekit;

namespace {

const AveProblem& example2() {
    static const AveProblem p(DenseMatrix(2, 2, {8, -1, -1, 8}), {-10, 8}, Vector{-1, 1});
    return p;
}

// x* plus a Gaussian direction of the given radius
Vector perturbed(const Vector& xstar, double radius, Rng& rng) {
    Vector d = rng.normal_vector(xstar.size());
    const double nd = norm2(d);
    Vector x = xstar;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += radius * d[i] / nd;
    return x;
}

} // namespace

TEST_CASE("AveProblem validates its inputs") {
    CHECK_THROWS_AS(AveProblem(DenseMatrix(2, 3, {1, 2, 3, 4, 5, 6}), {1, 1}), DimensionError);
    CHECK_THROWS_AS(AveProblem(DenseMatrix::identity(2), {1, 2, 3}), DimensionError);
    // b inconsistent with the claimed solution
    CHECK_THROWS_AS(AveProblem(DenseMatrix::identity(2), {1, 1}, Vector{5, 5}), ValidationError);
}

TEST_CASE("residual vanishes at the constructed solution") {
    const Vector r = residual(example2(), {-1, 1});
    CHECK(norm_inf(r) == 0.0);
}

TEST_CASE("residual at zero is -b") {
    const Vector r = residual(example2(), {0, 0});
    CHECK(r[0] == 10.0);
    CHECK(r[1] == -8.0);
}

TEST_CASE("residual scalar example") {
    const AveProblem p(DenseMatrix(1, 1, {2}), {1});
    CHECK(residual(p, {0})[0] == -1.0);
    CHECK_THROWS_AS(residual(p, {0, 0}), DimensionError);
}

TEST_CASE("glcp parts at the solution are complementary") {
    const auto parts = glcp_parts(example2(), {-1, 1});
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(parts.Q[i] >= -1e-10);
        CHECK(parts.F[i] >= -1e-10);
    }
    CHECK(std::abs(parts.complementarity) <= 1e-10);
}

TEST_CASE("glcp parts scalar examples") {
    const AveProblem p(DenseMatrix(1, 1, {2}), {1}, Vector{1});
    const auto at_solution = glcp_parts(p, {1});
    CHECK(at_solution.Q[0] == 2.0);
    CHECK(at_solution.F[0] == 0.0);
    CHECK(at_solution.complementarity == 0.0);
    const auto at_zero = glcp_parts(p, {0});
    CHECK(at_zero.Q[0] == -1.0);
    CHECK(at_zero.F[0] == -1.0);
    CHECK(at_zero.complementarity == 1.0);
}

TEST_CASE("glcp equivalence holds on generated problems") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const AveProblem p = make_random_problem(15, 1.5, seed);
        const auto parts = glcp_parts(p, *p.known_solution());
        for (std::size_t i = 0; i < p.dim(); ++i) {
            CHECK(parts.Q[i] >= -1e-10);
            CHECK(parts.F[i] >= -1e-10);
        }
        CHECK(std::abs(parts.complementarity) <= 1e-8);
    }
}

TEST_CASE("lcp transform of the 2x2 example") {
    const auto t = lcp_transform(example2());
    CHECK(t.M()(0, 0) == doctest::Approx(31.0 / 24.0).epsilon(1e-12));
    CHECK(t.M()(0, 1) == doctest::Approx(1.0 / 24.0).epsilon(1e-12));
    CHECK(t.M()(1, 0) == doctest::Approx(1.0 / 24.0).epsilon(1e-12));
    CHECK(t.M()(1, 1) == doctest::Approx(31.0 / 24.0).epsilon(1e-12));
}

TEST_CASE("lcp transform of a diagonal problem") {
    DenseMatrix A(2, 2, {3, 0, 0, 3});
    const AveProblem p(std::move(A), {0, 0});
    const auto t = lcp_transform(p);
    CHECK(t.M()(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(t.M()(1, 1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(t.M()(0, 1) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(norm_inf(t.q()) <= 1e-14);
}

TEST_CASE("lcp transform round trip is the identity") {
    const AveProblem p = make_tridiag_problem(20);
    const auto t = lcp_transform(p);
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const Vector x = rng.normal_vector(20);
        const Vector back = t.to_x(t.to_u(x));
        for (std::size_t i = 0; i < 20; ++i)
            CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-9));
    }
}

TEST_CASE("lcp transform satisfies M (A-I) = A+I") {
    const AveProblem p = make_tridiag_problem(8);
    const auto t = lcp_transform(p);
    const DenseMatrix lhs = matmul(t.M(), add_scaled_identity(p.A(), -1.0));
    const DenseMatrix rhs = add_scaled_identity(p.A(), 1.0);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j)
            CHECK(lhs(i, j) == doctest::Approx(rhs(i, j)).epsilon(1e-9));
}

TEST_CASE("lcp transform rejects A with eigenvalue 1") {
    const AveProblem p(DenseMatrix::identity(3), {1, 2, 3});
    CHECK_THROWS_AS(lcp_transform(p), SingularMatrixError);
}

TEST_CASE("error bound constants of the 2x2 example") {
    const auto c = error_bound_constants(example2());
    CHECK(c.L1 == doctest::Approx(10).epsilon(1e-10));
    CHECK(c.L2 == doctest::Approx(8).epsilon(1e-10));
    CHECK(c.mu_lemma == doctest::Approx(48).epsilon(1e-10));
    CHECK(c.mu_table == doctest::Approx(6).epsilon(1e-10));
}

TEST_CASE("error bounds vanish at the solution") {
    const auto c = error_bound_constants(example2());
    const auto [lower, upper] = error_bounds(example2(), c, {-1, 1});
    CHECK(lower == 0.0);
    CHECK(upper == 0.0);
}

TEST_CASE("error bounds at zero bracket the solution distance") {
    const auto c = error_bound_constants(example2());
    const auto [lower, upper] = error_bounds(example2(), c, {0, 0});
    const double rn = std::sqrt(164.0);
    CHECK(lower == doctest::Approx(rn / 18.0).epsilon(1e-10));
    CHECK(upper == doctest::Approx(18.0 / 48.0 * rn).epsilon(1e-10));
    const double dist = std::sqrt(2.0);
    CHECK(lower <= dist);
    CHECK(dist <= upper);
}

TEST_CASE("error bounds require sigma_min above 1") {
    const AveProblem p(DenseMatrix::identity(2), {1, 1});
    const auto c = error_bound_constants(p);
    CHECK_THROWS_AS(error_bounds(p, c, {0, 0}), PreconditionError);
}

TEST_CASE("error-bound sandwich holds on sampled points") {
    const AveProblem p = make_tridiag_problem(20);
    const auto c = error_bound_constants(p);
    const Vector& xstar = *p.known_solution();
    Rng rng(404);
    for (int trial = 0; trial < 1000; ++trial) {
        const double radius = std::pow(10.0, rng.uniform(-3.0, 3.0));
        const Vector x = perturbed(xstar, radius, rng);
        const auto [lower, upper] = error_bounds(p, c, x);
        const double dist = norm2(subtract(x, xstar));
        CHECK(lower <= dist * (1.0 + 1e-12) + 1e-15);
        CHECK(dist <= upper * (1.0 + 1e-12) + 1e-15);
    }
}

TEST_CASE("contraction pair vanishes at the solution") {
    const auto [lhs, rhs] = contraction_lhs_rhs(example2(), {-1, 1});
    CHECK(lhs == 0.0);
    CHECK(rhs == 0.0);
}

TEST_CASE("contraction scalar example") {
    const AveProblem p(DenseMatrix(1, 1, {2}), {1}, Vector{1});
    const auto [lhs, rhs] = contraction_lhs_rhs(p, {0});
    CHECK(lhs == 2.0);
    CHECK(rhs == 0.5);
}

TEST_CASE("contraction requires a known solution") {
    const AveProblem p(DenseMatrix(1, 1, {2}), {1});
    CHECK_THROWS_AS(contraction_lhs_rhs(p, {0}), PreconditionError);
}

TEST_CASE("contraction inequality holds on sampled points") {
    const AveProblem p = make_tridiag_problem(20);
    const Vector& xstar = *p.known_solution();
    Rng rng(505);
    for (int trial = 0; trial < 1000; ++trial) {
        const double radius = std::pow(10.0, rng.uniform(-3.0, 3.0));
        const auto [lhs, rhs] = contraction_lhs_rhs(p, perturbed(xstar, radius, rng));
        CHECK(lhs >= rhs - 1e-12);
    }
}

TEST_CASE("tridiag problem n=4 matches the hand-computed b") {
    const AveProblem p = make_tridiag_problem(4);
    CHECK(p.b() == Vector{-10, 9, -11, 8});
    CHECK(norm_inf(residual(p, *p.known_solution())) == 0.0);
}

TEST_CASE("tridiag problem n=2 matches the hand-computed b") {
    CHECK(make_tridiag_problem(2).b() == Vector{-10, 8});
}

TEST_CASE("tridiag generator rejects odd or tiny n") {
    CHECK_THROWS_AS(make_tridiag_problem(3), ValidationError);
    CHECK_THROWS_AS(make_tridiag_problem(0), ValidationError);
}

TEST_CASE("random problem pins sigma_min to the floor") {
    const AveProblem p = make_random_problem(25, 1.5, 99);
    CHECK(sigma_min(p.A()) >= 1.5 - 1e-8);
    CHECK(sigma_min(p.A()) == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(spectral_norm(p.A()) <= 15.0 + 1e-8);
    CHECK(norm_inf(residual(p, *p.known_solution())) <= 1e-12);
}

TEST_CASE("random problem is deterministic in the seed") {
    const AveProblem p1 = make_random_problem(12, 2.0, 7);
    const AveProblem p2 = make_random_problem(12, 2.0, 7);
    const AveProblem p3 = make_random_problem(12, 2.0, 8);
    CHECK(p1.A().data() == p2.A().data());
    CHECK(p1.b() == p2.b());
    CHECK(*p1.known_solution() == *p2.known_solution());
    CHECK(p1.A().data() != p3.A().data());
}

TEST_CASE("random problem validates its parameters") {
    CHECK_THROWS_AS(make_random_problem(4, 1.0, 1), ValidationError);
    CHECK_THROWS_AS(make_random_problem(0, 2.0, 1), ValidationError);
}

TEST_CASE("solvability margin") {
    const AveProblem p20 = make_tridiag_problem(20);
    const double expected = 7.0 - 2.0 * std::cos(std::numbers::pi / 21.0);
    CHECK(solvability_margin(p20) == doctest::Approx(expected).epsilon(1e-10));

    const AveProblem eye(DenseMatrix::identity(3), {1, 1, 1});
    CHECK(solvability_margin(eye) == doctest::Approx(0.0).epsilon(1e-12));

    DenseMatrix two = DenseMatrix::identity(2);
    two(0, 0) = two(1, 1) = 2.0;
    const AveProblem p2(std::move(two), {0, 0});
    CHECK(solvability_margin(p2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sigma_min above 1 guarantees lu_factor(A - I) succeeds") {
    for (std::size_t n : {2u, 8u, 20u}) {
        const AveProblem p = make_tridiag_problem(n);
        REQUIRE(solvability_margin(p) > 0.0);
        CHECK_NOTHROW(lu_factor(add_scaled_identity(p.A(), -1.0)));
    }
}

#include <cmath>
#include <memory>

#include "doctest.h"

#include "avekit/dynamics.hpp"
#include "avekit/rng.hpp"

using namespace avekit;

namespace {

// n=1, A=[3]: the transform has M = [2] and q = b, so q is whatever b is.
AveProblem scalar_lcp_problem(double b) {
    return AveProblem(DenseMatrix(1, 1, {3}), {b});
}

Vector perturbed(const Vector& xstar, double radius, Rng& rng) {
    Vector d = rng.normal_vector(xstar.size());
    const double nd = norm2(d);
    Vector x = xstar;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += radius * d[i] / nd;
    return x;
}

} // namespace

TEST_CASE("project_nonneg") {
    CHECK(project_nonneg({-1, 2, 0}) == Vector{0, 2, 0});
    const Vector v = {0.5, 3, 0};
    CHECK(project_nonneg(v) == v);
    CHECK(project_nonneg({-3}) == Vector{0});
}

TEST_CASE("FixedTimeParams range checks") {
    CHECK_NOTHROW(FixedTimeParams(6, 100, 100, 0.5, 1.5));
    CHECK_THROWS_AS(FixedTimeParams(0, 1, 1, 0.5, 1.5), ValidationError);
    CHECK_THROWS_AS(FixedTimeParams(1, -1, 1, 0.5, 1.5), ValidationError);
    CHECK_THROWS_AS(FixedTimeParams(1, 1, 1, 1.0, 1.5), ValidationError);
    CHECK_THROWS_AS(FixedTimeParams(1, 1, 1, 0.5, 1.0), ValidationError);
    CHECK_THROWS_AS(FixedTimeParams(1, 1, 1, 0.5, 1.5, -1e-3), ValidationError);
}

TEST_CASE("MeeParams range checks") {
    CHECK_NOTHROW(MeeParams(1.0, 0.19 / 2.0, 2.0));
    CHECK_THROWS_AS(MeeParams(0.0, 0.01, 2.0), ValidationError);
    CHECK_THROWS_AS(MeeParams(1.1, 0.01, 2.0), ValidationError);
    CHECK_THROWS_AS(MeeParams(1.0, 0.2, 2.0), ValidationError); // 0.2 >= 1/(5*2)
}

TEST_CASE("natural residual is zero when u=0 and q >= 0") {
    const auto t = lcp_transform(scalar_lcp_problem(2.0));
    REQUIRE(t.q()[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(natural_residual(t, {0}, 0.7)[0] == 0.0);
}

TEST_CASE("natural residual vanishes at the LCP solution") {
    const AveProblem p = make_tridiag_problem(6);
    const auto t = lcp_transform(p);
    const Vector ustar = t.to_u(*p.known_solution());
    CHECK(norm_inf(natural_residual(t, ustar, 1.0)) <= 1e-12);
    CHECK(norm_inf(natural_residual(t, ustar, 0.05)) <= 1e-12);
}

TEST_CASE("natural residual scalar example: M=2, q=-1") {
    const auto t = lcp_transform(scalar_lcp_problem(-1.0));
    REQUIRE(t.M()(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    REQUIRE(t.q()[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(natural_residual(t, {0}, 1.0)[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK_THROWS_AS(natural_residual(t, {0}, 0.0), ValidationError);
}

TEST_CASE("fixed-time rhs is zero at the solution") {
    const AveProblem p = make_tridiag_problem(20);
    const FixedTimeParams params(6, 100, 100, 0.5, 1.5, 1e-14 * (1.0 + norm2(p.b())));
    CHECK(norm_inf(fixed_time_rhs(p, params, *p.known_solution())) == 0.0);
}

TEST_CASE("fixed-time rhs scalar example") {
    const AveProblem p(DenseMatrix(1, 1, {2}), {1});
    const FixedTimeParams params(1, 1, 1, 0.3, 2.5);
    // r(0) = -1, ||r|| = 1, so every power of ||r|| is 1
    CHECK(fixed_time_rhs(p, params, {0})[0] == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("fixed-time rhs vanishes continuously near the solution") {
    const AveProblem p = make_tridiag_problem(10);
    const FixedTimeParams params(6, 100, 100, 0.5, 1.5);
    const Vector& xstar = *p.known_solution();
    Rng rng(31);
    double previous = 1e300;
    for (double radius : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10}) {
        const Vector x = perturbed(xstar, radius, rng);
        const double m = norm2(fixed_time_rhs(p, params, x));
        CHECK(std::isfinite(m));
        CHECK(m > 0.0);
        CHECK(m < previous);
        previous = m;
    }
}

TEST_CASE("fixed-time rhs equals rho(x) times the inverse-free rhs") {
    const AveProblem p = make_tridiag_problem(12);
    const FixedTimeParams params(3, 7, 2, 0.4, 1.8);
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const Vector x = perturbed(*p.known_solution(), rng.uniform(0.1, 3.0), rng);
        const double rn = residual_norm(p, x);
        const double rho = params.rho1 * std::pow(rn, params.lambda1 - 1.0) +
                           params.rho2 * std::pow(rn, params.lambda2 - 1.0);
        const Vector direct = fixed_time_rhs(p, params, x);
        const Vector rescaled = scaled(inverse_free_rhs(p, params.gamma, x), rho);
        for (std::size_t i = 0; i < x.size(); ++i)
            CHECK(direct[i] == doctest::Approx(rescaled[i]).epsilon(1e-12));
    }
}

TEST_CASE("fixed-time rhs points toward the solution") {
    const AveProblem p = make_tridiag_problem(20);
    const FixedTimeParams params(6, 100, 100, 0.5, 1.5);
    const Vector& xstar = *p.known_solution();
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const double radius = std::pow(10.0, rng.uniform(-3.0, 2.0));
        const Vector x = perturbed(xstar, radius, rng);
        CHECK(dot(subtract(x, xstar), fixed_time_rhs(p, params, x)) <= 0.0);
    }
}

TEST_CASE("inverse-free rhs examples") {
    const AveProblem p = make_tridiag_problem(20);
    CHECK(norm_inf(inverse_free_rhs(p, 6.0, *p.known_solution())) == 0.0);

    const AveProblem scalar(DenseMatrix(1, 1, {2}), {1});
    CHECK(inverse_free_rhs(scalar, 3.0, {0})[0] == doctest::Approx(6.0).epsilon(1e-14));
    CHECK_THROWS_AS(inverse_free_rhs(scalar, 0.0, {0}), ValidationError);
}

TEST_CASE("inverse-free rhs satisfies the Lipschitz bound") {
    const AveProblem p = make_tridiag_problem(10);
    const double gamma = 2.5;
    const double bound = gamma * spectral_norm(p.A()) * (spectral_norm(p.A()) + 1.0);
    Rng rng(1001);
    for (int trial = 0; trial < 1000; ++trial) {
        const Vector x = rng.normal_vector(10);
        const Vector y = rng.normal_vector(10);
        const double lhs = norm2(subtract(inverse_free_rhs(p, gamma, x),
                                          inverse_free_rhs(p, gamma, y)));
        CHECK(lhs <= bound * norm2(subtract(x, y)) * (1.0 + 1e-9));
    }
}

TEST_CASE("mee rhs vanishes at the LCP solution") {
    const AveProblem p = make_tridiag_problem(6);
    const MeeModel model(p);
    const Vector ustar = model.initial_state(*p.known_solution());
    CHECK(norm_inf(model.rhs(ustar)) <= 1e-12);
}

TEST_CASE("mee rhs scalar example: M=2, q=1, u=0") {
    const auto t = lcp_transform(scalar_lcp_problem(1.0));
    // beta = 0.1 sits exactly on the 1/(5L) boundary and is rejected
    CHECK_THROWS_AS(MeeParams(1.0, 0.1, 2.0), ValidationError);
    const MeeParams params(1.0, 0.09, 2.0);
    CHECK(mee_rhs(t, params, {0})[0] == 0.0);
}

TEST_CASE("mee step stays feasible: u + rhs lies in the orthant") {
    const AveProblem p = make_tridiag_problem(8);
    const MeeModel model(p);
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const Vector u = rng.normal_vector(8);
        const Vector g = model.rhs(u);
        for (std::size_t i = 0; i < 8; ++i) CHECK(u[i] + g[i] >= 0.0);
    }
}

TEST_CASE("huang-cui rhs examples") {
    const AveProblem p = make_tridiag_problem(6);
    const auto t = lcp_transform(p);
    const Vector ustar = t.to_u(*p.known_solution());
    CHECK(norm_inf(huang_cui_rhs(t, 4.0, ustar)) <= 1e-12);

    const auto ts = lcp_transform(scalar_lcp_problem(-1.0));
    CHECK(huang_cui_rhs(ts, 2.0, {0})[0] == doctest::Approx(2.0).epsilon(1e-14));

    // linear in gamma
    Rng rng(8);
    const Vector u = rng.normal_vector(6);
    const Vector g1 = huang_cui_rhs(t, 1.5, u);
    const Vector g2 = huang_cui_rhs(t, 3.0, u);
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(g2[i] == doctest::Approx(2.0 * g1[i]).epsilon(1e-13));
}

TEST_CASE("mansoori-erfanian rhs examples") {
    const AveProblem p = make_tridiag_problem(6);
    const auto t = lcp_transform(p);
    const Vector ustar = t.to_u(*p.known_solution());
    CHECK(norm_inf(mansoori_erfanian_rhs(t, 1.0, ustar)) <= 1e-11);

    const auto ts = lcp_transform(scalar_lcp_problem(-1.0));
    CHECK(mansoori_erfanian_rhs(ts, 1.0, {0})[0] == doctest::Approx(3.0).epsilon(1e-13));

    // equals (I + M^T) applied to the huang-cui rhs at matching gamma
    Rng rng(9);
    const Vector u = rng.normal_vector(6);
    const Vector hc = huang_cui_rhs(t, 2.0, u);
    Vector expect = matvec_transpose(t.M(), hc);
    for (std::size_t i = 0; i < 6; ++i) expect[i] += hc[i];
    const Vector me = mansoori_erfanian_rhs(t, 2.0, u);
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(me[i] == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("gao rhs examples") {
    const AveProblem scalar(DenseMatrix(1, 1, {2}), {1}, Vector{1});
    const auto lu = lu_factor(scalar.A());
    // z = |x*|: the equilibrium
    CHECK(gao_rhs(lu, scalar.b(), 2.0, {1})[0] == 0.0);
    // z = 3, rho = 2: x = 2, rhs = 1*(2-3) = -1
    CHECK(gao_rhs(lu, scalar.b(), 2.0, {3})[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK_THROWS_AS(gao_rhs(lu, scalar.b(), 0.0, {1}), ValidationError);

    const AveProblem p = make_tridiag_problem(10);
    const GaoModel model(p);
    const Vector zstar = model.initial_state(*p.known_solution());
    CHECK(norm_inf(model.rhs(zstar)) <= 1e-12);
}

TEST_CASE("output maps invert the initial-state maps") {
    const AveProblem p = make_tridiag_problem(8);
    Rng rng(21);
    const Vector x = rng.normal_vector(8);

    const InverseFreeModel inv_free(p, 2.0);
    CHECK(inv_free.output(x) == x);
    CHECK(inv_free.initial_state(x) == x);

    const HuangCuiModel hc(p, 2.0);
    const Vector back = hc.output(hc.initial_state(x));
    const GaoModel gao(p);
    const Vector back_gao = gao.output(gao.initial_state(x));
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-9));
        CHECK(back_gao[i] == doctest::Approx(x[i]).epsilon(1e-9));
    }
}

TEST_CASE("equilibrium characterization across all six models") {
    const AveProblem p = make_tridiag_problem(20);
    const Vector& xstar = *p.known_solution();
    ModelConfig config;
    config.gamma = 6.0;
    config.rho1 = config.rho2 = 100.0;
    config.lambda1 = 0.5;
    config.lambda2 = 1.5;
    Rng rng(55);
    for (const std::string& name : model_names()) {
        CAPTURE(name);
        config.name = name;
        const auto model = make_model(p, config);
        const Vector eq_state = model->initial_state(xstar);
        CHECK(norm2(model->rhs(eq_state)) <= 1e-10);

        int checked = 0;
        while (checked < 100) {
            const Vector x = perturbed(xstar, std::pow(10.0, rng.uniform(-2.0, 1.0)), rng);
            if (residual_norm(p, x) < 1e-3) continue;
            const Vector state = model->initial_state(x);
            CHECK(norm2(model->rhs(state)) > 0.0);
            CHECK(state_residual_norm(*model, state) ==
                  doctest::Approx(residual_norm(p, x)).epsilon(1e-8));
            ++checked;
        }
    }
}

TEST_CASE("state dimension is validated") {
    const AveProblem p = make_tridiag_problem(4);
    const InverseFreeModel model(p, 1.0);
    CHECK_THROWS_AS(model.rhs({1, 2}), DimensionError);
}

TEST_CASE("make_model rejects unknown names") {
    const AveProblem p = make_tridiag_problem(4);
    ModelConfig config;
    config.name = "newton";
    CHECK_THROWS_AS(make_model(p, config), ValidationError);
}

TEST_CASE("lcp-state models require sigma_min above 1") {
    DenseMatrix A = DenseMatrix::identity(2);
    A(0, 0) = A(1, 1) = 0.5;
    const AveProblem p(std::move(A), {1, 1});
    CHECK_THROWS_AS(HuangCuiModel(p, 1.0), PreconditionError);
    CHECK_THROWS_AS(MeeModel{p}, PreconditionError);
    CHECK_THROWS_AS(MansooriErfanianModel(p, 1.0), PreconditionError);
}

TEST_CASE("model names are the exact CLI strings") {
    CHECK(model_names() == std::vector<std::string>{"fixed-time", "inverse-free", "mee",
                                                    "huang-cui", "mansoori-erfanian", "gao"});
}

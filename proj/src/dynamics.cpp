#include "avekit/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace avekit {

FixedTimeParams::FixedTimeParams(double gamma_, double rho1_, double rho2_, double lambda1_,
                                 double lambda2_, double fix_threshold_)
    : gamma(gamma_), rho1(rho1_), rho2(rho2_), lambda1(lambda1_), lambda2(lambda2_),
      fix_threshold(fix_threshold_) {
    if (!(gamma > 0.0)) throw ValidationError("FixedTimeParams: gamma must be positive");
    if (!(rho1 > 0.0)) throw ValidationError("FixedTimeParams: rho1 must be positive");
    if (!(rho2 > 0.0)) throw ValidationError("FixedTimeParams: rho2 must be positive");
    if (!(lambda1 > 0.0 && lambda1 < 1.0))
        throw ValidationError("FixedTimeParams: lambda1 must lie in (0,1)");
    if (!(lambda2 > 1.0)) throw ValidationError("FixedTimeParams: lambda2 must exceed 1");
    if (!(fix_threshold >= 0.0))
        throw ValidationError("FixedTimeParams: fix_threshold must be nonnegative");
}

MeeParams::MeeParams(double lambda_, double beta_, double L_)
    : lambda(lambda_), beta(beta_), L(L_) {
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw ValidationError("MeeParams: lambda must lie in (0,1]");
    if (!(L > 0.0)) throw ValidationError("MeeParams: L must be positive");
    if (!(beta > 0.0 && beta < 1.0 / (5.0 * L)))
        throw ValidationError("MeeParams: beta must lie in (0, 1/(5L))");
}

Vector project_nonneg(const Vector& v) {
    Vector w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = std::max(0.0, v[i]);
    return w;
}

Vector natural_residual(const LcpTransform& t, const Vector& u, double beta) {
    if (!(beta > 0.0)) throw ValidationError("natural_residual: beta must be positive");
    if (u.size() != t.dim()) throw DimensionError("natural_residual: dim(u) != n");
    Vector w = matvec(t.M(), u);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = u[i] - beta * (w[i] + t.q()[i]);
    w = project_nonneg(w);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = u[i] - w[i];
    return w;
}

Vector fixed_time_rhs(const AveProblem& p, const FixedTimeParams& params, const Vector& x) {
    Vector r = residual(p, x);
    const double rn = norm2(r);
    if (rn <= params.fix_threshold) return Vector(x.size(), 0.0);
    // scale the unit residual direction; rho(x) itself would diverge here
    const double w = params.gamma *
                     (params.rho1 * std::pow(rn, params.lambda1) +
                      params.rho2 * std::pow(rn, params.lambda2));
    for (double& v : r) v /= rn;
    Vector g = matvec_transpose(p.A(), r);
    for (double& v : g) v *= -w;
    return g;
}

Vector inverse_free_rhs(const AveProblem& p, double gamma, const Vector& x) {
    if (!(gamma > 0.0)) throw ValidationError("inverse_free_rhs: gamma must be positive");
    Vector g = matvec_transpose(p.A(), residual(p, x));
    for (double& v : g) v *= -gamma;
    return g;
}

Vector mee_rhs(const LcpTransform& t, const MeeParams& params, const Vector& u) {
    const Vector e = natural_residual(t, u, params.beta);
    Vector g = matvec(t.M(), e);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = e[i] - params.beta * g[i];
    // P[u - lambda g] - u
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = u[i] - params.lambda * g[i];
    g = project_nonneg(g);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= u[i];
    return g;
}

Vector huang_cui_rhs(const LcpTransform& t, double gamma, const Vector& u) {
    if (!(gamma > 0.0)) throw ValidationError("huang_cui_rhs: gamma must be positive");
    Vector e = natural_residual(t, u, 1.0);
    for (double& v : e) v *= -gamma;
    return e;
}

Vector mansoori_erfanian_rhs(const LcpTransform& t, double gamma, const Vector& u) {
    if (!(gamma > 0.0)) throw ValidationError("mansoori_erfanian_rhs: gamma must be positive");
    const Vector e = natural_residual(t, u, 1.0);
    Vector g = matvec_transpose(t.M(), e);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = -gamma * (e[i] + g[i]);
    return g;
}

Vector gao_rhs(const LuFactorization& a_lu, const Vector& b, double rho, const Vector& z) {
    if (!(rho > 0.0)) throw ValidationError("gao_rhs: rho must be positive");
    if (z.size() != b.size()) throw DimensionError("gao_rhs: dim(z) != n");
    Vector rhs = z;
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += b[i];
    const Vector x = a_lu.solve(rhs);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = 0.5 * rho * (std::abs(x[i]) - z[i]);
    return rhs;
}

DynamicalModel::DynamicalModel(std::string name, AveProblem problem)
    : name_(std::move(name)), problem_(std::move(problem)) {}

void DynamicalModel::require_dim(const Vector& state) const {
    if (state.size() != dim())
        throw DimensionError(name_ + ": state dimension does not match the problem");
}

double state_residual_norm(const DynamicalModel& m, const Vector& state) {
    return residual_norm(m.problem(), m.output(state));
}

FixedTimeModel::FixedTimeModel(AveProblem p, FixedTimeParams params)
    : DynamicalModel("fixed-time", std::move(p)), params_(params) {}

Vector FixedTimeModel::rhs(const Vector& state) const {
    require_dim(state);
    return fixed_time_rhs(problem(), params_, state);
}

InverseFreeModel::InverseFreeModel(AveProblem p, double gamma)
    : DynamicalModel("inverse-free", std::move(p)), gamma_(gamma) {
    if (!(gamma_ > 0.0)) throw ValidationError("InverseFreeModel: gamma must be positive");
}

Vector InverseFreeModel::rhs(const Vector& state) const {
    require_dim(state);
    return inverse_free_rhs(problem(), gamma_, state);
}

LcpStateModel::LcpStateModel(std::string name, AveProblem p)
    : DynamicalModel(std::move(name), std::move(p)), transform_(problem()) {
    if (!(solvability_margin(problem()) > 0.0))
        throw PreconditionError(this->name() + ": requires sigma_min(A) > 1");
}

Vector LcpStateModel::output(const Vector& state) const { return transform_.to_x(state); }

Vector LcpStateModel::initial_state(const Vector& x0) const { return transform_.to_u(x0); }

namespace {

MeeParams mee_params_for(const DenseMatrix& M, double lambda, std::optional<double> beta) {
    const double L = spectral_norm(M);
    return MeeParams(lambda, beta ? *beta : 0.19 / L, L);
}

} // namespace

MeeModel::MeeModel(AveProblem p, double lambda, std::optional<double> beta)
    : LcpStateModel("mee", std::move(p)),
      params_(mee_params_for(transform().M(), lambda, beta)) {}

Vector MeeModel::rhs(const Vector& state) const {
    require_dim(state);
    return mee_rhs(transform(), params_, state);
}

HuangCuiModel::HuangCuiModel(AveProblem p, double gamma)
    : LcpStateModel("huang-cui", std::move(p)), gamma_(gamma) {
    if (!(gamma_ > 0.0)) throw ValidationError("HuangCuiModel: gamma must be positive");
}

Vector HuangCuiModel::rhs(const Vector& state) const {
    require_dim(state);
    return huang_cui_rhs(transform(), gamma_, state);
}

MansooriErfanianModel::MansooriErfanianModel(AveProblem p, double gamma)
    : LcpStateModel("mansoori-erfanian", std::move(p)), gamma_(gamma) {
    if (!(gamma_ > 0.0)) throw ValidationError("MansooriErfanianModel: gamma must be positive");
}

Vector MansooriErfanianModel::rhs(const Vector& state) const {
    require_dim(state);
    return mansoori_erfanian_rhs(transform(), gamma_, state);
}

GaoModel::GaoModel(AveProblem p, double rho)
    : DynamicalModel("gao", std::move(p)), a_lu_(lu_factor(problem().A())), rho_(rho) {
    if (!(rho_ > 0.0)) throw ValidationError("GaoModel: rho must be positive");
}

Vector GaoModel::rhs(const Vector& state) const {
    require_dim(state);
    return gao_rhs(a_lu_, problem().b(), rho_, state);
}

Vector GaoModel::output(const Vector& state) const {
    require_dim(state);
    Vector rhs = state;
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += problem().b()[i];
    return a_lu_.solve(rhs);
}

Vector GaoModel::initial_state(const Vector& x0) const {
    require_dim(x0);
    Vector z = matvec(problem().A(), x0);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] -= problem().b()[i];
    return z;
}

const std::vector<std::string>& model_names() {
    static const std::vector<std::string> names = {
        "fixed-time", "inverse-free", "mee", "huang-cui", "mansoori-erfanian", "gao",
    };
    return names;
}

std::unique_ptr<DynamicalModel> make_model(const AveProblem& p, const ModelConfig& config) {
    const double fix_threshold =
        config.fix_threshold ? *config.fix_threshold : 1e-14 * (1.0 + norm2(p.b()));
    if (config.name == "fixed-time")
        return std::make_unique<FixedTimeModel>(
            p, FixedTimeParams(config.gamma, config.rho1, config.rho2, config.lambda1,
                               config.lambda2, fix_threshold));
    if (config.name == "inverse-free")
        return std::make_unique<InverseFreeModel>(p, config.gamma);
    if (config.name == "mee")
        return std::make_unique<MeeModel>(p, config.mee_lambda, config.mee_beta);
    if (config.name == "huang-cui")
        return std::make_unique<HuangCuiModel>(p, config.gamma);
    if (config.name == "mansoori-erfanian")
        return std::make_unique<MansooriErfanianModel>(p, config.gamma);
    if (config.name == "gao")
        return std::make_unique<GaoModel>(p, config.gao_rho);
    throw ValidationError("make_model: unknown model name '" + config.name + "'");
}

} // namespace avekit

#include "avekit/settling.hpp"

#include <cmath>
#include <cstdio>

namespace avekit {

std::string to_string(MuConvention c) { return c == MuConvention::Lemma ? "lemma" : "table"; }

MuConvention mu_convention_from_string(const std::string& s) {
    if (s == "lemma") return MuConvention::Lemma;
    if (s == "table") return MuConvention::Table;
    throw ValidationError("unknown mu convention '" + s + "' (expected table or lemma)");
}

std::string to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::Gamma: return "gamma";
        case SweepParameter::Rho: return "rho";
        case SweepParameter::Lambda1: return "lambda1";
        case SweepParameter::Lambda2: return "lambda2";
    }
    return "unknown";
}

SweepParameter sweep_parameter_from_string(const std::string& s) {
    if (s == "gamma") return SweepParameter::Gamma;
    if (s == "rho") return SweepParameter::Rho;
    if (s == "lambda1") return SweepParameter::Lambda1;
    if (s == "lambda2") return SweepParameter::Lambda2;
    throw ValidationError("unknown sweep parameter '" + s +
                          "' (expected gamma, rho, lambda1 or lambda2)");
}

namespace {

struct MatrixNorms {
    double sigma_min_a;
    double L1;
    double L2;
    std::size_t n;
};

MatrixNorms norms_for(const DenseMatrix& A) {
    if (!A.square()) throw DimensionError("settling_bound: A must be square");
    return MatrixNorms{
        sigma_min(A),
        spectral_norm(add_scaled_identity(A, 1.0)),
        spectral_norm(add_scaled_identity(A, -1.0)),
        A.rows(),
    };
}

SettlingReport bound_from_norms(const MatrixNorms& norms, const FixedTimeParams& p,
                                MuConvention convention) {
    if (!(norms.sigma_min_a > 1.0))
        throw PreconditionError("settling_bound: requires sigma_min(A) > 1");
    SettlingReport rep;
    rep.convention = convention;
    rep.mu = (convention == MuConvention::Lemma) ? norms.sigma_min_a * norms.sigma_min_a - 1.0
                                                 : norms.sigma_min_a - 1.0;
    rep.L1 = norms.L1;
    rep.L2 = norms.L2;
    const double sum = rep.L1 + rep.L2;
    rep.c1 = std::pow(2.0, 0.5 * (p.lambda1 - 1.0)) * p.gamma * p.rho1 * rep.mu * rep.mu /
             std::pow(sum, 3.0 - p.lambda1);
    rep.c2 = std::pow(2.0, 0.5 * (p.lambda2 - 1.0)) * p.gamma * p.rho2 *
             std::pow(rep.mu, 1.0 + p.lambda2) / std::pow(sum, 1.0 + p.lambda2);
    rep.kappa1 = 0.5 * (p.lambda1 + 1.0);
    rep.kappa2 = 0.5 * (p.lambda2 + 1.0);
    rep.t_max = 1.0 / (rep.c1 * (1.0 - rep.kappa1)) + 1.0 / (rep.c2 * (rep.kappa2 - 1.0));
    rep.gamma = p.gamma;
    rep.rho1 = p.rho1;
    rep.rho2 = p.rho2;
    rep.lambda1 = p.lambda1;
    rep.lambda2 = p.lambda2;
    rep.n = norms.n;
    return rep;
}

FixedTimeParams with_sweep_value(const FixedTimeParams& base, SweepParameter parameter,
                                 double value) {
    double gamma = base.gamma, rho1 = base.rho1, rho2 = base.rho2;
    double lambda1 = base.lambda1, lambda2 = base.lambda2;
    switch (parameter) {
        case SweepParameter::Gamma: gamma = value; break;
        case SweepParameter::Rho: rho1 = rho2 = value; break;
        case SweepParameter::Lambda1: lambda1 = value; break;
        case SweepParameter::Lambda2: lambda2 = value; break;
    }
    return FixedTimeParams(gamma, rho1, rho2, lambda1, lambda2, base.fix_threshold);
}

} // namespace

SettlingReport settling_bound(const DenseMatrix& A, const FixedTimeParams& params,
                              MuConvention convention) {
    return bound_from_norms(norms_for(A), params, convention);
}

std::vector<SettlingRow> settling_table(const DenseMatrix& A, const FixedTimeParams& base,
                                        SweepParameter parameter,
                                        const std::vector<double>& values,
                                        MuConvention convention) {
    const MatrixNorms norms = norms_for(A);
    std::vector<SettlingRow> rows;
    rows.reserve(values.size());
    for (const double v : values)
        rows.push_back({v, bound_from_norms(norms, with_sweep_value(base, parameter, v),
                                            convention)});
    return rows;
}

std::string to_text(const SettlingReport& rep) {
    char buf[2048];
    std::snprintf(buf, sizeof(buf),
                  "mu_convention = %s\n"
                  "mu = %.17g\n"
                  "L1 = %.17g\n"
                  "L2 = %.17g\n"
                  "c1 = %.17g\n"
                  "c2 = %.17g\n"
                  "kappa1 = %.17g\n"
                  "kappa2 = %.17g\n"
                  "T_max = %.17g\n"
                  "gamma = %.17g\n"
                  "rho1 = %.17g\n"
                  "rho2 = %.17g\n"
                  "lambda1 = %.17g\n"
                  "lambda2 = %.17g\n"
                  "n = %zu\n",
                  to_string(rep.convention).c_str(), rep.mu, rep.L1, rep.L2, rep.c1, rep.c2,
                  rep.kappa1, rep.kappa2, rep.t_max, rep.gamma, rep.rho1, rep.rho2, rep.lambda1,
                  rep.lambda2, rep.n);
    return buf;
}

} // namespace avekit

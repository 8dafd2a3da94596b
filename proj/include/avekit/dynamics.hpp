#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "avekit/problem.hpp"

namespace avekit {

/// Parameters of the fixed-time model
///   dx/dt = rho(x) g(gamma, x),
///   rho(x) = rho1/||r||^(1-lambda1) + rho2/||r||^(1-lambda2)  (x outside Fix(r)).
/// fix_threshold is the numerical stand-in for membership in Fix(r).
struct FixedTimeParams {
    FixedTimeParams(double gamma, double rho1, double rho2, double lambda1, double lambda2,
                    double fix_threshold = 0.0);

    double gamma;
    double rho1;
    double rho2;
    double lambda1; // in (0,1)
    double lambda2; // > 1
    double fix_threshold;
};

/// Parameters of the MEE projection model; L = ||M||.
struct MeeParams {
    MeeParams(double lambda, double beta, double L);
    static MeeParams defaults(double L) { return MeeParams(1.0, 0.19 / L, L); }

    double lambda; // in (0,1]
    double beta;   // in (0, 1/(5L))
    double L;
};

/// Componentwise max(0, v): projection onto the nonnegative orthant.
Vector project_nonneg(const Vector& v);

/// Natural residual e(u,beta) = u - P[u - beta(Mu + q)].
Vector natural_residual(const LcpTransform& t, const Vector& u, double beta);

/// Fixed-time right-hand side, evaluated in the combined form
///   -gamma (rho1 ||r||^lambda1 + rho2 ||r||^lambda2) A^T (r/||r||),
/// which never materializes rho(x) and stays finite as ||r|| -> 0.
/// Returns zero once ||r(x)|| <= fix_threshold.
Vector fixed_time_rhs(const AveProblem& p, const FixedTimeParams& params, const Vector& x);

/// dx/dt = gamma A^T (b + |x| - Ax) = -gamma A^T r(x)
Vector inverse_free_rhs(const AveProblem& p, double gamma, const Vector& x);

/// du/dt = P[u - lambda g(u,beta)] - u with g = e - beta M e.
Vector mee_rhs(const LcpTransform& t, const MeeParams& params, const Vector& u);

/// du/dt = -gamma e(u,1)
Vector huang_cui_rhs(const LcpTransform& t, double gamma, const Vector& u);

/// du/dt = -gamma (I + M^T) e(u,1)
Vector mansoori_erfanian_rhs(const LcpTransform& t, double gamma, const Vector& u);

/// dz/dt = rho/2 (|x| - z) with x = A^{-1}(z + b).
Vector gao_rhs(const LuFactorization& a_lu, const Vector& b, double rho, const Vector& z);

/// A named right-hand side together with the output map from its internal
/// state to the AVE variable x and the reverse map used to seed x0.
class DynamicalModel {
public:
    virtual ~DynamicalModel() = default;

    const std::string& name() const { return name_; }
    const AveProblem& problem() const { return problem_; }
    std::size_t dim() const { return problem_.dim(); }

    virtual Vector rhs(const Vector& state) const = 0;
    virtual Vector output(const Vector& state) const { return state; }
    virtual Vector initial_state(const Vector& x0) const { return x0; }

protected:
    DynamicalModel(std::string name, AveProblem problem);
    void require_dim(const Vector& state) const;

private:
    std::string name_;
    AveProblem problem_;
};

/// ||r(output(state))||, the probe every solver run terminates on.
double state_residual_norm(const DynamicalModel& m, const Vector& state);

class FixedTimeModel : public DynamicalModel {
public:
    FixedTimeModel(AveProblem p, FixedTimeParams params);
    Vector rhs(const Vector& state) const override;
    const FixedTimeParams& params() const { return params_; }

private:
    FixedTimeParams params_;
};

class InverseFreeModel : public DynamicalModel {
public:
    InverseFreeModel(AveProblem p, double gamma);
    Vector rhs(const Vector& state) const override;

private:
    double gamma_;
};

/// Common base of the three models that evolve the LCP variable u.
/// Requires sigma_min(A) > 1 at construction so A - I is safely invertible.
class LcpStateModel : public DynamicalModel {
public:
    Vector output(const Vector& state) const override;
    Vector initial_state(const Vector& x0) const override;
    const LcpTransform& transform() const { return transform_; }

protected:
    LcpStateModel(std::string name, AveProblem p);

private:
    LcpTransform transform_;
};

class MeeModel : public LcpStateModel {
public:
    /// beta defaults to 0.19/L with L = ||M||, strictly inside the (0, 1/(5L)) bound.
    MeeModel(AveProblem p, double lambda = 1.0, std::optional<double> beta = {});
    Vector rhs(const Vector& state) const override;
    const MeeParams& params() const { return params_; }

private:
    MeeParams params_;
};

class HuangCuiModel : public LcpStateModel {
public:
    HuangCuiModel(AveProblem p, double gamma);
    Vector rhs(const Vector& state) const override;

private:
    double gamma_;
};

class MansooriErfanianModel : public LcpStateModel {
public:
    MansooriErfanianModel(AveProblem p, double gamma);
    Vector rhs(const Vector& state) const override;

private:
    double gamma_;
};

/// HLCP model evolving z with output x = A^{-1}(z + b).
class GaoModel : public DynamicalModel {
public:
    GaoModel(AveProblem p, double rho = 2.0);
    Vector rhs(const Vector& state) const override;
    Vector output(const Vector& state) const override;
    Vector initial_state(const Vector& x0) const override;

private:
    LuFactorization a_lu_;
    double rho_;
};

/// Everything a CLI/config needs to instantiate any model by name.
struct ModelConfig {
    std::string name;
    double gamma = 1.0;
    double rho1 = 1.0;
    double rho2 = 1.0;
    double lambda1 = 0.5;
    double lambda2 = 1.5;
    std::optional<double> fix_threshold; // default 1e-14 * (1 + ||b||)
    double mee_lambda = 1.0;
    std::optional<double> mee_beta;      // default 0.19/L
    double gao_rho = 2.0;
};

/// Exact model-name strings: fixed-time, inverse-free, mee, huang-cui,
/// mansoori-erfanian, gao.
const std::vector<std::string>& model_names();

std::unique_ptr<DynamicalModel> make_model(const AveProblem& p, const ModelConfig& config);

} // namespace avekit

#pragma once

#include <string>
#include <vector>

#include "avekit/dynamics.hpp"
#include "avekit/linalg.hpp"

namespace avekit {

/// Which reading of mu feeds the settling constants. `Table` (sigma_min - 1)
/// reproduces the published settling-time tables; `Lemma` (sigma_min^2 - 1)
/// is the constant of the residual error bound. Both are exposed, and every
/// report says which one it used.
enum class MuConvention { Lemma, Table };

std::string to_string(MuConvention c);
MuConvention mu_convention_from_string(const std::string& s);

struct SettlingReport {
    MuConvention convention;
    double mu;
    double L1; // ||A+I||
    double L2; // ||A-I||
    double c1;
    double c2;
    double kappa1; // (lambda1+1)/2, in (0.5,1)
    double kappa2; // (lambda2+1)/2, > 1
    double t_max;  // 1/(c1(1-kappa1)) + 1/(c2(kappa2-1))

    // inputs echoed
    double gamma;
    double rho1;
    double rho2;
    double lambda1;
    double lambda2;
    std::size_t n;
};

/// Conservative settling-time bound of the fixed-time model:
///   c1 = 2^((l1-1)/2) gamma rho1 mu^2       / (L1+L2)^(3-l1)
///   c2 = 2^((l2-1)/2) gamma rho2 mu^(1+l2) / (L1+L2)^(1+l2)
/// Throws PreconditionError unless sigma_min(A) > 1.
SettlingReport settling_bound(const DenseMatrix& A, const FixedTimeParams& params,
                              MuConvention convention);

enum class SweepParameter { Gamma, Rho, Lambda1, Lambda2 };

std::string to_string(SweepParameter p);
SweepParameter sweep_parameter_from_string(const std::string& s);

struct SettlingRow {
    double value;
    SettlingReport report;
};

/// One settling_bound row per sweep value; Rho sets rho1 = rho2 jointly.
/// The three matrix norms are computed once and shared across rows.
std::vector<SettlingRow> settling_table(const DenseMatrix& A, const FixedTimeParams& base,
                                        SweepParameter parameter,
                                        const std::vector<double>& values,
                                        MuConvention convention);

/// Key/value text form of a report.
std::string to_text(const SettlingReport& report);

} // namespace avekit

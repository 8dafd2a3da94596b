#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "avekit/linalg.hpp"

namespace avekit {

enum class Termination { Event, TFinal, StepLimit, StepUnderflow };

std::string to_string(Termination t);

struct IntegratorOptions {
    double rtol = 1e-6;
    double atol = 1e-9;
    /// 0 selects the automatic heuristic
    double initial_step = 0.0;
    double max_step = std::numeric_limits<double>::infinity();
    double min_step = 1e-14;
    std::size_t max_accepted_steps = 1000000;
    /// terminate once ||r(output(state))|| drops to this value
    std::optional<double> event_residual_tol;
    double t_final = 50.0;

    void validate() const;
};

struct IntegrationStats {
    std::size_t rhs_evaluations = 0;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
};

/// Accepted integration steps only; no interpolated dense output.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    std::vector<double> residual_norms; // empty unless a residual probe was given
    std::vector<double> energies;       // empty unless an energy probe was given
    IntegrationStats stats;
    Termination termination = Termination::TFinal;
};

using RhsFn = std::function<Vector(const Vector&)>;
using ProbeFn = std::function<double(const Vector&)>;

/// Adaptive Bogacki-Shampine 3(2) embedded pair with FSAL: three fresh rhs
/// evaluations per accepted step, per-step error from the 2nd/3rd-order
/// difference in a weighted RMS norm (weights atol + rtol*|x_i|), accepted
/// when <= 1, step factor 0.9*err^(-1/3) clamped to [0.2, 5].
///
/// StepUnderflow and StepLimit are recorded terminations, not exceptions.
Trajectory integrate(const RhsFn& rhs, const Vector& x0, const IntegratorOptions& opts,
                     const ProbeFn& residual_probe = {}, const ProbeFn& energy_probe = {});

/// n_steps applications of the 3rd-order advance with a constant step and no
/// error control; the order-verification harness.
Trajectory integrate_fixed_step(const RhsFn& rhs, const Vector& x0, double h,
                                std::size_t n_steps);

} // namespace avekit

#include "avekit/ode.hpp"

#include <algorithm>
#include <cmath>

#include "avekit/errors.hpp"

namespace avekit {

std::string to_string(Termination t) {
    switch (t) {
        case Termination::Event: return "event";
        case Termination::TFinal: return "t_final";
        case Termination::StepLimit: return "step_limit";
        case Termination::StepUnderflow: return "step_underflow";
    }
    return "unknown";
}

void IntegratorOptions::validate() const {
    if (!(rtol > 0.0) || !(atol > 0.0))
        throw ValidationError("IntegratorOptions: tolerances must be positive");
    if (!(min_step < max_step))
        throw ValidationError("IntegratorOptions: min_step must be below max_step");
    if (!(min_step > 0.0))
        throw ValidationError("IntegratorOptions: min_step must be positive");
    if (initial_step < 0.0)
        throw ValidationError("IntegratorOptions: initial_step must be nonnegative");
    if (!(t_final > 0.0))
        throw ValidationError("IntegratorOptions: t_final must be positive");
    if (event_residual_tol && !(*event_residual_tol > 0.0))
        throw ValidationError("IntegratorOptions: event_residual_tol must be positive");
    if (max_accepted_steps == 0)
        throw ValidationError("IntegratorOptions: max_accepted_steps must be positive");
}

namespace {

// Bogacki-Shampine 3(2) coefficients.
constexpr double B1 = 2.0 / 9.0, B2 = 1.0 / 3.0, B3 = 4.0 / 9.0;
// third-order minus second-order weights, for the error estimate
constexpr double E1 = 2.0 / 9.0 - 7.0 / 24.0;
constexpr double E2 = 1.0 / 3.0 - 1.0 / 4.0;
constexpr double E3 = 4.0 / 9.0 - 1.0 / 3.0;
constexpr double E4 = -1.0 / 8.0;

// One third-order advance from x with derivative k1 = f(x); fills x_new and
// returns k2, k3 through the out parameters.
void bs3_advance(const RhsFn& f, const Vector& x, const Vector& k1, double h, Vector& k2,
                 Vector& k3, Vector& x_new) {
    const std::size_t n = x.size();
    Vector stage(n);
    for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + 0.5 * h * k1[i];
    k2 = f(stage);
    for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + 0.75 * h * k2[i];
    k3 = f(stage);
    x_new.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        x_new[i] = x[i] + h * (B1 * k1[i] + B2 * k2[i] + B3 * k3[i]);
}

double error_norm(const Vector& x, const Vector& x_new, const Vector& k1, const Vector& k2,
                  const Vector& k3, const Vector& k4, double h, double atol, double rtol) {
    double s = 0.0;
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double e = h * (E1 * k1[i] + E2 * k2[i] + E3 * k3[i] + E4 * k4[i]);
        const double w = atol + rtol * std::max(std::abs(x[i]), std::abs(x_new[i]));
        const double q = e / w;
        s += q * q;
    }
    return std::sqrt(s / static_cast<double>(n));
}

} // namespace

Trajectory integrate(const RhsFn& rhs, const Vector& x0, const IntegratorOptions& opts,
                     const ProbeFn& residual_probe, const ProbeFn& energy_probe) {
    opts.validate();
    Trajectory traj;
    traj.termination = Termination::TFinal;

    Vector x = x0;
    double t = 0.0;

    const auto record = [&](double time, const Vector& state) {
        traj.times.push_back(time);
        traj.states.push_back(state);
        if (residual_probe) traj.residual_norms.push_back(residual_probe(state));
        if (energy_probe) traj.energies.push_back(energy_probe(state));
    };
    const auto event_hit = [&]() {
        return residual_probe && opts.event_residual_tol &&
               traj.residual_norms.back() <= *opts.event_residual_tol;
    };

    record(t, x);
    if (event_hit()) {
        traj.termination = Termination::Event;
        return traj;
    }

    Vector k1 = rhs(x);
    ++traj.stats.rhs_evaluations;

    double h = opts.initial_step;
    if (h == 0.0) {
        // standard heuristic; the controller corrects it within a few steps
        h = 0.01 * std::cbrt(opts.atol + opts.rtol * norm2(x)) / std::max(norm2(k1), 1e-12);
    }
    h = std::clamp(h, opts.min_step, opts.max_step);

    Vector k2, k3, x_new;
    while (true) {
        if (t >= opts.t_final) break;
        bool clipped = false;
        if (t + h >= opts.t_final) {
            h = opts.t_final - t;
            clipped = true;
        }

        bs3_advance(rhs, x, k1, h, k2, k3, x_new);
        Vector k4 = rhs(x_new);
        traj.stats.rhs_evaluations += 3;

        const double err = error_norm(x, x_new, k1, k2, k3, k4, h, opts.atol, opts.rtol);
        const double factor =
            (err > 0.0) ? std::clamp(0.9 * std::pow(err, -1.0 / 3.0), 0.2, 5.0) : 5.0;

        if (err <= 1.0) {
            t = clipped ? opts.t_final : t + h;
            x = std::move(x_new);
            x_new = Vector();
            k1 = std::move(k4);
            ++traj.stats.accepted_steps;
            record(t, x);
            if (event_hit()) {
                traj.termination = Termination::Event;
                break;
            }
            if (t >= opts.t_final) {
                traj.termination = Termination::TFinal;
                break;
            }
            if (traj.stats.accepted_steps >= opts.max_accepted_steps) {
                traj.termination = Termination::StepLimit;
                break;
            }
            h = std::clamp(h * factor, opts.min_step, opts.max_step);
        } else {
            ++traj.stats.rejected_steps;
            const double h_next = h * factor;
            if (h_next < opts.min_step) {
                traj.termination = Termination::StepUnderflow;
                break;
            }
            h = h_next;
        }
    }
    return traj;
}

Trajectory integrate_fixed_step(const RhsFn& rhs, const Vector& x0, double h,
                                std::size_t n_steps) {
    if (!(h > 0.0)) throw ValidationError("integrate_fixed_step: h must be positive");
    Trajectory traj;
    traj.termination = Termination::TFinal;
    Vector x = x0;
    traj.times.push_back(0.0);
    traj.states.push_back(x);
    Vector k2, k3, x_new;
    for (std::size_t s = 0; s < n_steps; ++s) {
        const Vector k1 = rhs(x);
        bs3_advance(rhs, x, k1, h, k2, k3, x_new);
        traj.stats.rhs_evaluations += 3;
        x = x_new;
        ++traj.stats.accepted_steps;
        traj.times.push_back(static_cast<double>(s + 1) * h);
        traj.states.push_back(x);
    }
    return traj;
}

} // namespace avekit

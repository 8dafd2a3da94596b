#include "avekit/commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "avekit/problem_io.hpp"
#include "avekit/rng.hpp"

namespace avekit {

namespace fs = std::filesystem;

std::size_t thread_cap() {
    const char* env = std::getenv("AVEKIT_THREADS");
    if (!env) return std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const std::uint64_t v = parse_u64(env, "AVEKIT_THREADS");
    if (v == 0) throw ConfigError("AVEKIT_THREADS must be a positive integer");
    return static_cast<std::size_t>(v);
}

AveProblem build_problem(const ProblemSpec& spec) {
    if (spec.generator == "tridiag") return make_tridiag_problem(spec.n);
    if (spec.generator == "random")
        return make_random_problem(spec.n, spec.sigma_floor, spec.seed);
    return load_problem(spec.path);
}

namespace {

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min(thread_cap(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count || failed.load()) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        std::cerr << "avekit: config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ValidationError& e) {
        std::cerr << "avekit: invalid value: " << e.what() << "\n";
        return kExitConfig;
    } catch (const PreconditionError& e) {
        std::cerr << "avekit: precondition not met: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "avekit: io error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "avekit: numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

ExperimentConfig load_with_overrides(const CliOptions& cli) {
    ExperimentConfig cfg = load_experiment(cli.config_path);
    if (cli.out_dir) cfg.output.dir = *cli.out_dir;
    if (cli.seed) cfg.problem.seed = *cli.seed;
    return cfg;
}

double auto_event_tol(const AveProblem& p) { return 1e-6 * (1.0 + norm2(p.b())); }

IntegratorOptions finalize_integrator(const ExperimentConfig& cfg, const AveProblem& p) {
    IntegratorOptions opts = cfg.integrator;
    if (!cfg.event_tol_given && !cfg.event_tol_disabled)
        opts.event_residual_tol = auto_event_tol(p);
    if (cfg.event_tol_disabled) opts.event_residual_tol.reset();
    return opts;
}

struct ModelRun {
    Trajectory traj;
    Vector final_output;
    double wall_s = 0.0;
};

ModelRun run_model(const DynamicalModel& model, const IntegratorOptions& opts) {
    const AveProblem& p = model.problem();
    const RhsFn rhs = [&model](const Vector& s) { return model.rhs(s); };
    const ProbeFn residual_probe = [&model](const Vector& s) {
        return state_residual_norm(model, s);
    };
    ProbeFn energy_probe;
    if (p.known_solution()) {
        energy_probe = [&model, &p](const Vector& s) {
            const Vector d = subtract(model.output(s), *p.known_solution());
            return 0.5 * dot(d, d);
        };
    }
    const Vector x0(p.dim(), 0.0);
    ModelRun run;
    const auto start = std::chrono::steady_clock::now();
    run.traj = integrate(rhs, model.initial_state(x0), opts, residual_probe, energy_probe);
    run.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    run.final_output = model.output(run.traj.states.back());
    return run;
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

void write_report(const std::string& path, const ConfigDoc& echo,
                  const std::vector<ConfigSection>& results) {
    ConfigDoc doc = echo;
    for (const auto& s : results) doc.sections.push_back(s);
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report file '" + path + "'");
    out << serialize_config(doc);
    if (!out) throw IoError("failed writing report file '" + path + "'");
}

ConfigSection result_for_run(const std::string& section_name, const DynamicalModel& model,
                             const ModelRun& run) {
    const AveProblem& p = model.problem();
    ConfigSection s{section_name, {}};
    s.entries.push_back({"model", model.name()});
    s.entries.push_back({"n", std::to_string(p.dim())});
    s.entries.push_back({"termination", to_string(run.traj.termination)});
    if (run.traj.termination == Termination::Event)
        s.entries.push_back({"event_time", format_full(run.traj.times.back())});
    // bitwise the trajectory's last record; the reload test leans on this
    s.entries.push_back({"final_residual_norm", format_full(run.traj.residual_norms.back())});
    s.entries.push_back(
        {"final_residual_inf", format_full(norm_inf(residual(p, run.final_output)))});
    if (p.known_solution())
        s.entries.push_back({"final_error_inf",
                             format_full(norm_inf(subtract(run.final_output,
                                                           *p.known_solution())))});
    s.entries.push_back({"accepted_steps", std::to_string(run.traj.stats.accepted_steps)});
    s.entries.push_back({"rejected_steps", std::to_string(run.traj.stats.rejected_steps)});
    s.entries.push_back({"rhs_evaluations", std::to_string(run.traj.stats.rhs_evaluations)});
    s.entries.push_back({"wall_time_s", format_full(run.wall_s)});
    return s;
}

int exit_for_termination(Termination t) {
    if (t == Termination::Event || t == Termination::TFinal) return kExitOk;
    std::cerr << "avekit: integration ended by " << to_string(t) << "\n";
    return kExitNumerical;
}

ConfigSection settling_section(const std::string& name, const SettlingReport& rep) {
    ConfigSection s{name, {}};
    s.entries.push_back({"mu_convention", to_string(rep.convention)});
    s.entries.push_back({"mu", format_full(rep.mu)});
    s.entries.push_back({"L1", format_full(rep.L1)});
    s.entries.push_back({"L2", format_full(rep.L2)});
    s.entries.push_back({"c1", format_full(rep.c1)});
    s.entries.push_back({"c2", format_full(rep.c2)});
    s.entries.push_back({"kappa1", format_full(rep.kappa1)});
    s.entries.push_back({"kappa2", format_full(rep.kappa2)});
    s.entries.push_back({"T_max", format_full(rep.t_max)});
    s.entries.push_back({"gamma", format_full(rep.gamma)});
    s.entries.push_back({"rho1", format_full(rep.rho1)});
    s.entries.push_back({"rho2", format_full(rep.rho2)});
    s.entries.push_back({"lambda1", format_full(rep.lambda1)});
    s.entries.push_back({"lambda2", format_full(rep.lambda2)});
    s.entries.push_back({"n", std::to_string(rep.n)});
    return s;
}

} // namespace

int run_solve(const CliOptions& cli) {
    return guarded([&]() -> int {
        const ExperimentConfig cfg = load_with_overrides(cli);
        if (cfg.model.name.empty())
            throw ConfigError("solve: [model] must set 'name'");
        const AveProblem p = build_problem(cfg.problem);
        const auto model = make_model(p, cfg.model);
        const IntegratorOptions opts = finalize_integrator(cfg, p);

        const ModelRun run = run_model(*model, opts);

        ensure_out_dir(cfg.output.dir);
        write_trajectory_csv(run.traj, cfg.output.dir + "/trajectory.csv");
        if (cfg.output.write_problem) save_problem(p, cfg.output.dir + "/problem.avep");
        ConfigSection result = result_for_run("result", *model, run);
        result.entries.insert(result.entries.begin(), {"command", "solve"});
        write_report(cfg.output.dir + "/report.txt", cfg.doc, {result});

        std::cout << "solve " << model->name() << " n=" << p.dim() << ": "
                  << to_string(run.traj.termination) << " at t=" << run.traj.times.back()
                  << ", final ||r|| = " << run.traj.residual_norms.back() << "\n";
        return exit_for_termination(run.traj.termination);
    });
}

int run_tmax(const CliOptions& cli) {
    return guarded([&]() -> int {
        const ExperimentConfig cfg = load_with_overrides(cli);
        if (!cfg.sweep) throw ConfigError("tmax: requires a [sweep] section");
        if (cfg.model.name != "fixed-time")
            throw ConfigError("tmax: the fixed-time model must be selected");
        const AveProblem p = build_problem(cfg.problem);
        const FixedTimeParams base(cfg.model.gamma, cfg.model.rho1, cfg.model.rho2,
                                   cfg.model.lambda1, cfg.model.lambda2,
                                   cfg.model.fix_threshold ? *cfg.model.fix_threshold : 0.0);
        const auto rows = settling_table(p.A(), base, cfg.sweep->parameter, cfg.sweep->values,
                                         cli.convention);

        ensure_out_dir(cfg.output.dir);
        const std::string csv_path = cfg.output.dir + "/tmax.csv";
        {
            std::ofstream out(csv_path);
            if (!out) throw IoError("cannot write '" + csv_path + "'");
            out << to_string(cfg.sweep->parameter) << ",T_max,T_max_full\n";
            char fixed4[32];
            for (const auto& row : rows) {
                std::snprintf(fixed4, sizeof(fixed4), "%.4f", row.report.t_max);
                out << format_full(row.value) << "," << fixed4 << ","
                    << format_full(row.report.t_max) << "\n";
            }
        }
        std::vector<ConfigSection> results;
        ConfigSection result{"result", {}};
        result.entries.push_back({"command", "tmax"});
        result.entries.push_back({"mu_convention", to_string(cli.convention)});
        result.entries.push_back({"n", std::to_string(p.dim())});
        result.entries.push_back({"rows", std::to_string(rows.size())});
        result.entries.push_back({"table", "tmax.csv"});
        results.push_back(result);
        for (const auto& row : rows)
            results.push_back(settling_section("settling." + format_full(row.value), row.report));
        write_report(cfg.output.dir + "/report.txt", cfg.doc, results);

        for (const auto& row : rows)
            std::cout << "T_max(" << to_string(cfg.sweep->parameter) << " = " << row.value
                      << ") = " << row.report.t_max << "\n";
        return kExitOk;
    });
}

int run_compare(const CliOptions& cli) {
    return guarded([&]() -> int {
        const ExperimentConfig cfg = load_with_overrides(cli);
        if (cfg.compare_models.size() < 2)
            throw ConfigError("compare: [model] names must list at least two models");
        const AveProblem p = build_problem(cfg.problem);
        if (!p.known_solution())
            throw PreconditionError("compare: the problem must carry a known solution");
        const IntegratorOptions opts = finalize_integrator(cfg, p);

        std::vector<std::unique_ptr<DynamicalModel>> models;
        for (const auto& name : cfg.compare_models) {
            ModelConfig mc = cfg.model;
            mc.name = name;
            models.push_back(make_model(p, mc));
        }

        std::vector<ModelRun> runs(models.size());
        parallel_for(models.size(),
                     [&](std::size_t i) { runs[i] = run_model(*models[i], opts); });

        ensure_out_dir(cfg.output.dir);
        // one (t, V) column pair per model, each on its own accepted-step grid
        {
            std::ofstream out(cfg.output.dir + "/energy.csv");
            if (!out) throw IoError("cannot write energy.csv");
            std::size_t max_rows = 0;
            for (std::size_t i = 0; i < models.size(); ++i) {
                if (i > 0) out << ",";
                out << "t_" << models[i]->name() << ",V_" << models[i]->name();
                max_rows = std::max(max_rows, runs[i].traj.times.size());
            }
            out << "\n";
            for (std::size_t r = 0; r < max_rows; ++r) {
                for (std::size_t i = 0; i < models.size(); ++i) {
                    if (i > 0) out << ",";
                    if (r < runs[i].traj.times.size())
                        out << format_full(runs[i].traj.times[r]) << ","
                            << format_full(runs[i].traj.energies[r]);
                    else
                        out << ",";
                }
                out << "\n";
            }
        }

        double worst_agreement = 0.0;
        for (std::size_t i = 0; i < runs.size(); ++i)
            for (std::size_t j = i + 1; j < runs.size(); ++j)
                worst_agreement = std::max(
                    worst_agreement,
                    norm_inf(subtract(runs[i].final_output, runs[j].final_output)));

        std::vector<ConfigSection> results;
        ConfigSection overall{"result", {}};
        overall.entries.push_back({"command", "compare"});
        overall.entries.push_back({"models", std::to_string(models.size())});
        overall.entries.push_back({"max_pairwise_output_gap_inf", format_full(worst_agreement)});
        results.push_back(overall);
        for (std::size_t i = 0; i < models.size(); ++i)
            results.push_back(
                result_for_run("result." + models[i]->name(), *models[i], runs[i]));
        write_report(cfg.output.dir + "/report.txt", cfg.doc, results);

        int exit_code = kExitOk;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            std::cout << "compare " << models[i]->name() << ": "
                      << to_string(runs[i].traj.termination)
                      << " at t=" << runs[i].traj.times.back() << "\n";
            const int code = exit_for_termination(runs[i].traj.termination);
            if (code != kExitOk) exit_code = code;
        }
        return exit_code;
    });
}

namespace {

Vector perturbed_point(const Vector& xstar, double radius, Rng& rng) {
    Vector d = rng.normal_vector(xstar.size());
    const double nd = norm2(d);
    Vector x = xstar;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += radius * d[i] / nd;
    return x;
}

} // namespace

int run_verify(const CliOptions& cli) {
    return guarded([&]() -> int {
        const ExperimentConfig cfg = load_with_overrides(cli);
        const AveProblem p = build_problem(cfg.problem);
        if (!p.known_solution())
            throw PreconditionError("verify: the problem must carry a known solution");
        const double margin = solvability_margin(p);
        if (!(margin > 0.0))
            throw PreconditionError("verify: requires sigma_min(A) > 1, margin is " +
                                    std::to_string(margin));
        const Vector& xstar = *p.known_solution();
        const ErrorBoundConstants consts = error_bound_constants(p);

        Rng rng(cfg.problem.seed ^ 0x76657269667921ull);
        std::size_t contraction_violations = 0, sandwich_violations = 0;
        double worst_contraction_margin = std::numeric_limits<double>::infinity();
        double worst_sandwich_margin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cfg.verify_samples; ++i) {
            const double radius = std::pow(10.0, rng.uniform(-3.0, 3.0));
            const Vector x = perturbed_point(xstar, radius, rng);
            const auto [lhs, rhs] = contraction_lhs_rhs(p, x);
            worst_contraction_margin = std::min(worst_contraction_margin, lhs - rhs);
            if (lhs < rhs - 1e-12) ++contraction_violations;
            const auto [lower, upper] = error_bounds(p, consts, x);
            const double dist = norm2(subtract(x, xstar));
            worst_sandwich_margin =
                std::min({worst_sandwich_margin, dist - lower, upper - dist});
            const double slack = 1e-12 * (1.0 + dist);
            if (lower > dist + slack || dist > upper + slack) ++sandwich_violations;
        }

        std::size_t equilibrium_violations = 0;
        double worst_equilibrium_rhs = 0.0;
        ModelConfig mc = cfg.model;
        for (const auto& name : model_names()) {
            mc.name = name;
            const auto model = make_model(p, mc);
            const double at_solution = norm2(model->rhs(model->initial_state(xstar)));
            worst_equilibrium_rhs = std::max(worst_equilibrium_rhs, at_solution);
            if (at_solution > 1e-10) ++equilibrium_violations;
            std::size_t checked = 0;
            while (checked < 100) {
                const Vector x =
                    perturbed_point(xstar, std::pow(10.0, rng.uniform(-2.0, 1.0)), rng);
                if (residual_norm(p, x) < 1e-3) continue;
                if (!(norm2(model->rhs(model->initial_state(x))) > 0.0))
                    ++equilibrium_violations;
                ++checked;
            }
        }

        const std::size_t violations =
            contraction_violations + sandwich_violations + equilibrium_violations;

        ensure_out_dir(cfg.output.dir);
        ConfigSection result{"result", {}};
        result.entries.push_back({"command", "verify"});
        result.entries.push_back({"samples", std::to_string(cfg.verify_samples)});
        result.entries.push_back({"solvability_margin", format_full(margin)});
        result.entries.push_back(
            {"contraction_violations", std::to_string(contraction_violations)});
        result.entries.push_back(
            {"worst_contraction_margin", format_full(worst_contraction_margin)});
        result.entries.push_back({"sandwich_violations", std::to_string(sandwich_violations)});
        result.entries.push_back({"worst_sandwich_margin", format_full(worst_sandwich_margin)});
        result.entries.push_back(
            {"equilibrium_violations", std::to_string(equilibrium_violations)});
        result.entries.push_back(
            {"worst_equilibrium_rhs_norm", format_full(worst_equilibrium_rhs)});
        write_report(cfg.output.dir + "/report.txt", cfg.doc, {result});

        std::cout << "verify: contraction " << (cfg.verify_samples - contraction_violations)
                  << "/" << cfg.verify_samples << " ok, sandwich "
                  << (cfg.verify_samples - sandwich_violations) << "/" << cfg.verify_samples
                  << " ok, equilibrium checks "
                  << (equilibrium_violations == 0 ? "ok" : "FAILED") << "\n";
        if (violations > 0) {
            std::cerr << "avekit: verify found " << violations << " property violations\n";
            return kExitProperty;
        }
        return kExitOk;
    });
}

} // namespace avekit

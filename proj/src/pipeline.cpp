#include "besseltrans/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace besseltrans {

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
auto timed(SolveResult& r, const char* step, F&& f) {
    const auto t0 = Clock::now();
    try {
        if constexpr (std::is_void_v<decltype(f())>) {
            f();
            r.timings.push_back({step, std::chrono::duration<double>(Clock::now() - t0).count()});
        } else {
            auto v = f();
            r.timings.push_back({step, std::chrono::duration<double>(Clock::now() - t0).count()});
            return v;
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError(step, e.what());
    }
}

SampledFunction sample_with_base(const ProblemConfig& cfg, const UniformGrid& grid) {
    PotentialSpec spec = cfg.potential;
    if (auto* s = std::get_if<SampledPotential>(&spec)) {
        std::filesystem::path p(s->path);
        if (p.is_relative() && !cfg.base_dir.empty()) s->path = (cfg.base_dir / p).string();
    }
    try {
        return sample_potential(spec, grid);
    } catch (const ParseError& e) {
        throw ConfigError(std::string("potential: ") + e.what());
    } catch (const DomainError& e) {
        throw ConfigError(std::string("potential: ") + e.what());
    }
}

}  // namespace

SolveResult run_solve(const ProblemConfig& cfg, PipelineOptions options) {
    validate(cfg);
    SolveResult r;
    r.config = cfg;

    timed(r, "normalize", [&] {
        UniformGrid grid(cfg.b, cfg.grid_points);
        SampledFunction q = sample_with_base(cfg, grid);
        SolverOptions so{cfg.grid_points, cfg.eps_target, cfg.mode, cfg.N_max};
        try {
            r.problem = make_spectral_problem(cfg.l, std::move(q), cfg.beta, cfg.gamma, cfg.lambda_lo, cfg.lambda_hi, so);
        } catch (const SpectralRegionError& e) {
            throw ConfigError(std::string("lambda_range: ") + e.what());
        }
    });
    const SpectralProblem& pr = *r.problem;

    ParticularSolution u0 = timed(r, "build_u0", [&] { return build_u0(cfg.l, pr.q0); });
    r.u0_iterations = u0.iterations_used;

    r.basis = timed(r, "trace_functions", [&] {
        const int n_max = std::min(cfg.N_max, max_safe_order(cfg.l));
        return build_wave_basis(std::move(u0), n_max, options.exec);
    });

    timed(r, "select_N", [&] {
        const MinimaxProblem p = make_minimax_problem(*r.basis, pr.q0, cfg.mode);
        r.approx = select_N(p, cfg.eps_target, r.basis->n_max);
        r.epsilon_Q = cfg.mode == ApproxMode::Q
                          ? r.approx.epsilon
                          : sup_residual(make_minimax_problem(*r.basis, pr.q0, ApproxMode::Q), r.approx.a);
        r.evaluator = std::make_shared<const SolutionEvaluator>(r.basis, r.approx.a, pr.shift);
    });

    if (!options.find_eigenvalues) return r;
    r.eigen = timed(r, "find_eigenvalues", [&] {
        return find_eigenvalues(pr, *r.evaluator, ScanOptions{1.0, options.exec});
    });

    if (options.residual_checks) {
        timed(r, "residual_check", [&] {
            auto& pairs = r.eigen.eigenpairs;
            const int n = static_cast<int>(pairs.size());
            if (options.exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(worker_threads())
                for (int i = 0; i < n; ++i)
                    pairs[static_cast<std::size_t>(i)].residual =
                        residual_bound_check(pr, *r.evaluator, r.epsilon_Q, pairs[static_cast<std::size_t>(i)].lambda);
            } else {
                for (int i = 0; i < n; ++i)
                    pairs[static_cast<std::size_t>(i)].residual =
                        residual_bound_check(pr, *r.evaluator, r.epsilon_Q, pairs[static_cast<std::size_t>(i)].lambda);
            }
        });
    }
    return r;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_eigenvalues_csv(std::ostream& out, const SolveResult& r) {
    out << "index,lambda,phi_residual,residual_bound_ok,refinement_iterations\n";
    for (const auto& e : r.eigen.eigenpairs) {
        out << e.index << ',' << format_double(e.lambda) << ',' << format_double(std::abs(e.phi)) << ','
            << (e.residual ? (e.residual->ok ? "true" : "false") : "") << ',' << e.refinement_iterations << '\n';
    }
}

std::string report_json(const SolveResult& r) {
    using nlohmann::json;
    json j;
    j["config"] = json::parse(emit_config(r.config));
    j["shift_q0"] = r.problem ? r.problem->shift : 0.0;
    j["u0_iterations"] = r.u0_iterations;
    j["basis_order"] = r.basis ? r.basis->n_max : 0;
    const auto& a = r.approx;
    j["approximation"] = {{"N", a.N},
                          {"epsilon", a.epsilon},
                          {"epsilon_Q", r.epsilon_Q},
                          {"mode", to_string(a.mode)},
                          {"method", a.method},
                          {"iterations", a.iterations},
                          {"a", a.a},
                          {"max_abs_coefficient", a.max_abs_coefficient},
                          {"alternation_count", a.alternation_count},
                          {"conditioning_limited", a.conditioning_limited},
                          {"target_reached", a.target_reached},
                          {"stop_reason", a.stop_reason}};
    json eig = json::array();
    for (const auto& e : r.eigen.eigenpairs) {
        json item = {{"index", e.index},
                     {"lambda", e.lambda},
                     {"phi_residual", std::abs(e.phi)},
                     {"refinement_iterations", e.refinement_iterations}};
        if (e.residual) {
            item["residual_bound"] = {{"ok", e.residual->ok},
                                      {"worst_ratio", e.residual->worst_ratio},
                                      {"worst_x", e.residual->worst_x},
                                      {"max_residual", e.residual->max_residual},
                                      {"worst_ratio_variation", e.residual->worst_ratio_variation}};
        }
        eig.push_back(std::move(item));
    }
    j["eigenvalues"] = std::move(eig);
    j["scan"] = {{"points", r.eigen.char_values.size()}, {"sign_changes", r.eigen.sign_changes}};
    json t = json::object();
    double total = 0.0;
    for (const auto& s : r.timings) {
        t[s.step] = s.seconds;
        total += s.seconds;
    }
    t["total"] = total;
    j["timings_seconds"] = std::move(t);
    return j.dump(2) + "\n";
}

void dump_kernel(const SolveResult& r, int resolution, std::ostream& out) {
    if (!r.evaluator) throw DomainError("dump_kernel: problem has not been solved");
    if (resolution < 2) throw DomainError("dump_kernel: resolution must be >= 2");
    const SolutionEvaluator& ev = *r.evaluator;
    const double b = ev.basis().grid().b();
    const double l = ev.l();
    for (int i = 0; i < resolution; ++i) {
        const double x = (i + 1 == resolution) ? b : b * i / (resolution - 1);
        const auto p = ev.at(x);
        for (int j = 0; j < resolution; ++j) {
            const double t = (j + 1 == resolution) ? b : b * j / (resolution - 1);
            double s = 0.0;
            for (std::size_t k = 0; k < p.g.size(); ++k) s += p.g[k] * power_nonneg(t, 2.0 * k + l + 1.0);
            if (j) out << ',';
            out << format_double(p.u0 * s);
        }
        out << '\n';
    }
}

void dump_basis(const SolveResult& r, std::ostream& out) {
    if (!r.basis) throw DomainError("dump_basis: basis has not been built");
    const auto& c = r.basis->c;
    out << 'x';
    for (std::size_t n = 0; n < c.size(); ++n) out << ",c" << n;
    out << '\n';
    const UniformGrid& g = r.basis->grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
        out << format_double(g.x(i));
        for (const auto& f : c) out << ',' << format_double(f[i]);
        out << '\n';
    }
}

}  // namespace besseltrans

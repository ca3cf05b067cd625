#pragma once

// End-to-end solve: normalize, u0, trace functions, select N, eigenvalue scan.

#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "besseltrans/config.hpp"
#include "besseltrans/solver.hpp"

namespace besseltrans {

/// Numerical failure inside a pipeline step (CLI exit code 2).
class PipelineError : public Error {
public:
    PipelineError(std::string step, const std::string& what)
        : Error(step + ": " + what), step_(std::move(step)) {}
    const std::string& step() const noexcept { return step_; }

private:
    std::string step_;
};

struct StepTiming {
    std::string step;
    double seconds = 0.0;
};

struct PipelineOptions {
    bool find_eigenvalues = true;
    bool residual_checks = true;
    Execution exec = Execution::parallel;
};

struct SolveResult {
    ProblemConfig config;
    std::optional<SpectralProblem> problem;
    std::shared_ptr<const WaveBasis> basis;
    int u0_iterations = 0;
    ApproximationResult approx;
    /// sup |(1/2) int q0 - sum a_n c_n|, the eps of the residual bound (equals approx.epsilon in Q-mode).
    double epsilon_Q = 0.0;
    std::shared_ptr<const SolutionEvaluator> evaluator;
    EigenResult eigen;
    std::vector<StepTiming> timings;
};

SolveResult run_solve(const ProblemConfig& cfg, PipelineOptions options = {});

/// "%.17g".
std::string format_double(double v);

/// index,lambda,phi_residual,residual_bound_ok,refinement_iterations
void write_eigenvalues_csv(std::ostream& out, const SolveResult& r);

std::string report_json(const SolveResult& r);

/// resolution x resolution matrix of K_N(x_i, t_j), x_i = t_i = b i / (resolution - 1);
/// rows are x, columns t, no header.
void dump_kernel(const SolveResult& r, int resolution, std::ostream& out);

/// Header x,c0,..,cN then one row per grid node.
void dump_basis(const SolveResult& r, std::ostream& out);

}  // namespace besseltrans

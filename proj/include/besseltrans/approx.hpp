#pragma once

// Uniform approximation of the kernel diagonal data by trace functions:
// Q-mode fits (1/2) int_0^x q with c_n, q-mode fits q/2 with c_n'.

#include <string>
#include <vector>

#include "besseltrans/grid.hpp"
#include "besseltrans/wavebasis.hpp"

namespace besseltrans {

enum class ApproxMode { Q, q };

std::string to_string(ApproxMode mode);
ApproxMode approx_mode_from_string(const std::string& s);

struct MinimaxProblem {
    SampledFunction target;
    std::vector<SampledFunction> basis;
    ApproxMode mode = ApproxMode::Q;
};

/// Q-mode: (1/2) cumulative_integral(q); q-mode: q / 2. Requires q(0) == 0.
SampledFunction build_target(const SampledFunction& q, ApproxMode mode);

/// Target plus c_n (Q-mode) or c_n' (q-mode) from the basis.
MinimaxProblem make_minimax_problem(const WaveBasis& basis, const SampledFunction& q, ApproxMode mode);

/// max_i |target_i - sum_n a_n basis_n(x_i)|, accumulated in extended precision.
double sup_residual(const MinimaxProblem& p, const std::vector<double>& a);

struct RemezStep {
    double leveled = 0.0;  ///< |h| of the reference system
    double global = 0.0;   ///< sup-norm residual on the whole grid
};

struct ApproximationResult {
    int N = 0;
    std::vector<double> a;
    double epsilon = 0.0;
    ApproxMode mode = ApproxMode::Q;
    /// "remez", "remez-stalled" (best iterate kept) or "lsq-fallback".
    std::string method = "remez";
    int iterations = 0;
    double max_abs_coefficient = 0.0;
    /// Alternating residual extrema within 5% of epsilon.
    int alternation_count = 0;
    bool conditioning_limited = false;
    bool target_reached = false;
    /// select_N only: "target", "stagnation", "coefficient-growth" or "n-max".
    std::string stop_reason;
    std::vector<RemezStep> history;
};

struct RemezOptions {
    double relative_tolerance = 1e-3;
    int max_iterations = 200;
};

/// Discrete Remez exchange on the grid with a least-squares fallback.
ApproximationResult remez_solve(const MinimaxProblem& p, int N, RemezOptions options = {});

/// Least-squares fit on the whole grid (epsilon still reports the sup norm).
ApproximationResult least_squares_solve(const MinimaxProblem& p, int N);

/// Increases N from 0 until epsilon <= eps_target. Stops early when epsilon
/// fails to improve on the best value for 3 consecutive N or a coefficient
/// exceeds 1e12, and returns the best result seen. Any stop short of the
/// target sets conditioning_limited: in exact arithmetic epsilon is
/// nonincreasing in N, so a stall is a precision effect.
ApproximationResult select_N(const MinimaxProblem& p, double eps_target, int N_max, RemezOptions options = {});

}  // namespace besseltrans

#pragma once

// Spectral-parameter dependent part: moments m_k, the approximate solution
// u_N(x, lambda) and its derivative, the characteristic function and the
// eigenvalue search.

#include <memory>
#include <optional>
#include <vector>

#include "besseltrans/approx.hpp"
#include "besseltrans/grid.hpp"
#include "besseltrans/parallel.hpp"
#include "besseltrans/specfun.hpp"
#include "besseltrans/wavebasis.hpp"

namespace besseltrans {

// ---------------------------------------------------------------- moments

enum class MomentPath { hypergeometric, integer_trig, bessel_sum, quadrature };

const char* to_string(MomentPath path);

struct MomentEstimate {
    double value = 0.0;
    /// sum |terms| / |value|; relative error is roughly cancellation * 1e-16.
    double cancellation = 1.0;
    bool usable = false;
};

namespace detail {
MomentEstimate moment_hypergeometric(int k, double l, double omega, double x);
/// Only for integer l >= 0.
MomentEstimate moment_integer_trig(int k, double l, double omega, double x);
/// Finite sum of J_{nu+1+j}(omega x), j = 0..k, from repeated integration by parts.
MomentEstimate moment_bessel_sum(int k, double l, double omega, double x);
/// Composite Gauss-Legendre quadrature of the integrand.
double moment_quadrature(int k, double l, double omega, double x);
}  // namespace detail

/// m_k(x, omega) = int_0^x t^{2k+l+1} d_l(t, omega^2) dt.
double moment(int k, double l, SpectralFrequency omega, double x, MomentPath* used = nullptr);

/// m_0 .. m_N at one point; shares Bessel evaluations across k.
std::vector<double> moments(int N, double l, SpectralFrequency omega, double x, std::vector<MomentPath>* used = nullptr);

// --------------------------------------------------------------- problem

struct SolverOptions {
    std::size_t grid_points = UniformGrid::kDefaultPoints;
    double eps_target = 1e-9;
    ApproxMode mode = ApproxMode::Q;
    int N_max = 30;
};

/// -u'' + (l(l+1)/x^2 + q) u = lambda u on (0, b], beta u(b) + gamma u'(b) = 0,
/// eigenvalues sought in (lambda_lo, lambda_hi].
struct SpectralProblem {
    double l = 0.0;
    SampledFunction q;   ///< as given
    SampledFunction q0;  ///< q - q(0)
    double shift = 0.0;  ///< q(0); Lambda = lambda - shift
    double beta = 1.0;
    double gamma = 0.0;
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    SolverOptions options;

    double b() const noexcept { return q.grid().b(); }
};

/// Validates the inputs and normalizes q. Requires lambda_lo >= q(0).
SpectralProblem make_spectral_problem(double l, SampledFunction q, double beta, double gamma, double lambda_lo,
                                      double lambda_hi, SolverOptions options = {});

/// Immutable evaluator for u_N and u_N' built from a, Xi and X~.
class SolutionEvaluator {
public:
    SolutionEvaluator(std::shared_ptr<const WaveBasis> basis, std::vector<double> a, double shift);

    double l() const noexcept { return basis_->l; }
    int N() const noexcept { return static_cast<int>(a_.size()) - 1; }
    double shift() const noexcept { return shift_; }
    const std::vector<double>& a() const noexcept { return a_; }
    const WaveBasis& basis() const noexcept { return *basis_; }
    std::shared_ptr<const WaveBasis> basis_ptr() const noexcept { return basis_; }
    /// g_k = sum_{n>=k} a_n Xi_{n,k} X~(2(n-k)).
    const std::vector<SampledFunction>& g() const noexcept { return g_; }
    /// Companion built from the odd orders X~(2(n-k)-1).
    const std::vector<SampledFunction>& h() const noexcept { return h_; }
    /// K_N(x, x) = sum a_n c_n.
    const SampledFunction& kernel_diagonal() const noexcept { return kdiag_; }

    struct Point {
        double u0, du0, kdiag;
        std::vector<double> g, h;
    };
    /// Sampled data interpolated at x (exact at grid nodes).
    Point at(double x) const;
    const Point& at_b() const noexcept { return at_b_; }

private:
    std::shared_ptr<const WaveBasis> basis_;
    std::vector<double> a_;
    double shift_;
    std::vector<SampledFunction> g_;
    std::vector<SampledFunction> h_;
    SampledFunction kdiag_;
    Point at_b_;
};

/// u_N(x, lambda) = d_l(x, Lambda) + u0(x) sum_k g_k(x) m_k(x, sqrt(Lambda)).
double eval_uN(const SolutionEvaluator& ev, double lambda, double x);

/// d/dx u_N(x, lambda) in closed form.
double eval_duN(const SolutionEvaluator& ev, double lambda, double x);

struct SolutionValue {
    double u = 0.0;
    double du = 0.0;
};
/// Both at once (moments shared).
SolutionValue eval_solution(const SolutionEvaluator& ev, double lambda, double x);

/// Phi(lambda) = beta u_N(b, lambda) + gamma u_N'(b, lambda).
double characteristic(const SpectralProblem& pr, const SolutionEvaluator& ev, double lambda);

// ------------------------------------------------------------ eigenvalues

struct ResidualReport {
    bool ok = true;
    double epsilon = 0.0;
    /// max over grid of R(x) / (2 eps sqrt(x)); must stay <= 1.1.
    double worst_ratio = 0.0;
    double worst_x = 0.0;
    double max_residual = 0.0;
    /// max of R(x) / (2 eps (sqrt(x) + V(x))), V the total variation of d_l on [0, x].
    /// Integrating by parts bounds R(x) by that denominator for any Q-mode eps.
    double worst_ratio_variation = 0.0;
};

struct Eigenpair {
    int index = 0;
    double lambda = 0.0;
    double phi = 0.0;  ///< Phi at the returned lambda
    int refinement_iterations = 0;
    std::optional<ResidualReport> residual;
};

struct EigenResult {
    std::vector<Eigenpair> eigenpairs;
    /// (lambda, Phi) at the scan points.
    std::vector<std::pair<double, double>> char_values;
    int sign_changes = 0;

    std::vector<double> eigenvalues() const;
};

struct ScanOptions {
    /// Scan step is pi / (4 b density) in omega.
    double density = 1.0;
    Execution exec = Execution::parallel;
};

EigenResult find_eigenvalues(const SpectralProblem& pr, const SolutionEvaluator& ev, ScanOptions options = {});

/// R(x) = |int_0^x (q_N - q0) d_l(s, Lambda) ds|, q_N = 2 sum a_n c_n', checked
/// against 2 eps sqrt(x) with 10% slack.
ResidualReport residual_bound_check(const SpectralProblem& pr, const SolutionEvaluator& ev, double epsilon,
                                    double lambda);

}  // namespace besseltrans

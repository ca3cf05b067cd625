#include "besseltrans/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "besseltrans/errors.hpp"
#include "besseltrans/spps.hpp"
#include "gauss_legendre.hpp"

namespace besseltrans {

namespace {

constexpr double kHypCancellation = 1e4;
constexpr double kSumCancellation = 1e5;
constexpr double kHypMaxArgument = 40.0;

bool is_natural(double l) { return l >= 0.0 && l == std::floor(l) && l < 64.0; }

double log_factorial(int n) { return log_gamma(n + 1.0); }

using Rule20 = detail::GaussLegendre<20>;

void check_moment_args(int k, double l, double omega, double x) {
    if (k < 0) throw DomainError("moment: k must be >= 0");
    if (!(l >= -0.5)) throw DomainError("moment: l must be >= -1/2");
    if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("moment: omega must be > 0");
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("moment: x must be >= 0");
}

// Bessel-sum moment from a precomputed sequence J_{nu+1}, J_{nu+2}, ... at omega x.
MomentEstimate bessel_sum_from(int k, double nu, double omega, double x, const std::vector<double>& jseq) {
    MomentEstimate r;
    double sum = 0.0, abs_sum = 0.0;
    const double lx = std::log(x), lw = std::log(omega);
    for (int j = 0; j <= k; ++j) {
        const double jv = jseq[static_cast<std::size_t>(j)];
        if (jv == 0.0) continue;
        const double lg = std::log(2.0) * j + log_factorial(k) - log_factorial(k - j) + (nu + 1.0 + 2.0 * k - j) * lx -
                          (1.0 + j) * lw;
        const double t = ((j % 2 == 0) ? 1.0 : -1.0) * std::exp(lg) * jv;
        sum += t;
        abs_sum += std::abs(t);
    }
    r.value = sum;
    r.cancellation = sum != 0.0 ? abs_sum / std::abs(sum) : INFINITY;
    r.usable = std::isfinite(sum) && r.cancellation <= kSumCancellation;
    return r;
}

}  // namespace

const char* to_string(MomentPath path) {
    switch (path) {
        case MomentPath::hypergeometric: return "1F2";
        case MomentPath::integer_trig: return "integer-l";
        case MomentPath::bessel_sum: return "bessel-sum";
        case MomentPath::quadrature: return "quadrature";
    }
    return "?";
}

namespace detail {

MomentEstimate moment_hypergeometric(int k, double l, double omega, double x) {
    check_moment_args(k, l, omega, x);
    MomentEstimate r;
    if (x == 0.0) {
        r.usable = true;
        return r;
    }
    const double nu = l + 0.5;
    const double p = 2.0 * k + 2.0 * nu + 2.0;
    const Hyp1F2Result f = hyp1f2_series(0.5 * p, 0.5 * p + 1.0, nu + 1.0, -0.25 * omega * x * omega * x);
    const double lg = nu * std::log(omega) + p * std::log(x) - nu * std::log(2.0) - std::log(p) - log_gamma(nu + 1.0);
    r.value = std::exp(lg) * f.value;
    r.cancellation = f.cancellation;
    r.usable = f.converged && f.cancellation <= kHypCancellation && std::isfinite(r.value);
    return r;
}

MomentEstimate moment_integer_trig(int k, double l, double omega, double x) {
    check_moment_args(k, l, omega, x);
    if (!is_natural(l)) throw DomainError("moment_integer_trig: l must be a nonnegative integer");
    const int li = static_cast<int>(l);
    const int M = 2 * k + li + 1;
    auto P = [&](int j) {
        if (j > li) return 0.0;
        const double sign = ((j / 2) % 2 == 0) ? 1.0 : -1.0;
        return sign * std::exp(log_factorial(li + j) - log_factorial(j) - log_factorial(li - j) - j * std::log(2.0));
    };
    std::vector<double> C(static_cast<std::size_t>(M + 1));
    C[static_cast<std::size_t>(M)] = -1.0;
    for (int j = 0; j < M; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        C[static_cast<std::size_t>(M - 1 - j)] =
            sign * (P(j + 1) - (M - j) * C[static_cast<std::size_t>(M - j)]);
    }
    auto antiderivative = [&](double t, double& abs_sum) {
        const double z = omega * t;
        const double phase = z - li * std::numbers::pi / 2.0;
        double s1 = 0.0, s2 = 0.0;
        for (int p = M - 1; p >= 0; p -= 2) s1 += C[static_cast<std::size_t>(p)] * std::pow(z, p);
        for (int p = M; p >= 0; p -= 2) s2 += C[static_cast<std::size_t>(p)] * std::pow(z, p);
        const double a = std::sin(phase) * s1, b = std::cos(phase) * s2;
        abs_sum += std::abs(a) + std::abs(b);
        return a + b;
    };
    double abs_sum = 0.0, abs0 = 0.0;
    const double diff = antiderivative(x, abs_sum) - antiderivative(0.0, abs0);
    const double scale = std::sqrt(2.0 / std::numbers::pi) * std::pow(omega, -(2.0 * k + l + 2.5));
    MomentEstimate r;
    r.value = scale * diff;
    r.cancellation = diff != 0.0 ? (abs_sum + abs0) / std::abs(diff) : INFINITY;
    r.usable = std::isfinite(r.value) && r.cancellation <= kSumCancellation;
    if (x == 0.0) {
        r.value = 0.0;
        r.usable = true;
    }
    return r;
}

MomentEstimate moment_bessel_sum(int k, double l, double omega, double x) {
    check_moment_args(k, l, omega, x);
    if (x == 0.0) return MomentEstimate{0.0, 1.0, true};
    const double nu = l + 0.5;
    return bessel_sum_from(k, nu, omega, x, bessel_j_sequence(nu + 1.0, omega * x, k + 1));
}

double moment_quadrature(int k, double l, double omega, double x) {
    check_moment_args(k, l, omega, x);
    if (x == 0.0) return 0.0;
    const double nu = l + 0.5;
    const auto& gl = detail::gauss_legendre<20>();
    // Panels of at most ~2 radians of omega t, graded near 0 where t^{2k+nu+1} may be non-smooth.
    const int panels = std::max(4, static_cast<int>(std::ceil(omega * x / 2.0)));
    std::vector<double> edges{0.0};
    const double first = x / panels;
    for (int g = 12; g >= 1; --g) edges.push_back(first * std::pow(0.25, g));
    for (int p = 1; p <= panels; ++p) edges.push_back(x * p / panels);
    double sum = 0.0;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const double a = edges[e], b = edges[e + 1];
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int i = 0; i < Rule20::n; ++i) {
            const double t = mid + half * gl.x[static_cast<std::size_t>(i)];
            sum += half * gl.w[static_cast<std::size_t>(i)] * power_nonneg(t, 2.0 * k + nu + 1.0) *
                   bessel_j(nu, omega * t);
        }
    }
    return sum;
}

}  // namespace detail

std::vector<double> moments(int N, double l, SpectralFrequency omega, double x, std::vector<MomentPath>* used) {
    check_moment_args(N, l, omega.value(), x);
    const double w = omega.value();
    const double nu = l + 0.5;
    std::vector<double> out(static_cast<std::size_t>(N + 1), 0.0);
    if (used) used->assign(out.size(), MomentPath::hypergeometric);
    if (x == 0.0) return out;
    std::vector<double> jseq;
    for (int k = 0; k <= N; ++k) {
        MomentPath path = MomentPath::hypergeometric;
        MomentEstimate est;
        if (w * x <= kHypMaxArgument) est = detail::moment_hypergeometric(k, l, w, x);
        if (!est.usable && is_natural(l)) {
            est = detail::moment_integer_trig(k, l, w, x);
            path = MomentPath::integer_trig;
        }
        if (!est.usable) {
            if (jseq.empty()) jseq = bessel_j_sequence(nu + 1.0, w * x, N + 1);
            est = bessel_sum_from(k, nu, w, x, jseq);
            path = MomentPath::bessel_sum;
        }
        if (!est.usable) {
            est.value = detail::moment_quadrature(k, l, w, x);
            path = MomentPath::quadrature;
        }
        out[static_cast<std::size_t>(k)] = est.value;
        if (used) (*used)[static_cast<std::size_t>(k)] = path;
    }
    return out;
}

double moment(int k, double l, SpectralFrequency omega, double x, MomentPath* used) {
    check_moment_args(k, l, omega.value(), x);
    std::vector<MomentPath> paths;
    // Evaluating the lower orders too keeps the path choice identical to moments().
    const auto all = moments(k, l, omega, x, used ? &paths : nullptr);
    if (used) *used = paths.back();
    return all.back();
}

SpectralProblem make_spectral_problem(double l, SampledFunction q, double beta, double gamma, double lambda_lo,
                                      double lambda_hi, SolverOptions options) {
    if (!(l >= -0.5) || !std::isfinite(l)) throw DomainError("l must be >= -1/2");
    if (!std::isfinite(beta) || !std::isfinite(gamma) || (beta == 0.0 && gamma == 0.0))
        throw DomainError("boundary coefficients must be finite and not both zero");
    if (!std::isfinite(lambda_lo) || !std::isfinite(lambda_hi)) throw DomainError("lambda range must be finite");
    const double shift = q.front();
    if (lambda_lo < shift)
        throw SpectralRegionError("lambda range must lie above q(0) = " + std::to_string(shift) +
                                  " (only lambda - q(0) > 0 is supported)");
    SampledFunction q0 = q - SampledFunction::constant(q.grid(), shift);
    return SpectralProblem{l, std::move(q), std::move(q0), shift, beta, gamma, lambda_lo, lambda_hi, options};
}

SolutionEvaluator::SolutionEvaluator(std::shared_ptr<const WaveBasis> basis, std::vector<double> a, double shift)
    : basis_(std::move(basis)),
      a_(std::move(a)),
      shift_(shift),
      kdiag_(SampledFunction::constant(basis_->grid(), 0.0)) {
    if (a_.empty()) a_.push_back(0.0);
    g_ = kernel_coefficient_functions(*basis_, a_, 0);
    h_ = kernel_coefficient_functions(*basis_, a_, -1);
    kdiag_ = besseltrans::kernel_diagonal(*basis_, a_);
    at_b_ = at(basis_->grid().b());
}

SolutionEvaluator::Point SolutionEvaluator::at(double x) const {
    Point p;
    p.u0 = evaluate_at(basis_->u0ref.u0, x);
    p.du0 = evaluate_at(basis_->u0ref.u0_prime, x);
    p.kdiag = evaluate_at(kdiag_, x);
    p.g.reserve(g_.size());
    p.h.reserve(h_.size());
    for (const auto& f : g_) p.g.push_back(evaluate_at(f, x));
    for (const auto& f : h_) p.h.push_back(evaluate_at(f, x));
    return p;
}

namespace {

SpectralFrequency frequency(const SolutionEvaluator& ev, double lambda) {
    const double Lambda = lambda - ev.shift();
    if (!(Lambda > 0.0))
        throw SpectralRegionError("lambda - q(0) must be > 0 (got " + std::to_string(Lambda) + ")");
    return SpectralFrequency(std::sqrt(Lambda));
}

SolutionValue evaluate(const SolutionEvaluator& ev, const SolutionEvaluator::Point& p, double lambda, double x,
                       bool want_u, bool want_du) {
    const SpectralFrequency w = frequency(ev, lambda);
    const double l = ev.l();
    SolutionValue out;
    if (x == 0.0) {
        out.u = 0.0;
        out.du = d_l_prime(l, w, 0.0);
        return out;
    }
    const auto m = moments(ev.N(), l, w, x);
    const auto j = bessel_j_sequence(l + 0.5, w.value() * x, 2);
    const double sx = std::sqrt(x);
    const double d = sx * j[0];
    if (want_u) {
        double s = 0.0;
        for (std::size_t k = 0; k < m.size(); ++k) s += p.g[k] * m[k];
        out.u = d + p.u0 * s;
    }
    if (want_du) {
        const double dd = (l + 1.0) * j[0] / sx - w.value() * sx * j[1];
        double s = 0.0;
        for (std::size_t k = 0; k < m.size(); ++k) s += (p.du0 * p.g[k] - p.h[k] / p.u0) * m[k];
        out.du = dd + s + d * p.kdiag;
    }
    return out;
}

void check_x(const SolutionEvaluator& ev, double x) {
    if (!(x >= 0.0 && x <= ev.basis().grid().b())) throw DomainError("x must lie in [0, b]");
}

}  // namespace

SolutionValue eval_solution(const SolutionEvaluator& ev, double lambda, double x) {
    check_x(ev, x);
    const bool at_b = x == ev.basis().grid().b();
    if (at_b) return evaluate(ev, ev.at_b(), lambda, x, true, true);
    return evaluate(ev, ev.at(x), lambda, x, true, true);
}

double eval_uN(const SolutionEvaluator& ev, double lambda, double x) {
    check_x(ev, x);
    if (x == ev.basis().grid().b()) return evaluate(ev, ev.at_b(), lambda, x, true, false).u;
    return evaluate(ev, ev.at(x), lambda, x, true, false).u;
}

double eval_duN(const SolutionEvaluator& ev, double lambda, double x) {
    check_x(ev, x);
    if (x == ev.basis().grid().b()) return evaluate(ev, ev.at_b(), lambda, x, false, true).du;
    return evaluate(ev, ev.at(x), lambda, x, false, true).du;
}

double characteristic(const SpectralProblem& pr, const SolutionEvaluator& ev, double lambda) {
    const double b = ev.basis().grid().b();
    const SolutionValue v = evaluate(ev, ev.at_b(), lambda, b, pr.beta != 0.0, pr.gamma != 0.0);
    return (pr.beta != 0.0 ? pr.beta * v.u : 0.0) + (pr.gamma != 0.0 ? pr.gamma * v.du : 0.0);
}

std::vector<double> EigenResult::eigenvalues() const {
    std::vector<double> out;
    out.reserve(eigenpairs.size());
    for (const auto& e : eigenpairs) out.push_back(e.lambda);
    return out;
}

namespace {

struct Refined {
    double lambda;
    double phi;
    int iterations;
};

// Bisection down to a 1e-8 relative bracket, then secant safeguarded by the bracket.
template <class F>
Refined refine_root(F&& phi, double lo, double flo, double hi, double fhi) {
    int it = 0;
    while (hi - lo > 1e-8 * std::max(std::abs(lo), std::abs(hi)) && it < 200) {
        const double mid = 0.5 * (lo + hi);
        const double fm = phi(mid);
        ++it;
        if (fm == 0.0) return {mid, 0.0, it};
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    double x0 = lo, f0 = flo, x1 = hi, f1 = fhi;
    double best = std::abs(flo) < std::abs(fhi) ? lo : hi;
    double fbest = std::min(std::abs(flo), std::abs(fhi));
    for (int k = 0; k < 60; ++k) {
        double x2 = (f1 != f0) ? x1 - f1 * (x1 - x0) / (f1 - f0) : 0.5 * (lo + hi);
        if (!(x2 > lo && x2 < hi)) x2 = 0.5 * (lo + hi);
        const double f2 = phi(x2);
        ++it;
        if (std::abs(f2) <= fbest) {
            best = x2;
            fbest = std::abs(f2);
        }
        if (f2 == 0.0) break;
        if ((f2 < 0.0) == (flo < 0.0)) {
            lo = x2;
            flo = f2;
        } else {
            hi = x2;
            fhi = f2;
        }
        const double step = std::abs(x2 - x1);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if (step <= 1e-12 * std::abs(x2) || hi - lo <= 1e-12 * std::abs(x2)) break;
    }
    return {best, std::copysign(fbest, 1.0), it};
}

}  // namespace

EigenResult find_eigenvalues(const SpectralProblem& pr, const SolutionEvaluator& ev, ScanOptions options) {
    EigenResult result;
    if (!(pr.lambda_hi > pr.lambda_lo)) return result;
    if (!(options.density > 0.0)) throw DomainError("scan density must be > 0");
    const double b = pr.b();
    const double w_lo = std::sqrt(std::max(pr.lambda_lo - pr.shift, 0.0));
    const double w_hi = std::sqrt(pr.lambda_hi - pr.shift);
    const double max_step = std::numbers::pi / (4.0 * b * options.density);
    const int steps = std::max(1, static_cast<int>(std::ceil((w_hi - w_lo) / max_step)));
    // Lambda = 0 itself is outside the supported region; start just above it.
    const double w_start = w_lo > 0.0 ? w_lo : 1e-6 * max_step;

    std::vector<double> lambdas(static_cast<std::size_t>(steps + 1));
    std::vector<double> phis(lambdas.size());
    for (int i = 0; i <= steps; ++i) {
        const double w = (i == 0) ? w_start : w_lo + (w_hi - w_lo) * i / steps;
        lambdas[static_cast<std::size_t>(i)] = (i == steps) ? pr.lambda_hi : pr.shift + w * w;
    }
    auto phi = [&](double lambda) { return characteristic(pr, ev, lambda); };
    const int count = static_cast<int>(lambdas.size());
    if (options.exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 4) num_threads(worker_threads())
        for (int i = 0; i < count; ++i) phis[static_cast<std::size_t>(i)] = phi(lambdas[static_cast<std::size_t>(i)]);
    } else {
        for (int i = 0; i < count; ++i) phis[static_cast<std::size_t>(i)] = phi(lambdas[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < count; ++i) result.char_values.emplace_back(lambdas[static_cast<std::size_t>(i)], phis[static_cast<std::size_t>(i)]);

    struct Bracket {
        double lo, flo, hi, fhi;
    };
    std::vector<Bracket> brackets;
    std::vector<Refined> exact;
    for (int i = 0; i + 1 < count; ++i) {
        const double f0 = phis[static_cast<std::size_t>(i)], f1 = phis[static_cast<std::size_t>(i + 1)];
        if (f1 == 0.0) {
            exact.push_back({lambdas[static_cast<std::size_t>(i + 1)], 0.0, 0});
            ++result.sign_changes;
        } else if (f0 != 0.0 && (f0 < 0.0) != (f1 < 0.0)) {
            brackets.push_back({lambdas[static_cast<std::size_t>(i)], f0, lambdas[static_cast<std::size_t>(i + 1)], f1});
            ++result.sign_changes;
        }
    }
    std::vector<Refined> roots(brackets.size());
    const int nb = static_cast<int>(brackets.size());
    if (options.exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(worker_threads())
        for (int i = 0; i < nb; ++i) {
            const auto& br = brackets[static_cast<std::size_t>(i)];
            roots[static_cast<std::size_t>(i)] = refine_root(phi, br.lo, br.flo, br.hi, br.fhi);
        }
    } else {
        for (int i = 0; i < nb; ++i) {
            const auto& br = brackets[static_cast<std::size_t>(i)];
            roots[static_cast<std::size_t>(i)] = refine_root(phi, br.lo, br.flo, br.hi, br.fhi);
        }
    }
    roots.insert(roots.end(), exact.begin(), exact.end());
    std::sort(roots.begin(), roots.end(), [](const Refined& a, const Refined& b) { return a.lambda < b.lambda; });
    int index = 0;
    for (const auto& r : roots) {
        if (!(r.lambda > pr.lambda_lo && r.lambda <= pr.lambda_hi)) continue;
        Eigenpair e;
        e.index = ++index;
        e.lambda = r.lambda;
        e.phi = phi(r.lambda);
        e.refinement_iterations = r.iterations;
        result.eigenpairs.push_back(std::move(e));
    }
    return result;
}

ResidualReport residual_bound_check(const SpectralProblem& pr, const SolutionEvaluator& ev, double epsilon,
                                    double lambda) {
    const SpectralFrequency w = frequency(ev, lambda);
    const WaveBasis& basis = ev.basis();
    const UniformGrid& g = basis.grid();
    if (!(pr.q0.grid() == g)) throw DomainError("residual_bound_check: problem and basis grids differ");
    SampledFunction qN = SampledFunction::constant(g, 0.0);
    for (std::size_t n = 0; n < ev.a().size(); ++n) qN += basis.c_prime.at(n) * (2.0 * ev.a()[n]);
    const SampledFunction d = SampledFunction::from(g, [&](double x) { return d_l(basis.l, w, x); });
    const SampledFunction R = cumulative_integral(multiply(qN - pr.q0, d));
    ResidualReport rep;
    rep.epsilon = epsilon;
    double variation = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) {
        const double x = g.x(i);
        const double r = std::abs(R[i]);
        variation += std::abs(d[i] - d[i - 1]);
        const double wide = 2.0 * epsilon * (std::sqrt(x) + variation);
        rep.worst_ratio_variation =
            std::max(rep.worst_ratio_variation, wide > 0.0 ? r / wide : (r > 0.0 ? INFINITY : 0.0));
        rep.max_residual = std::max(rep.max_residual, r);
        const double bound = 2.0 * epsilon * std::sqrt(x);
        const double ratio = bound > 0.0 ? r / bound : (r > 0.0 ? INFINITY : 0.0);
        if (ratio > rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.worst_x = x;
        }
    }
    rep.ok = rep.worst_ratio <= 1.1;
    return rep;
}

}  // namespace besseltrans

#include "besseltrans/approx.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "besseltrans/errors.hpp"

namespace besseltrans {

namespace {

constexpr double kCoefficientLimit = 1e12;

std::vector<long double> residual(const MinimaxProblem& p, const std::vector<double>& a) {
    const std::size_t m = p.target.size();
    std::vector<long double> r(m);
    for (std::size_t i = 0; i < m; ++i) r[i] = p.target[i];
    for (std::size_t n = 0; n < a.size(); ++n) {
        const long double an = a[n];
        const auto v = p.basis[n].values();
        for (std::size_t i = 0; i < m; ++i) r[i] -= an * static_cast<long double>(v[i]);
    }
    return r;
}

double sup_of(const std::vector<long double>& r) {
    long double s = 0.0L;
    for (auto v : r) s = std::max(s, std::fabs(v));
    return static_cast<double>(s);
}

int sign_of(long double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// One extremum (largest |r|) per maximal run of constant sign.
std::vector<std::size_t> alternating_extrema(const std::vector<long double>& r) {
    std::vector<std::size_t> ext;
    int run_sign = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const int s = sign_of(r[i]);
        if (s == 0) continue;
        if (s != run_sign) {
            ext.push_back(i);
            run_sign = s;
        } else if (std::fabs(r[i]) > std::fabs(r[ext.back()])) {
            ext.back() = i;
        }
    }
    return ext;
}

// Trim an alternating extrema list to `keep` entries, preserving alternation.
void trim_extrema(std::vector<std::size_t>& ext, const std::vector<long double>& r, std::size_t keep) {
    auto mag = [&](std::size_t j) { return std::fabs(r[ext[j]]); };
    while (ext.size() > keep) {
        if ((ext.size() - keep) % 2 == 1) {
            if (mag(0) < mag(ext.size() - 1)) ext.erase(ext.begin());
            else ext.pop_back();
            continue;
        }
        std::size_t best = 0;
        long double best_val = std::numeric_limits<long double>::infinity();
        for (std::size_t j = 0; j + 1 < ext.size(); ++j) {
            const long double v = std::max(mag(j), mag(j + 1));
            if (v < best_val) {
                best_val = v;
                best = j;
            }
        }
        ext.erase(ext.begin() + static_cast<std::ptrdiff_t>(best), ext.begin() + static_cast<std::ptrdiff_t>(best) + 2);
    }
}

// Classic single-point exchange of the global extremum into the reference.
void single_exchange(std::vector<std::size_t>& ref, const std::vector<long double>& r, std::size_t star) {
    if (std::find(ref.begin(), ref.end(), star) != ref.end()) return;
    const int s = sign_of(r[star]);
    auto pos = std::lower_bound(ref.begin(), ref.end(), star);
    if (pos == ref.begin()) {
        if (sign_of(r[ref.front()]) == s) ref.front() = star;
        else {
            ref.pop_back();
            ref.insert(ref.begin(), star);
        }
    } else if (pos == ref.end()) {
        if (sign_of(r[ref.back()]) == s) ref.back() = star;
        else {
            ref.erase(ref.begin());
            ref.push_back(star);
        }
    } else {
        auto left = pos - 1;
        if (sign_of(r[*left]) == s) *left = star;
        else *pos = star;
    }
}

std::vector<double> column_scales(const MinimaxProblem& p, int N) {
    std::vector<double> s(static_cast<std::size_t>(N + 1));
    for (int n = 0; n <= N; ++n) {
        const double v = p.basis[static_cast<std::size_t>(n)].sup_norm();
        s[static_cast<std::size_t>(n)] = v > 0.0 ? v : 1.0;
    }
    return s;
}

std::vector<std::size_t> initial_reference(const UniformGrid& g, int N) {
    const std::size_t count = static_cast<std::size_t>(N + 2);
    const std::size_t m = g.size();
    std::vector<std::size_t> ref;
    for (std::size_t j = 0; j < count; ++j) {
        const double x = g.b() * std::cos(std::numbers::pi * static_cast<double>(j) / (2.0 * N + 3.0));
        auto idx = static_cast<std::size_t>(std::llround(x / g.h()));
        ref.push_back(std::clamp<std::size_t>(idx, 1, m - 1));
    }
    std::sort(ref.begin(), ref.end());
    for (std::size_t j = 1; j < ref.size(); ++j)
        if (ref[j] <= ref[j - 1]) ref[j] = ref[j - 1] + 1;
    for (std::size_t j = ref.size(); j-- > 0;) {  // push back inside the grid if the tail overflowed
        const std::size_t limit = m - (ref.size() - j);
        if (ref[j] > limit) ref[j] = limit;
        if (j + 1 < ref.size() && ref[j] >= ref[j + 1]) ref[j] = ref[j + 1] - 1;
    }
    return ref;
}

int count_alternation(const std::vector<long double>& r, double eps) {
    if (eps <= 0.0) return 0;
    int count = 0;
    int last = 0;
    for (std::size_t i : alternating_extrema(r)) {
        if (std::fabs(r[i]) < 0.95 * eps) continue;
        const int s = sign_of(r[i]);
        if (s != last) {
            ++count;
            last = s;
        }
    }
    return count;
}

void finalize(ApproximationResult& res, const MinimaxProblem& p) {
    const auto r = residual(p, res.a);
    res.epsilon = sup_of(r);
    res.max_abs_coefficient = 0.0;
    for (double v : res.a) res.max_abs_coefficient = std::max(res.max_abs_coefficient, std::abs(v));
    res.alternation_count = count_alternation(r, res.epsilon);
}

void check_problem(const MinimaxProblem& p, int N) {
    if (N < 0) throw DomainError("remez_solve: N must be >= 0");
    if (static_cast<std::size_t>(N + 1) > p.basis.size())
        throw DomainError("remez_solve: N + 1 exceeds the number of basis functions");
    if (p.target.size() < static_cast<std::size_t>(10 * (N + 2)))
        throw DomainError("remez_solve: grid must have at least 10 (N + 2) points");
    for (const auto& f : p.basis)
        if (!(f.grid() == p.target.grid())) throw DomainError("remez_solve: basis and target grids differ");
}

}  // namespace

std::string to_string(ApproxMode mode) { return mode == ApproxMode::Q ? "Q" : "q"; }

ApproxMode approx_mode_from_string(const std::string& s) {
    if (s == "Q") return ApproxMode::Q;
    if (s == "q") return ApproxMode::q;
    throw DomainError("approximation mode must be \"Q\" or \"q\", got \"" + s + "\"");
}

SampledFunction build_target(const SampledFunction& q, ApproxMode mode) {
    const double scale = std::max(1.0, q.sup_norm());
    if (std::abs(q.front()) > 1e-14 * scale)
        throw PreconditionError("approximation target requires q(0) = 0; shift the potential by q(0) and use Lambda = "
                                "lambda - q(0)");
    if (mode == ApproxMode::Q) return cumulative_integral(q) * 0.5;
    return q * 0.5;
}

MinimaxProblem make_minimax_problem(const WaveBasis& basis, const SampledFunction& q, ApproxMode mode) {
    if (!(q.grid() == basis.grid())) throw DomainError("potential and basis live on different grids");
    return MinimaxProblem{build_target(q, mode), mode == ApproxMode::Q ? basis.c : basis.c_prime, mode};
}

double sup_residual(const MinimaxProblem& p, const std::vector<double>& a) { return sup_of(residual(p, a)); }

ApproximationResult least_squares_solve(const MinimaxProblem& p, int N) {
    check_problem(p, N);
    const std::size_t m = p.target.size();
    const auto scale = column_scales(p, N);
    Eigen::MatrixXd A(static_cast<Eigen::Index>(m), N + 1);
    Eigen::VectorXd f(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        f(static_cast<Eigen::Index>(i)) = p.target[i];
        for (int n = 0; n <= N; ++n)
            A(static_cast<Eigen::Index>(i), n) = p.basis[static_cast<std::size_t>(n)][i] / scale[static_cast<std::size_t>(n)];
    }
    const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(f);
    ApproximationResult res;
    res.N = N;
    res.mode = p.mode;
    res.method = "lsq-fallback";
    res.a.resize(static_cast<std::size_t>(N + 1));
    for (int n = 0; n <= N; ++n) res.a[static_cast<std::size_t>(n)] = sol(n) / scale[static_cast<std::size_t>(n)];
    for (double v : res.a)
        if (!std::isfinite(v)) throw SolveError("least squares produced non-finite coefficients");
    finalize(res, p);
    return res;
}

ApproximationResult remez_solve(const MinimaxProblem& p, int N, RemezOptions options) {
    check_problem(p, N);
    ApproximationResult res;
    res.N = N;
    res.mode = p.mode;
    res.a.assign(static_cast<std::size_t>(N + 1), 0.0);

    const double target_norm = p.target.sup_norm();
    if (target_norm == 0.0) {
        finalize(res, p);
        return res;
    }

    const UniformGrid& g = p.target.grid();
    const auto scale = column_scales(p, N);
    const int dim = N + 2;
    std::vector<std::size_t> ref = initial_reference(g, N);

    std::vector<double> best_a;
    double best_eps = std::numeric_limits<double>::infinity();
    bool converged = false;
    bool failed = false;

    for (int it = 0; it < options.max_iterations; ++it) {
        Eigen::MatrixXd A(dim, dim);
        Eigen::VectorXd f(dim);
        for (int j = 0; j < dim; ++j) {
            const std::size_t i = ref[static_cast<std::size_t>(j)];
            for (int n = 0; n <= N; ++n)
                A(j, n) = p.basis[static_cast<std::size_t>(n)][i] / scale[static_cast<std::size_t>(n)];
            A(j, N + 1) = (j % 2 == 0) ? 1.0 : -1.0;
            f(j) = p.target[i];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        if (lu.rank() < dim) {
            failed = true;
            break;
        }
        Eigen::VectorXd sol = lu.solve(f);
        // One step of iterative refinement.
        sol += lu.solve(f - A * sol);
        std::vector<double> a(static_cast<std::size_t>(N + 1));
        bool finite = std::isfinite(sol(N + 1));
        for (int n = 0; n <= N; ++n) {
            a[static_cast<std::size_t>(n)] = sol(n) / scale[static_cast<std::size_t>(n)];
            finite = finite && std::isfinite(a[static_cast<std::size_t>(n)]);
        }
        if (!finite) {
            failed = true;
            break;
        }

        const auto r = residual(p, a);
        const double global = sup_of(r);
        const double leveled = std::abs(sol(N + 1));
        res.history.push_back({leveled, global});
        res.iterations = it + 1;
        if (global < best_eps) {
            best_eps = global;
            best_a = a;
        }
        if (global - leveled <= options.relative_tolerance * global) {
            converged = true;
            break;
        }

        std::size_t star = 0;
        for (std::size_t i = 1; i < r.size(); ++i)
            if (std::fabs(r[i]) > std::fabs(r[star])) star = i;

        std::vector<std::size_t> next;
        auto ext = alternating_extrema(r);
        if (ext.size() >= static_cast<std::size_t>(dim)) {
            trim_extrema(ext, r, static_cast<std::size_t>(dim));
            if (std::find(ext.begin(), ext.end(), star) != ext.end()) next = ext;
        }
        if (next.empty()) {
            next = ref;
            single_exchange(next, r, star);
        }
        if (next == ref) break;  // stalled
        ref = std::move(next);
    }

    if (!best_a.empty()) {
        res.a = best_a;
        res.method = converged ? "remez" : "remez-stalled";
        finalize(res, p);
    }
    if (best_a.empty() || failed || !converged) {
        try {
            ApproximationResult lsq = least_squares_solve(p, N);
            if (best_a.empty() || lsq.epsilon < res.epsilon) {
                lsq.history = std::move(res.history);
                lsq.iterations = res.iterations;
                return lsq;
            }
        } catch (const SolveError&) {
            if (best_a.empty()) throw;
        }
    }
    return res;
}

ApproximationResult select_N(const MinimaxProblem& p, double eps_target, int N_max, RemezOptions options) {
    if (!(eps_target > 0.0)) throw DomainError("select_N: eps_target must be > 0");
    N_max = std::min<int>(N_max, static_cast<int>(p.basis.size()) - 1);
    ApproximationResult best;
    bool have_best = false;
    int stalls = 0;
    auto give_up = [&](const char* reason) {
        best.conditioning_limited = true;
        best.stop_reason = reason;
        return best;
    };
    for (int N = 0; N <= N_max; ++N) {
        ApproximationResult r = remez_solve(p, N, options);
        if (r.epsilon <= eps_target) {
            r.target_reached = true;
            r.stop_reason = "target";
            return r;
        }
        if (!have_best || r.epsilon < best.epsilon) {
            best = r;
            have_best = true;
            stalls = 0;
        } else if (++stalls >= 3) {
            return give_up("stagnation");
        }
        if (r.max_abs_coefficient > kCoefficientLimit) return give_up("coefficient-growth");
    }
    return give_up("n-max");
}

}  // namespace besseltrans

#include "besseltrans/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "besseltrans/approx.hpp"
#include "besseltrans/errors.hpp"
#include "besseltrans/solver.hpp"
#include "besseltrans/specfun.hpp"
#include "besseltrans/spps.hpp"
#include "besseltrans/wavebasis.hpp"
#include "json.hpp"

namespace besseltrans {

namespace {

const double kLs[] = {-0.5, 0.5, 1.0};

VerifyCheck make_check(std::string name, std::string description, double tol, double measured,
                       std::string detail = {}) {
    VerifyCheck c;
    c.name = std::move(name);
    c.description = std::move(description);
    c.tolerance = tol;
    c.measured = measured;
    c.passed = std::isfinite(measured) && measured <= tol;
    c.detail = std::move(detail);
    return c;
}

std::string worst_at(double l, int index) {
    std::ostringstream s;
    s << "worst at l = " << l << ", index " << index;
    return s.str();
}

std::shared_ptr<const WaveBasis> free_basis(double l, int n_max, const UniformGrid& g) {
    const auto q = SampledFunction::constant(g, 0.0);
    return build_wave_basis(build_u0(l, q), n_max, Execution::serial);
}

std::shared_ptr<const WaveBasis> perturbed(std::shared_ptr<const WaveBasis> b, const VerifyOptions& o) {
    if (!o.perturb_xi) return b;
    auto copy = std::make_shared<WaveBasis>(*b);
    const auto& p = *o.perturb_xi;
    if (p.n <= copy->n_max && p.k >= 0 && p.k <= p.n) copy->xi(p.n, p.k) *= 1.0 + p.relative;
    return copy;
}

// q = x^2 on [0, pi], l = -1/2, Q-mode: shared by the derivative and residual checks.
struct HarmonicCase {
    SpectralProblem problem;
    std::shared_ptr<const SolutionEvaluator> ev;
    double epsilon;
};

const HarmonicCase& harmonic_case() {
    static const HarmonicCase hc = [] {
        const UniformGrid g(std::numbers::pi);
        auto q = SampledFunction::from(g, [](double x) { return x * x; });
        SpectralProblem pr = make_spectral_problem(-0.5, q, 1.0, 0.0, 0.0, 1e4);
        auto basis = build_wave_basis(build_u0(-0.5, pr.q0), 30);
        const auto ar = select_N(make_minimax_problem(*basis, pr.q0, ApproxMode::Q), 1e-9, 30);
        auto ev = std::make_shared<const SolutionEvaluator>(basis, ar.a, pr.shift);
        return HarmonicCase{std::move(pr), std::move(ev), ar.epsilon};
    }();
    return hc;
}

}  // namespace

double VerifyCheck::margin() const {
    if (measured == 0.0) return std::numeric_limits<double>::infinity();
    return tolerance / measured;
}

double bessel_zero_oracle(double nu, int n) {
    const double step = 0.05;
    double a = 1e-3, fa = std::cyl_bessel_j(nu, a);
    int found = 0;
    for (double x = a + step;; x += step) {
        const double fx = std::cyl_bessel_j(nu, x);
        if ((fa < 0.0) != (fx < 0.0) && ++found == n) {
            double lo = x - step, hi = x, flo = fa;
            for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = std::cyl_bessel_j(nu, mid);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        fa = fx;
    }
}

VerifyCheck check_monomial_images() {
    const UniformGrid g(1.0);
    double worst = 0.0;
    std::string where;
    for (double l : {-0.5, 0.0, 0.5, 1.0, 2.5}) {
        for (int k = 0; k <= 10; ++k) {
            const auto f = SampledFunction::from(g, [k](double x) { return std::pow(x, k); });
            const auto y = y_apply(l, f);
            const double c = y_monomial_coefficient(l, k);
            const auto exact = SampledFunction::from(g, [&](double x) { return c * power_nonneg(x, k + l + 1.0); });
            const double err = (y - exact).sup_norm() / exact.sup_norm();
            if (err > worst) {
                worst = err;
                where = worst_at(l, k);
            }
        }
    }
    return make_check("monomial_images", "Y_l[x^k] = C_k x^(k+l+1), k <= 10, five l; sup-relative error", 1e-8,
                      worst, where);
}

VerifyCheck check_power_images() {
    const UniformGrid g(1.0);
    double worst = 0.0;
    std::string where;
    for (double l : kLs) {
        const auto basis = free_basis(l, 5, g);
        for (int k = 0; k <= 5; ++k) {
            const double coef = ((k % 2 == 0) ? 1.0 : -1.0) * std::pow(4.0, k) * std::tgamma(k + 1.0) *
                                pochhammer(l + 1.5, k);
            const auto lhs = multiply(basis->u0ref.u0, basis->Xref.at(2 * k)) * coef;
            const auto rhs = SampledFunction::from(g, [&](double x) { return power_nonneg(x, 2.0 * k + l + 1.0); });
            double err = 0.0;  // pointwise relative on [0.01, 1]
            for (std::size_t i = 0; i < g.size(); ++i)
                if (g.x(i) >= 0.01) err = std::max(err, std::abs(lhs[i] / rhs[i] - 1.0));
            if (err > worst) {
                worst = err;
                where = worst_at(l, k);
            }
        }
    }
    return make_check("power_images", "q = 0: (-1)^k 4^k k! (l+3/2)_k u0 X~(2k) = x^(2k+l+1) pointwise on [0.01, 1], k <= 5", 1e-10, worst,
                      where);
}

VerifyCheck check_wave_polynomial_identity(const VerifyOptions& options) {
    const UniformGrid g(1.0);
    double worst = 0.0;
    std::string where;
    for (double l : kLs) {
        const auto basis = perturbed(free_basis(l, 5, g), options);
        for (int n = 1; n <= 5; ++n) {
            KernelApprox ka{basis, std::vector<double>(static_cast<std::size_t>(n + 1), 0.0), n, 0.0};
            ka.a[static_cast<std::size_t>(n)] = 1.0;
            double err = 0.0, scale = 0.0;
            for (int i = 0; i <= 10; ++i) {
                for (int j = 0; j <= 10; ++j) {
                    const double x = i / 10.0, t = j / 10.0;
                    const double exact = generalized_wave_u(l, n, x, t);
                    err = std::max(err, std::abs(kernel_eval(ka, x, t) - exact));
                    scale = std::max(scale, std::abs(exact));
                }
            }
            if (err / scale > worst) {
                worst = err / scale;
                where = worst_at(l, n);
            }
        }
    }
    return make_check("wave_polynomial_identity",
                      "q = 0: u0 sum_k Xi_{n,k} X~(2(n-k))(x) t^(2k+l+1) = U_{4n-1}(x,t), n <= 5, 11x11 points", 1e-10,
                      worst, where);
}

VerifyCheck check_mapping_property(const VerifyOptions& options) {
    const VerifyCheck powers = check_power_images();
    const VerifyCheck waves = check_wave_polynomial_identity(options);
    const bool first = powers.measured >= waves.measured;
    return make_check("mapping_property",
                      "q = 0: images of x^(2k+l+1), k <= 5, and of U_{4n-1} through Xi, n <= 5; sup-relative error",
                      1e-10, std::max(powers.measured, waves.measured),
                      (first ? "powers: " + powers.detail : "wave polynomials: " + waves.detail));
}

VerifyCheck check_trace_identity() {
    const UniformGrid g(1.0);
    double worst = 0.0;
    std::string where;
    for (double l : kLs) {
        const auto basis = free_basis(l, 8, g);
        for (int n = 0; n <= 8; ++n) {
            const auto exact = SampledFunction::from(
                g, [&](double x) { return n == 0 ? generalized_wave_u0(l, x, x) : generalized_wave_u(l, n, x, x); });
            const double err = (basis->c[static_cast<std::size_t>(n)] - exact).sup_norm() / exact.sup_norm();
            if (err > worst) {
                worst = err;
                where = worst_at(l, n);
            }
        }
    }
    return make_check("trace_identity", "q = 0: c_n(x) = U_{4n-1}(x,x) (c_0 = U_0(x,x)), n <= 8; sup-relative error",
                      1e-10, worst, where);
}

VerifyCheck check_derivative_consistency() {
    const HarmonicCase& hc = harmonic_case();
    const SolutionEvaluator& ev = *hc.ev;
    const UniformGrid& g = ev.basis().grid();
    const std::size_t step = 4;  // finite-difference step of 4 grid cells keeps every sample on a node
    const double d = g.x(step);
    double worst = 0.0;
    std::string where;
    for (double lambda : {1.0, 10.0, 100.0}) {
        double err = 0.0, scale = 0.0;
        const std::size_t first = static_cast<std::size_t>(0.05 * (g.size() - 1));
        for (std::size_t i = first; i + 2 * step < g.size(); i += 97) {
            const double x = g.x(i);
            auto u = [&](long m) { return eval_uN(ev, lambda, g.x(i + static_cast<std::size_t>(m * static_cast<long>(step)) )); };
            const double fd = (u(-2) - 8.0 * u(-1) + 8.0 * u(1) - u(2)) / (12.0 * d);
            const double du = eval_duN(ev, lambda, x);
            err = std::max(err, std::abs(fd - du));
            scale = std::max(scale, std::abs(du));
        }
        if (err / scale > worst) {
            worst = err / scale;
            where = "worst at lambda = " + std::to_string(lambda);
        }
    }
    return make_check("derivative_consistency",
                      "q = x^2, l = -1/2: eval_duN vs 5-point differences of eval_uN, x in [0.05b, b], "
                      "lambda in {1, 10, 100}; error relative to max |u_N'|",
                      1e-7, worst, where);
}

VerifyCheck check_bessel_zero_reduction() {
    double worst = 0.0;
    std::string where;
    const double b = std::numbers::pi;
    const int count = 50;
    for (double l : kLs) {
        const double nu = l + 0.5;
        const double hi_zero = 0.5 * (bessel_zero_oracle(nu, count) + bessel_zero_oracle(nu, count + 1));
        const UniformGrid g(b);
        auto pr = make_spectral_problem(l, SampledFunction::constant(g, 0.0), 1.0, 0.0, 0.0,
                                        (hi_zero / b) * (hi_zero / b));
        auto basis = build_wave_basis(build_u0(l, pr.q0), 0, Execution::serial);
        const auto ar = select_N(make_minimax_problem(*basis, pr.q0, ApproxMode::Q), 1e-9, 0);
        const SolutionEvaluator ev(basis, ar.a, pr.shift);
        const auto er = find_eigenvalues(pr, ev);
        if (static_cast<int>(er.eigenpairs.size()) != count) {
            return make_check("bessel_zero_reduction", "q = 0 eigenvalues = (j_{nu,n}/b)^2", 1e-9, INFINITY,
                              "found " + std::to_string(er.eigenpairs.size()) + " eigenvalues for l = " +
                                  std::to_string(l) + ", expected " + std::to_string(count));
        }
        for (int n = 1; n <= count; ++n) {
            const double j = bessel_zero_oracle(nu, n);
            const double exact = (j / b) * (j / b);
            const double err = std::abs(er.eigenpairs[static_cast<std::size_t>(n - 1)].lambda - exact) / exact;
            if (err > worst) {
                worst = err;
                where = worst_at(l, n);
            }
        }
    }
    return make_check("bessel_zero_reduction",
                      "q = 0, Dirichlet, b = pi: lambda_n = (j_{l+1/2,n}/pi)^2, n <= 50, l in {-1/2, 1/2, 1}; "
                      "relative error",
                      1e-9, worst, where);
}

std::vector<VerifyCheck> check_residual_bounds() {
    const HarmonicCase& hc = harmonic_case();
    double worst_sqrt = 0.0, worst_var = 0.0;
    std::string where_sqrt, where_var;
    for (int i = 0; i < 20; ++i) {
        const double lambda = std::pow(10.0, 4.0 * i / 19.0);
        const auto rep = residual_bound_check(hc.problem, *hc.ev, hc.epsilon, lambda);
        if (rep.worst_ratio > worst_sqrt) {
            worst_sqrt = rep.worst_ratio;
            where_sqrt = "worst at lambda = " + std::to_string(lambda) + ", x = " + std::to_string(rep.worst_x);
        }
        if (rep.worst_ratio_variation > worst_var) {
            worst_var = rep.worst_ratio_variation;
            where_var = "worst at lambda = " + std::to_string(lambda);
        }
    }
    std::vector<VerifyCheck> out;
    out.push_back(make_check("residual_bound_variation",
                             "q = x^2, l = -1/2, 20 lambda in [1, 1e4]: R(x) / (2 eps (sqrt(x) + V_0^x d_l)) <= 1.1",
                             1.1, worst_var, where_var));
    VerifyCheck s = make_check("residual_bound_2eps_sqrt_x",
                               "same sweep: R(x) / (2 eps sqrt(x)) <= 1.1 (stated bound; does not hold in general, "
                               "reported for information)",
                               1.1, worst_sqrt, where_sqrt);
    s.required = false;
    out.push_back(std::move(s));
    return out;
}

bool VerifyReport::all_passed() const {
    for (const auto& c : checks)
        if (c.required && !c.passed) return false;
    return true;
}

const VerifyCheck* VerifyReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::string VerifyReport::to_json() const {
    using nlohmann::json;
    json arr = json::array();
    for (const auto& c : checks) {
        const double m = c.margin();
        arr.push_back({{"name", c.name},
                       {"description", c.description},
                       {"tolerance", c.tolerance},
                       {"measured", std::isfinite(c.measured) ? json(c.measured) : json("inf")},
                       {"margin", std::isfinite(m) ? json(m) : json("inf")},
                       {"passed", c.passed},
                       {"required", c.required},
                       {"detail", c.detail}});
    }
    json j = {{"passed", all_passed()}, {"seconds", seconds}, {"checks", std::move(arr)}};
    return j.dump(2) + "\n";
}

VerifyReport verify_suite(const VerifyOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    VerifyReport r;
    auto guarded = [&](const char* name, auto&& f) {
        try {
            r.checks.push_back(f());
        } catch (const std::exception& e) {
            VerifyCheck c;
            c.name = name;
            c.description = "raised an exception";
            c.measured = INFINITY;
            c.detail = e.what();
            r.checks.push_back(std::move(c));
        }
    };
    guarded("monomial_images", [] { return check_monomial_images(); });
    guarded("mapping_property", [&] { return check_mapping_property(options); });
    guarded("trace_identity", [] { return check_trace_identity(); });
    guarded("derivative_consistency", [] { return check_derivative_consistency(); });
    guarded("bessel_zero_reduction", [] { return check_bessel_zero_reduction(); });
    try {
        for (auto& c : check_residual_bounds()) r.checks.push_back(std::move(c));
    } catch (const std::exception& e) {
        VerifyCheck c;
        c.name = "residual_bound_variation";
        c.measured = INFINITY;
        c.detail = e.what();
        r.checks.push_back(std::move(c));
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace besseltrans

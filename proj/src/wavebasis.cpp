#include "besseltrans/wavebasis.hpp"

#include <omp.h>

#include <cmath>
#include <numbers>
#include <string>

#include "besseltrans/errors.hpp"
#include "besseltrans/specfun.hpp"

namespace besseltrans {

namespace {

constexpr double kLogLimit = 690.0;  // exp(690) ~ 1e299

double log_binom(int n, int k) { return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0); }

double log_xi(double l, int n, int k) {
    const int m = n - k;
    const double log_c = log_gamma(l + 1.0) - (l + 1.5) * std::log(2.0) - log_gamma(l + 1.5);
    return 2.0 * log_c + log_binom(2 * n, 2 * k) + m * std::log(4.0) + log_gamma(m + 1.0) + log_gamma(m + 0.5) +
           log_gamma(k + 0.5) - log_gamma(k + l + 1.5) - log_gamma(l + 1.5);
}

double log_trace_coefficient(double l, int n, int k) {
    const double log_p = 2.0 * log_gamma(l + 1.0) + std::log(std::numbers::pi) - (2.0 * l + 3.0) * std::log(2.0) -
                         3.0 * log_gamma(l + 1.5);
    return log_p + log_gamma(2.0 * n + 1.0) - k * std::log(4.0) - log_gamma(k + 1.0) - log_gamma(k + l + 1.5);
}

double sign_of(int n, int k) { return ((n - k) % 2 == 0) ? 1.0 : -1.0; }

// Neumaier compensated summation.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) comp += (sum - t) + v;
        else comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

void check_inputs(const ParticularSolution& u0, const RecursiveIntegrals& X, int n_max) {
    if (u0.l != X.l) throw DomainError("trace_functions: u0 and X~ were built for different l");
    if (!(u0.grid() == X.X.front().grid())) throw DomainError("trace_functions: u0 and X~ live on different grids");
    if (n_max > X.n_max) throw DomainError("trace_functions: X~ does not reach order 2 n_max");
}

}  // namespace

int max_safe_order(double l) {
    for (int n = 0;; ++n) {
        for (int k = 0; k <= n; ++k) {
            if (log_xi(l, n, k) > kLogLimit || log_trace_coefficient(l, n, k) > kLogLimit) return n - 1;
        }
    }
}

TriangularTable xi_coefficients(double l, int n_max) {
    if (!(l >= -0.5)) throw DomainError("xi_coefficients: l must be >= -1/2");
    if (n_max < 0) throw DomainError("xi_coefficients: n_max must be >= 0");
    TriangularTable t(n_max);
    for (int n = 0; n <= n_max; ++n) {
        for (int k = 0; k <= n; ++k) {
            const double lg = log_xi(l, n, k);
            if (lg > kLogLimit) {
                const int safe = max_safe_order(l);
                throw RangeError("xi_coefficients: order " + std::to_string(n_max) +
                                     " overflows binary64; max safe order is " + std::to_string(safe),
                                 safe);
            }
            t(n, k) = sign_of(n, k) * std::exp(lg);
        }
    }
    return t;
}

TriangularTable trace_coefficients(double l, int n_max) {
    if (!(l >= -0.5)) throw DomainError("trace_coefficients: l must be >= -1/2");
    TriangularTable t(n_max);
    for (int n = 0; n <= n_max; ++n) {
        for (int k = 0; k <= n; ++k) {
            const double lg = log_trace_coefficient(l, n, k);
            if (lg > kLogLimit) {
                const int safe = max_safe_order(l);
                throw RangeError("trace_coefficients: order " + std::to_string(n_max) + " overflows binary64", safe);
            }
            t(n, k) = sign_of(n, k) * std::exp(lg);
        }
    }
    return t;
}

std::vector<SampledFunction> trace_functions(const ParticularSolution& u0, const RecursiveIntegrals& X, int n_max,
                                             Execution exec) {
    check_inputs(u0, X, n_max);
    const TriangularTable coef = trace_coefficients(u0.l, n_max);
    const UniformGrid& g = u0.grid();
    const std::size_t m = g.size();
    const double l = u0.l;

    // x^{2k+2l+2} v(x) for k = 0..n_max.
    std::vector<std::vector<double>> pw(static_cast<std::size_t>(n_max + 1), std::vector<double>(m));
    for (int k = 0; k <= n_max; ++k)
        for (std::size_t i = 0; i < m; ++i)
            pw[static_cast<std::size_t>(k)][i] = power_nonneg(g.x(i), 2.0 * k + 2.0 * l + 2.0) * u0.v[i];

    std::vector<std::vector<double>> values(static_cast<std::size_t>(n_max + 1), std::vector<double>(m));
    auto build = [&](int n) {
        auto& out = values[static_cast<std::size_t>(n)];
        for (std::size_t i = 0; i < m; ++i) {
            CompensatedSum s;
            for (int k = 0; k <= n; ++k) s.add(coef(n, k) * X.at(2 * (n - k))[i] * pw[static_cast<std::size_t>(k)][i]);
            out[i] = s.value();
        }
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(worker_threads())
        for (int n = 0; n <= n_max; ++n) build(n);
    } else {
        for (int n = 0; n <= n_max; ++n) build(n);
    }

    std::vector<SampledFunction> c;
    c.reserve(values.size());
    for (auto& v : values) c.emplace_back(g, std::move(v));
    return c;
}

std::vector<SampledFunction> trace_derivatives(const WaveBasis& basis, Execution exec) {
    const ParticularSolution& u0 = basis.u0ref;
    const RecursiveIntegrals& X = basis.Xref;
    const int n_max = basis.n_max;
    const TriangularTable coef = trace_coefficients(basis.l, n_max);
    const UniformGrid& g = u0.grid();
    const std::size_t m = g.size();
    const double l = basis.l;

    std::vector<std::vector<double>> values(static_cast<std::size_t>(n_max + 1), std::vector<double>(m));
    auto build = [&](int n) {
        auto& out = values[static_cast<std::size_t>(n)];
        for (std::size_t i = 0; i < m; ++i) {
            const double x = g.x(i);
            const double v = u0.v[i];
            const double dv = u0.v_prime[i];
            CompensatedSum s;
            for (int k = 0; k <= n; ++k) {
                const int mm = n - k;
                const double p = 2.0 * k + 2.0 * l + 2.0;
                const double a = (p * v + x * dv) * power_nonneg(x, p - 1.0) * X.at(2 * mm)[i];
                const double b = power_nonneg(x, 2.0 * k) * X.at(2 * mm - 1)[i] / v;
                s.add(coef(n, k) * (a - b));
            }
            out[i] = s.value();
        }
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(worker_threads())
        for (int n = 0; n <= n_max; ++n) build(n);
    } else {
        for (int n = 0; n <= n_max; ++n) build(n);
    }
    std::vector<SampledFunction> out;
    out.reserve(values.size());
    for (auto& v : values) out.emplace_back(g, std::move(v));
    return out;
}

std::shared_ptr<const WaveBasis> build_wave_basis(ParticularSolution u0, int n_max, Execution exec) {
    auto basis = std::make_shared<WaveBasis>(WaveBasis{u0.l, n_max, xi_coefficients(u0.l, n_max), {}, {}, u0,
                                                       recursive_integrals(u0, n_max)});
    basis->c = trace_functions(basis->u0ref, basis->Xref, n_max, exec);
    basis->c_prime = trace_derivatives(*basis, exec);
    return basis;
}

std::vector<SampledFunction> kernel_coefficient_functions(const WaveBasis& basis, const std::vector<double>& a,
                                                          int shift) {
    const int N = static_cast<int>(a.size()) - 1;
    if (N > basis.n_max) throw DomainError("kernel coefficients exceed the basis order");
    const UniformGrid& g = basis.grid();
    std::vector<SampledFunction> out;
    out.reserve(a.size());
    for (int k = 0; k <= N; ++k) {
        std::vector<double> acc(g.size(), 0.0);
        for (int n = k; n <= N; ++n) {
            const double w = a[static_cast<std::size_t>(n)] * basis.xi(n, k);
            if (w == 0.0) continue;
            const SampledFunction& Xf = basis.Xref.at(2 * (n - k) + shift);
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * Xf[i];
        }
        out.emplace_back(g, std::move(acc));
    }
    return out;
}

double kernel_eval(const KernelApprox& ka, double x, double t) {
    const WaveBasis& basis = *ka.basis;
    const double b = basis.grid().b();
    if (!(x >= 0.0 && x <= b && t >= 0.0 && t <= b)) throw DomainError("kernel_eval: (x, t) outside [0, b]^2");
    const double l = basis.l;
    const double u0x = evaluate_at(basis.u0ref.u0, x);
    CompensatedSum s;
    for (int n = 0; n <= ka.N; ++n) {
        const double an = ka.a[static_cast<std::size_t>(n)];
        if (an == 0.0) continue;
        for (int k = 0; k <= n; ++k)
            s.add(an * basis.xi(n, k) * evaluate_at(basis.Xref.at(2 * (n - k)), x) *
                  power_nonneg(t, 2.0 * k + l + 1.0));
    }
    return u0x * s.value();
}

SampledFunction kernel_diagonal(const WaveBasis& basis, const std::vector<double>& a) {
    SampledFunction out = SampledFunction::constant(basis.grid(), 0.0);
    for (std::size_t n = 0; n < a.size(); ++n) out += basis.c.at(n) * a[n];
    return out;
}

double wave_polynomial(int m, double x, double t) {
    if (m < 0) throw DomainError("wave_polynomial: index must be >= 0");
    if (m == 0) return 1.0;
    const bool odd_index = (m % 2 == 1);
    const int deg = odd_index ? (m + 1) / 2 : m / 2;
    double s = 0.0;
    double binom = 1.0;  // binom(deg, k)
    for (int k = 0; k <= deg; ++k) {
        if ((k % 2 == 0) == odd_index) s += binom * std::pow(x, deg - k) * std::pow(t, k);
        binom = binom * (deg - k) / (k + 1);
    }
    return s;
}

double generalized_wave_u0(double l, double x, double t) {
    const double c0 = y_monomial_coefficient(l, 0);
    return c0 * c0 * power_nonneg(x, l + 1.0) * power_nonneg(t, l + 1.0);
}

double generalized_wave_u(double l, int n, double x, double t) {
    if (n < 1) throw DomainError("generalized_wave_u: n must be >= 1");
    const double common = 2.0 * log_gamma(l + 1.0) - 2.0 * (l + 1.5) * std::log(2.0) - 2.0 * log_gamma(l + 1.5);
    double s = 0.0;
    for (int k = 0; k <= 2 * n; k += 2) {
        const double lg = log_binom(2 * n, k) + log_gamma(n + 0.5 * (1 - k)) + log_gamma(0.5 * (k + 1)) + common -
                          log_gamma(n + l + 0.5 * (3 - k)) - log_gamma(l + 0.5 * (k + 3));
        s += std::exp(lg) * power_nonneg(x, 2.0 * n - k + l + 1.0) * power_nonneg(t, k + l + 1.0);
    }
    return s;
}

}  // namespace besseltrans

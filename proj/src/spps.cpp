#include "besseltrans/spps.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "besseltrans/errors.hpp"
#include "besseltrans/specfun.hpp"

namespace besseltrans {

namespace {

struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Jacobi rule for int_0^1 (1-z)^alpha g(z) dz (Golub-Welsch on [-1, 1], beta = 0).
Quadrature gauss_jacobi_unit(double alpha, int n) {
    const double beta = 0.0;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    const double ab = alpha + beta;
    for (int i = 0; i < n; ++i) {
        const double k = i;
        const double denom = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
        J(i, i) = (denom == 0.0) ? (beta - alpha) / (ab + 2.0) : (beta * beta - alpha * alpha) / denom;
        if (i + 1 < n) {
            const double m = k + 1.0;
            const double s = 2.0 * m + ab;
            const double b = std::sqrt(4.0 * m * (m + alpha) * (m + beta) * (m + ab) / (s * s * (s + 1.0) * (s - 1.0)));
            J(i, i + 1) = b;
            J(i + 1, i) = b;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    const double mu0 = std::pow(2.0, ab + 1.0) * gamma(alpha + 1.0) * gamma(beta + 1.0) / gamma(ab + 2.0);
    Quadrature q;
    q.nodes.resize(static_cast<std::size_t>(n));
    q.weights.resize(static_cast<std::size_t>(n));
    const double scale = std::pow(0.5, alpha + 1.0);
    for (int i = 0; i < n; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        q.nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 + es.eigenvalues()(i));
        q.weights[static_cast<std::size_t>(i)] = scale * mu0 * v0 * v0;
    }
    return q;
}

// Degree-11 Lagrange interpolation on the 12 nodes nearest x (barycentric form,
// equispaced weights (-1)^j binom(11, j)). Exact for the monomials k <= 11 that the
// identity checks feed through y_apply, including on the first few nodes.
double interpolate_high(const SampledFunction& f, double x) {
    const UniformGrid& g = f.grid();
    const std::size_t n = f.size();
    const std::size_t m = std::min<std::size_t>(12, n);
    const double s = x / g.h();
    const double nearest = std::round(s);
    if (std::abs(s - nearest) < 1e-12) return f[std::min(static_cast<std::size_t>(nearest), n - 1)];
    const double start = std::floor(s) - static_cast<double>(m / 2 - 1);
    const std::size_t i0 = static_cast<std::size_t>(std::clamp(start, 0.0, static_cast<double>(n - m)));
    double num = 0.0, den = 0.0, w = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double c = ((j % 2) ? -w : w) / (s - static_cast<double>(i0 + j));
        num += c * f[i0 + j];
        den += c;
        w = w * static_cast<double>(m - 1 - j) / static_cast<double>(j + 1);
    }
    return num / den;
}

void require_l(double l, const char* where) {
    if (!(l >= -0.5) || !std::isfinite(l)) throw DomainError(std::string(where) + ": l must be >= -1/2");
}

}  // namespace

double power_nonneg(double x, double p) {
    if (p == 0.0) return 1.0;
    if (x == 0.0) return 0.0;
    return std::exp(p * std::log(x));
}

double y_monomial_coefficient(double l, int k) {
    require_l(l, "y_monomial_coefficient");
    if (k < 0) throw DomainError("y_monomial_coefficient: k must be >= 0");
    const double log_c = log_gamma(0.5 * (k + 1.0)) + log_gamma(l + 1.0) - (l + 1.5) * std::log(2.0) -
                         log_gamma(l + 1.5) - log_gamma(l + 0.5 * (k + 3.0));
    return std::exp(log_c);
}

SampledFunction y_apply(double l, const SampledFunction& f) {
    require_l(l, "y_apply");
    const Quadrature quad = gauss_jacobi_unit(l, 48);
    const UniformGrid& g = f.grid();
    const double pref = 1.0 / (std::pow(2.0, l + 0.5) * gamma(l + 1.5));
    std::vector<double> out(g.size(), 0.0);
    for (std::size_t i = 1; i < g.size(); ++i) {
        const double x = g.x(i);
        double s = 0.0;
        for (std::size_t j = 0; j < quad.nodes.size(); ++j) {
            const double z = quad.nodes[j];
            s += quad.weights[j] * std::pow(1.0 + z, l) * interpolate_high(f, std::min(x * z, g.b()));
        }
        out[i] = pref * power_nonneg(x, l + 1.0) * s;
    }
    return SampledFunction(g, std::move(out));
}

ParticularSolution build_u0(double l, const SampledFunction& q, PicardOptions options, std::vector<double>* history) {
    require_l(l, "build_u0");
    const UniformGrid& g = q.grid();
    const std::size_t n = g.size();
    const double p = 2.0 * (l + 1.0);

    std::vector<double> weight(n);  // x^{2(l+1)}
    for (std::size_t i = 0; i < n; ++i) weight[i] = power_nonneg(g.x(i), p);

    std::vector<double> v(n, 1.0), inner(n), w(n), outer(n), next(n);
    auto update_outer = [&](const std::vector<double>& vv) {
        for (std::size_t i = 0; i < n; ++i) inner[i] = weight[i] * q[i] * vv[i];
        cumulative_integral_power(inner, g.h(), p, w);
        outer[0] = 0.0;
        for (std::size_t i = 1; i < n; ++i) outer[i] = w[i] / weight[i];
    };

    int it = 0;
    bool converged = false;
    while (it < options.max_iterations) {
        ++it;
        update_outer(v);
        cumulative_integral(outer, g.h(), next);
        double diff = 0.0, norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] += 1.0;
            diff = std::max(diff, std::abs(next[i] - v[i]));
            norm = std::max(norm, std::abs(next[i]));
        }
        v.swap(next);
        if (history) history->push_back(diff);
        if (diff <= options.tol * std::max(1.0, norm)) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("build_u0: Picard iteration did not converge in " +
                               std::to_string(options.max_iterations) + " iterations");
    for (std::size_t i = 1; i < n; ++i)
        if (!(v[i] > 0.0))
            throw UnsupportedPotentialError("build_u0: particular solution u0 vanishes at x = " + std::to_string(g.x(i)));

    update_outer(v);  // v' for the converged iterate
    std::vector<double> u0(n), du0(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = g.x(i);
        if (i == 0) {
            u0[i] = 0.0;
            du0[i] = (l == 0.0) ? v[0] : 0.0;
            continue;
        }
        const double xl = power_nonneg(x, l);
        u0[i] = xl * x * v[i];
        du0[i] = (l + 1.0) * xl * v[i] + xl * x * outer[i];
    }
    return ParticularSolution{l,
                              SampledFunction(g, std::move(u0)),
                              SampledFunction(g, std::move(du0)),
                              SampledFunction(g, v),
                              SampledFunction(g, outer),
                              it};
}

RecursiveIntegrals recursive_integrals(const ParticularSolution& ps, int n_max) {
    if (n_max < 0) throw DomainError("recursive_integrals: n_max must be >= 0");
    const UniformGrid& g = ps.grid();
    const std::size_t n = g.size();
    const double p = 2.0 * (ps.l + 1.0);
    std::vector<double> u0sq(n);
    for (std::size_t i = 0; i < n; ++i) u0sq[i] = power_nonneg(g.x(i), p) * ps.v[i] * ps.v[i];

    RecursiveIntegrals r{ps.l, n_max, {}, SampledFunction::constant(g, 0.0)};
    r.X.reserve(static_cast<std::size_t>(2 * n_max + 1));
    r.X.push_back(SampledFunction::constant(g, 1.0));
    std::vector<double> integrand(n), out(n);
    for (int order = 1; order <= 2 * n_max; ++order) {
        const SampledFunction& prev = r.X.back();
        if (order % 2 == 1) {
            for (std::size_t i = 0; i < n; ++i) integrand[i] = u0sq[i] * prev[i];
        } else {
            integrand[0] = 0.0;
            for (std::size_t i = 1; i < n; ++i) integrand[i] = -prev[i] / u0sq[i];
        }
        const double lead = order % 2 == 1 ? 2.0 * ps.l + order + 1.0 : order - 1.0;
        cumulative_integral_power(integrand, g.h(), lead, out);
        r.X.emplace_back(g, out);
    }
    return r;
}

}  // namespace besseltrans

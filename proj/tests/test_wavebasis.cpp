#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "besseltrans/errors.hpp"
#include "besseltrans/specfun.hpp"
#include "besseltrans/wavebasis.hpp"

using namespace besseltrans;

namespace {

std::shared_ptr<const WaveBasis> free_basis(double l, int n_max, double b = 1.0, Execution exec = Execution::parallel) {
    UniformGrid g(b);
    return build_wave_basis(build_u0(l, SampledFunction::constant(g, 0.0)), n_max, exec);
}

}  // namespace

TEST_CASE("Xi_{1,1} at l = -1/2 is pi^2/8") {
    const auto xi = xi_coefficients(-0.5, 3);
    CHECK(xi(1, 1) == doctest::Approx(std::numbers::pi * std::numbers::pi / 8).epsilon(1e-14));
    CHECK(xi.n_max() == 3);
}

TEST_CASE("Xi_{n,k} alternates in sign with n - k") {
    const auto xi = xi_coefficients(0.5, 6);
    for (int n = 0; n <= 6; ++n)
        for (int k = 0; k <= n; ++k) CHECK((xi(n, k) > 0) == ((n - k) % 2 == 0));
}

TEST_CASE("safe order limits") {
    for (double l : {-0.5, 0.5, 1.0, 5.0}) {
        const int m = max_safe_order(l);
        CHECK(m >= 20);
        CHECK_NOTHROW(xi_coefficients(l, m));
        CHECK_THROWS_AS(xi_coefficients(l, m + 1), RangeError);
    }
    try {
        xi_coefficients(-0.5, 10000);
        FAIL("expected RangeError");
    } catch (const RangeError& e) {
        CHECK(e.max_safe_order() == max_safe_order(-0.5));
    }
}

TEST_CASE("wave polynomials") {
    CHECK(wave_polynomial(0, 2.0, 3.0) == 1.0);
    CHECK(wave_polynomial(1, 2.0, 3.0) == 2.0);
    CHECK(wave_polynomial(2, 2.0, 3.0) == 3.0);
    CHECK(wave_polynomial(3, 2.0, 3.0) == 13.0);
    CHECK(wave_polynomial(4, 2.0, 3.0) == 12.0);
    CHECK(wave_polynomial(5, 2.0, 3.0) == 8.0 + 3 * 2.0 * 9.0);
    CHECK_THROWS_AS(wave_polynomial(-1, 0, 0), DomainError);
}

TEST_CASE("traces at q = 0 equal the diagonal of the generalized wave polynomials") {
    for (double l : {-0.5, 1.0}) {
        const auto basis = free_basis(l, 6);
        const UniformGrid& g = basis->grid();
        for (int n = 0; n <= 6; ++n) {
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double x = g.x(i);
                const double e = n == 0 ? generalized_wave_u0(l, x, x) : generalized_wave_u(l, n, x, x);
                num = std::max(num, std::abs(basis->c[static_cast<std::size_t>(n)][i] - e));
                den = std::max(den, std::abs(e));
            }
            CAPTURE(l);
            CAPTURE(n);
            CHECK(num / den < 1e-10);
        }
    }
}

TEST_CASE("kernel_eval on the diagonal reproduces the trace functions") {
    UniformGrid g(2.0);
    auto q = SampledFunction::from(g, [](double x) { return x * x; });
    const auto basis = build_wave_basis(build_u0(0.5, q), 4);
    KernelApprox ka{basis, {0.3, -1.0, 0.25, 0.0, 0.01}, 4, 0.0};
    const auto diag = kernel_diagonal(*basis, ka.a);
    for (std::size_t i : {std::size_t{0}, std::size_t{1234}, std::size_t{9000}, g.size() - 1}) {
        const double x = g.x(i);
        CHECK(kernel_eval(ka, x, x) == doctest::Approx(diag[i]).epsilon(1e-11).scale(diag.sup_norm()));
    }
    CHECK(kernel_eval(ka, 1.0, 0.0) == 0.0);
    CHECK(kernel_eval(ka, 0.0, 1.0) == 0.0);
    CHECK_THROWS_AS(kernel_eval(ka, 2.5, 1.0), DomainError);
}

TEST_CASE("analytic trace derivatives agree with numerical differentiation") {
    UniformGrid g(3.0);
    auto q = SampledFunction::from(g, [](double x) { return x * x; });
    const auto basis = build_wave_basis(build_u0(-0.5, q), 8);
    for (int n = 0; n <= 8; ++n) {
        const auto& c = basis->c[static_cast<std::size_t>(n)];
        const auto fd = differentiate(c);
        const auto& an = basis->c_prime[static_cast<std::size_t>(n)];
        double err = 0.0;
        for (std::size_t i = g.size() / 10; i < g.size(); ++i) err = std::max(err, std::abs(fd[i] - an[i]));
        CAPTURE(n);
        CHECK(err < 1e-8 * an.sup_norm());
    }
}

TEST_CASE("serial and parallel basis builds are identical") {
    const auto a = free_basis(0.5, 10, 2.0, Execution::serial);
    const auto b = free_basis(0.5, 10, 2.0, Execution::parallel);
    for (int n = 0; n <= 10; ++n) {
        const auto& ca = a->c[static_cast<std::size_t>(n)];
        const auto& cb = b->c[static_cast<std::size_t>(n)];
        for (std::size_t i = 0; i < ca.size(); ++i) REQUIRE(ca[i] == cb[i]);
    }
}

TEST_CASE("kernel coefficient functions reject orders beyond the basis") {
    const auto basis = free_basis(-0.5, 3);
    CHECK_THROWS_AS(kernel_coefficient_functions(*basis, std::vector<double>(6, 1.0)), DomainError);
    const auto g = kernel_coefficient_functions(*basis, {0.0, 0.0, 1.0});
    REQUIRE(g.size() == 3);
    // g_2 = a_2 Xi_{2,2} X~(0)
    CHECK(g[2][100] == doctest::Approx(basis->xi(2, 2)));
}

TEST_CASE("documented basis identities") {
    for (double l : {-0.5, 0.5, 1.0}) {
        const auto basis = free_basis(l, 5);
        const double c0 = y_monomial_coefficient(l, 0);
        CHECK(basis->xi(0, 0) == doctest::Approx(c0 * c0).epsilon(1e-14));
        const UniformGrid& g = basis->grid();
        for (const auto& c : basis->c) CHECK(c[0] == 0.0);
        for (std::size_t i = 0; i < g.size(); i += 1000) {
            const double x = g.x(i);
            CHECK(basis->c[0][i] == doctest::Approx(c0 * c0 * basis->u0ref.u0[i] * std::pow(x, l + 1)).epsilon(1e-13));
            CHECK(basis->c_prime[0][i] ==
                  doctest::Approx(c0 * c0 * (2 * l + 2) * std::pow(x, 2 * l + 1)).epsilon(1e-12).scale(1e-300));
        }
    }
}

TEST_CASE("Xi expansion reproduces U_3 and U_7 at q = 0") {
    // u_n(x, t) = u0(x) sum_k Xi_{n,k} X~(2(n-k))(x) t^{2k+l+1}, with the q = 0 closed forms
    // X~(2m) = (-1)^m x^{2m} / (4^m m! (l+3/2)_m) from the mapping property.
    for (double l : {-0.5, 0.5, 1.0}) {
        const auto xi = xi_coefficients(l, 2);
        for (int n = 1; n <= 2; ++n) {
            for (double x : {0.3, 0.9}) {
                for (double t : {0.2, 0.7, 1.0}) {
                    double s = 0.0;
                    for (int k = 0; k <= n; ++k) {
                        const int m = n - k;
                        const double Xm = std::pow(-1.0, m) * std::pow(x, 2 * m) /
                                          (std::pow(4.0, m) * std::tgamma(m + 1.0) * pochhammer(l + 1.5, m));
                        s += xi(n, k) * Xm * std::pow(t, 2 * k + l + 1);
                    }
                    s *= std::pow(x, l + 1);
                    CHECK(s == doctest::Approx(generalized_wave_u(l, n, x, t)).epsilon(1e-13));
                }
            }
        }
    }
}

TEST_CASE("integrating q_N reproduces the kernel diagonal") {
    UniformGrid g(std::numbers::pi);
    auto q = SampledFunction::from(g, [](double x) { return x * x; });
    const auto basis = build_wave_basis(build_u0(-0.5, q), 6);
    const std::vector<double> a{0.1, -0.2, 0.05, 0.3, -0.01, 0.002, 0.0007};
    SampledFunction qN = SampledFunction::constant(g, 0.0);
    for (std::size_t n = 0; n < a.size(); ++n) qN += basis->c_prime[n] * (2 * a[n]);
    const auto lhs = cumulative_integral(qN) * 0.5;
    const auto rhs = kernel_diagonal(*basis, a);
    CHECK((lhs - rhs).sup_norm() <= 1e-12 * std::max(1.0, rhs.sup_norm()));
}

TEST_CASE("wave polynomials solve the wave equation") {
    // 5-point second differences are exact for the degree <= 5 polynomials involved
    const double h = 1e-2;
    auto d2 = [h](auto&& f) { return (-f(2 * h) + 16 * f(h) - 30 * f(0.0) + 16 * f(-h) - f(-2 * h)) / (12 * h * h); };
    for (int m = 0; m <= 9; ++m) {
        for (double x : {0.4, 1.1}) {
            for (double t : {0.3, 0.8}) {
                const double pxx = d2([&](double s) { return wave_polynomial(m, x + s, t); });
                const double ptt = d2([&](double s) { return wave_polynomial(m, x, t + s); });
                CAPTURE(m);
                CHECK(std::abs(pxx - ptt) <= 1e-8);
            }
        }
    }
}

TEST_CASE("independently coded Xi and trace coefficient tables agree") {
    for (double l : {-0.5, 0.0, 0.5, 1.0, 2.5}) {
        const int n_max = std::min(20, max_safe_order(l));
        const auto xi = xi_coefficients(l, n_max);
        const auto tr = trace_coefficients(l, n_max);
        for (int n = 0; n <= n_max; ++n)
            for (int k = 0; k <= n; ++k) CHECK(std::abs(xi(n, k) / tr(n, k) - 1) <= 1e-12);
    }
}

TEST_CASE("generalized wave polynomials vanish on the axes and solve the singular wave equation") {
    for (double l : {-0.5, 0.5, 1.0}) {
        for (int n = 1; n <= 4; ++n) {
            CHECK(std::abs(generalized_wave_u(l, n, 0.0, 0.7)) <= 1e-14);
            CHECK(std::abs(generalized_wave_u(l, n, 0.7, 0.0)) <= 1e-14);
            const double h = 1e-3;
            for (double x : {0.6, 0.9}) {
                for (double t : {0.5, 0.8}) {
                    auto U = [&](double a, double b) { return generalized_wave_u(l, n, a, b); };
                    const double uxx = (-U(x + 2 * h, t) + 16 * U(x + h, t) - 30 * U(x, t) + 16 * U(x - h, t) - U(x - 2 * h, t)) / (12 * h * h);
                    const double utt = (-U(x, t + 2 * h) + 16 * U(x, t + h) - 30 * U(x, t) + 16 * U(x, t - h) - U(x, t - 2 * h)) / (12 * h * h);
                    const double ll = l * (l + 1);
                    const double res = uxx - utt - ll / (x * x) * U(x, t) + ll / (t * t) * U(x, t);
                    const double scale = std::abs(uxx) + std::abs(utt) + std::abs(ll / (x * x) * U(x, t)) + 1e-300;
                    CAPTURE(l);
                    CAPTURE(n);
                    CHECK(std::abs(res) <= 1e-6 * scale);
                }
            }
        }
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <numbers>

#include "besseltrans/approx.hpp"
#include "besseltrans/errors.hpp"

using namespace besseltrans;

namespace {

struct Harmonic {
    std::shared_ptr<const WaveBasis> basis;
    SampledFunction q;
};

const Harmonic& harmonic(double l) {
    static std::map<double, Harmonic> cache;
    auto it = cache.find(l);
    if (it == cache.end()) {
        UniformGrid g(std::numbers::pi);
        auto q = SampledFunction::from(g, [](double x) { return x * x; });
        auto basis = build_wave_basis(build_u0(l, q), 22);
        it = cache.emplace(l, Harmonic{basis, q}).first;
    }
    return it->second;
}

}  // namespace

TEST_CASE("targets") {
    UniformGrid g(1.0, 101);
    auto zero = SampledFunction::constant(g, 0.0);
    CHECK(build_target(zero, ApproxMode::Q).sup_norm() == 0.0);
    auto q = SampledFunction::from(g, [](double x) { return x * x; });
    auto tQ = build_target(q, ApproxMode::Q);
    auto tq = build_target(q, ApproxMode::q);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.x(i);
        CHECK(std::abs(tQ[i] - x * x * x / 6) < 1e-15);
        CHECK(tq[i] == x * x / 2);
    }
    CHECK_THROWS_AS(build_target(SampledFunction::constant(g, 1.0), ApproxMode::Q), PreconditionError);
    CHECK(to_string(approx_mode_from_string("q")) == "q");
    CHECK(to_string(approx_mode_from_string("Q")) == "Q");
    CHECK_THROWS_AS(approx_mode_from_string("x"), DomainError);
}

TEST_CASE("target in the span is recovered exactly") {
    const auto& h = harmonic(-0.5);
    MinimaxProblem p{h.basis->c[2], {h.basis->c[0], h.basis->c[1], h.basis->c[2], h.basis->c[3]}, ApproxMode::Q};
    const auto r = remez_solve(p, 3);
    REQUIRE(r.a.size() == 4);
    CHECK(std::abs(r.a[0]) < 1e-9);
    CHECK(std::abs(r.a[1]) < 1e-9);
    CHECK(std::abs(r.a[2] - 1) < 1e-9);
    CHECK(std::abs(r.a[3]) < 1e-9);
    CHECK(r.epsilon <= 1e-12);
}

TEST_CASE("zero target gives zero coefficients") {
    const auto& h = harmonic(-0.5);
    MinimaxProblem p{SampledFunction::constant(h.basis->grid(), 0.0), {h.basis->c[0], h.basis->c[1]}, ApproxMode::Q};
    const auto r = remez_solve(p, 1);
    CHECK(r.epsilon == 0.0);
    for (double a : r.a) CHECK(a == 0.0);
    const auto s = select_N(p, 1e-9, 1);
    CHECK(s.N == 0);
    CHECK(s.epsilon == 0.0);
    CHECK(s.target_reached);
}

TEST_CASE("remez precondition errors") {
    const auto& h = harmonic(-0.5);
    MinimaxProblem p = make_minimax_problem(*h.basis, h.q, ApproxMode::Q);
    CHECK_THROWS_AS(remez_solve(p, -1), DomainError);
    CHECK_THROWS_AS(remez_solve(p, 100), DomainError);
}

TEST_CASE("harmonic potential, l = -1/2, Q-mode, N = 15") {
    const auto& h = harmonic(-0.5);
    const auto p = make_minimax_problem(*h.basis, h.q, ApproxMode::Q);
    const auto r = remez_solve(p, 15);
    MESSAGE("epsilon(N = 15) = " << r.epsilon);
    CHECK(r.epsilon <= 1.4e-10);
    CHECK(r.epsilon == sup_residual(p, r.a));
}

TEST_CASE("remez invariants") {
    const auto& h = harmonic(0.5);
    const auto p = make_minimax_problem(*h.basis, h.q, ApproxMode::Q);
    for (int N : {2, 5, 8, 11}) {
        const auto r = remez_solve(p, N);
        CAPTURE(N);
        CHECK(r.epsilon >= 0.0);
        CHECK(r.epsilon == sup_residual(p, r.a));
        for (const auto& step : r.history) CHECK(step.leveled <= step.global * (1 + 1e-9));
        if (r.method == "remez") CHECK(r.alternation_count >= N + 2);
        CHECK(r.max_abs_coefficient > 0.0);
    }
}

TEST_CASE("least squares reports the true sup norm") {
    const auto& h = harmonic(-0.5);
    const auto p = make_minimax_problem(*h.basis, h.q, ApproxMode::Q);
    for (int N : {3, 7}) {
        const auto ls = least_squares_solve(p, N);
        CHECK(ls.epsilon >= sup_residual(p, ls.a));
        CHECK(ls.method == "lsq-fallback");
        CHECK(ls.epsilon >= remez_solve(p, N).epsilon * (1 - 1e-6));
    }
}

TEST_CASE("select_N reaches the target with a small N") {
    const auto& h = harmonic(-0.5);
    const auto p = make_minimax_problem(*h.basis, h.q, ApproxMode::Q);
    const auto r = select_N(p, 1e-9, 22);
    CHECK(r.target_reached);
    CHECK(r.stop_reason == "target");
    CHECK(r.N <= 20);
    CHECK(r.epsilon <= 1e-9);
    CHECK_FALSE(r.conditioning_limited);
}

TEST_CASE("select_N in q-mode reaches the 1e-12 range") {
    const auto& h = harmonic(-0.5);
    const auto p = make_minimax_problem(*h.basis, h.q, ApproxMode::q);
    const auto r = select_N(p, 1e-10, 22);
    MESSAGE("q-mode N = " << r.N << ", epsilon = " << r.epsilon);
    CHECK(r.epsilon <= 1e-10);
    CHECK(r.mode == ApproxMode::q);
}

TEST_CASE("select_N flags conditioning when the target is out of reach") {
    const auto& h = harmonic(1.0);
    const auto p = make_minimax_problem(*h.basis, h.q, ApproxMode::Q);
    const auto r = select_N(p, 1e-14, 22);
    CHECK_FALSE(r.target_reached);
    CHECK(r.conditioning_limited);
    CHECK(r.stop_reason != "target");
    CHECK(r.epsilon == sup_residual(p, r.a));
}

TEST_CASE("select_N with q = 0 stops at N = 0") {
    UniformGrid g(std::numbers::pi, 2001);
    auto q = SampledFunction::constant(g, 0.0);
    auto basis = build_wave_basis(build_u0(-0.5, q), 4);
    const auto r = select_N(make_minimax_problem(*basis, q, ApproxMode::Q), 1e-9, 4);
    CHECK(r.N == 0);
    CHECK(r.epsilon == 0.0);
}

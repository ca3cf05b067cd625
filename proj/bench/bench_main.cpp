// Serial reference vs OpenMP for the two parallel hot spots: the trace
// functions of the wave basis and the characteristic-function scan.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "besseltrans/approx.hpp"
#include "besseltrans/solver.hpp"
#include "besseltrans/spps.hpp"
#include "besseltrans/wavebasis.hpp"

using namespace besseltrans;

namespace {

struct Harmonic {
    SpectralProblem problem;
    ParticularSolution u0;
    std::shared_ptr<const WaveBasis> basis;
    std::shared_ptr<const SolutionEvaluator> ev;
};

const Harmonic& harmonic() {
    static const Harmonic h = [] {
        UniformGrid g(std::numbers::pi);
        auto pr = make_spectral_problem(-0.5, SampledFunction::from(g, [](double x) { return x * x; }), 1.0, 0.0, 0.0,
                                        10000.0);
        auto u0 = build_u0(-0.5, pr.q0);
        auto basis = build_wave_basis(u0, 20);
        auto approx = select_N(make_minimax_problem(*basis, pr.q0, ApproxMode::Q), 1e-9, 20);
        auto ev = std::make_shared<const SolutionEvaluator>(basis, approx.a, pr.shift);
        return Harmonic{std::move(pr), std::move(u0), std::move(basis), std::move(ev)};
    }();
    return h;
}

Execution exec_of(const benchmark::State& s) { return s.range(0) ? Execution::parallel : Execution::serial; }

void BM_WaveBasis(benchmark::State& state) {
    const auto& h = harmonic();
    for (auto _ : state) benchmark::DoNotOptimize(build_wave_basis(h.u0, static_cast<int>(state.range(1)), exec_of(state)));
}
BENCHMARK(BM_WaveBasis)->ArgNames({"parallel", "n_max"})->Args({0, 20})->Args({1, 20})->Unit(benchmark::kMillisecond);

void BM_EigenvalueScan(benchmark::State& state) {
    const auto& h = harmonic();
    for (auto _ : state) benchmark::DoNotOptimize(find_eigenvalues(h.problem, *h.ev, ScanOptions{1.0, exec_of(state)}));
}
BENCHMARK(BM_EigenvalueScan)->ArgNames({"parallel"})->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#pragma once

// Transmutation primitives: the integral operator Y_{l,x}, the particular
// solution u0 of the lambda = 0 equation and the recursive integrals
// X~(n) of the spectral parameter power series.

#include <vector>

#include "besseltrans/grid.hpp"

namespace besseltrans {

/// C_k such that Y_{l,x}[x^k] = C_k x^{k+l+1}.
double y_monomial_coefficient(double l, int k);

/// (Y_{l,x} f)(x) = x^{l+1} / (2^{l+1/2} Gamma(l+3/2)) * int_0^1 (1-z^2)^l f(xz) dz.
/// The z-integral uses Gauss-Jacobi nodes for the (1-z)^l endpoint factor and
/// degree-11 local interpolation of f between grid nodes.
SampledFunction y_apply(double l, const SampledFunction& f);

/// u0 = x^{l+1} v solving -u'' + (l(l+1)/x^2 + q) u = 0 with u0 ~ x^{l+1} at 0.
struct ParticularSolution {
    double l = 0.0;
    SampledFunction u0;
    /// u0'; the x = 0 entry is the finite limit for l >= 0 and 0 (unused) for l < 0.
    SampledFunction u0_prime;
    /// Regular factor v = u0 / x^{l+1}, v(0) = 1.
    SampledFunction v;
    /// v' = x^{-2(l+1)} int_0^x t^{2(l+1)} q v dt.
    SampledFunction v_prime;
    int iterations_used = 0;

    const UniformGrid& grid() const noexcept { return u0.grid(); }
};

struct PicardOptions {
    double tol = 1e-14;
    int max_iterations = 100;
};

/// Picard iteration for v(x) = 1 + int_0^x s^{-2(l+1)} int_0^s t^{2(l+1)} q v dt ds.
/// Throws ConvergenceError or UnsupportedPotentialError (u0 has a zero in (0, b]).
/// `history`, when given, receives the sup-norm change of every iterate.
ParticularSolution build_u0(double l, const SampledFunction& q, PicardOptions options = {},
                            std::vector<double>* history = nullptr);

/// X~(0) .. X~(2 n_max).
struct RecursiveIntegrals {
    double l = 0.0;
    int n_max = 0;
    std::vector<SampledFunction> X;
    SampledFunction minus_one;  ///< X~(-1) == 0

    /// X~(n) for -1 <= n <= 2 n_max.
    const SampledFunction& at(int n) const { return n < 0 ? minus_one : X.at(static_cast<std::size_t>(n)); }
};

RecursiveIntegrals recursive_integrals(const ParticularSolution& u0, int n_max);

/// x^p with an exact 0 at x = 0 (p > 0) and 1 for p == 0.
double power_nonneg(double x, double p);

}  // namespace besseltrans

#pragma once

// Generalized wave polynomials u_n(x, t) = u0(x) sum_k Xi_{n,k} X~(2(n-k))(x) t^{2k+l+1},
// their traces c_n(x) = u_n(x, x) and the approximate kernel K_N = sum a_n u_n.

#include <memory>
#include <vector>

#include "besseltrans/grid.hpp"
#include "besseltrans/parallel.hpp"
#include "besseltrans/spps.hpp"

namespace besseltrans {

/// Lower-triangular table T(n, k), 0 <= k <= n <= n_max.
class TriangularTable {
public:
    TriangularTable() = default;
    explicit TriangularTable(int n_max)
        : n_max_(n_max), values_(static_cast<std::size_t>((n_max + 1) * (n_max + 2) / 2), 0.0) {}

    int n_max() const noexcept { return n_max_; }
    double operator()(int n, int k) const { return values_.at(index(n, k)); }
    double& operator()(int n, int k) { return values_.at(index(n, k)); }

private:
    static std::size_t index(int n, int k) { return static_cast<std::size_t>(n * (n + 1) / 2 + k); }
    int n_max_ = -1;
    std::vector<double> values_;
};

/// Largest n for which every Xi_{n,k} (and trace coefficient) stays finite in binary64.
int max_safe_order(double l);

/// Xi_{n,k} = C^2 binom(2n,2k) (-1)^{n-k} 4^{n-k} (n-k)! Gamma(n-k+1/2) Gamma(k+1/2)
///            / (Gamma(k+l+3/2) Gamma(l+3/2)),  C = Gamma(l+1) / (2^{l+3/2} Gamma(l+3/2)).
/// Throws RangeError when n_max exceeds max_safe_order(l).
TriangularTable xi_coefficients(double l, int n_max);

/// Coefficients of the trace formula, coded independently of xi_coefficients:
/// P (-1)^{n-k} (2n)! / (4^k k! Gamma(k+l+3/2)),  P = Gamma(l+1)^2 pi / (2^{2l+3} Gamma(l+3/2)^3).
TriangularTable trace_coefficients(double l, int n_max);

/// c_0 .. c_{n_max}.
std::vector<SampledFunction> trace_functions(const ParticularSolution& u0, const RecursiveIntegrals& X, int n_max,
                                             Execution exec = Execution::parallel);

struct WaveBasis {
    double l = 0.0;
    int n_max = 0;
    TriangularTable xi;
    std::vector<SampledFunction> c;
    std::vector<SampledFunction> c_prime;
    ParticularSolution u0ref;
    RecursiveIntegrals Xref;

    const UniformGrid& grid() const noexcept { return u0ref.grid(); }
};

/// Analytic c_n' from the product rule and dX~(2m) = -X~(2m-1)/u0^2, dX~(2m-1) = u0^2 X~(2m-2).
std::vector<SampledFunction> trace_derivatives(const WaveBasis& basis, Execution exec = Execution::parallel);

/// Builds X~ up to order 2 n_max, the Xi table, c_n and c_n'.
std::shared_ptr<const WaveBasis> build_wave_basis(ParticularSolution u0, int n_max,
                                                  Execution exec = Execution::parallel);

struct KernelApprox {
    std::shared_ptr<const WaveBasis> basis;
    std::vector<double> a;
    int N = 0;
    double epsilon = 0.0;
};

/// g_k(x) = sum_{n=k}^{N} a_n Xi_{n,k} X~(2(n-k)+shift)(x), k = 0..N.
/// shift = 0 gives the kernel coefficients, shift = -1 the companion used by u_N'.
std::vector<SampledFunction> kernel_coefficient_functions(const WaveBasis& basis, const std::vector<double>& a,
                                                          int shift = 0);

/// K_N(x, t) for 0 <= x, t <= b.
double kernel_eval(const KernelApprox& ka, double x, double t);

/// sum_n a_n c_n, the diagonal K_N(x, x) on the grid.
SampledFunction kernel_diagonal(const WaveBasis& basis, const std::vector<double>& a);

/// Classical wave polynomial p_m(x, t).
double wave_polynomial(int m, double x, double t);

/// U_0(x, t) = C_0^2 x^{l+1} t^{l+1}.
double generalized_wave_u0(double l, double x, double t);

/// U_{4n-1}(x, t) = Y_{l,x} Y_{l,t} p_{4n-1}, explicit Gamma-ratio form.
double generalized_wave_u(double l, int n, double x, double t);

}  // namespace besseltrans

#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace besseltrans::detail {

// N-point Gauss-Legendre on [-1, 1], Newton on P_N.
template <int N>
struct GaussLegendre {
    static constexpr int n = N;
    std::array<double, N> x{};
    std::array<double, N> w{};
    GaussLegendre() {
        for (int i = 0; i < N; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = z;
                for (int k = 2; k <= N; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = N * (z * p1 - p0) / (z * z - 1.0);
                const double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            x[static_cast<std::size_t>(i)] = z;
            w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }
};

template <int N>
const GaussLegendre<N>& gauss_legendre() {
    static const GaussLegendre<N> rule;
    return rule;
}

}  // namespace besseltrans::detail

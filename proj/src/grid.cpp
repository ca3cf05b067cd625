#include "besseltrans/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "besseltrans/errors.hpp"
#include "gauss_legendre.hpp"

namespace besseltrans {

namespace {

// kPanelWeights[j][i] = integral_0^j L_i(s) ds, with L_i the Lagrange basis on
// nodes 0..5 (units of h). Row 5 is the closed Newton-Cotes rule.
using PanelWeights = std::array<std::array<double, 6>, 6>;

PanelWeights make_panel_weights() {
    PanelWeights w{};
    for (int i = 0; i < 6; ++i) {
        // Monomial coefficients of L_i(s) = prod_{m != i} (s - m) / (i - m).
        std::array<long double, 6> coef{};
        coef[0] = 1.0L;
        long double denom = 1.0L;
        int deg = 0;
        for (int m = 0; m < 6; ++m) {
            if (m == i) continue;
            for (int d = deg + 1; d >= 1; --d) coef[d] = coef[d - 1] - m * coef[d];
            coef[0] = -m * coef[0];
            ++deg;
            denom *= static_cast<long double>(i - m);
        }
        for (int j = 0; j < 6; ++j) {
            long double acc = 0.0L;
            long double p = j;  // j^(d+1)
            for (int d = 0; d < 6; ++d) {
                acc += coef[d] * p / (d + 1);
                p *= j;
            }
            w[j][i] = static_cast<double>(acc / denom);
        }
    }
    return w;
}

const PanelWeights& panel_weights() {
    static const PanelWeights w = make_panel_weights();
    return w;
}

void require_same_grid(const SampledFunction& a, const SampledFunction& b) {
    if (!(a.grid() == b.grid())) throw DomainError("sampled functions live on different grids");
}

}  // namespace

UniformGrid::UniformGrid(double b, std::size_t points) : b_(b), points_(points), h_(0.0) {
    if (!std::isfinite(b) || b <= 0.0) throw DomainError("grid length b must be finite and > 0");
    if (points < 11 || (points - 1) % 5 != 0)
        throw DomainError("grid size must be >= 11 with (M - 1) divisible by 5, got " + std::to_string(points));
    h_ = b / static_cast<double>(points - 1);
}

std::vector<double> UniformGrid::nodes() const {
    std::vector<double> out(points_);
    for (std::size_t i = 0; i < points_; ++i) out[i] = x(i);
    return out;
}

SampledFunction::SampledFunction(UniformGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw DomainError("sample count " + std::to_string(values_.size()) + " does not match grid size " +
                          std::to_string(grid_.size()));
    for (double v : values_)
        if (!std::isfinite(v)) throw DomainError("sampled function has a non-finite value");
}

SampledFunction SampledFunction::from(const UniformGrid& grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid.x(i));
    return SampledFunction(grid, std::move(v));
}

SampledFunction SampledFunction::constant(const UniformGrid& grid, double value) {
    return SampledFunction(grid, std::vector<double>(grid.size(), value));
}

double SampledFunction::sup_norm() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

SampledFunction& SampledFunction::operator+=(const SampledFunction& other) {
    require_same_grid(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

SampledFunction& SampledFunction::operator-=(const SampledFunction& other) {
    require_same_grid(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

SampledFunction& SampledFunction::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

SampledFunction operator+(SampledFunction a, const SampledFunction& b) { return a += b; }
SampledFunction operator-(SampledFunction a, const SampledFunction& b) { return a -= b; }
SampledFunction operator*(SampledFunction a, double s) { return a *= s; }
SampledFunction operator*(double s, SampledFunction a) { return a *= s; }

SampledFunction multiply(const SampledFunction& a, const SampledFunction& b) {
    require_same_grid(a, b);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * b[i];
    return SampledFunction(a.grid(), std::move(v));
}

void cumulative_integral(std::span<const double> f, double h, std::span<double> out) {
    const auto& w = panel_weights();
    const std::size_t n = f.size();
    out[0] = 0.0;
    double base = 0.0;
    for (std::size_t p = 0; p + 5 < n; p += 5) {
        const double* v = f.data() + p;
        for (int j = 1; j <= 5; ++j) {
            const auto& wj = w[static_cast<std::size_t>(j)];
            double s = 0.0;
            for (int i = 0; i < 6; ++i) s += wj[static_cast<std::size_t>(i)] * v[i];
            out[p + static_cast<std::size_t>(j)] = base + h * s;
        }
        base = out[p + 5];
    }
}

void cumulative_integral_power(std::span<const double> f, double h, double p, std::span<double> out) {
    if (!(p > -1.0)) throw DomainError("cumulative_integral_power: need p > -1");
    const std::size_t n = f.size();
    if (n < 7) throw DomainError("cumulative_integral_power: need at least 7 nodes");
    out[0] = 0.0;

    // First panel: g = f / x^p interpolated through s = 1..6 (s = x / h), moments of s^p exact.
    std::array<std::array<double, 6>, 6> c{};
    for (int i = 0; i < 6; ++i) {
        std::array<double, 6> poly{1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
        int deg = 0;
        double denom = 1.0;
        for (int m = 0; m < 6; ++m) {
            if (m == i) continue;
            for (int k = deg + 1; k > 0; --k) poly[k] = poly[k - 1] - (m + 1) * poly[k];
            poly[0] *= -(m + 1);
            ++deg;
            denom *= static_cast<double>(i - m);
        }
        for (int k = 0; k < 6; ++k) c[i][k] = poly[k] / denom;
    }
    for (int j = 1; j <= 5 && static_cast<std::size_t>(j) < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < 6; ++i) {
            double w = 0.0;
            for (int k = 0; k < 6; ++k) w += c[i][k] * std::pow(j, p + k + 1.0) / (p + k + 1.0);
            s += w * f[static_cast<std::size_t>(i + 1)] * std::pow(i + 1.0, -p);
        }
        out[static_cast<std::size_t>(j)] = h * s;
    }

    // Later panels: g through the panel's own 6 nodes, s^p g by Gauss-Legendre per interval.
    constexpr int K = 10;
    const auto& gl = detail::gauss_legendre<K>();
    static const auto lag = [] {
        std::array<std::array<std::array<double, 6>, K>, 5> t{};
        const auto& r = detail::gauss_legendre<K>();
        for (int j = 0; j < 5; ++j)
            for (int k = 0; k < K; ++k) {
                const double u = j + 0.5 * (1.0 + r.x[static_cast<std::size_t>(k)]);
                for (int i = 0; i < 6; ++i) {
                    double li = 1.0;
                    for (int m = 0; m < 6; ++m)
                        if (m != i) li *= (u - m) / static_cast<double>(i - m);
                    t[j][k][i] = li;
                }
            }
        return t;
    }();
    for (std::size_t P = 5; P + 5 < n; P += 5) {
        const double base = static_cast<double>(P);
        std::array<double, 6> gi{};
        for (int i = 0; i < 6; ++i) gi[i] = f[P + static_cast<std::size_t>(i)] * std::exp(-p * std::log1p(i / base));
        double acc = out[P];
        for (int j = 0; j < 5; ++j) {
            double s = 0.0;
            for (int k = 0; k < K; ++k) {
                const double u = j + 0.5 * (1.0 + gl.x[static_cast<std::size_t>(k)]);
                const auto& L = lag[j][k];
                double g = 0.0;
                for (int i = 0; i < 6; ++i) g += L[i] * gi[i];
                s += gl.w[static_cast<std::size_t>(k)] * std::exp(p * std::log1p(u / base)) * g;
            }
            acc += 0.5 * h * s;
            out[P + static_cast<std::size_t>(j) + 1] = acc;
        }
    }
}

SampledFunction cumulative_integral(const SampledFunction& f) {
    std::vector<double> out(f.size());
    cumulative_integral(f.values(), f.grid().h(), out);
    return SampledFunction(f.grid(), std::move(out));
}

double integral(const SampledFunction& f) {
    const auto& w5 = panel_weights()[5];
    const auto v = f.values();
    double total = 0.0;
    for (std::size_t p = 0; p + 5 < v.size(); p += 5) {
        double s = 0.0;
        for (std::size_t i = 0; i < 6; ++i) s += w5[i] * v[p + i];
        total += s;
    }
    return total * f.grid().h();
}

SampledFunction differentiate(const SampledFunction& f) {
    const auto v = f.values();
    const std::size_t n = v.size();
    const double c = 1.0 / (12.0 * f.grid().h());
    std::vector<double> d(n);
    d[0] = c * (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]);
    d[1] = c * (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]);
    for (std::size_t i = 2; i + 2 < n; ++i) d[i] = c * (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]);
    d[n - 2] = c * (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4] - v[n - 5]);
    d[n - 1] = c * (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4] + 3.0 * v[n - 5]);
    return SampledFunction(f.grid(), std::move(d));
}

double evaluate_at(const SampledFunction& f, double x) {
    const UniformGrid& g = f.grid();
    if (!(x >= 0.0 && x <= g.b())) throw DomainError("evaluate_at: x outside [0, b]");
    const double s = x / g.h();
    const double nearest = std::round(s);
    if (std::abs(s - nearest) < 1e-12) return f[static_cast<std::size_t>(nearest)];
    const std::size_t n = f.size();
    std::size_t i0 = static_cast<std::size_t>(std::max(0.0, std::floor(s) - 1.0));
    i0 = std::min(i0, n - 4);
    const double t = s - static_cast<double>(i0);  // position relative to node i0, in units of h
    const double l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    const double l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    const double l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    const double l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    return l0 * f[i0] + l1 * f[i0 + 1] + l2 * f[i0 + 2] + l3 * f[i0 + 3];
}

}  // namespace besseltrans

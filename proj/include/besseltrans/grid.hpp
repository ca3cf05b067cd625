#pragma once

// Uniform grids on [0, b] and the sampled-function operations built on them:
// cumulative 6-point Newton-Cotes integration, 5-point differentiation and
// local cubic interpolation.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace besseltrans {

/// M points x_i = i*h covering [0, b]; M >= 11 and (M - 1) divisible by 5.
class UniformGrid {
public:
    static constexpr std::size_t kDefaultPoints = 20001;

    UniformGrid(double b, std::size_t points = kDefaultPoints);

    double b() const noexcept { return b_; }
    std::size_t size() const noexcept { return points_; }
    double h() const noexcept { return h_; }
    double x(std::size_t i) const noexcept { return i + 1 == points_ ? b_ : static_cast<double>(i) * h_; }
    std::vector<double> nodes() const;

    bool operator==(const UniformGrid& other) const noexcept {
        return b_ == other.b_ && points_ == other.points_;
    }

private:
    double b_;
    std::size_t points_;
    double h_;
};

/// Values of a real function at every node of a UniformGrid.
class SampledFunction {
public:
    SampledFunction(UniformGrid grid, std::vector<double> values);

    /// Samples f at every grid node.
    static SampledFunction from(const UniformGrid& grid, const std::function<double(double)>& f);
    static SampledFunction constant(const UniformGrid& grid, double value);

    const UniformGrid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double front() const noexcept { return values_.front(); }
    double back() const noexcept { return values_.back(); }
    double sup_norm() const noexcept;

    SampledFunction& operator+=(const SampledFunction& other);
    SampledFunction& operator-=(const SampledFunction& other);
    SampledFunction& operator*=(double s);

private:
    UniformGrid grid_;
    std::vector<double> values_;
};

SampledFunction operator+(SampledFunction a, const SampledFunction& b);
SampledFunction operator-(SampledFunction a, const SampledFunction& b);
SampledFunction operator*(SampledFunction a, double s);
SampledFunction operator*(double s, SampledFunction a);
/// Pointwise product.
SampledFunction multiply(const SampledFunction& a, const SampledFunction& b);

/// F(x_i) = integral_0^{x_i} f. Composite 6-point rule per 5-interval panel;
/// intra-panel nodes integrate the same degree-5 interpolant. F(0) = 0.
SampledFunction cumulative_integral(const SampledFunction& f);

/// Raw-array form of cumulative_integral for kernels that do not own a grid object.
void cumulative_integral(std::span<const double> f, double h, std::span<double> out);

/// cumulative_integral for f = x^p g(x), g smooth, p > -1. Each panel integrates x^p
/// times the degree-5 interpolant of g (nodes 1..6 on the first panel, where g(0) is not
/// sampled), so the result is exact when g is a quintic. Needs >= 7 nodes.
void cumulative_integral_power(std::span<const double> f, double h, double p, std::span<double> out);

/// Full integral over [0, b] (same rule, panel boundaries only).
double integral(const SampledFunction& f);

/// 5-point central differences inside, one-sided 5-point stencils at the ends.
SampledFunction differentiate(const SampledFunction& f);

/// Cubic interpolation through the 4 nearest nodes; exact at nodes.
double evaluate_at(const SampledFunction& f, double x);

}  // namespace besseltrans

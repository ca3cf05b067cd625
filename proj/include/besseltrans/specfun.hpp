#pragma once

// Special functions used throughout the solver: Gamma, Bessel J of real
// nonnegative order, the generalized hypergeometric 1F2 and the regular
// solution d_l(x, lambda) = sqrt(x) J_{l+1/2}(sqrt(lambda) x) of the
// unperturbed Bessel equation. Everything is binary64 and reentrant.

#include <vector>

namespace besseltrans {

/// Order of a Bessel function, nu >= 0. Related to the angular parameter by nu = l + 1/2.
class BesselOrder {
public:
    explicit BesselOrder(double nu);
    static BesselOrder from_l(double l) { return BesselOrder(l + 0.5); }
    double value() const noexcept { return nu_; }
    double l() const noexcept { return nu_ - 0.5; }

private:
    double nu_;
};

/// omega = sqrt(lambda) > 0.
class SpectralFrequency {
public:
    explicit SpectralFrequency(double omega);
    static SpectralFrequency from_lambda(double lambda);
    double value() const noexcept { return omega_; }
    double lambda() const noexcept { return omega_ * omega_; }

private:
    double omega_;
};

double gamma(double x);
/// log|Gamma(x)| for x > 0.
double log_gamma(double x);
/// Rising factorial (a)_n.
double pochhammer(double a, int n);

double bessel_j(BesselOrder nu, double x);
double bessel_j(double nu, double x);

/// J_{nu}(x), J_{nu+1}(x), ..., J_{nu+count-1}(x).
std::vector<double> bessel_j_sequence(double nu, double x, int count);

namespace detail {
// Individual evaluation routes, exposed for cross-checking in tests.
double bessel_j_series(double nu, double x);
double bessel_j_hankel(double nu, double x);
double bessel_j_miller(double nu, double x);
}  // namespace detail

struct Hyp1F2Result {
    double value = 0.0;
    int terms = 0;
    /// max |partial sum| / |value|; large values signal cancellation.
    double cancellation = 1.0;
    bool converged = false;
    bool accurate = false;  ///< converged and cancellation <= 1e6
};

/// Direct series for 1F2(a; b1, b2; z) without throwing; see Hyp1F2Result flags.
Hyp1F2Result hyp1f2_series(double a, double b1, double b2, double z);

/// 1F2(a; b1, b2; z). Throws AccuracyLossError (carrying the partial sum) if the
/// series does not converge within 500 terms.
double hyp1f2(double a, double b1, double b2, double z);

/// d_l(x, omega^2) = sqrt(x) J_{l+1/2}(omega x); zero at x = 0.
double d_l(double l, SpectralFrequency omega, double x);

/// x-derivative of d_l: (l+1) J_nu(omega x)/sqrt(x) - omega sqrt(x) J_{nu+1}(omega x).
/// Diverges at x = 0 for l < 0; returns +inf there in that case.
double d_l_prime(double l, SpectralFrequency omega, double x);

}  // namespace besseltrans

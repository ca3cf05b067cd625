#include "besseltrans/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "besseltrans/errors.hpp"

namespace besseltrans {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_sum(double z) {
    // z = x - 1
    double a = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (z + static_cast<double>(i));
    return a;
}

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// sin(pi x) with exact argument reduction.
double sin_pi(double x) {
    const double n = std::round(x);
    const double r = x - n;
    const double s = std::sin(kPi * r);
    return (static_cast<long long>(n) % 2 == 0) ? s : -s;
}

double half_integer_closed_form(double nu, double x) {
    const double s = std::sin(x);
    const double c = std::cos(x);
    const double pref = std::sqrt(2.0 / (kPi * x));
    if (nu == 0.5) return pref * s;
    if (nu == 1.5) return pref * (s / x - c);
    return pref * ((3.0 / (x * x) - 1.0) * s - 3.0 * c / x);
}

}  // namespace

BesselOrder::BesselOrder(double nu) : nu_(nu) {
    if (!std::isfinite(nu) || nu < 0.0) throw DomainError("Bessel order must be finite and >= 0");
}

SpectralFrequency::SpectralFrequency(double omega) : omega_(omega) {
    if (!std::isfinite(omega) || omega <= 0.0) throw DomainError("spectral frequency must be finite and > 0");
}

SpectralFrequency SpectralFrequency::from_lambda(double lambda) {
    if (!(lambda > 0.0)) throw SpectralRegionError("lambda must be > 0 to define omega = sqrt(lambda)");
    return SpectralFrequency(std::sqrt(lambda));
}

double gamma(double x) {
    if (!std::isfinite(x)) throw DomainError("gamma: non-finite argument");
    if (is_nonpositive_integer(x)) throw DomainError("gamma: pole at " + std::to_string(x));
    if (x < 0.5) return kPi / (sin_pi(x) * gamma(1.0 - x));
    const double z = x - 1.0;
    const double t = z + kLanczosG + 0.5;
    // Split the power to keep t^(z+0.5) finite up to x ~ 170.
    const double p = std::pow(t, 0.5 * (z + 0.5));
    return std::sqrt(2.0 * kPi) * p * (p * std::exp(-t)) * lanczos_sum(z);
}

double log_gamma(double x) {
    if (!std::isfinite(x) || x <= 0.0) throw DomainError("log_gamma: argument must be > 0");
    if (x < 0.5) return std::log(kPi / std::abs(sin_pi(x))) - log_gamma(1.0 - x);
    const double z = x - 1.0;
    const double t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(lanczos_sum(z));
}

double pochhammer(double a, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= a + i;
    return r;
}

namespace detail {

double bessel_j_series(double nu, double x) {
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    const double half = 0.5 * x;
    double term = (nu < 100.0) ? std::pow(half, nu) / gamma(nu + 1.0)
                               : std::exp(nu * std::log(half) - log_gamma(nu + 1.0));
    const double z = -half * half;
    double sum = term;
    for (int m = 1; m < 500; ++m) {
        term *= z / (m * (m + nu));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

double bessel_j_hankel(double nu, double x) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double prev_abs = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * 8.0 * x);
        const double a = std::abs(term);
        if (a > prev_abs && k > 2) break;  // asymptotic series starts diverging
        prev_abs = a;
        // Terms alternate between Q (k odd) and P (k even), each with sign (-1)^floor(k/2).
        const double signed_term = ((k / 2) % 2 == 0) ? term : -term;
        if (k % 2 == 1) q += signed_term;
        else p += signed_term;
        if (a < 1e-17) break;
    }
    const double phase = (0.5 * nu + 0.25) * kPi;
    const double cx = std::cos(x), sx = std::sin(x);
    const double cphi = std::cos(phase), sphi = std::sin(phase);
    const double cos_chi = cx * cphi + sx * sphi;
    const double sin_chi = sx * cphi - cx * sphi;
    return std::sqrt(2.0 / (kPi * x)) * (p * cos_chi - q * sin_chi);
}

namespace {

// Backward recurrence from a high order, normalized with
// (x/2)^nu0 = sum_k c_k J_{nu0+2k}(x). Fills J_{nu0+first}..J_{nu0+first+count-1}.
void miller_fill(double nu0, double x, int first, int count, double* out) {
    const int top_needed = first + count - 1;
    const double span = std::max<double>(top_needed, x);
    int start = static_cast<int>(std::ceil(span)) + 30 + static_cast<int>(std::ceil(std::sqrt(60.0 * std::max(span, 1.0))));
    if (start % 2 == 1) ++start;

    double f_next = 0.0;  // order m + 1
    double f = 1e-300;    // order m
    double norm = 0.0;
    std::vector<double> stored(static_cast<std::size_t>(count), 0.0);

    // r_k = Gamma(nu0 + k) / k!, evaluated downward from k = start/2.
    const int kmax = start / 2;
    // Precompute the normalization weights c_k for even orders.
    std::vector<double> weight(static_cast<std::size_t>(kmax) + 1);
    weight[0] = gamma(nu0 + 1.0);
    double r = gamma(nu0 + 1.0);  // r_1 = Gamma(nu0 + 1) / 1!
    for (int k = 1; k <= kmax; ++k) {
        weight[static_cast<std::size_t>(k)] = (nu0 + 2.0 * k) * r;
        r *= (nu0 + k) / (k + 1.0);
    }

    for (int m = start; m >= 0; --m) {
        if (m >= first && m <= top_needed) stored[static_cast<std::size_t>(m - first)] = f;
        if (m % 2 == 0) norm += weight[static_cast<std::size_t>(m / 2)] * f;
        if (m == 0) break;
        const double f_prev = 2.0 * (nu0 + m) / x * f - f_next;
        f_next = f;
        f = f_prev;
        if (std::abs(f) > 1e250) {
            f *= 1e-250;
            f_next *= 1e-250;
            norm *= 1e-250;
            for (auto& s : stored) s *= 1e-250;
        }
    }
    const double scale = std::pow(0.5 * x, nu0) / norm;
    for (int i = 0; i < count; ++i) out[i] = stored[static_cast<std::size_t>(i)] * scale;
}

}  // namespace

double bessel_j_miller(double nu, double x) {
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    const double n = std::floor(nu);
    double out = 0.0;
    miller_fill(nu - n, x, static_cast<int>(n), 1, &out);
    return out;
}

}  // namespace detail

namespace {

bool series_regime(double nu, double x) { return x <= 6.0 || x * x <= 2.0 * (nu + 1.0); }
bool hankel_regime(double nu, double x) { return x >= std::max(20.0, nu * nu); }

}  // namespace

double bessel_j(double nu, double x) { return bessel_j(BesselOrder(nu), x); }

double bessel_j(BesselOrder order, double x) {
    const double nu = order.value();
    if (!std::isfinite(x) || x < 0.0) throw DomainError("bessel_j: argument must be finite and >= 0");
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    if ((nu == 0.5 || nu == 1.5 || nu == 2.5) && x >= 2.0) return half_integer_closed_form(nu, x);
    if (series_regime(nu, x)) return detail::bessel_j_series(nu, x);
    if (hankel_regime(nu, x)) return detail::bessel_j_hankel(nu, x);
    return detail::bessel_j_miller(nu, x);
}

std::vector<double> bessel_j_sequence(double nu, double x, int count) {
    BesselOrder order(nu);
    if (!std::isfinite(x) || x < 0.0) throw DomainError("bessel_j_sequence: argument must be finite and >= 0");
    std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
    if (count <= 0) return out;
    if (count <= 2 || x == 0.0) {
        for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = bessel_j(nu + i, x);
        return out;
    }
    if (nu + count <= x) {
        // Forward recurrence is stable while the order stays below x.
        out[0] = bessel_j(order, x);
        out[1] = bessel_j(nu + 1.0, x);
        for (int i = 2; i < count; ++i) {
            const double m = nu + i - 1;
            out[static_cast<std::size_t>(i)] = 2.0 * m / x * out[static_cast<std::size_t>(i - 1)] - out[static_cast<std::size_t>(i - 2)];
        }
        return out;
    }
    const double n = std::floor(nu);
    detail::miller_fill(nu - n, x, static_cast<int>(n), count, out.data());
    return out;
}

Hyp1F2Result hyp1f2_series(double a, double b1, double b2, double z) {
    if (is_nonpositive_integer(b1) || is_nonpositive_integer(b2))
        throw DomainError("hyp1f2: lower parameters must not be nonpositive integers");
    Hyp1F2Result r;
    double term = 1.0;
    double sum = 1.0;
    double max_partial = 1.0;
    r.terms = 1;
    for (int k = 0; k < 500; ++k) {
        term *= (a + k) / ((b1 + k) * (b2 + k) * (k + 1.0)) * z;
        sum += term;
        ++r.terms;
        max_partial = std::max(max_partial, std::abs(sum));
        if (std::abs(term) < 1e-17 * std::abs(sum) || term == 0.0) {
            r.converged = true;
            break;
        }
    }
    r.value = sum;
    r.cancellation = (sum != 0.0) ? max_partial / std::abs(sum) : INFINITY;
    r.accurate = r.converged && r.cancellation <= 1e6;
    return r;
}

double hyp1f2(double a, double b1, double b2, double z) {
    const Hyp1F2Result r = hyp1f2_series(a, b1, b2, z);
    if (!r.converged) throw AccuracyLossError("hyp1f2: series did not converge within 500 terms", r.value);
    return r.value;
}

double d_l(double l, SpectralFrequency omega, double x) {
    if (l < -0.5) throw DomainError("d_l: l must be >= -1/2");
    if (!std::isfinite(x) || x < 0.0) throw DomainError("d_l: x must be >= 0");
    if (x == 0.0) return 0.0;
    return std::sqrt(x) * bessel_j(l + 0.5, omega.value() * x);
}

double d_l_prime(double l, SpectralFrequency omega, double x) {
    if (l < -0.5) throw DomainError("d_l_prime: l must be >= -1/2");
    if (!std::isfinite(x) || x < 0.0) throw DomainError("d_l_prime: x must be >= 0");
    const double w = omega.value();
    const double nu = l + 0.5;
    if (x == 0.0) {
        if (l < 0.0) return INFINITY;
        if (l == 0.0) return std::sqrt(w / 2.0) / gamma(1.5);
        return 0.0;
    }
    const auto j = bessel_j_sequence(nu, w * x, 2);
    return (l + 1.0) * j[0] / std::sqrt(x) - w * std::sqrt(x) * j[1];
}

}  // namespace besseltrans

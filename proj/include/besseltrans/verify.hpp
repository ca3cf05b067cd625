#pragma once

// Built-in self checks bundling the identities the method rests on.

#include <optional>
#include <string>
#include <vector>

namespace besseltrans {

struct VerifyCheck {
    std::string name;
    std::string description;
    double tolerance = 0.0;
    double measured = 0.0;
    bool passed = false;
    /// Informational checks are reported but do not affect the exit status.
    bool required = true;
    std::string detail;

    /// tolerance / measured; > 1 means passing with room to spare.
    double margin() const;
};

struct XiPerturbation {
    int n = 3;
    int k = 1;
    double relative = 1e-3;
};

struct VerifyOptions {
    /// Sensitivity hook: scales one Xi_{n,k} by (1 + relative) before the mapping checks.
    std::optional<XiPerturbation> perturb_xi;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    double seconds = 0.0;

    bool all_passed() const;
    const VerifyCheck* find(const std::string& name) const;
    std::string to_json() const;
};

VerifyReport verify_suite(const VerifyOptions& options = {});

// Individual groups, also used by the acceptance tests.
VerifyCheck check_monomial_images();
/// Worst of check_power_images and check_wave_polynomial_identity.
VerifyCheck check_mapping_property(const VerifyOptions& options = {});
VerifyCheck check_power_images();
VerifyCheck check_wave_polynomial_identity(const VerifyOptions& options = {});
VerifyCheck check_trace_identity();
VerifyCheck check_derivative_consistency();
VerifyCheck check_bessel_zero_reduction();
std::vector<VerifyCheck> check_residual_bounds();

/// n-th positive zero of J_nu by sign scan and bisection on std::cyl_bessel_j.
double bessel_zero_oracle(double nu, int n);

}  // namespace besseltrans

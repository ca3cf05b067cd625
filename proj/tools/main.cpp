// besseltrans: eigenvalues of perturbed Bessel operators via wave-polynomial
// kernel approximation.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "besseltrans/config.hpp"
#include "besseltrans/pipeline.hpp"
#include "besseltrans/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kNumericalError = 2;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw besseltrans::ConfigError("cannot write '" + path + "'");
    return out;
}

void summarize(const besseltrans::SolveResult& r) {
    const auto& a = r.approx;
    std::cerr << "N = " << a.N << ", eps = " << a.epsilon << " (" << besseltrans::to_string(a.mode) << "-mode, "
              << a.method << ", stop: " << a.stop_reason << ")";
    if (a.conditioning_limited) std::cerr << " [conditioning-limited]";
    std::cerr << "\n" << r.eigen.eigenpairs.size() << " eigenvalues\n";
}

int run_solve_cmd(const std::string& config_path, const std::string& out_path, const std::string& report_path) {
    const auto cfg = besseltrans::load_config(config_path);
    const auto r = besseltrans::run_solve(cfg);
    const std::string csv = !out_path.empty() ? out_path : cfg.outputs.eigenvalues.value_or("");
    const std::string rep = !report_path.empty() ? report_path : cfg.outputs.report.value_or("");
    if (csv.empty()) {
        besseltrans::write_eigenvalues_csv(std::cout, r);
    } else {
        auto out = open_out(csv);
        besseltrans::write_eigenvalues_csv(out, r);
    }
    if (!rep.empty()) open_out(rep) << besseltrans::report_json(r);
    summarize(r);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eigenvalues of -u'' + (l(l+1)/x^2 + q(x)) u = lambda u via transmutation-kernel approximation"};
    app.require_subcommand(1);

    std::string config_path, out_path, report_path;
    int resolution = 101;
    std::vector<double> perturb;

    auto* solve = app.add_subcommand("solve", "Compute eigenvalues for a problem configuration");
    solve->add_option("--config", config_path, "Problem configuration (JSON)")->required();
    solve->add_option("--out", out_path, "Eigenvalue CSV (default: config outputs or stdout)");
    solve->add_option("--report", report_path, "JSON report");

    auto* verify = app.add_subcommand("verify", "Run the built-in identity and reduction checks");
    verify->add_option("--out", out_path, "Write the JSON report here instead of stdout");
    verify->add_option("--perturb-xi", perturb, "Scale Xi_{n,k} by (1 + rel) before the mapping checks: n k rel")
        ->expected(3);

    auto* kernel = app.add_subcommand("kernel", "Dump K_N(x, t) on a square grid");
    kernel->add_option("--config", config_path, "Problem configuration (JSON)")->required();
    kernel->add_option("--resolution", resolution, "Points per axis")->required()->check(CLI::Range(2, 100000));
    kernel->add_option("--out", out_path, "Output CSV")->required();

    auto* basis = app.add_subcommand("basis", "Dump the trace functions c_n");
    basis->add_option("--config", config_path, "Problem configuration (JSON)")->required();
    basis->add_option("--out", out_path, "Output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*solve) return run_solve_cmd(config_path, out_path, report_path);
        if (*verify) {
            besseltrans::VerifyOptions opts;
            if (perturb.size() == 3)
                opts.perturb_xi = besseltrans::XiPerturbation{static_cast<int>(perturb[0]), static_cast<int>(perturb[1]),
                                                              perturb[2]};
            const auto report = besseltrans::verify_suite(opts);
            if (out_path.empty()) std::cout << report.to_json();
            else open_out(out_path) << report.to_json();
            for (const auto& c : report.checks)
                std::cerr << (c.passed ? "PASS " : (c.required ? "FAIL " : "INFO ")) << c.name << "  measured "
                          << c.measured << "  tolerance " << c.tolerance << "\n";
            return report.all_passed() ? kOk : kNumericalError;
        }
        const auto cfg = besseltrans::load_config(config_path);
        besseltrans::PipelineOptions po;
        po.find_eigenvalues = false;
        const auto r = besseltrans::run_solve(cfg, po);
        auto out = open_out(out_path);
        if (*kernel) besseltrans::dump_kernel(r, resolution, out);
        else besseltrans::dump_basis(r, out);
        return kOk;
    } catch (const besseltrans::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const besseltrans::PipelineError& e) {
        std::cerr << "numerical failure in step " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericalError;
    }
}

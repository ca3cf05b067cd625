#include "besseltrans/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace besseltrans {

namespace {

using nlohmann::json;

void only_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw ConfigError(where + ": unknown field '" + key + "'");
}

double number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError(field + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(field + ": must be finite");
    return v;
}

long long integer(const json& j, const std::string& field) {
    if (!j.is_number_integer()) throw ConfigError(field + ": expected an integer");
    return j.get<long long>();
}

std::string text(const json& j, const std::string& field) {
    if (!j.is_string()) throw ConfigError(field + ": expected a string");
    return j.get<std::string>();
}

PotentialSpec potential_from(const json& j) {
    if (j.is_string()) return ExpressionPotential{j.get<std::string>()};
    only_keys(j, "potential", {"expression", "polynomial", "samples"});
    if (j.size() != 1) throw ConfigError("potential: give exactly one of expression, polynomial, samples");
    if (j.contains("expression")) return ExpressionPotential{text(j["expression"], "potential.expression")};
    if (j.contains("samples")) return SampledPotential{text(j["samples"], "potential.samples")};
    const json& c = j["polynomial"];
    if (!c.is_array() || c.empty()) throw ConfigError("potential.polynomial: expected a nonempty array");
    PolynomialPotential p;
    for (std::size_t i = 0; i < c.size(); ++i) p.coefficients.push_back(number(c[i], "potential.polynomial"));
    return p;
}

json potential_to(const PotentialSpec& p) {
    if (const auto* e = std::get_if<ExpressionPotential>(&p)) return json{{"expression", e->text}};
    if (const auto* s = std::get_if<SampledPotential>(&p)) return json{{"samples", s->path}};
    return json{{"polynomial", std::get<PolynomialPotential>(p).coefficients}};
}

}  // namespace

void validate(const ProblemConfig& c) {
    if (!std::isfinite(c.l) || c.l < -0.5) throw ConfigError("l: must be >= -1/2");
    if (!std::isfinite(c.b) || !(c.b > 0.0)) throw ConfigError("b: must be > 0");
    if (!std::isfinite(c.beta) || !std::isfinite(c.gamma) || (c.beta == 0.0 && c.gamma == 0.0))
        throw ConfigError("boundary: beta and gamma must be finite and not both zero");
    if (!std::isfinite(c.lambda_lo) || !std::isfinite(c.lambda_hi) || !(c.lambda_lo < c.lambda_hi))
        throw ConfigError("lambda_range: need finite lo < hi");
    if (c.grid_points < 11 || c.grid_points % 5 != 1)
        throw ConfigError("grid_points: must be >= 11 and equal to 1 mod 5");
    if (!std::isfinite(c.eps_target) || !(c.eps_target > 0.0)) throw ConfigError("eps_target: must be > 0");
    if (c.N_max < 0) throw ConfigError("N_max: must be >= 0");
    if (const auto* e = std::get_if<ExpressionPotential>(&c.potential)) {
        try {
            parse_potential(e->text);
        } catch (const ParseError& err) {
            throw ConfigError(std::string("potential: ") + err.what());
        }
    }
}

ProblemConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    only_keys(j, "config", {"l", "b", "potential", "boundary", "lambda_range", "grid_points", "eps_target", "mode",
                            "N_max", "outputs"});
    for (const char* required : {"l", "b", "potential", "boundary", "lambda_range"})
        if (!j.contains(required)) throw ConfigError(std::string("missing field '") + required + "'");

    ProblemConfig c;
    c.base_dir = base_dir;
    c.l = number(j["l"], "l");
    c.b = number(j["b"], "b");
    c.potential = potential_from(j["potential"]);

    const json& bc = j["boundary"];
    only_keys(bc, "boundary", {"beta", "gamma"});
    if (!bc.contains("beta") || !bc.contains("gamma")) throw ConfigError("boundary: need beta and gamma");
    c.beta = number(bc["beta"], "boundary.beta");
    c.gamma = number(bc["gamma"], "boundary.gamma");

    const json& lr = j["lambda_range"];
    only_keys(lr, "lambda_range", {"lo", "hi"});
    if (!lr.contains("lo") || !lr.contains("hi")) throw ConfigError("lambda_range: need lo and hi");
    c.lambda_lo = number(lr["lo"], "lambda_range.lo");
    c.lambda_hi = number(lr["hi"], "lambda_range.hi");

    if (j.contains("grid_points")) {
        const long long g = integer(j["grid_points"], "grid_points");
        if (g < 11) throw ConfigError("grid_points: must be >= 11 and equal to 1 mod 5");
        c.grid_points = static_cast<std::size_t>(g);
    }
    if (j.contains("eps_target")) c.eps_target = number(j["eps_target"], "eps_target");
    if (j.contains("mode")) {
        try {
            c.mode = approx_mode_from_string(text(j["mode"], "mode"));
        } catch (const DomainError& e) {
            throw ConfigError(std::string("mode: ") + e.what());
        }
    }
    if (j.contains("N_max")) {
        const long long n = integer(j["N_max"], "N_max");
        if (n < 0 || n > 1000) throw ConfigError("N_max: must be in [0, 1000]");
        c.N_max = static_cast<int>(n);
    }
    if (j.contains("outputs")) {
        const json& o = j["outputs"];
        only_keys(o, "outputs", {"eigenvalues", "report"});
        if (o.contains("eigenvalues")) c.outputs.eigenvalues = text(o["eigenvalues"], "outputs.eigenvalues");
        if (o.contains("report")) c.outputs.report = text(o["report"], "outputs.report");
    }
    validate(c);
    return c;
}

ProblemConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

std::string emit_config(const ProblemConfig& c) {
    json j;
    j["l"] = c.l;
    j["b"] = c.b;
    j["potential"] = potential_to(c.potential);
    j["boundary"] = {{"beta", c.beta}, {"gamma", c.gamma}};
    j["lambda_range"] = {{"lo", c.lambda_lo}, {"hi", c.lambda_hi}};
    j["grid_points"] = c.grid_points;
    j["eps_target"] = c.eps_target;
    j["mode"] = to_string(c.mode);
    j["N_max"] = c.N_max;
    json o = json::object();
    if (c.outputs.eigenvalues) o["eigenvalues"] = *c.outputs.eigenvalues;
    if (c.outputs.report) o["report"] = *c.outputs.report;
    if (!o.empty()) j["outputs"] = o;
    return j.dump(2) + "\n";
}

}  // namespace besseltrans

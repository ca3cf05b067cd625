#pragma once

// Problem configuration: strict JSON in, identical JSON out.
//
// {
//   "l": -0.5, "b": 3.141592653589793,
//   "potential": "x^2"  |  {"expression": "x^2"}  |  {"polynomial": [0, 0, 1]}  |  {"samples": "q.csv"},
//   "boundary": {"beta": 1, "gamma": 0},
//   "lambda_range": {"lo": 0, "hi": 10100},
//   "grid_points": 20001, "eps_target": 1e-9, "mode": "Q", "N_max": 30,
//   "outputs": {"eigenvalues": "eig.csv", "report": "report.json"}
// }

#include <filesystem>
#include <optional>
#include <string>

#include "besseltrans/errors.hpp"
#include "besseltrans/potential.hpp"
#include "besseltrans/solver.hpp"

namespace besseltrans {

/// Malformed or invalid configuration (CLI exit code 1).
class ConfigError : public Error {
public:
    using Error::Error;
};

struct OutputPaths {
    std::optional<std::string> eigenvalues;
    std::optional<std::string> report;
};

struct ProblemConfig {
    double l = -0.5;
    double b = 1.0;
    PotentialSpec potential = ExpressionPotential{"0"};
    double beta = 1.0;
    double gamma = 0.0;
    double lambda_lo = 0.0;
    double lambda_hi = 100.0;
    std::size_t grid_points = UniformGrid::kDefaultPoints;
    double eps_target = 1e-9;
    ApproxMode mode = ApproxMode::Q;
    int N_max = 30;
    OutputPaths outputs;
    /// Relative sample paths resolve against this directory (not serialized).
    std::filesystem::path base_dir;
};

/// Parses and validates; throws ConfigError with the offending field named.
ProblemConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
ProblemConfig load_config(const std::filesystem::path& path);

/// Canonical JSON; parse_config(emit_config(c)) == c.
std::string emit_config(const ProblemConfig& cfg);

/// Throws ConfigError on invalid values (also called by parse_config).
void validate(const ProblemConfig& cfg);

}  // namespace besseltrans

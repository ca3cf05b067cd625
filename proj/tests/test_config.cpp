#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "besseltrans/config.hpp"
#include "besseltrans/pipeline.hpp"

using namespace besseltrans;

namespace {

const char* kBase = R"({"l": -0.5, "b": 3.141592653589793, "potential": "x^2",
  "boundary": {"beta": 1, "gamma": 0}, "lambda_range": {"lo": 0, "hi": 200}, "grid_points": 2001})";

std::string with(const std::string& extra) {
    std::string s = kBase;
    s.insert(s.size() - 1, ", " + extra);
    return s;
}

}  // namespace

TEST_CASE("potential parser") {
    CHECK(parse_potential("x^2")->eval(3.0) == 9.0);
    CHECK(parse_potential("0")->eval(1.0) == 0.0);
    CHECK(parse_potential("2^3^2")->eval(0.0) == 512.0);
    CHECK(parse_potential("-x^2")->eval(3.0) == -9.0);
    CHECK(parse_potential("x^-1")->eval(2.0) == 0.5);
    CHECK(parse_potential("-2^2 + 1")->eval(0.0) == -3.0);
    CHECK(parse_potential("1 - 2 - 3")->eval(0.0) == -4.0);
    CHECK(parse_potential("8 / 4 / 2")->eval(0.0) == 1.0);
    CHECK(parse_potential("(1 + x) * 2")->eval(1.0) == 4.0);
    CHECK(parse_potential("1.5e1 + .5")->eval(0.0) == 15.5);
    CHECK(parse_potential("sin(x) + cos(x) + exp(x) + log(x) + sqrt(x) + abs(-x)")->eval(1.0) ==
          doctest::Approx(std::sin(1.0) + std::cos(1.0) + std::exp(1.0) + 0.0 + 1.0 + 1.0));
    try {
        parse_potential("x^^2");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 2);
    }
    for (const char* bad : {"", "x +", "(x", "foo(x)", "x y", "2x", "sin x"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_potential(bad), ParseError);
    }
}

TEST_CASE("sampling potentials") {
    UniformGrid g(2.0, 11);
    auto poly = sample_potential(PolynomialPotential{{1.0, 0.0, 3.0}}, g);
    CHECK(poly[10] == 13.0);
    auto expr = sample_potential(ExpressionPotential{"x^2"}, g);
    CHECK(expr[5] == 1.0);
    CHECK_THROWS_AS(sample_potential(ExpressionPotential{"log(x)"}, g), DomainError);

    const auto dir = std::filesystem::temp_directory_path();
    const auto ok = dir / "besseltrans_samples_ok.csv";
    {
        std::ofstream out(ok);
        out << "x,q\n";
        for (std::size_t i = 0; i < g.size(); ++i) out << format_double(g.x(i)) << ',' << format_double(g.x(i) * 3) << '\n';
    }
    auto s = sample_potential(SampledPotential{ok.string()}, g);
    CHECK(s[10] == 6.0);
    const auto bad = dir / "besseltrans_samples_bad.csv";
    {
        std::ofstream out(bad);
        for (std::size_t i = 0; i < g.size(); ++i) out << g.x(i) + 0.01 << ",0\n";
    }
    CHECK_THROWS_AS(sample_potential(SampledPotential{bad.string()}, g), DomainError);
    CHECK_THROWS(sample_potential(SampledPotential{(dir / "does_not_exist.csv").string()}, g));
}

TEST_CASE("config parsing, defaults and strictness") {
    const auto c = parse_config(kBase);
    CHECK(c.l == -0.5);
    CHECK(c.grid_points == 2001);
    CHECK(c.eps_target == 1e-9);
    CHECK(c.N_max == 30);
    CHECK(c.mode == ApproxMode::Q);
    CHECK(std::get<ExpressionPotential>(c.potential).text == "x^2");

    CHECK_THROWS_AS(parse_config(with(R"("colour": 1)")), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"l": -0.6, "b": 1, "potential": "0", "boundary": {"beta": 1, "gamma": 0}, "lambda_range": {"lo": 0, "hi": 1}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"l": -0.5, "b": 1, "potential": "0", "boundary": {"beta": 1, "gamma": 0, "delta": 0}, "lambda_range": {"lo": 0, "hi": 1}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"l": -0.5, "b": 1, "potential": "0", "boundary": {"beta": 0, "gamma": 0}, "lambda_range": {"lo": 0, "hi": 1}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"l": -0.5, "b": 1, "potential": "0", "boundary": {"beta": 1, "gamma": 0}, "lambda_range": {"lo": 2, "hi": 1}})"),
                    ConfigError);
    std::string bad_grid = kBase;
    bad_grid.replace(bad_grid.find("2001"), 4, "2000");
    CHECK_THROWS_AS(parse_config(bad_grid), ConfigError);
    CHECK_THROWS_AS(parse_config(with(R"("mode": "z")")), ConfigError);
    CHECK_THROWS_AS(parse_config(with(R"("N_max": 2.5)")), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"l": "a"})"), ConfigError);
    CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"b": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(with(R"("outputs": {"eigenvalues": "e.csv", "plots": "p"})")), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"l": -0.5, "b": 1, "potential": "x^^2", "boundary": {"beta": 1, "gamma": 0}, "lambda_range": {"lo": 0, "hi": 1}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"l": -0.5, "b": 1, "potential": {"expression": "x", "polynomial": [1]}, "boundary": {"beta": 1, "gamma": 0}, "lambda_range": {"lo": 0, "hi": 1}})"),
                    ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("config round trip") {
    const auto c = parse_config(with(R"("mode": "q", "N_max": 12, "eps_target": 1e-11, "outputs": {"report": "r.json"})"));
    const std::string once = emit_config(c);
    const auto back = parse_config(once);
    CHECK(emit_config(back) == once);
    CHECK(back.mode == ApproxMode::q);
    CHECK(back.N_max == 12);
    CHECK(back.outputs.report == std::optional<std::string>("r.json"));
    CHECK_FALSE(back.outputs.eigenvalues.has_value());

    const auto poly = parse_config(R"({"l": 1, "b": 2, "potential": {"polynomial": [0, 1, 0.5]}, "boundary": {"beta": 0, "gamma": 1}, "lambda_range": {"lo": 0, "hi": 5}})");
    CHECK(emit_config(parse_config(emit_config(poly))) == emit_config(poly));
}

TEST_CASE("round-tripped config gives a bit-identical pipeline result and deterministic CSV") {
    const auto c = parse_config(kBase);
    const auto r1 = run_solve(c);
    const auto r2 = run_solve(parse_config(emit_config(c)));
    std::ostringstream a, b;
    write_eigenvalues_csv(a, r1);
    write_eigenvalues_csv(b, r2);
    CHECK(a.str() == b.str());
    CHECK(r1.approx.a == r2.approx.a);

    const auto r3 = run_solve(c, {true, true, Execution::serial});
    std::ostringstream s;
    write_eigenvalues_csv(s, r3);
    CHECK(s.str() == a.str());

    std::istringstream lines(a.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header == "index,lambda,phi_residual,residual_bound_ok,refinement_iterations");
    std::string first;
    std::getline(lines, first);
    CHECK(first.rfind("1,2.00180525", 0) == 0);
}

TEST_CASE("report contents") {
    const auto r = run_solve(parse_config(kBase));
    const std::string rep = report_json(r);
    for (const char* key : {"\"approximation\"", "\"epsilon\"", "\"conditioning_limited\"", "\"timings_seconds\"",
                            "\"eigenvalues\"", "\"residual_bound\"", "\"build_u0\"", "\"select_N\""})
        CHECK(rep.find(key) != std::string::npos);
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("kernel dump") {
    const auto r = run_solve(parse_config(kBase), {false, false, Execution::parallel});
    std::ostringstream out;
    dump_kernel(r, 7, out);
    std::vector<std::vector<double>> m;
    std::istringstream in(out.str());
    for (std::string line; std::getline(in, line);) {
        std::vector<double> row;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
        m.push_back(row);
    }
    REQUIRE(m.size() == 7);
    for (int i = 0; i < 7; ++i) {
        REQUIRE(m[i].size() == 7);
        CHECK(m[0][i] == 0.0);
        CHECK(m[i][0] == 0.0);
    }
    const auto& ev = *r.evaluator;
    const double b = r.config.b;
    for (int i = 1; i < 7; ++i) {
        const double x = i == 6 ? b : b * i / 6;
        CHECK(m[i][i] == doctest::Approx(evaluate_at(ev.kernel_diagonal(), x)).epsilon(1e-10).scale(1e-12));
    }
    SolveResult empty;
    CHECK_THROWS_AS(dump_kernel(empty, 5, out), DomainError);
    CHECK_THROWS_AS(dump_kernel(r, 1, out), DomainError);
}

TEST_CASE("kernel dump for q = 0 is identically zero") {
    auto cfg = parse_config(kBase);
    cfg.potential = ExpressionPotential{"0"};
    const auto r = run_solve(cfg, {false, false, Execution::parallel});
    std::ostringstream out;
    dump_kernel(r, 5, out);
    std::istringstream in(out.str());
    for (std::string cell; std::getline(in, cell, ',');) {
        const auto nl = cell.find('\n');
        if (nl != std::string::npos) {
            CHECK(std::stod(cell.substr(0, nl)) == 0.0);
            if (nl + 1 < cell.size()) CHECK(std::stod(cell.substr(nl + 1)) == 0.0);
        } else {
            CHECK(std::stod(cell) == 0.0);
        }
    }
}

TEST_CASE("basis dump") {
    auto cfg = parse_config(kBase);
    cfg.N_max = 3;
    const auto r = run_solve(cfg, {false, false, Execution::parallel});
    std::ostringstream out;
    dump_basis(r, out);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,c0,c1,c2,c3");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == cfg.grid_points);
}

TEST_CASE("pipeline error classification") {
    auto cfg = parse_config(kBase);
    cfg.potential = ExpressionPotential{"-30*x"};
    cfg.b = 3.0;
    try {
        run_solve(cfg);
        FAIL("expected PipelineError");
    } catch (const PipelineError& e) {
        CHECK(e.step() == "build_u0");
    }
    cfg = parse_config(kBase);
    cfg.potential = ExpressionPotential{"5 + x"};
    CHECK_THROWS_AS(run_solve(cfg), ConfigError);  // lambda_lo below q(0)
}

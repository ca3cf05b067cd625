#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "besseltrans_cli_test";

int run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + std::string(BESSELTRANS_CLI) + " " + args + " >" + (kWork / "stdout.txt").string() +
                            " 2>" + (kWork / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

fs::path write(const std::string& name, const std::string& text) {
    fs::create_directories(kWork);
    const fs::path p = kWork / name;
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kGood = R"({"l": -0.5, "b": 3.141592653589793, "potential": "x^2",
  "boundary": {"beta": 1, "gamma": 0}, "lambda_range": {"lo": 0, "hi": 150}, "grid_points": 2001})";

}  // namespace

TEST_CASE("solve succeeds and writes CSV and report") {
    const auto cfg = write("good.json", kGood);
    CHECK(run("solve --config " + cfg.string() + " --out " + (kWork / "e.csv").string() + " --report " +
              (kWork / "r.json").string()) == 0);
    const std::string csv = slurp(kWork / "e.csv");
    CHECK(csv.rfind("index,lambda,phi_residual,residual_bound_ok,refinement_iterations\n1,2.00180525", 0) == 0);
    CHECK(slurp(kWork / "r.json").find("\"timings_seconds\"") != std::string::npos);
}

TEST_CASE("solve output is byte-identical across runs and thread counts") {
    const auto cfg = write("good.json", kGood);
    REQUIRE(run("solve --config " + cfg.string() + " --out " + (kWork / "a.csv").string()) == 0);
    REQUIRE(run("solve --config " + cfg.string() + " --out " + (kWork / "b.csv").string()) == 0);
    REQUIRE(run("solve --config " + cfg.string() + " --out " + (kWork / "c.csv").string(), "BESSELTRANS_THREADS=1 ") == 0);
    CHECK(slurp(kWork / "a.csv") == slurp(kWork / "b.csv"));
    CHECK(slurp(kWork / "a.csv") == slurp(kWork / "c.csv"));
}

TEST_CASE("solve writes to stdout without --out") {
    const auto cfg = write("good.json", kGood);
    REQUIRE(run("solve --config " + cfg.string()) == 0);
    CHECK(slurp(kWork / "stdout.txt").rfind("index,lambda", 0) == 0);
}

TEST_CASE("config errors exit with 1") {
    CHECK(run("solve --config " + (kWork / "missing.json").string()) == 1);
    CHECK(run("solve --config " + write("unknown.json", R"({"l": -0.5, "b": 1, "potential": "0", "boundary": {"beta": 1, "gamma": 0}, "lambda_range": {"lo": 0, "hi": 10}, "extra": 1})").string()) == 1);
    CHECK(run("solve --config " + write("lneg.json", R"({"l": -0.6, "b": 1, "potential": "0", "boundary": {"beta": 1, "gamma": 0}, "lambda_range": {"lo": 0, "hi": 10}})").string()) == 1);
    CHECK(run("solve --config " + write("syntax.json", R"({"l": -0.5, "b": 1, "potential": "x^^2", "boundary": {"beta": 1, "gamma": 0}, "lambda_range": {"lo": 0, "hi": 10}})").string()) == 1);
    CHECK(slurp(kWork / "stderr.txt").find("offset 2") != std::string::npos);
    CHECK(run("solve") == 1);
    CHECK(run("frobnicate") == 1);
    CHECK(run("") == 1);
    CHECK(run("kernel --config " + write("good.json", kGood).string() + " --resolution 1 --out x.csv") == 1);
}

TEST_CASE("numerical failures exit with 2") {
    const auto cfg = write("vanishing.json", R"({"l": -0.5, "b": 3, "potential": "-30*x", "boundary": {"beta": 1, "gamma": 0}, "lambda_range": {"lo": 0, "hi": 10}, "grid_points": 2001})");
    CHECK(run("solve --config " + cfg.string()) == 2);
    CHECK(slurp(kWork / "stderr.txt").find("build_u0") != std::string::npos);
}

TEST_CASE("kernel and basis dumps") {
    const auto cfg = write("good.json", kGood);
    REQUIRE(run("kernel --config " + cfg.string() + " --resolution 5 --out " + (kWork / "k.csv").string()) == 0);
    std::istringstream k(slurp(kWork / "k.csv"));
    std::string row;
    std::getline(k, row);
    CHECK(row == "0,0,0,0,0");
    int rows = 1;
    while (std::getline(k, row)) {
        CHECK(row.rfind("0,", 0) == 0);
        ++rows;
    }
    CHECK(rows == 5);
    REQUIRE(run("basis --config " + cfg.string() + " --out " + (kWork / "c.csv").string()) == 0);
    CHECK(slurp(kWork / "c.csv").rfind("x,c0,c1,", 0) == 0);
}

TEST_CASE("verify perturbation hook makes the suite fail with exit 2") {
    CHECK(run("verify --perturb-xi 3 1 1e-3 --out " + (kWork / "v.json").string()) == 2);
    const std::string rep = slurp(kWork / "v.json");
    CHECK(rep.find("\"passed\": false") != std::string::npos);
    CHECK(rep.find("\"margin\"") != std::string::npos);
    CHECK(rep.find("\"tolerance\"") != std::string::npos);
}

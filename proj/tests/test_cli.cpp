#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

// Runs the CLI binary, capturing stdout+stderr.
RunResult run_cli(const std::string& args) {
    std::string tmp = "cli_out.tmp";
    std::string cmd = std::string(NLAB_CLI_PATH) + " " + args + " > " + tmp + " 2>&1";
    int rc = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream in(tmp);
    std::stringstream ss;
    ss << in.rdbuf();
    res.out = ss.str();
    std::remove(tmp.c_str());
    return res;
}

std::string config(const std::string& name) {
    return std::string(NLAB_CONFIG_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("predict: linear-constant two-term value") {
    RunResult r = run_cli("predict --input " + config("linear_constant.json") + " --R 100");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("1.005") != std::string::npos);
    CHECK(r.out.find("\"p0\": 1") != std::string::npos);
}

TEST_CASE("validate: bad reaction exits 1 and names the assumption") {
    RunResult r = run_cli("validate --input " + config("bad_reaction.json"));
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("A1: f(theta0) = 0") != std::string::npos);
    CHECK(r.out.find("\"passed\": false") != std::string::npos);
}

TEST_CASE("validate: good config exits 0") {
    RunResult r = run_cli("validate --input " + config("linear_constant.json") + " --R 50");
    CHECK(r.exit_code == 0);
}

TEST_CASE("sweep: decreasing residual column, exit 0") {
    RunResult r = run_cli("sweep --input " + config("linear_constant.json") +
                          " --radii 20,40,80 --format csv --output sweep_out.csv");
    CHECK(r.exit_code == 0);
    std::ifstream in("sweep_out.csv");
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("R,u_R_numeric", 0) == 0);
    // scaled_residual_u is column 6 (0-based 5); check it decreases
    double prev = 1e300;
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        std::stringstream ls(line);
        std::string cell;
        for (int i = 0; i <= 5; ++i) std::getline(ls, cell, ',');
        double v = std::stod(cell);
        CHECK(v < prev);
        prev = v;
        ++rows;
    }
    CHECK(rows == 3);
    std::remove("sweep_out.csv");
}

TEST_CASE("solve: csv profile output") {
    RunResult r = run_cli("solve --input " + config("linear_constant.json") +
                          " --R 50 --format csv --output profile_out.csv");
    CHECK(r.exit_code == 0);
    std::ifstream in("profile_out.csv");
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "s,r,u,du");
    std::remove("profile_out.csv");
}

TEST_CASE("classify: regime report") {
    RunResult r = run_cli("classify --input " + config("power_perturbed.json") + " --R 100");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("curvature_dominated") != std::string::npos);
}

TEST_CASE("compare: case II(i) config") {
    RunResult r = run_cli("compare --input " + config("compare_II_i.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"numeric_ok\": true") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli("predict").exit_code == 2);                       // missing --input
    CHECK(run_cli("frobnicate --input x.json").exit_code == 2);     // unknown command
    CHECK(run_cli("predict --input no_such_file.json").exit_code == 2);
    CHECK(run_cli("predict --input " + config("linear_constant.json") +
                  " --R 100 --mode bogus").exit_code == 2);
}

TEST_CASE("malformed JSON exits 2 with a diagnostic") {
    std::ofstream bad("bad_config.tmp.json");
    bad << "{\"family\": \"constant\", ";
    bad.close();
    RunResult r = run_cli("predict --input bad_config.tmp.json");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("malformed JSON config") != std::string::npos);
    std::remove("bad_config.tmp.json");
}

TEST_CASE("numerical failures exit 3") {
    // R below the continuation start cannot be solved
    RunResult r = run_cli("solve --input " + config("linear_constant.json") + " --R 1.5");
    CHECK(r.exit_code == 3);
}

TEST_CASE("overrides patch the config") {
    RunResult r = run_cli("predict --input " + config("linear_constant.json") +
                          " --R 100 beta1=4.0");
    CHECK(r.exit_code == 0);
    // mu0 = 4: p0 = 1/sqrt(4) = 0.5
    CHECK(r.out.find("\"p0\": 0.5") != std::string::npos);
}

TEST_CASE("describe") {
    RunResult all = run_cli("describe");
    CHECK(all.exit_code == 0);
    for (const char* cmd : {"validate", "solve", "predict", "sweep", "classify",
                            "concentration", "compare"})
        CHECK(all.out.find(cmd) != std::string::npos);

    RunResult pr = run_cli("describe predict");
    CHECK(pr.exit_code == 0);
    CHECK(pr.out.find("two-term expansion") != std::string::npos);

    CHECK(run_cli("describe bogus").exit_code == 2);
}

TEST_CASE("NL_LOG_LEVEL validation") {
    RunResult r = run_cli("describe");
    CHECK(r.exit_code == 0);
    std::string cmd = "NL_LOG_LEVEL=loud " + std::string(NLAB_CLI_PATH) +
                      " describe > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(rc) == 2);
    cmd = "NL_LOG_LEVEL=debug " + std::string(NLAB_CLI_PATH) + " describe > /dev/null 2>&1";
    rc = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(rc) == 0);
}

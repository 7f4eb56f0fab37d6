#include "doctest.h"

#include "qalt/job.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

using namespace qalt;

namespace {

std::string cli_path() {
    const char* p = std::getenv("QALT_CLI");
    REQUIRE(p != nullptr);
    return p;
}

std::string source_dir() {
    const char* p = std::getenv("QALT_SOURCE_DIR");
    REQUIRE(p != nullptr);
    return p;
}

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = cli_path() + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("job parsing") {
    JobSpec spec = parse_job(R"({
        "algebra": {"kind": "quaternion", "a": "-1", "b": "-1"},
        "forms": [["1", "2"]],
        "command": "lambda",
        "params": {"d": 2, "seed": 11}
    })");
    CHECK(spec.algebra->dim() == 4);
    CHECK(spec.forms.size() == 1);
    CHECK(spec.command == "lambda");
    CHECK(spec.params.d == 2);
    CHECK(spec.params.seed == 11);

    // element coordinates
    JobSpec spec2 = parse_job(R"({
        "algebra": {"kind": "quaternion", "a": "-1", "b": "-1"},
        "forms": [[["0", "1", "0", "0"]]]
    })");
    CHECK(spec2.forms[0][0][1] == q(1));
}

TEST_CASE("parse errors carry field paths") {
    CHECK_THROWS_WITH_AS(parse_job("not json"),
                         doctest::Contains("input is not valid JSON"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_job(R"({"algebra": {"kind": "octonion"}})"),
                         doctest::Contains("algebra.kind"), std::invalid_argument);
    // u not pure for an orthogonal involution: rejected with the field path
    CHECK_THROWS_WITH_AS(
        parse_job(R"({"algebra": {"kind": "quaternion", "a": "-1", "b": "-1",
                     "involution": {"type": "orthogonal", "u": ["1", "1", "0", "0"]}}})"),
        doctest::Contains("pure"), std::invalid_argument);
    // non-invertible diagonal entry, with the form path
    CHECK_THROWS_WITH_AS(
        parse_job(R"({"algebra": {"kind": "quaternion", "a": "-1", "b": "-1"},
                     "forms": [[["0","0","0","0"]]]})"),
        doctest::Contains("forms[0]"), std::invalid_argument);
    // unknown command is rejected by run_job
    JobSpec spec = parse_job(R"({"algebra": {"kind": "quaternion", "a": "-1", "b": "-1"}})");
    spec.command = "explode";
    CHECK_THROWS_AS(run_job(spec), std::invalid_argument);
}

TEST_CASE("golden invariant tables") {
    for (const std::string name :
         {"quat_m1m1", "m2_transpose", "quat_m1m3", "quat_2_5", "m3_transpose", "m2_adjoint_1_3"}) {
        std::string job = source_dir() + "/tests/golden/jobs/" + name + ".json";
        RunResult r = run_cli("invariants --input " + job);
        CHECK(r.exit_code == 0);
        CHECK(r.output == read_file(source_dir() + "/tests/golden/" + name + ".invariants.txt"));
    }
}

TEST_CASE("lambda command computes the expected class") {
    std::string job = source_dir() + "/tests/golden/jobs/quat_m1m1.json";
    RunResult r = run_cli("lambda --input " + job + " --d 2");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("form[0]: lambda^2 = grade (0,+): rdim=1 dim=1 det=1") != std::string::npos);
}

TEST_CASE("det command reports the adjoint determinant") {
    std::string job = source_dir() + "/tests/golden/jobs/m2_adjoint_1_3.json";
    RunResult r = run_cli("det --input " + job);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("square class 3") != std::string::npos);
}

TEST_CASE("fixed-seed runs are byte-identical") {
    std::string job = source_dir() + "/tests/golden/jobs/quat_m1m1.json";
    RunResult a = run_cli("check-axioms --input " + job + " --samples 4 --seed 7");
    RunResult b = run_cli("check-axioms --input " + job + " --samples 4 --seed 7");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.find("all instances pass") != std::string::npos);
}

TEST_CASE("exit codes") {
    std::string job = source_dir() + "/tests/golden/jobs/quat_m1m1.json";
    CHECK(run_cli("frobnicate --input " + job).exit_code == 2);
    CHECK(run_cli("invariants --input /nonexistent.json").exit_code == 2);
    // resource cap surfaces with the offending dimension and exit code 3
    RunResult cap = run_cli("lambda --input " + job + " --d 9");
    CHECK(cap.exit_code == 3);
    CHECK(cap.output.find("dimension") != std::string::npos);
}

TEST_CASE("machine-readable output lands in --out") {
    std::string job = source_dir() + "/tests/golden/jobs/quat_m1m1.json";
    std::string tmp = "/tmp/qalt_out_test.json";
    RunResult r = run_cli("lambda --input " + job + " --d 2 --out " + tmp);
    CHECK(r.exit_code == 0);
    std::string payload = read_file(tmp);
    CHECK(payload.find("\"command\": \"lambda\"") != std::string::npos);
    std::remove(tmp.c_str());
}

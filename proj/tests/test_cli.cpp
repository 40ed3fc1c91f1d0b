// End-to-end checks of the command-line binary. The binary path arrives in
// the CTSF_CLI environment variable (set by the test harness); every test
// works in its own scratch directory under the system temp root.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int status = -1;
    std::string output;  // stdout and stderr interleaved
};

std::string cli_path() {
    const char* p = std::getenv("CTSF_CLI");
    REQUIRE_MESSAGE(p != nullptr, "CTSF_CLI must point at the binary");
    return p;
}

RunResult run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.output.append(buf, n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("ctsf_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    REQUIRE(out.good());
    out << content;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kDemoConfig = R"({
  "num_bands": 4,
  "true_bands": [0, 2],
  "fake_bands": [1, 3],
  "alpha": 0.8,
  "total_power_db": 10,
  "deception_threshold": 0.5,
  "rician_k_db": 10,
  "trials": 100,
  "seed": 42
}
)";

}  // namespace

TEST_CASE("the built-in oracle suite passes") {
    const RunResult r = run("validate");
    CHECK(r.status == 0);
    CHECK(r.output.find("PASS") != std::string::npos);
    CHECK(r.output.find("FAIL") == std::string::npos);
}

TEST_CASE("optimize writes a result and refuses silent overwrites") {
    const fs::path dir = scratch_dir("optimize");
    write_file(dir / "config.json", kDemoConfig);
    const std::string base =
        "optimize --config " + (dir / "config.json").string() + " --out " + dir.string();

    const RunResult first = run(base);
    CHECK(first.status == 0);
    REQUIRE(fs::exists(dir / "result.json"));
    REQUIRE(fs::exists(dir / "manifest.json"));

    const json result = json::parse(read_file(dir / "result.json"));
    CHECK(result.at("converged").get<bool>());
    CHECK(result.at("objective_bits").get<double>() > 0.0);
    CHECK(result.at("xi").size() == 4);
    CHECK(result.at("powers").size() == 4);
    CHECK(result.at("coefficients").size() == 4);
    CHECK(result.contains("alpha_star"));
    CHECK(result.at("iterations").get<int>() >= 1);

    const json manifest = json::parse(read_file(dir / "manifest.json"));
    CHECK(manifest.at("command") == "optimize");
    CHECK(manifest.at("seed").get<std::uint64_t>() == 42);
    CHECK(manifest.at("config_hash").get<std::string>().substr(0, 2) == "0x");

    const RunResult second = run(base);
    CHECK(second.status != 0);
    CHECK(second.output.find("--force") != std::string::npos);

    const RunResult forced = run(base + " --force");
    CHECK(forced.status == 0);
}

TEST_CASE("missing and invalid configs exit with code 2") {
    const fs::path dir = scratch_dir("badconfig");

    const RunResult missing =
        run("optimize --config " + (dir / "nope.json").string() + " --out " + dir.string());
    CHECK(missing.status == 2);

    write_file(dir / "bad.json",
               R"({"num_bands": 4, "true_bands": [0, 2], "fake_bands": [1, 3],
                   "alpha": 0.0, "total_power_db": 10, "deception_threshold": 0.5,
                   "rician_k_db": 10, "trials": 10, "seed": 1})");
    const RunResult invalid =
        run("optimize --config " + (dir / "bad.json").string() + " --out " + dir.string());
    CHECK(invalid.status == 2);
    CHECK(invalid.output.find("alpha out of range") != std::string::npos);
}

TEST_CASE("an unsatisfiable decoy floor exits with code 3") {
    const fs::path dir = scratch_dir("infeasible");
    write_file(dir / "config.json", R"({
  "num_bands": 4, "true_bands": [0, 2], "fake_bands": [1, 3], "alpha": 0.8,
  "total_power_db": 0, "deception_threshold": 1e6, "rician_k_db": 10,
  "trials": 4, "seed": 7
})");
    const RunResult r =
        run("optimize --config " + (dir / "config.json").string() + " --out " + dir.string());
    CHECK(r.status == 3);
    CHECK(r.output.find("infeasible") != std::string::npos);
}

TEST_CASE("dumped configs re-parse to the same dump") {
    const fs::path dir = scratch_dir("dump");
    write_file(dir / "config.json", kDemoConfig);
    const RunResult first = run("optimize --config " + (dir / "config.json").string() +
                                " --dump-config");
    REQUIRE(first.status == 0);

    write_file(dir / "round.json", first.output);
    const RunResult second = run("optimize --config " + (dir / "round.json").string() +
                                 " --dump-config");
    REQUIRE(second.status == 0);
    CHECK(first.output == second.output);
}

TEST_CASE("threshold sweep emits the documented schema and reruns identically") {
    const fs::path dir = scratch_dir("sweep");
    write_file(dir / "config.json", kDemoConfig);
    const std::string base = "sweep-threshold --config " + (dir / "config.json").string() +
                             " --out " + dir.string() +
                             " --grid 0,0.5 --trials 6 --method bado";

    const RunResult r = run(base);
    CHECK(r.status == 0);
    REQUIRE(fs::exists(dir / "metrics.csv"));
    const std::string csv = read_file(dir / "metrics.csv");
    CHECK(csv.rfind("sweep_value,method,mean_sum_secrecy,mean_intercept_sinr,mean_decoy_sinr,"
                    "interception_prob,deception_prob,feasible_fraction,trials,stderr_secrecy\n",
                    0) == 0);
    // one header plus one row per grid point for the single method
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

    const json manifest = json::parse(read_file(dir / "manifest.json"));
    CHECK(manifest.at("command") == "sweep-threshold");
    CHECK(manifest.at("grid").size() == 2);
    CHECK(manifest.at("methods").size() == 1);

    const RunResult again = run(base + " --force");
    CHECK(again.status == 0);
    CHECK(read_file(dir / "metrics.csv") == csv);
}

TEST_CASE("the factor fit recovers a planted value from a targets file") {
    const fs::path dir = scratch_dir("fit");
    // correlation targets generated at alpha = 0.7 for four bands (band 0
    // reference), written to 15 digits
    write_file(dir / "targets.txt",
               "1\n0.149839081754820\n0.0712083463334799\n0.00600518582706572\n");
    const RunResult r = run("fit-alpha --targets " + (dir / "targets.txt").string() +
                            " --out " + dir.string() + " --alpha0 0.6");
    CHECK(r.status == 0);
    REQUIRE(fs::exists(dir / "result.json"));
    const json result = json::parse(read_file(dir / "result.json"));
    CHECK(std::abs(result.at("alpha_star").get<double>() - 0.7) <= 1e-5);
    CHECK(result.at("residual").get<double>() <= 1e-9);
    CHECK(r.output.find("alpha_star") != std::string::npos);
}

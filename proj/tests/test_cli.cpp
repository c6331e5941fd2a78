#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "serlab/special.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(SERLAB_BIN) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    while (std::size_t got = fread(buf, 1, sizeof buf, pipe)) r.output.append(buf, got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::vector<double>> parse_rows(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || !std::isdigit(static_cast<unsigned char>(line[0])))
            continue;
        std::istringstream cells(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("ser emits the requested grid with a config header") {
    auto r = run_cli("ser --constellation qpsk --snr 0.1:20:40:log --samples 10000 --seed 7");
    CHECK(r.exit_code == 0);
    CHECK(r.output.rfind("# serlab", 0) == 0);
    CHECK(r.output.find("seed=7") != std::string::npos);
    auto rows = parse_rows(r.output);
    REQUIRE(rows.size() == 40);
    CHECK(rows.front()[0] == doctest::Approx(0.1));
    CHECK(rows.back()[0] == doctest::Approx(20.0));
    for (const auto& row : rows) {
        CHECK(row[1] >= 0.0);
        CHECK(row[1] <= 1.0);
    }
}

TEST_CASE("ser reruns are byte identical for the same seed") {
    const std::string args =
        "ser --constellation bpsk --snr 0.5:4:6:log --samples 20000 --seed 99";
    auto a = run_cli(args);
    auto b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    auto c = run_cli("ser --constellation bpsk --snr 0.5:4:6:log --samples 20000 --seed 100");
    CHECK(a.output != c.output);
}

TEST_CASE("quadrature above 2-D is a usage error") {
    auto r = run_cli(
        "ser --constellation cube:3 --snr 1:4:4:log --method quadrature --samples 1000");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("n <= 2") != std::string::npos);
}

TEST_CASE("mc sample floor is enforced") {
    auto r = run_cli("ser --constellation bpsk --snr 1:4:4:log --samples 10");
    CHECK(r.exit_code == 2);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run_cli("nonsense").exit_code == 2);
    CHECK(run_cli("ser --constellation bpsk").exit_code == 2);          // no axis
    CHECK(run_cli("ser --snr 1:2:4:log --samples 2000").exit_code == 2);  // no constellation
}

TEST_CASE("verify bpsk passes all checks") {
    auto r = run_cli(
        "verify --constellation bpsk --snr 0.05:10:10:log --noise 0.05:10:10:log "
        "--samples 50000 --seed 3");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("RESULT: PASS") != std::string::npos);
    CHECK(r.output.find("eq14-note") != std::string::npos);  // n = 1 discrepancy table
}

TEST_CASE("verify qpsk reports the always-convex regime") {
    auto r = run_cli(
        "verify --constellation qpsk --snr 0.05:10:8:log --noise 0.05:10:8:log "
        "--samples 50000 --seed 3");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("always-convex") != std::string::npos);
    CHECK(r.output.find("eq14-note") == std::string::npos);  // only for n != 2
}

TEST_CASE("sphere first-order radius reproduces the first-derivative bound") {
    auto r = run_cli("sphere --n 2 --radius-rule first-order --snr 1:100:20:log --quantity d1");
    CHECK(r.exit_code == 0);
    auto rows = parse_rows(r.output);
    REQUIRE(rows.size() == 20);
    for (const auto& row : rows)
        CHECK(row[1] == doctest::Approx(-(1.0 / M_E) / row[0]).epsilon(1e-12));
}

TEST_CASE("fade reports averages, gaps, and the scale-family flag") {
    auto r = run_cli(
        "fade --pe bpsk-closed-form --model rayleigh --mean-snr 1:100:3:log");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("scale_family=true") != std::string::npos);
    auto rows = parse_rows(r.output);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][0] == doctest::Approx(10.0));
    // registry bpsk is Q(sqrt(g)): Rayleigh average 1/2 (1 - sqrt(g0/(2+g0)))
    CHECK(rows[1][1] == doctest::Approx(0.043564535412393746).epsilon(1e-6));
    CHECK(rows[1][3] >= 0.0);

    auto ln = run_cli(
        "fade --pe bpsk-closed-form --model lognormal:8 --mean-snr 1:100:3:log");
    CHECK(ln.exit_code == 0);
    CHECK(ln.output.find("scale_family=false") != std::string::npos);
}

TEST_CASE("allocate returns fractions with a small kkt residual") {
    auto r = run_cli("allocate --pe bpsk-closed-form --streams 10,1");
    CHECK(r.exit_code == 0);
    auto pos = r.output.find("kkt_residual=");
    REQUIRE(pos != std::string::npos);
    double resid = std::stod(r.output.substr(pos + 13));
    CHECK(resid < 1e-6);
    auto rows = parse_rows(r.output);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][2] + rows[1][2] == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("jam emits a two-level strategy for small budgets") {
    auto r = run_cli("jam --pe bpsk-closed-form --budget 0.1 --mode optimal");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("kind=tangent_optimal") != std::string::npos);
    auto rows = parse_rows(r.output);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][0] * rows[0][1] + rows[1][0] * rows[1][1] == doctest::Approx(0.1).epsilon(1e-9));

    auto big = run_cli("jam --pe bpsk-closed-form --budget 5 --mode suboptimal");
    CHECK(big.exit_code == 0);
    CHECK(big.output.find("kind=none") != std::string::npos);
}

TEST_CASE("constellation files load through the cli") {
    const char* path = "cli_constellation.json";
    {
        std::ofstream f(path);
        f << R"({"n": 1, "points": [[2.0], [-2.0]], "rescale": true})";
    }
    auto r = run_cli(std::string("ser --constellation ") + path +
                     " --snr 1:2:3:log --samples 2000 --seed 5");
    CHECK(r.exit_code == 0);
    auto bad = run_cli("ser --constellation missing.json --snr 1:2:3:log --samples 2000");
    CHECK(bad.exit_code == 2);
}

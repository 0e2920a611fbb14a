// End-to-end tests of the periodscope binary: output formats, determinism
// and exit codes. The binary path comes from the build system.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const std::string out_path = "/tmp/pscope_cli_out_" + std::to_string(++counter);
    const std::string err_path = out_path + ".err";
    const std::string cmd =
        std::string(PSCOPE_CLI_PATH) + " " + args + " > " + out_path + " 2> " + err_path;
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(raw);
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

int column_index(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

TEST_CASE("system subcommand reports diagnostics") {
    const RunResult r = run_cli("system --f 0 --g x");
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    const int vpp = column_index(rows[0], "vpp_origin");
    const int estar = column_index(rows[0], "e_star");
    REQUIRE(vpp >= 0);
    REQUIRE(estar >= 0);
    CHECK(std::stod(rows[1][vpp]) == doctest::Approx(1.0));
    CHECK(std::stod(rows[1][estar]) == doctest::Approx(50.0).epsilon(1e-6));
}

TEST_CASE("exit codes: hypothesis violation and parse errors") {
    CHECK(run_cli("system --f 0 --g 1").exit_code == 3);          // g(0) != 0
    CHECK(run_cli("system --f 0 --g \"x +\"").exit_code == 2);    // syntax
    CHECK(run_cli("system --f 0 --g \"foo(x)\"").exit_code == 2); // unknown identifier
    CHECK(run_cli("repro-sect3 --f x --domain -2 2").exit_code == 3);  // not positive
}

TEST_CASE("period table for the harmonic oscillator") {
    const RunResult r = run_cli("period --f 0 --g x --energies 0.1,1");
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 3);
    for (const char* col : {"T_x", "T_theta", "T_ode"}) {
        const int idx = column_index(rows[0], col);
        REQUIRE(idx >= 0);
        for (std::size_t i = 1; i < rows.size(); ++i)
            CHECK(std::stod(rows[i][idx]) == doctest::Approx(kTwoPi).epsilon(1e-7));
    }
    const int dte = column_index(rows[0], "dT_dE");
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::abs(std::stod(rows[i][dte])) < 1e-8);
}

TEST_CASE("csv output is deterministic and LF-terminated") {
    const std::string args = "period --f \"-3*x/(1+x^2)\" --g \"x + x^3\" --energies 0.05,0.15";
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find('\r') == std::string::npos);
    CHECK(!a.out.empty());
    CHECK(a.out.back() == '\n');
}

TEST_CASE("json output carries config, rows and diagnostics") {
    const RunResult r = run_cli("period --f 0 --g x --energies 0.5 --format json");
    CHECK(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.contains("config"));
    REQUIRE(doc.contains("rows"));
    REQUIRE(doc.contains("diagnostics"));
    CHECK(doc["config"]["subcommand"] == "period");
    REQUIRE(doc["rows"].size() == 1);
    const auto& row = doc["rows"][0];
    for (const char* key : {"E", "T_x", "err_x", "T_theta", "err_theta", "T_ode", "err_ode",
                            "dT_dE", "err_dT_dE", "max_pairwise_rel_diff", "status"})
        CHECK(row.contains(key));
    CHECK(doc["diagnostics"].contains("methods"));
    CHECK(std::abs(row["T_theta"].get<double>() - kTwoPi) < 1e-8);
}

TEST_CASE("isochronous family: flat period column") {
    const RunResult r = run_cli(
        "period --f \"-3*x/(1+x^2)\" --g \"x + 1*x^3\" --energies 0.05,0.1,0.15,0.2,0.25");
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    const int idx = column_index(rows[0], "T_theta");
    double tmin = 1e300, tmax = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double t = std::stod(rows[i][idx]);
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
    }
    CHECK((tmax - tmin) / tmax < 1e-5);
}

TEST_CASE("decreasing family: strictly ordered period column") {
    const RunResult r = run_cli(
        "period --f \"-3*x/(1+x^2)\" --g \"x + 1.055*x^3\" --energies 0.05,0.1,0.15,0.2,0.25");
    const auto rows = parse_csv(r.out);
    const int idx = column_index(rows[0], "T_theta");
    double prev = 1e300;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double t = std::stod(rows[i][idx]);
        CHECK(t < prev);
        prev = t;
    }
}

TEST_CASE("monotonicity verdicts through the CLI") {
    auto verdict_of = [&](const std::string& g) {
        const RunResult r =
            run_cli("monotonicity --f \"-3*x/(1+x^2)\" --g \"" + g + "\" --energies 0.05");
        REQUIRE(r.exit_code == 0);
        const auto rows = parse_csv(r.out);
        const int idx = column_index(rows[0], "verdict");
        REQUIRE(idx >= 0);
        REQUIRE(rows.size() >= 2);
        return rows[1][idx];
    };
    CHECK(verdict_of("x + 0.96*x^3") == "increasing");
    CHECK(verdict_of("x + 1.001*x^3") == "decreasing");
    CHECK(verdict_of("x + 1*x^3") == "isochronous");
}

TEST_CASE("isochrony subcommand") {
    const RunResult yes = run_cli("isochrony --f 0 --g x --energies 1 --format json");
    CHECK(yes.exit_code == 0);
    const auto ydoc = nlohmann::json::parse(yes.out);
    CHECK(ydoc["diagnostics"]["reports"][0]["verdict"].get<bool>());

    const RunResult no =
        run_cli("isochrony --f \"-3*x/(1+x^2)\" --g \"x + 0.9*x^3\" --energies 0.1 --format json");
    CHECK(no.exit_code == 0);
    const auto ndoc = nlohmann::json::parse(no.out);
    CHECK(!ndoc["diagnostics"]["reports"][0]["verdict"].get<bool>());
}

TEST_CASE("repro-km emits one row per a3 with coefficients") {
    const RunResult r = run_cli("repro-km --a3 0.96,1,1.055");
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 4);
    const int c0 = column_index(rows[0], "C0");
    const int dir = column_index(rows[0], "T_direction");
    CHECK(std::stod(rows[1][c0]) == doctest::Approx(0.06).epsilon(1e-12));
    CHECK(std::stod(rows[2][c0]) == 0.0);
    CHECK(rows[1][dir] == "increasing");
    CHECK(rows[2][dir] == "constant");
    CHECK(rows[3][dir] == "decreasing");
}

TEST_CASE("repro-sect3 reports the isochronous verdict and 2*pi periods") {
    const RunResult r = run_cli("repro-sect3 --f \"1+x^2\"");
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() >= 2);
    const int t = column_index(rows[0], "T_theta");
    const int v = column_index(rows[0], "verdict");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::stod(rows[i][t]) == doctest::Approx(kTwoPi).epsilon(1e-6));
        CHECK(rows[i][v] == "isochronous");
    }
}

TEST_CASE("per-row numerical failure marks the row and exits 4") {
    // second energy is beyond E*
    const RunResult r = run_cli("period --f 0 --g x --energies 1,100");
    CHECK(r.exit_code == 4);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 3);
    const int status = column_index(rows[0], "status");
    CHECK(rows[1][status] == "ok");
    CHECK(rows[2][status].find("error") == 0);
}

TEST_CASE("e-range sweep and file output") {
    const std::string path = "/tmp/pscope_cli_file_out.csv";
    const RunResult r =
        run_cli("period --f 0 --g x --e-range 0.1 0.5 3 --out " + path);
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    const auto rows = parse_csv(slurp(path));
    REQUIRE(rows.size() == 4);
    CHECK(std::stod(rows[1][0]) == doctest::Approx(0.1));
    CHECK(std::stod(rows[2][0]) == doctest::Approx(0.3));
    CHECK(std::stod(rows[3][0]) == doctest::Approx(0.5));
    std::remove(path.c_str());
}

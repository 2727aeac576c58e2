#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "specind/cli.hpp"

using specind::cli_main;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string scrub_timestamp(std::string text) {
    return std::regex_replace(text, std::regex("\"generated_at\": \"[^\"]*\""),
                              "\"generated_at\": \"-\"");
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/specind_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("spectra subcommand") {
    TempFile out("spectra.json");
    CHECK(cli_main({"spectra", "--graph", "complete:4", "--out", out.path}) == 0);
    auto j = nlohmann::json::parse(slurp(out.path));
    CHECK(j["rho_A"].get<double>() == doctest::Approx(3.0));
    CHECK(j["nu_H"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("thresholds subcommand") {
    TempFile out("thresholds.json");
    CHECK(cli_main({"thresholds", "--lambda-c", "2", "--out", out.path}) == 0);
    auto j = nlohmann::json::parse(slurp(out.path));
    CHECK(j["lambda_c"]["value"].get<double>() == doctest::Approx(4.0));

    CHECK(cli_main({"thresholds", "--delta-c", "4", "--planar", "6", "--out", out.path}) == 0);
    j = nlohmann::json::parse(slurp(out.path));
    CHECK(j["delta_c"]["value"].get<double>() == doctest::Approx(2.0));
    CHECK(j["planar_radius_bound"]["value"].get<double>() == doctest::Approx(6.0));
}

TEST_CASE("influence subcommand with both routes") {
    TempFile out("influence.json");
    CHECK(cli_main({"influence", "--graph", "path:2", "--model", "hardcore", "--lambda", "1",
                    "--route", "both", "--out", out.path}) == 0);
    auto j = nlohmann::json::parse(slurp(out.path));
    CHECK(j["bruteforce"]["matrix"][0][1].get<double>() == doctest::Approx(-0.5));
    CHECK(j["saw"]["matrix"][0][1].get<double>() == doctest::Approx(-0.5));
    CHECK(j["bruteforce"]["theta_max"].get<double>() == doctest::Approx(1.5));
}

TEST_CASE("certify exit codes and reproducibility") {
    TempFile a("certify_a.json"), b("certify_b.json");
    std::vector<std::string> args{"certify", "--graph",   "cycle:4", "--model", "ising",
                                  "--beta",  "0.8",       "--epsilon", "0.5",   "--seed",
                                  "7",       "--out",     a.path};
    CHECK(cli_main(args) == 0);
    args.back() = b.path;
    CHECK(cli_main(args) == 0);
    CHECK(scrub_timestamp(slurp(a.path)) == scrub_timestamp(slurp(b.path)));
    CHECK(!slurp(a.path).empty());

    // graph-file input round trip
    TempFile gf("graph.txt");
    {
        std::ofstream os(gf.path);
        os << "0 1\n1 2\n2 3\n3 0\n";
    }
    TempFile c("certify_c.json");
    CHECK(cli_main({"certify", "--graph-file", gf.path, "--model", "ising", "--beta", "0.8",
                    "--epsilon", "0.5", "--seed", "7", "--out", c.path}) == 0);
    CHECK(scrub_timestamp(slurp(a.path)) == scrub_timestamp(slurp(c.path)));
}

TEST_CASE("certify flags a violated bound with exit code 1") {
    // hard-core on C4 with eps = 0.9 requires lambda <= 0.1 lambda_c(2) = 0.4;
    // lambda = 1.2 breaks the contraction certificate so the report carries
    // holds = false
    TempFile out("violated.json");
    int code = cli_main({"certify", "--graph", "cycle:4", "--model", "hardcore", "--lambda",
                         "1.2", "--epsilon", "0.9", "--out", out.path});
    CHECK(code == 1);
    auto j = nlohmann::json::parse(slurp(out.path));
    CHECK(!j["all_hold"].get<bool>());
}

TEST_CASE("usage errors exit with 2") {
    CHECK(cli_main({"certify", "--model", "ising", "--beta", "0.8"}) == 2); // no graph
    CHECK(cli_main({"frobnicate"}) == 2);
    CHECK(cli_main({"influence", "--graph", "path:3", "--model", "nonsense"}) == 2);
}

TEST_CASE("certify --delta maps to the matching epsilon") {
    TempFile a("delta_a.json"), b("delta_b.json");
    // on C4 (rho = 2), delta = 0.25 corresponds to eps = 0.5
    CHECK(cli_main({"certify", "--graph", "cycle:4", "--model", "ising", "--beta", "0.8",
                    "--delta", "0.25", "--seed", "7", "--out", a.path}) == 0);
    CHECK(cli_main({"certify", "--graph", "cycle:4", "--model", "ising", "--beta", "0.8",
                    "--epsilon", "0.5", "--seed", "7", "--out", b.path}) == 0);
    CHECK(scrub_timestamp(slurp(a.path)) == scrub_timestamp(slurp(b.path)));
    CHECK(cli_main({"certify", "--graph", "cycle:4", "--model", "ising", "--beta", "0.8",
                    "--delta", "0.6"}) == 2); // 1 - 0.6*2 < 0
}

TEST_CASE("mix subcommand") {
    TempFile out("mix.json"), csv("mix.csv");
    CHECK(cli_main({"mix", "--graph", "path:2", "--model", "hardcore", "--lambda", "1",
                    "--exact", "--csv", csv.path, "--out", out.path}) == 0);
    auto j = nlohmann::json::parse(slurp(out.path));
    CHECK(j["exact"]["gap"].get<double>() == doctest::Approx(0.25));
    CHECK(j["exact"]["states"].get<int>() == 3);
    auto csv_text = slurp(csv.path);
    CHECK(csv_text.rfind("t,tv_exact", 0) == 0);

    CHECK(cli_main({"mix", "--graph", "cycle:4", "--model", "ising", "--beta", "0.9", "--chains",
                    "50", "--horizon", "100", "--seed", "3", "--out", out.path}) == 0);
    auto j2 = nlohmann::json::parse(slurp(out.path));
    CHECK(j2["empirical"]["chains"].get<int>() == 50);
}

TEST_CASE("json config file with flag override") {
    TempFile cfg("config.json"), out("config_out.json");
    {
        std::ofstream os(cfg.path);
        os << R"({"kind":"ising","beta":0.8,"graph":"cycle:4","epsilon":0.5,"seed":7})";
    }
    CHECK(cli_main({"certify", "--config", cfg.path, "--out", out.path}) == 0);
    auto j = nlohmann::json::parse(slurp(out.path));
    CHECK(j["model"]["beta"].get<double>() == doctest::Approx(0.8));
    CHECK(j["graph"]["n"].get<int>() == 4);
    CHECK(j["config"]["eps"].get<double>() == doctest::Approx(0.5));

    // flags override the file
    CHECK(cli_main({"certify", "--config", cfg.path, "--beta", "0.9", "--out", out.path}) == 0);
    j = nlohmann::json::parse(slurp(out.path));
    CHECK(j["model"]["beta"].get<double>() == doctest::Approx(0.9));
}

TEST_CASE("budget environment variables are honored") {
    setenv("SPECIND_BUDGET_STATES", "4", 1);
    int code = cli_main({"influence", "--graph", "cycle:5", "--model", "ising", "--beta", "0.9",
                         "--out", "/tmp/specind_test_budget.json"});
    unsetenv("SPECIND_BUDGET_STATES");
    std::remove("/tmp/specind_test_budget.json");
    CHECK(code == 2); // BudgetExceeded surfaces as a usage-style error
}

TEST_CASE("influence csv round-trips at full precision") {
    TempFile out("inf.json"), csv("inf.csv");
    CHECK(cli_main({"influence", "--graph", "path:2", "--model", "hardcore", "--lambda", "3",
                    "--route", "brute", "--csv", csv.path, "--out", out.path}) == 0);
    std::ifstream in(csv.path);
    std::string cell;
    REQUIRE(std::getline(in, cell, ','));
    CHECK(std::stod(cell) == 1.0);
    REQUIRE(std::getline(in, cell));
    // 17 significant digits reproduce the stored double exactly
    auto j = nlohmann::json::parse(slurp(out.path));
    CHECK(std::stod(cell) == j["bruteforce"]["matrix"][0][1].get<double>());
    CHECK(std::stod(cell) == doctest::Approx(-0.75));
}

TEST_CASE("sweep subcommand records per-pinning data") {
    TempFile out("sweep.json");
    CHECK(cli_main({"sweep", "--graph", "path:2", "--model", "hardcore", "--lambda", "1",
                    "--out", out.path}) == 0);
    auto j = nlohmann::json::parse(slurp(out.path));
    CHECK(j["eta"].get<double>() == doctest::Approx(0.5));
    CHECK(j["records"].size() == 1);
}

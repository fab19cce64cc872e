#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "gapprob/gap.hpp"

using nlohmann::json;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "gapprob");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    Outcome o;
    o.code = gapprob::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

// eval prints the value on its first line and the JSON record after it
std::pair<double, json> parse_eval(const std::string& text) {
    const auto nl = text.find('\n');
    return {std::stod(text.substr(0, nl)), json::parse(text.substr(nl + 1))};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
        v.push_back(l);
    }
    return v;
}

}  // namespace

TEST_CASE("eval prints the library value") {
    const Outcome o = run_cli({"eval", "--regime", "soft", "--beta", "2", "--s", "0"});
    REQUIRE(o.code == 0);
    const auto [v, j] = parse_eval(o.out);
    CHECK(std::abs(v - gapprob::gap_soft(2, 0.0)) < 1e-14);
    CHECK(j.contains("config"));
    CHECK(j.contains("version"));
    CHECK(j["results"].size() == 1);
    CHECK(j["config"]["quadrature_order"] == 64);

    const Outcome tiny = run_cli({"eval", "--regime", "bulk", "--beta", "2", "--s", "1e-9"});
    REQUIRE(tiny.code == 0);
    CHECK(std::abs(parse_eval(tiny.out).first - 1) < 1e-8);
}

TEST_CASE("usage errors exit with 2") {
    const Outcome missing = run_cli({"eval", "--regime", "hard", "--beta", "2", "--s", "1"});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("--a") != std::string::npos);
    CHECK(run_cli({"eval", "--regime", "bulk", "--beta", "3", "--s", "1"}).code == 2);
    CHECK(run_cli({"eval", "--regime", "bulk", "--beta", "2", "--s", "-1"}).code == 2);
    CHECK(run_cli({"eval", "--regime", "soft", "--beta", "1", "--s", "0", "--xi", "0.5"}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({"--format", "xml", "eval", "--regime", "bulk", "--s", "1"}).code == 2);
    CHECK(run_cli({"--quadrature-order", "0", "eval", "--regime", "bulk", "--s", "1"}).code == 2);
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("table: header, rows, determinism, bad grids") {
    const std::vector<std::string> args = {"table", "--regime", "soft", "--beta", "2", "--s-grid", "-2,0,2"};
    const Outcome a = run_cli(args);
    REQUIRE(a.code == 0);
    const auto rows = lines(a.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "s,value,route,error_estimate");
    double prev = -1.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto c1 = rows[i].find(',');
        const double v = std::stod(rows[i].substr(c1 + 1));
        CHECK(v > prev);
        prev = v;
    }
    CHECK(run_cli(args).out == a.out);
    CHECK(a.out.find('\r') == std::string::npos);

    const Outcome range = run_cli({"table", "--regime", "bulk", "--s-min", "0.5", "--s-max", "1.5", "--points", "5"});
    REQUIRE(range.code == 0);
    CHECK(lines(range.out).size() == 6);

    const Outcome js = run_cli({"--format", "json", "table", "--regime", "bulk", "--s-grid", "0.5,1"});
    REQUIRE(js.code == 0);
    CHECK(json::parse(js.out)["results"].size() == 2);

    CHECK(run_cli({"table", "--regime", "soft", "--s-grid", "0,-1"}).code == 2);
    CHECK(run_cli({"table", "--regime", "soft", "--s-grid", "1,1"}).code == 2);
}

TEST_CASE("verify exit codes") {
    const Outcome bulk = run_cli({"verify", "--suite", "bulk"});
    CHECK(bulk.code == 0);
    const json j = json::parse(bulk.out);
    CHECK(j["results"].size() > 0);
    for (const auto& r : j["results"]) {
        CHECK(r["pass"] == true);
    }
    CHECK(run_cli({"--identity-tol", "1e-1", "verify", "--suite", "all"}).code == 0);
    const Outcome coarse = run_cli({"--quadrature-order", "4", "verify", "--suite", "soft"});
    CHECK(coarse.code == 1);
    CHECK(!coarse.err.empty());
}

TEST_CASE("sample: determinism, ci field, comparator") {
    const std::vector<std::string> args = {"--seed", "5", "sample", "--family", "gaussian", "--edge", "soft",
                                           "--beta", "2", "--N", "40", "--s", "-1", "--trials", "100"};
    const Outcome a = run_cli(args);
    REQUIRE(a.code == 0);
    CHECK(run_cli(args).out == a.out);
    const json r = json::parse(a.out)["results"][0];
    const double p = r["estimate"];
    CHECK(r["trials"] == 100);
    CHECK(std::abs(double(r["ci_halfwidth"]) - 1.96 * std::sqrt(p * (1 - p) / 100)) < 1e-12);

    const Outcome e = run_cli({"eval", "--regime", "soft", "--beta", "2", "--s", "-1"});
    CHECK(std::abs(double(r["comparator"]) - parse_eval(e.out).first) < 1e-14);

    const Outcome hard = run_cli({"sample", "--family", "laguerre", "--edge", "hard", "--N", "20", "--s", "1",
                                  "--trials", "50"});
    CHECK(hard.code == 2);
}

TEST_CASE("config file precedence") {
    gapprob::cli::RunConfig cfg;
    gapprob::cli::apply_config_text("# comment\n\nquadrature_order = 96\noutput_format=json\n", cfg);
    CHECK(cfg.quadrature_order == 96);
    CHECK(cfg.output_format == "json");
    CHECK_THROWS_AS(gapprob::cli::apply_config_text("colour=blue\n", cfg), std::invalid_argument);
    CHECK_THROWS_AS(gapprob::cli::apply_config_text("quadrature_order=many\n", cfg), std::invalid_argument);

    const std::string path = "test_cli_config.txt";
    {
        std::ofstream f(path);
        f << "quadrature_order=48\nseed=9\n";
    }
    const Outcome from_file = run_cli({"--config", path, "eval", "--regime", "bulk", "--s", "1"});
    REQUIRE(from_file.code == 0);
    CHECK(parse_eval(from_file.out).second["config"]["quadrature_order"] == 48);
    const Outcome flag = run_cli({"--config", path, "--quadrature-order", "80", "eval", "--regime", "bulk", "--s", "1"});
    REQUIRE(flag.code == 0);
    CHECK(parse_eval(flag.out).second["config"]["quadrature_order"] == 80);
    CHECK(run_cli({"--config", "no_such_file.txt", "eval", "--regime", "bulk", "--s", "1"}).code == 2);
    std::remove(path.c_str());
}

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "njc_cli_test";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args, const std::string& tag) {
    const fs::path out = work_dir() / (tag + ".stdout");
    const std::string cmd = std::string(NJC_CLI_PATH) + " " + args + " > " + out.string() +
                            " 2> " + (work_dir() / (tag + ".stderr")).string();
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(raw);
    r.stdout_text = slurp(out);
    return r;
}

const std::string kSmallBudget = " --restarts 8 --budget 512 --refine 50 --samples 600 ";

}  // namespace

TEST_CASE("cli: audit truncated matches its registered profile") {
    const auto r = run_cli("audit --metric truncated --samples 600 --seed 5", "audit_trunc");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK(j.at("schema") == "njc-lab/1");
    CHECK(j.at("checks").at("two_homogeneous").at("status") == "FAIL");
    CHECK(j.at("checks").at("even").at("status") == "PASS");
    CHECK(j.at("checks").at("subadditive").at("status") == "PASS");
    CHECK(j.at("normability").at("verdict") == "NON_NORMABLE");
    CHECK(j.at("profile_mismatches").empty());
}

TEST_CASE("cli: audit norm(2) is normable") {
    const auto r = run_cli("audit --metric 'norm(2)' --samples 600 --seed 5", "audit_norm2");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK(j.at("normability").at("verdict") == "NORMABLE");
}

TEST_CASE("cli: audit norm-plus-square finds the subadditivity failure") {
    const auto r = run_cli("audit --metric norm-plus-square --samples 600 --seed 5", "audit_nps");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK(j.at("checks").at("subadditive").at("status") == "FAIL");
    CHECK(j.at("checks").at("subadditive").at("witness").is_object());
}

TEST_CASE("cli: audit hamel metric via the shipped basis") {
    const auto r = run_cli("audit --metric hamel --samples 400 --seed 5", "audit_hamel");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK(j.at("normability").at("verdict") == "NON_NORMABLE");
    CHECK(j.at("checks").at("subadditive").at("status") == "PASS");
}

TEST_CASE("cli: estimate truncated across sigmas") {
    const auto r = run_cli("estimate --metric truncated --sigma 1,1.5,2 --seed 9" + kSmallBudget,
                           "est_trunc");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    REQUIRE(j.at("estimates").size() == 3);
    const double expected[] = {2.0, std::exp2(0.5), 1.0};
    for (int i = 0; i < 3; ++i) {
        const double v = j.at("estimates")[i].at("value").get<double>();
        CHECK(std::fabs(v - expected[i]) < 1e-2);
        CHECK(j.at("estimates")[i].at("closed_form").at("value").get<double>() ==
              Catch::Approx(expected[i]));
    }
}

TEST_CASE("cli: csv estimate output") {
    const auto r = run_cli(
        "estimate --metric 'norm(1)' --sigma 2 --format csv --seed 9" + kSmallBudget, "est_csv");
    REQUIRE(r.exit_code == 0);
    CHECK(r.stdout_text.rfind("space,sigma,value,bracket_lo,bracket_hi,", 0) == 0);
    CHECK(r.stdout_text.find("norm(1),2,") != std::string::npos);
}

TEST_CASE("cli: unknown metric is a config error") {
    const auto r = run_cli("audit --metric banach-mystery", "bad_metric");
    CHECK(r.exit_code == 2);
    const auto r2 = run_cli("estimate --metric truncated --sigma nope", "bad_sigma");
    CHECK(r2.exit_code == 2);
}

TEST_CASE("cli: identical config gives byte-identical files") {
    const fs::path a = work_dir() / "det_a.json";
    const fs::path b = work_dir() / "det_b.json";
    const std::string args = "estimate --metric 'frac-power(0.2)' --sigma 4 --seed 31" +
                             kSmallBudget;
    REQUIRE(run_cli(args + " --out " + a.string(), "det_a").exit_code == 0);
    REQUIRE(run_cli(args + " --out " + b.string(), "det_b").exit_code == 0);
    const std::string ta = slurp(a), tb = slurp(b);
    REQUIRE(!ta.empty());
    CHECK(ta == tb);
}

TEST_CASE("cli: product command with a config file") {
    const fs::path cfg = work_dir() / "product.json";
    {
        std::ofstream f(cfg);
        f << R"json({"product": {"components": [{"metric": "norm(1)", "dim": 1},
                                                {"metric": "norm(1)", "dim": 1}],
                                 "psi": "p:1.5"},
                     "sigma": [2]})json";
    }
    const auto r = run_cli("product --config " + cfg.string() + " --seed 3" + kSmallBudget,
                           "product_cfg");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK(j.at("membership").at("status") == "PASS");
    const double v = j.at("estimates")[0].at("value").get<double>();
    CHECK(std::fabs(v - std::exp2(1.0 / 3.0)) < 1e-2);  // 2^(sigma/p - sigma + 1)
}

TEST_CASE("cli: custom psi name") {
    const auto r = run_cli(
        "product --components 'norm(1)@1,norm(1)@1' --psi custom:avg-1-inf --sigma 2 --seed 3" +
            kSmallBudget,
        "product_custom");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK(j.at("membership").at("status") == "PASS");
}

TEST_CASE("cli: basis file loading") {
    const fs::path basis = work_dir() / "basis.json";
    {
        std::ofstream f(basis);
        f << R"([{"label": "e", "embed": "1", "functional_value": "1"},
                 {"label": "sqrt2e", "embed": "1.4142135623730951", "functional_value": "0"}])";
    }
    const auto r = run_cli(
        "audit --metric rational-euclidean --basis-file " + basis.string() + " --samples 400",
        "audit_basis");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK(j.at("normability").at("verdict") == "NON_NORMABLE");
}

TEST_CASE("cli: reproduce table") {
    const auto r = run_cli("reproduce --seed 12" + kSmallBudget, "reproduce");
    REQUIRE(r.exit_code == 0);
    CHECK(r.stdout_text.rfind("space,sigma,paper_value,estimated_value,", 0) == 0);
    CHECK(r.stdout_text.find("OUT_OF_TOLERANCE") == std::string::npos);
    CHECK(r.stdout_text.find("truncated,1.5,") != std::string::npos);
    CHECK(r.stdout_text.find("p-metric(3),2,") != std::string::npos);
    CHECK(r.stdout_text.find("hamel-additive (witness seq),2,2,") != std::string::npos);
    // 18 data rows after the header
    int lines = 0;
    for (char c : r.stdout_text)
        if (c == '\n') ++lines;
    CHECK(lines == 19);
}

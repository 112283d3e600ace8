#include <catch2/catch_amalgamated.hpp>

#include "njc/njc.hpp"

using namespace njc;
using Catch::Approx;

TEST_CASE("property report serializes with the schema tag") {
    const auto s = make_truncated(2, 1.0);
    const auto rep = run_standard_audit(s, 300, 7);
    const nlohmann::json j = rep;
    CHECK(j.at("schema") == "njc-lab/1");
    CHECK(j.at("space") == "truncated");
    CHECK(j.at("samples") == 300);
    CHECK(j.at("seed") == 7);
    REQUIRE(j.contains("checks"));
    const auto& checks = j.at("checks");
    CHECK(checks.at("even").at("status") == "PASS");
    CHECK(checks.at("two_homogeneous").at("status") == "FAIL");
    CHECK(checks.at("two_homogeneous").at("witness").is_object());
    CHECK(checks.at("two_homogeneous").at("witness").at("points").is_array());
    CHECK(checks.at("even").at("margin").is_number());
}

TEST_CASE("estimate serializes bracket, witness and closed form") {
    SearchConfig cfg;
    cfg.seed = 11;
    cfg.restarts = 4;
    cfg.samples_per_restart = 256;
    cfg.refine_steps = 20;

    const auto s = make_truncated(2, 1.0);
    const auto e = estimate(s, Order(1.5), cfg, PropertyFlags{false, true, true});
    const nlohmann::json j = e;
    CHECK(j.at("schema") == "njc-lab/1");
    CHECK(j.at("sigma") == 1.5);
    CHECK(j.at("witness").contains("x"));
    CHECK(j.at("witness").contains("y"));
    CHECK(j.at("bracket").at("lo").get<double>() == Approx(std::exp2(0.5)));
    CHECK(j.at("bracket").at("hi").get<double>() == 2.0);
    CHECK(j.at("closed_form").at("value").get<double>() == Approx(std::exp2(0.5)));
    CHECK(j.at("formulation") == "FULL");
    CHECK(j.at("seed") == 11);

    // An unbounded bracket serializes its upper end as null.
    const auto nps = make_norm_plus_square(2);
    const auto e2 = estimate(nps, Order(2.0), cfg);
    const nlohmann::json j2 = e2;
    CHECK(j2.at("bracket").at("hi").is_null());
    CHECK(j2.at("closed_form").is_null());
}

TEST_CASE("reports are byte-identical for identical configs") {
    SearchConfig cfg;
    cfg.seed = 13;
    cfg.restarts = 6;
    cfg.samples_per_restart = 256;
    cfg.refine_steps = 25;

    const auto s = make_fractional_power(2, 0.2);
    const nlohmann::json a = estimate(s, Order(4.0), cfg);
    const nlohmann::json b = estimate(s, Order(4.0), cfg);
    CHECK(a.dump() == b.dump());

    const nlohmann::json ra = run_standard_audit(s, 250, 5);
    const nlohmann::json rb = run_standard_audit(s, 250, 5);
    CHECK(ra.dump() == rb.dump());
}

TEST_CASE("QVector estimates serialize rational witnesses") {
    const auto s = make_rational_euclidean_metric(default_hamel_basis());
    SearchConfig cfg;
    cfg.seed = 3;
    cfg.restarts = 2;
    cfg.samples_per_restart = 64;
    cfg.refine_steps = 5;
    const auto e = estimate(s, Order(2.0), cfg, PropertyFlags{true, true, true});
    const nlohmann::json j = e;
    CHECK(j.at("witness").at("x").is_object());
    CHECK(e.value == Approx(1.0).margin(1e-9));
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "njc/njc.hpp"

using namespace njc;
using Catch::Approx;

namespace {

SearchConfig quick_config(uint64_t seed = 1) {
    SearchConfig cfg;
    cfg.seed = seed;
    cfg.restarts = 8;
    cfg.samples_per_restart = 512;
    cfg.refine_steps = 50;
    return cfg;
}

bool is_zero_vec(const Vec& v) {
    for (double c : v)
        if (c != 0.0) return false;
    return true;
}

}  // namespace

TEST_CASE("estimate reproduces the worked closed forms") {
    SearchConfig cfg;  // default budget
    cfg.seed = 7;

    const auto trunc = make_truncated(2, 1.0);
    const auto et = estimate(trunc, Order(1.0), cfg, PropertyFlags{false, true, true});
    CHECK(et.value == Approx(2.0).margin(1e-3));
    CHECK(et.value <= 2.0 + 1e-6);
    // The supremum is attained only against the zero vector.
    CHECK((is_zero_vec(et.witness.y) || is_zero_vec(et.witness.x)));

    const auto frac = make_fractional_power(2, 0.2);
    const auto ef = estimate(frac, Order(4.0), cfg, PropertyFlags{false, true, true});
    CHECK(ef.value == Approx(0.25).margin(1e-3));
    CHECK(ef.value <= 0.25 + 1e-6);

    const auto euclid = make_norm_induced(2, 2.0);
    const auto ee = estimate(euclid, Order(2.0), cfg, PropertyFlags{true, true, true});
    CHECK(ee.value == Approx(1.0).margin(1e-6));
}

TEST_CASE("estimate value equals the recomputed witness ratio and respects brackets") {
    const std::vector<MetricSpace<Vec>> spaces = {
        make_truncated(2, 1.0), make_fractional_power(2, 0.2), make_norm_induced(2, 1.0),
        make_norm_induced(2, 3.0), make_norm_plus_square(2)};
    const auto cfg = quick_config(3);
    for (const auto& s : spaces) {
        for (double sigma : {1.0, 1.5, 2.0, 4.0}) {
            const auto e = estimate(s, Order(sigma), cfg);
            CHECK(e.value ==
                  Approx(gauge_ratio(s, Order(sigma), e.witness.x, e.witness.y)).epsilon(1e-12));
            CHECK(e.value >= std::exp2(2.0 - sigma) - 1e-9);
        }
    }
}

TEST_CASE("estimates stay under the theorem cap for subadditive even gauges") {
    const auto cfg = quick_config(11);
    for (const auto& s : {make_truncated(2, 1.0), make_fractional_power(2, 0.2),
                          make_norm_induced(2, 1.0), make_norm_induced(2, kInf)}) {
        for (double sigma : {1.0, 2.0, 3.0}) {
            const auto e = estimate(s, Order(sigma), cfg, PropertyFlags{false, true, true});
            CHECK(e.bracket.hi == 2.0);
            CHECK(e.value <= 2.0 + 1e-6);
        }
    }
}

TEST_CASE("closed-form agreement at default budget") {
    SearchConfig cfg;
    cfg.seed = 5;
    for (const auto& [space, sigma] :
         std::vector<std::pair<MetricSpace<Vec>, double>>{{make_truncated(2, 1.0), 1.5},
                                                          {make_norm_induced(2, 1.0), 2.0},
                                                          {make_norm_induced(2, 3.0), 2.0}}) {
        const auto cf = closed_form_lookup(space, sigma);
        REQUIRE(cf.has_value());
        REQUIRE(cf->search_attainable);
        const auto e = estimate(space, Order(sigma), cfg);
        CHECK(e.value == Approx(cf->value).margin(1e-2));
        CHECK(e.value >= cf->value - 1e-2);  // witness certifies the lower bound
    }
}

TEST_CASE("estimates are deterministic and parallel equals serial") {
    const auto s = make_norm_induced(2, 3.0);
    auto cfg = quick_config(77);
    const auto a = estimate(s, Order(2.0), cfg);
    const auto b = estimate(s, Order(2.0), cfg);
    CHECK(a.value == b.value);
    CHECK(a.witness.x == b.witness.x);
    CHECK(a.witness.y == b.witness.y);

    cfg.parallel = false;
    const auto c = estimate(s, Order(2.0), cfg);
    CHECK(a.value == c.value);
    CHECK(a.witness.x == c.witness.x);
    CHECK(a.witness.y == c.witness.y);
}

TEST_CASE("larger budgets never lower the estimate (seed-prefix protocol)") {
    const auto s = make_norm_plus_square(2);
    auto small = quick_config(13);
    small.restarts = 4;
    auto large = small;
    large.restarts = 16;
    const double v_small = estimate(s, Order(2.0), small).value;
    const double v_large = estimate(s, Order(2.0), large).value;
    CHECK(v_large >= v_small);

    auto more_refine = small;
    more_refine.refine_steps = 200;
    CHECK(estimate(s, Order(2.0), more_refine).value >= v_small);
}

TEST_CASE("estimation fails when every pair is degenerate") {
    auto dead = make_norm_induced(2, 2.0);
    dead.id = "zero-metric";
    dead.dist = [](const Vec&, const Vec&) { return 0.0; };
    dead.closed_form = nullptr;
    CHECK_THROWS_AS(estimate(dead, Order(2.0), quick_config()), EstimationFailed);
}

TEST_CASE("unit-sphere formulation") {
    SearchConfig cfg;
    cfg.seed = 21;

    const auto euclid = make_norm_induced(2, 2.0);
    const auto eu = estimate_unit_sphere(euclid, Order(2.0), cfg, true,
                                         PropertyFlags{true, true, true});
    CHECK(eu.formulation == Formulation::UNIT_SPHERE);
    CHECK(eu.value == Approx(1.0).margin(1e-6));

    const auto sum = make_norm_induced(2, 1.0);
    CHECK(estimate_unit_sphere(sum, Order(2.0), cfg, true).value == Approx(2.0).margin(1e-2));

    const auto maxn = make_norm_induced(2, kInf);
    CHECK(estimate_unit_sphere(maxn, Order(2.0), cfg, true).value == Approx(2.0).margin(1e-2));

    CHECK_THROWS_AS(estimate_unit_sphere(make_truncated(2, 1.0), Order(2.0), cfg, false),
                    FormulationUnavailable);
}

TEST_CASE("unit-sphere and full formulations agree under absolute homogeneity") {
    SearchConfig cfg;
    cfg.seed = 22;
    for (double p : {1.0, 2.0, 3.0}) {
        const auto s = make_norm_induced(2, p);
        for (double sigma : {1.5, 2.0}) {
            const double full = estimate(s, Order(sigma), cfg).value;
            const double sphere = estimate_unit_sphere(s, Order(sigma), cfg, true).value;
            CHECK(std::fabs(full - sphere) <= 2e-2);
        }
    }
}

TEST_CASE("witness sequences certify limits that search cannot reach") {
    SECTION("evenness-violating metric: gamma_k -> (2^s + 5^s) / 2^(2s-1)") {
        const auto s = make_asymmetric_sum(2);
        const Vec e = unit_axis(2, 0);
        const auto gen = [e](int k) {
            return std::make_pair(e, point_scale(e, static_cast<double>(k)));
        };
        const auto rep = witness_sequence_bound<Vec>(gen, s, Order(1.0), 1000);
        // closed form of the chain at sigma = 1: (7k-3)/(2k+2)
        CHECK(rep.entries.back().gamma == Approx(6997.0 / 2002.0));
        CHECK(rep.best >= 3.49);
        CHECK(rep.best < 3.5);
    }

    SECTION("evenness-violating chain matches its closed formula at any sigma") {
        const auto s = make_asymmetric_sum(2);
        const Vec e = unit_axis(2, 0);
        for (double sigma : {1.0, 2.0, 3.0}) {
            for (int k : {2, 10, 100, 1000}) {
                const double gamma =
                    gauge_ratio(s, Order(sigma), e, point_scale(e, double(k)));
                const double formula =
                    (std::pow(2.0 * k + 2.0, sigma) + std::pow(5.0 * k - 5.0, sigma)) /
                    (std::exp2(sigma - 1.0) * (std::exp2(sigma) + std::pow(2.0 * k, sigma)));
                CHECK(gamma == Approx(formula).epsilon(1e-12));
            }
        }
        // limit (2^s + 5^s) / 2^(2s-1): 3.625 at sigma 2, approached from below
        const double g1000 = gauge_ratio(s, Order(2.0), e, point_scale(e, 1000.0));
        CHECK(g1000 >= 3.6);
        CHECK(g1000 < 29.0 / 8.0);
    }

    SECTION("norm-plus-square fixed witness (e,e) gives (3/2)^sigma") {
        const auto s = make_norm_plus_square(2);
        const Vec e = unit_axis(2, 0);
        const auto gen = [e](int) { return std::make_pair(e, e); };
        const auto rep = witness_sequence_bound<Vec>(gen, s, Order(2.0), 3);
        CHECK(rep.best == Approx(2.25));
    }

    SECTION("degenerate entries are recorded and skipped") {
        const auto s = make_norm_induced(2, 2.0);
        const auto gen = [&s](int k) {
            if (k == 2) return std::make_pair(s.zero, s.zero);
            return std::make_pair(unit_axis(2, 0), unit_axis(2, 1));
        };
        const auto rep = witness_sequence_bound<Vec>(gen, s, Order(2.0), 3);
        CHECK(rep.entries.at(1).skipped);
        CHECK(rep.best == Approx(1.0));
    }
}

TEST_CASE("Hamel estimate stays under the cap; closed form marked unreachable") {
    const auto s = make_hamel_additive_metric(default_hamel_basis());
    auto cfg = quick_config(31);
    cfg.restarts = 4;
    cfg.samples_per_restart = 256;
    cfg.refine_steps = 25;
    const auto e = estimate(s, Order(2.0), cfg, PropertyFlags{true, true, true});
    CHECK(e.value <= 2.0 + 1e-9);
    REQUIRE(e.closed_form.has_value());
    CHECK(e.closed_form->value == 2.0);
    CHECK_FALSE(e.closed_form->search_attainable);
}

TEST_CASE("parallelogram + 2-homogeneity forces the estimate to 2^(1-s/2)") {
    // Both audits pass for the Euclidean plane at sigma = 2.
    const auto s = make_norm_induced(2, 2.0);
    REQUIRE(check_two_homogeneous(s, 400, 5).status == CheckStatus::PASS);
    REQUIRE(check_parallelogram(s, Order(2.0), 400, 5).status == CheckStatus::PASS);
    const auto e = estimate(s, Order(2.0), quick_config(5));
    CHECK(e.value == Approx(std::exp2(1.0 - 1.0)).margin(1e-6));
}

TEST_CASE("search config validation") {
    SearchConfig cfg;
    cfg.restarts = 0;
    CHECK_THROWS_AS(estimate(make_norm_induced(2, 2.0), Order(2.0), cfg), ContractViolation);
    cfg = SearchConfig{};
    cfg.step_decay = 1.0;
    CHECK_THROWS_AS(estimate(make_norm_induced(2, 2.0), Order(2.0), cfg), ContractViolation);
    cfg = SearchConfig{};
    cfg.scales.clear();
    CHECK_THROWS_AS(estimate(make_norm_induced(2, 2.0), Order(2.0), cfg), ContractViolation);
}

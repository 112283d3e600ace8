#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "njc/njc.hpp"

using namespace njc;
using Catch::Approx;

namespace {

constexpr uint64_t kSeed = 99;

QVector qv(std::initializer_list<std::pair<std::string, Rational>> init) {
    return make_qvector(init);
}

BasisDecl three_label_basis() {
    BasisDecl b;
    b.labels.push_back({"e", 1.0, Rational(1)});
    b.labels.push_back({"sqrt2e", std::sqrt(2.0), Rational(0)});
    b.labels.push_back({"sqrt3e", std::sqrt(3.0), Rational(0)});
    return b;
}

QVector random_qvector(const BasisDecl& basis, Rng& rng) {
    QVector v;
    for (const auto& l : basis.labels) {
        const int num = rng.uniform_int(-40, 40);
        const int den = rng.uniform_int(1, 12);
        if (num != 0) v.coeffs[l.name] = Rational(num, den);
    }
    return v;
}

}  // namespace

TEST_CASE("additive functional is exact") {
    const BasisDecl basis = default_hamel_basis();
    CHECK(additive_functional(basis, qv({{"e", Rational(1)}})) == Rational(1));
    CHECK(additive_functional(basis, qv({{"e", Rational(3)}, {"sqrt2e", Rational(2)}})) ==
          Rational(3));
    CHECK(additive_functional(basis, qv({{"sqrt2e", Rational(7, 3)}})) == Rational(0));
    CHECK_THROWS_AS(additive_functional(basis, qv({{"mystery", Rational(1)}})),
                    ContractViolation);

    // phi(q b) = q g(b) for single labels.
    for (int num = -6; num <= 6; ++num) {
        const Rational q(num, 5);
        CHECK(additive_functional(basis, qv({{"e", q}})) == q * Rational(1));
    }

    // Exact additivity and Q-homogeneity on random vectors.
    Rng rng(kSeed);
    const BasisDecl b3 = three_label_basis();
    for (int i = 0; i < 300; ++i) {
        const QVector x = random_qvector(b3, rng);
        const QVector y = random_qvector(b3, rng);
        CHECK(additive_functional(b3, point_add(x, y)) ==
              additive_functional(b3, x) + additive_functional(b3, y));
        const Rational q(rng.uniform_int(-20, 20), rng.uniform_int(1, 9));
        CHECK(additive_functional(b3, scale_exact(x, q)) == q * additive_functional(b3, x));
    }
}

TEST_CASE("Hamel-additive gauge values") {
    const BasisDecl basis = default_hamel_basis();
    const auto s = make_hamel_additive_metric(basis);
    CHECK(gauge(s, qv({{"e", Rational(1)}})) == Approx(2.0));
    CHECK(gauge(s, qv({{"sqrt2e", Rational(1)}})) == Approx(std::sqrt(2.0)));
    CHECK(gauge(s, QVector{}) == 0.0);
    CHECK_THROWS_AS(gauge(s, qv({{"zeta", Rational(1)}})), ContractViolation);
}

TEST_CASE("Hamel-additive gauge structure") {
    const auto s = make_hamel_additive_metric(default_hamel_basis());
    const GaugeFunction<QVector> f(s);
    Rng rng(kSeed + 1);
    const BasisDecl basis = default_hamel_basis();
    for (int i = 0; i < 300; ++i) {
        const QVector x = random_qvector(basis, rng);
        const QVector y = random_qvector(basis, rng);
        // even, exactly
        CHECK(f(point_neg(x)) == f(x));
        // subadditive within 1e-12 relative (real part assembled in doubles)
        const double lhs = f(point_add(x, y)), rhs = f(x) + f(y);
        CHECK(lhs <= rhs + 1e-12 * std::max(1.0, rhs));
        // exactly Q+-homogeneous
        const Rational q(rng.uniform_int(0, 15), rng.uniform_int(1, 7));
        const double fq = f(scale_exact(x, q));
        CHECK(fq == Approx(to_double(q) * f(x)).epsilon(1e-12).margin(1e-300));
    }
}

TEST_CASE("Hamel-additive audits: the profile the example proves") {
    const auto s = make_hamel_additive_metric(default_hamel_basis());
    Tolerance strict;
    strict.rel = 1e-12;
    CHECK(check_metric_axioms(s, 600, kSeed, strict).status == CheckStatus::PASS);
    CHECK(check_property(s, Property::even, 600, kSeed, std::nullopt, strict).status ==
          CheckStatus::PASS);
    CHECK(check_property(s, Property::subadditive, 600, kSeed, std::nullopt, strict).status ==
          CheckStatus::PASS);
    CHECK(check_property(s, Property::translation_invariant, 600, kSeed, std::nullopt,
                         strict).status == CheckStatus::PASS);
    CHECK(check_two_homogeneous(s, 600, kSeed, strict).status == CheckStatus::PASS);

    // Non-normability arrives through the registered sqrt(2) witness.
    const auto rep = run_standard_audit(s, 600, kSeed);
    CHECK(rep.passed("equivalence_consistency"));
    const auto verdict = normability_verdict(s, rep);
    REQUIRE(verdict.verdict == Normability::NON_NORMABLE);
    REQUIRE(verdict.witness.has_value());
    // Replay: f(sqrt2e-unit) = sqrt(2) while sqrt(2) f(e-unit) = 2 sqrt(2).
    const QVector base = verdict.witness->points.at(0).get<QVector>();
    const QVector scaled = verdict.witness->points.at(1).get<QVector>();
    const double lambda = verdict.witness->scalars.at(0);
    CHECK(gauge(s, scaled) == Approx(std::sqrt(2.0)));
    CHECK(lambda * gauge(s, base) == Approx(2.0 * std::sqrt(2.0)));
}

TEST_CASE("rational-Euclidean gauge values") {
    const BasisDecl basis = default_hamel_basis();
    const auto s = make_rational_euclidean_metric(basis);
    CHECK(gauge(s, qv({{"e", Rational(1)}})) == Approx(1.0));
    CHECK(gauge(s, qv({{"sqrt2e", Rational(1)}})) == Approx(1.0));
    CHECK(gauge(s, qv({{"e", Rational(3)}, {"sqrt2e", Rational(4)}})) == Approx(5.0));
    CHECK_THROWS_AS(gauge(s, qv({{"zeta", Rational(1)}})), ContractViolation);
}

TEST_CASE("rational parallelogram identity is exact") {
    CHECK(rational_parallelogram_exact(qv({{"e", Rational(1)}}), qv({{"sqrt2e", Rational(1)}})));
    const QVector x = qv({{"e", Rational(5, 3)}, {"sqrt2e", Rational(-7, 2)}});
    CHECK(rational_parallelogram_exact(x, x));

    Rng rng(kSeed + 2);
    const BasisDecl b3 = three_label_basis();
    for (int i = 0; i < 2000; ++i) {
        const QVector x1 = random_qvector(b3, rng);
        const QVector y1 = random_qvector(b3, rng);
        REQUIRE(rational_parallelogram_exact(x1, y1));
    }
}

TEST_CASE("rational-Euclidean sampled parallelogram and estimate bracket") {
    const auto s = make_rational_euclidean_metric(default_hamel_basis());
    CHECK(check_parallelogram(s, Order(2.0), 600, kSeed).status == CheckStatus::PASS);
}

TEST_CASE("Hamel witness generator") {
    const BasisDecl basis = default_hamel_basis();

    SECTION("k = 1 satisfies the construction contract") {
        const auto [x1, y1] = hamel_witness_generator(basis, 1);
        CHECK(additive_functional(basis, x1) == Rational(1));
        CHECK(std::fabs(embed_value(basis, x1)) <= 1.0);
        CHECK(additive_functional(basis, y1) == Rational(0));
    }

    SECTION("phi(x_k) = k and |embed| <= 1 for a k sweep") {
        for (int k : {2, 5, 17, 100, 731, 1000}) {
            const auto [xk, yk] = hamel_witness_generator(basis, k);
            CHECK(additive_functional(basis, xk) == Rational(k));
            CHECK(std::fabs(embed_value(basis, xk)) <= 1.0);
        }
    }

    SECTION("gamma_k respects the example's explicit lower-bound chain") {
        const auto s = make_hamel_additive_metric(basis);
        for (double sigma : {1.0, 2.0, 3.0}) {
            for (int k : {1, 3, 10, 50, 100, 200}) {
                const auto [xk, yk] = hamel_witness_generator(basis, k);
                const double gamma = gauge_ratio(s, Order(sigma), xk, yk);
                const double bound =
                    (std::pow(2.0 * k, sigma) + std::pow(2.0 * k - 2.0, sigma)) /
                    (std::exp2(sigma - 1.0) * 2.0 * std::pow(1.0 + k, sigma));
                CHECK(gamma >= bound - 1e-9);
            }
        }
    }

    SECTION("gamma_k approaches 2 at sigma = 2") {
        const auto s = make_hamel_additive_metric(basis);
        for (int k : {100, 400, 1000}) {
            const auto [xk, yk] = hamel_witness_generator(basis, k);
            CHECK(gauge_ratio(s, Order(2.0), xk, yk) >= 1.9);
        }
        const auto [x1000, y1000] = hamel_witness_generator(basis, 1000);
        CHECK(gauge_ratio(s, Order(2.0), x1000, y1000) >= 1.99);
    }

    SECTION("preconditions") {
        CHECK_THROWS_AS(hamel_witness_generator(basis, 0), ContractViolation);
        BasisDecl bad;
        bad.labels.push_back({"e", 1.0, Rational(1)});
        CHECK_THROWS_AS(hamel_witness_generator(bad, 3), ContractViolation);
    }
}

TEST_CASE("polarization of the rational-Euclidean gauge is the coefficient dot product") {
    const BasisDecl b3 = three_label_basis();
    const auto s = make_rational_euclidean_metric(b3);
    Rng rng(kSeed + 9);
    for (int i = 0; i < 300; ++i) {
        const QVector x = random_qvector(b3, rng);
        const QVector y = random_qvector(b3, rng);
        Rational dot_exact(0);
        for (const auto& [label, cx] : x.coeffs) {
            auto it = y.coeffs.find(label);
            if (it != y.coeffs.end()) dot_exact += cx * it->second;
        }
        CHECK(polarization(s, x, y) ==
              Approx(to_double(dot_exact)).epsilon(1e-9).margin(1e-9));
    }
}

TEST_CASE("QVector JSON round trip") {
    const QVector x = qv({{"e", Rational(-7, 3)}, {"sqrt2e", Rational(22, 5)}});
    const nlohmann::json j = x;
    CHECK(j.at("e").get<std::string>() == "-7/3");
    const QVector back = j.get<QVector>();
    CHECK(back == x);
}

TEST_CASE("basis declarations load from JSON") {
    const nlohmann::json j = nlohmann::json::array(
        {{{"label", "e"}, {"embed", "1"}, {"functional_value", "1"}},
         {{"label", "sqrt2e"},
          {"embed", "1.4142135623730951"},
          {"functional_value", "0/1"}}});
    const BasisDecl b = basis_from_json(j);
    REQUIRE(b.labels.size() == 2);
    CHECK(b.at("sqrt2e").embed == Approx(std::sqrt(2.0)));
    CHECK(b.at("e").functional_value == Rational(1));

    // Round trip through basis_to_json.
    const BasisDecl b2 = basis_from_json(basis_to_json(b));
    CHECK(b2.at("sqrt2e").embed == b.at("sqrt2e").embed);

    // The generator accepts the loaded declaration (embeds 1 and sqrt 2).
    const auto [x3, y3] = hamel_witness_generator(b2, 3);
    CHECK(additive_functional(b2, x3) == Rational(3));

    CHECK_THROWS_AS(basis_from_json(nlohmann::json::array()), ContractViolation);
}

TEST_CASE("exact arithmetic invariants of QVector") {
    Rng rng(kSeed + 3);
    const BasisDecl b3 = three_label_basis();
    for (int i = 0; i < 200; ++i) {
        const QVector x = random_qvector(b3, rng);
        const QVector y = random_qvector(b3, rng);
        CHECK(point_sub(point_add(x, y), y) == x);
        // No explicit zero coefficients are ever stored.
        const QVector z = point_sub(x, x);
        CHECK(z.is_zero());
        for (const auto& [label, c] : point_add(x, y).coeffs) CHECK(c != 0);
    }
}

TEST_CASE("rational helpers") {
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-1.25") == Rational(-5, 4));
    CHECK(parse_rational(" 7 ") == Rational(7));
    CHECK_THROWS_AS(parse_rational("x/y"), ContractViolation);
    CHECK_THROWS_AS(parse_rational("1/0"), ContractViolation);
    CHECK(to_fraction_string(Rational(-10, 4)) == "-5/2");
    CHECK(to_fraction_string(Rational(6, 3)) == "2");
    CHECK(rational_from_double(0.5) == Rational(1, 2));
    CHECK(rational_from_double(-0.75) == Rational(-3, 4));
    CHECK(to_double(rational_from_double(0.1)) == 0.1);  // exact round trip
}

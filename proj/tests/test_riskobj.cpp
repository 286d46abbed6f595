#include <doctest.h>

#include <cmath>
#include <random>

#include "pelve/riskobj.hpp"

namespace pelve {

TEST_CASE("empirical upper quantile is the right-continuous step") {
    const RiskObject r = EmpiricalRisk({2.0, 0.0, 1.0});
    CHECK(upper_quantile(r, 0.5) == 1.0);
    CHECK(upper_quantile(r, 0.1) == 0.0);
    CHECK(upper_quantile(r, 1.0 / 3.0) == 1.0);
    CHECK(upper_quantile(r, 0.999) == 2.0);
    CHECK(mean(r) == doctest::Approx(1.0));
}

TEST_CASE("upper quantile rejects levels outside the open unit interval") {
    const RiskObject r = ParametricRisk::normal(0.0, 1.0);
    CHECK_THROWS_AS(upper_quantile(r, 0.0), DomainError);
    CHECK_THROWS_AS(upper_quantile(r, 1.0), DomainError);
    CHECK_THROWS_AS(upper_quantile(r, -0.2), DomainError);
    CHECK_THROWS_AS(upper_quantile(EmpiricalRisk({1.0}), 1.5), DomainError);
}

TEST_CASE("constant risk") {
    const RiskObject r = ParametricRisk::constant(5.0);
    for (double u : {0.001, 0.3, 0.999}) CHECK(upper_quantile(r, u) == 5.0);
    CHECK(mean(r) == 5.0);
}

TEST_CASE("pareto loss quantile in payoff orientation") {
    const RiskObject r = ParametricRisk::pareto_loss(2.0, 1.0);
    // q_X(0.99) = -q_Y(0.01) = -(0.99)^(-1/2)
    CHECK(upper_quantile(r, 0.99) == doctest::Approx(-1.0050378152592121).epsilon(1e-13));

    // Cross-check against the inverted empirical CDF of 10^7 samples.
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::size_t n = 10'000'000;
    std::vector<double> payoffs(n);
    for (auto& x : payoffs) x = -std::pow(1.0 - unif(gen), -0.5);
    const RiskObject emp = EmpiricalRisk(std::move(payoffs));
    CHECK(upper_quantile(emp, 0.99) == doctest::Approx(upper_quantile(r, 0.99)).epsilon(1e-3));
    CHECK(upper_quantile(emp, 0.5) == doctest::Approx(upper_quantile(r, 0.5)).epsilon(1e-3));
}

TEST_CASE("means of parametric families") {
    CHECK(mean(ParametricRisk::gamma_loss(2.0, 3.0)) == doctest::Approx(-6.0));
    CHECK(mean(ParametricRisk::normal(0.75, 0.4)) == doctest::Approx(0.75));
    CHECK(mean(ParametricRisk::pareto_loss(3.0, 2.0)) == doctest::Approx(-3.0));
    CHECK(mean(ParametricRisk::gpd_loss(0.25, 10.0, 3.0)) == doctest::Approx(-14.0));
    CHECK(mean(ParametricRisk::lognormal_loss(0.0, 0.5)) == doctest::Approx(-std::exp(0.125)));
}

TEST_CASE("infinite-mean parameters are rejected") {
    CHECK_THROWS_AS(ParametricRisk::pareto_loss(1.0), InfiniteMeanError);
    CHECK_THROWS_AS(ParametricRisk::pareto_loss(0.5), InfiniteMeanError);
    CHECK_THROWS_AS(ParametricRisk::gpd_loss(1.2, 0.0, 1.0), InfiniteMeanError);
    CHECK_THROWS_AS(ParametricRisk::student_t(1.0), InfiniteMeanError);
    CHECK_THROWS_AS(EmpiricalRisk({}), DomainError);
}

TEST_CASE("quantile complement agrees with the direct quantile") {
    for (const auto& r : {ParametricRisk::normal(1.0, 2.0), ParametricRisk::student_t(4.0, 0.0, 1.0),
                          ParametricRisk::gamma_loss(3.0, 2.0), ParametricRisk::lognormal_loss(0.2, 0.7),
                          ParametricRisk::gpd_loss(0.3, 1.0, 2.0), ParametricRisk::pareto_loss(2.5, 1.0)}) {
        CAPTURE(r.describe());
        for (double v : {0.4, 0.1, 0.01}) CHECK(r.upper_quantile_complement(v) == doctest::Approx(r.upper_quantile(1.0 - v)));
    }
}

TEST_CASE("upper quantiles are increasing and right-continuous") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> unif(0.01, 0.98);
    const std::vector<RiskObject> risks{EmpiricalRisk({3.0, -1.0, 0.5, 0.5, 7.0}), ParametricRisk::normal(0, 1),
                                        ParametricRisk::gamma_loss(2.0, 1.0), ParametricRisk::gpd_loss(0.2, 0, 1)};
    for (const auto& r : risks) {
        for (int i = 0; i < 200; ++i) {
            const double u = unif(gen);
            const double q = upper_quantile(r, u);
            CHECK(upper_quantile(r, u + 0.005) >= q);
            double eps = 1e-3;
            for (int k = 0; k < 6; ++k, eps /= 10) CHECK(upper_quantile(r, u + eps) >= q);
            CHECK(upper_quantile(r, u + 1e-12) == doctest::Approx(q).epsilon(1e-6));
        }
    }
}

TEST_CASE("tabulated ES curve interpolates t f(t) linearly") {
    // ES curve of the three atoms {0, 1, 2}.
    std::vector<double> levels, values;
    for (int k = 1; k <= 300; ++k) {
        const double t = k / 300.0;
        levels.push_back(t);
        values.push_back(t <= 1.0 / 3 ? 0.0 : t <= 2.0 / 3 ? 1.0 / (3 * t) - 1.0 : 1.0 / t - 2.0);
    }
    const EsCurveRisk risk(EsCurveTable(levels, values));
    CHECK(risk.is_tabulated());
    CHECK(risk.es(0.5) == doctest::Approx(-1.0 / 3.0));
    CHECK(risk.upper_quantile(0.1) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(risk.upper_quantile(0.5) == doctest::Approx(1.0));
    CHECK(risk.upper_quantile(0.9) == doctest::Approx(2.0));
    CHECK(risk.mean() == doctest::Approx(1.0));
}

TEST_CASE("curve table validation") {
    CHECK_THROWS_AS(EsCurveTable({0.2, 0.1}, {1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(EsCurveTable({0.0, 0.1}, {1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(EsCurveTable({0.5, 1.5}, {1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(EsCurveTable({0.5, 0.7}, {1.0}), DomainError);
}

}  // namespace pelve

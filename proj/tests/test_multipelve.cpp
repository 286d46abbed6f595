#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pelve/measures.hpp"
#include "pelve/multipelve.hpp"

namespace pelve {

namespace {

std::vector<RiskObject> pareto_pair() { return {ParametricRisk::pareto_loss(2.0), ParametricRisk::pareto_loss(3.0)}; }

// One payoff of -100 and 99 payoffs of 1: at level 0.05, VaR = -1 < E[-X] = 0.01,
// so no c reaches the VaR.
RiskObject left_skewed() {
    std::vector<double> xs(100, 1.0);
    xs[0] = -100.0;
    return EmpiricalRisk(xs);
}

}  // namespace

TEST_CASE("weights") {
    CHECK_THROWS_AS(Weights({0.5, 0.6}), DomainError);
    CHECK_THROWS_AS(Weights({-0.1, 1.1}), DomainError);
    CHECK_THROWS_AS(Weights(std::vector<double>{}), DomainError);
    const std::vector<double> assets{290685, 57851, 41133, 83914, 26179, 18603};
    const auto w = Weights::proportional(assets);
    const double expected[] = {.5608, .1116, .0794, .1619, .0505, .0359};
    for (std::size_t i = 0; i < 6; ++i) CHECK(w[i] == doctest::Approx(expected[i]).epsilon(1e-3));
    const auto inv = Weights::inverse_proportional(assets);
    const double expected_inv[] = {.0231, .1161, .1633, .0800, .2565, .3610};
    for (std::size_t i = 0; i < 6; ++i) CHECK(inv[i] == doctest::Approx(expected_inv[i]).epsilon(2e-3));
    CHECK_THROWS_AS(Weights::proportional(std::vector<double>{1.0, 0.0}), DomainError);
}

TEST_CASE("aggregation functions") {
    CHECK(apply(AggregationFn::identity, -2.0) == -2.0);
    CHECK(apply(AggregationFn::positive_part, -2.0) == 0.0);
    CHECK(apply(AggregationFn::positive_part, 3.0) == 3.0);
    CHECK(parse_aggregation("pospart") == AggregationFn::positive_part);
    CHECK(parse_aggregation("identity") == AggregationFn::identity);
    CHECK_THROWS_AS(parse_aggregation("relu"), DomainError);
}

TEST_CASE("A-PELVE") {
    const auto n = ParametricRisk::normal(0, 1);
    const std::vector<RiskObject> twins{n, n};
    CHECK(a_pelve(twins, 0.05, Weights({0.3, 0.7})).value() == doctest::Approx(pelve(n, 0.05).value()));
    CHECK(a_pelve(pareto_pair(), 0.05, Weights::equal(2)).value() == doctest::Approx(3.6875).epsilon(1e-7));

    const std::vector<RiskObject> mixed{ParametricRisk::constant(5.0), left_skewed()};
    CHECK_FALSE(a_pelve(mixed, 0.05, Weights::equal(2)).is_finite());
    CHECK_THROWS_AS(a_pelve(mixed, 0.05, Weights::equal(3)), DomainError);
}

TEST_CASE("WC-PELVE") {
    CHECK(wc_pelve(pareto_pair(), 0.05).value() == doctest::Approx(4.0).epsilon(1e-7));
    CHECK(wc_pelve_by_definition(pareto_pair(), 0.05).value() == doctest::Approx(4.0).epsilon(1e-7));
    const std::vector<RiskObject> mixed{ParametricRisk::constant(5.0), left_skewed()};
    CHECK_FALSE(wc_pelve(mixed, 0.05).is_finite());
    CHECK_FALSE(wc_pelve_by_definition(mixed, 0.05).is_finite());
}

TEST_CASE("MSE-PELVE") {
    SUBCASE("identical components") {
        const auto t = ParametricRisk::student_t(4.0);
        const std::vector<RiskObject> twins{t, t, t};
        const auto r = mse_pelve(twins, 0.05, Weights({0.2, 0.5, 0.3}));
        CHECK(r.leftmost == doctest::Approx(pelve(t, 0.05).value()).epsilon(1e-6));
        CHECK(r.objective_at_min == doctest::Approx(0.0).epsilon(1e-8));
    }
    SUBCASE("pareto pair lies strictly between the individual values") {
        const auto risks = pareto_pair();
        const auto w = Weights::equal(2);
        const double l = 0.05;
        const auto r = mse_pelve(risks, l, w);
        CHECK(r.leftmost > 3.375);
        CHECK(r.leftmost < 4.0);
        // Brute-force scan of the objective over 10^6 points of [1, 20].
        double best_c = 1.0, best = mse_objective(risks, l, w, 1.0);
        for (std::size_t j = 1; j <= 1'000'000; ++j) {
            const double c = 1.0 + 19.0 * j / 1e6;
            const double v = mse_objective(risks, l, w, c);
            if (v < best) best = v, best_c = c;
        }
        CHECK(r.leftmost == doctest::Approx(best_c).epsilon(2e-5));
        CHECK(r.objective_at_min <= best + 1e-12);
    }
    CHECK_THROWS_AS(mse_pelve(pareto_pair(), 0.05, Weights::equal(2), {.grid_size = 8}), DomainError);
}

TEST_CASE("Sys-PELVE") {
    SUBCASE("single risk with identity equals pelve") {
        for (const auto& r : {ParametricRisk::normal(0.3, 2.0), ParametricRisk::gamma_loss(2.0, 1.0)}) {
            const std::vector<RiskObject> one{r};
            CHECK(sys_pelve(one, 0.05, AggregationFn::identity).value() ==
                  doctest::Approx(pelve(r, 0.05).value()).epsilon(1e-7));
        }
    }
    SUBCASE("positive part below pelve") {
        const std::vector<RiskObject> one{ParametricRisk::normal(0.75, 0.4)};
        const double sys = sys_pelve(one, 0.05, AggregationFn::positive_part).value();
        auto h = [](double c) { return oracle::normal_pdf(oracle::normal_quantile(1.0 - 0.05 * c)) / (0.05 * c) - 1.875; };
        CHECK(sys == doctest::Approx(oracle::bisect_decreasing(h, 1.0, 20.0)).epsilon(1e-7));
        CHECK(sys < pelve(one[0], 0.05).value());
    }
    SUBCASE("everything already negative") {
        const std::vector<RiskObject> one{ParametricRisk::normal(10.0, 0.4)};
        CHECK(es(one[0], 0.05) < 0.0);
        CHECK(sys_pelve(one, 0.05, AggregationFn::positive_part).value() == 1.0);
    }
}

TEST_CASE("A-PELVE bounds and MSE global minimum on random instances") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 30; ++rep) {
        std::vector<RiskObject> risks;
        std::vector<double> raw;
        const int n = 2 + rep % 4;
        for (int i = 0; i < n; ++i) {
            if (i % 2 == 0) risks.push_back(ParametricRisk::normal(u(gen), 0.5 + u(gen)));
            else risks.push_back(ParametricRisk::gamma_loss(1.0 + 4.0 * u(gen), 1.0));
            raw.push_back(0.1 + u(gen));
        }
        const auto w = Weights::proportional(raw);
        const double l = 0.01 + 0.1 * u(gen);
        double lo = 1e300, hi = 0.0;
        for (const auto& r : risks) {
            lo = std::min(lo, pelve(r, l).value());
            hi = std::max(hi, pelve(r, l).value());
        }
        const double a = a_pelve(risks, l, w).value();
        CHECK(a >= lo - 1e-12);
        CHECK(a <= hi + 1e-12);

        const auto m = mse_pelve(risks, l, w);
        CHECK(m.plateau_lo <= m.plateau_hi);
        const double slack = 1e-9 * (1.0 + m.objective_at_min);
        for (int j = 0; j <= 500; ++j) {
            const double c = 1.0 + (1.0 / l - 1.0) * j / 500.0;
            CHECK(mse_objective(risks, l, w, c) >= m.objective_at_min - slack);
        }
    }
}

TEST_CASE("methods agree on identical marginals") {
    const auto r = ParametricRisk::gamma_loss(3.0, 2.0);
    const std::vector<RiskObject> same{r, r};
    const auto w = Weights::equal(2);
    const double p = pelve(r, 0.02).value();
    CHECK(a_pelve(same, 0.02, w).value() == doctest::Approx(p).epsilon(1e-9));
    CHECK(wc_pelve(same, 0.02).value() == doctest::Approx(p).epsilon(1e-9));
    CHECK(sys_pelve(same, 0.02, AggregationFn::identity).value() == doctest::Approx(p).epsilon(1e-7));
    CHECK(mse_pelve(same, 0.02, w).leftmost == doctest::Approx(p).epsilon(1e-6));
}

}  // namespace pelve

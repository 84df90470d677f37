#include <doctest.h>

#include <cmath>
#include <random>

#include "repshare/random.hpp"
#include "repshare/weighting.hpp"

using namespace repshare;

TEST_CASE("percent of honest past opinions") {
    CHECK(percent_hpo({9, 10}) == 90.0);
    CHECK(percent_hpo({0, 5}) == 0.0);
    CHECK(percent_hpo({20, 26}) == doctest::Approx(76.923).epsilon(1e-4));  // displays 76.92
    CHECK(percent_hpo({0, 0}) == 0.0);  // zero history means zero weight, not an error
}

TEST_CASE("incentive grows by j_step per honest opinion") {
    CHECK(incentive_j(20, 0.01) == doctest::Approx(1.20).epsilon(1e-12));
    CHECK(incentive_j(0, 0.01) == 1.0);
    CHECK(incentive_j(14, 0.01) == doctest::Approx(1.14).epsilon(1e-12));

    for (std::uint32_t k = 0; k < 3000; ++k) {
        CHECK(std::fabs((incentive_j(k + 1, 0.01) - incentive_j(k, 0.01)) - 0.01) <= 1e-12);
    }
}

TEST_CASE("consolidated past-behaviour score") {
    const EngineParams params;  // alpha 0.6, epsilon 0.3, j_step 0.01
    CHECK(consolidated_zeta({20, 26}, params) == doctest::Approx(53.3538).epsilon(1e-5));
    CHECK(consolidated_zeta({0, 0}, params) == 0.0);
    CHECK(consolidated_zeta({9, 10}, params) == doctest::Approx(56.943).epsilon(1e-9));
}

TEST_CASE("weight curve") {
    const EngineParams params;
    CHECK(weight(53.3538, params) == doctest::Approx(0.3961).epsilon(1e-3));
    CHECK(weight(0.0, params) == 0.0);
    const double near_saturation = weight(1e6, params);
    CHECK(near_saturation > 0.999);
    CHECK(near_saturation < 1.0);
}

TEST_CASE("weight is strictly increasing in zeta and bounded in [0, 1)") {
    std::mt19937_64 gen(3);
    const EngineParams params;
    for (int iter = 0; iter < 10000; ++iter) {
        const double z1 = uniform_in(gen, 0.0, 200.0);
        const double z2 = z1 + uniform_in(gen, 1e-6, 50.0);
        const double w1 = weight(z1, params);
        const double w2 = weight(z2, params);
        CHECK(w1 >= 0.0);
        CHECK(w2 < 1.0);
        CHECK(w1 < w2);
    }
}

TEST_CASE("zeta rises when honest and total counts grow in lockstep") {
    std::mt19937_64 gen(4);
    const EngineParams params;
    for (int iter = 0; iter < 500; ++iter) {
        BehaviorStats stats{static_cast<std::uint32_t>(gen() % 50),
                            static_cast<std::uint32_t>(gen() % 50)};
        if (stats.honest_count > stats.total_count) std::swap(stats.honest_count, stats.total_count);
        double prev = consolidated_zeta(stats, params);
        for (int step = 0; step < 20; ++step) {
            stats.honest_count += 1;
            stats.total_count += 1;
            const double next = consolidated_zeta(stats, params);
            CHECK(next > prev);
            prev = next;
        }
    }
}

TEST_CASE("the incentive term is convex in the honest count") {
    const EngineParams params;
    // Second difference of epsilon * k * J(k) is exactly 2 * epsilon * j_step.
    const double expected = 2.0 * params.epsilon_hat * params.j_step;
    for (std::uint32_t k = 1; k < 2000; ++k) {
        auto term = [&](std::uint32_t n) {
            return params.epsilon_hat * static_cast<double>(n) * incentive_j(n, params.j_step);
        };
        const double second_diff = term(k + 1) - 2.0 * term(k) + term(k - 1);
        CHECK(std::fabs(second_diff - expected) <= 1e-9);
    }
}

TEST_CASE("percent reconstructs the honest count") {
    std::mt19937_64 gen(5);
    for (int iter = 0; iter < 10000; ++iter) {
        const std::uint32_t total = 1 + static_cast<std::uint32_t>(gen() % 100000);
        const std::uint32_t honest = static_cast<std::uint32_t>(gen() % (total + 1));
        const double reconstructed =
            percent_hpo({honest, total}) * static_cast<double>(total) / 100.0;
        CHECK(std::fabs(reconstructed - static_cast<double>(honest)) <= 1e-9);
    }
}

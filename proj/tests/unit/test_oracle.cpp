#include <doctest.h>

#include "mmi/interpolator.hpp"
#include "mmi/oracle.hpp"
#include "models.hpp"

#include <cmath>
#include <random>

using namespace mmi;
using mmi::testing::golden_functional;
using mmi::testing::golden_model;

TEST_SUITE("oracle") {

TEST_CASE("golden increment autocovariance is AR(1)") {
    const auto cov = covariances(golden_model(), 12);
    for (int m = -12; m <= 12; ++m) CHECK(cov.inc(m) == doctest::Approx(4.0 / 3.0 * std::pow(-0.5, std::abs(m))).epsilon(1e-12));
    for (int m = 0; m <= 12; ++m) CHECK(cov.noise_at(m) == 0.0);
    CHECK(cov.psd_ok);
}

TEST_CASE("white increments have a delta autocovariance") {
    const auto m = ObservationModel::noise_free({1, 1, 0}, Density::rational(1.0, {1.0}, {1.0}, 1, 1));
    const auto cov = covariances(m, 5);
    CHECK(cov.inc(0) == doctest::Approx(1.0));
    for (int k = 1; k <= 5; ++k) CHECK(std::abs(cov.inc(k)) < 1e-13);
}

TEST_CASE("golden projection with a window of 10") {
    const auto pr = project(golden_model(), golden_functional(), 10);
    CHECK(std::abs(pr.weights.at(-1) + 106.0 / 85.0) < 1e-12);
    CHECK(std::abs(pr.weights.at(3) + 4.0 / 85.0) < 1e-12);
    for (const auto& [k, w] : pr.weights)
        if (k != -1 && k != 3) CHECK(std::abs(w) < 1e-12);
    CHECK(pr.mse == doctest::Approx(616.0 / 85.0).epsilon(1e-12));
    CHECK(pr.boundary.at(-1) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("zero functional projects to zero") {
    const auto pr = project(golden_model(), {0.0, 0.0}, 5);
    for (const auto& [k, w] : pr.weights) CHECK(w == 0.0);
    CHECK(pr.mse == 0.0);
}

TEST_CASE("projection error shrinks with the window and approaches the solver") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 4; ++trial) {
        const auto c = mmi::testing::random_case(rng, true);
        CAPTURE(c.label);
        double prev = INFINITY;
        for (int K : {2, 5, 10, 20, 50}) {
            const auto pr = project(c.model(), c.functional, K);
            CHECK(pr.mse <= prev + 1e-12);
            CHECK(pr.gram_margin >= -1e-10);
            prev = pr.mse;
        }
        const auto sol = solve(c.model(), c.functional);
        CHECK(std::abs(prev - sol.mse()) < 1e-6);
    }
}

TEST_CASE("covariance tables are positive semidefinite on random models") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 5; ++trial) {
        const auto c = mmi::testing::random_case(rng, trial % 2 == 0);
        const auto cov = covariances(c.model(), 40);
        CHECK(cov.psd_ok);
        CHECK(cov.psd_margin >= -1e-10);
    }
}

}

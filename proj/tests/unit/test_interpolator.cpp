#include <doctest.h>

#include "mmi/errors.hpp"
#include "mmi/interpolator.hpp"
#include "models.hpp"

#include <boost/rational.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace mmi;
using mmi::testing::golden_functional;
using mmi::testing::golden_model;
using mmi::testing::golden_signal;
constexpr double pi = std::numbers::pi;

namespace {

double q(long long p, long long d) { return boost::rational_cast<double>(boost::rational<long long>(p, d)); }

ObservationSeries series_from(std::mt19937_64& rng, const IncrementSpec& spec, int span) {
    std::normal_distribution<double> noise;
    ObservationSeries s;
    for (int t = -span; t <= spec.N + span; ++t)
        if (t < 0 || t > spec.N) s.values[t] = noise(rng);
    return s;
}

} // namespace

TEST_SUITE("interpolator") {

TEST_CASE("golden solution vector and MSE") {
    const auto sol = solve(golden_model(), golden_functional());
    REQUIRE(sol.c().size() == 3);
    CHECK(std::abs(sol.c()[0] - q(212, 85)) < 1e-12);
    CHECK(std::abs(sol.c()[1] - q(-20, 85)) < 1e-12);
    CHECK(std::abs(sol.c()[2] - q(8, 85)) < 1e-12);
    CHECK(sol.mse() == doctest::Approx(q(616, 85)).epsilon(1e-12));
    CHECK(sol.mse_routes().agree);
    CHECK(std::abs(sol.mse_routes().frequency - q(616, 85)) < 1e-8);
    CHECK(sol.system_residual() < 1e-12);
}

TEST_CASE("golden weights in increment and time domains") {
    const auto sol = solve(golden_model(), golden_functional());
    const auto& w = sol.weights().weights;
    REQUIRE(w.size() == 2);
    CHECK(std::abs(w.at(-1) - q(-106, 85)) < 1e-10);
    CHECK(std::abs(w.at(3) - q(-4, 85)) < 1e-10);
    const auto tw = sol.time_weights();
    REQUIRE(tw.size() == 4);
    CHECK(std::abs(tw.at(-2) - q(106, 85)) < 1e-10);
    CHECK(std::abs(tw.at(-1) - q(149, 85)) < 1e-10);
    CHECK(std::abs(tw.at(2) - q(4, 85)) < 1e-10);
    CHECK(std::abs(tw.at(3) - q(-4, 85)) < 1e-10);
    CHECK(sol.boundary_weights().at(-1) == doctest::Approx(3.0));
}

TEST_CASE("golden characteristic at pi") {
    const auto sol = solve(golden_model(), golden_functional());
    const cplx kernel = std::exp(cplx(0, -pi / 2)) * 2.0 / pi;  // (e^{-iλ/2} 2 sin(λ/2)/λ) at λ = π
    const cplx expected = kernel * (110.0 / 85.0);
    CHECK(std::abs(sol.characteristic(pi) - expected) < 1e-10);
    CHECK(std::abs(spectral_characteristic(sol, pi) - expected) < 1e-10);
}

TEST_CASE("golden estimates on fixed series") {
    const auto sol = solve(golden_model(), golden_functional());
    ObservationSeries s;
    s.values = {{-2, 1.0}, {-1, 2.0}, {2, 3.0}, {3, 4.0}};
    CHECK(estimate(sol, s) == doctest::Approx(400.0 / 85.0).epsilon(1e-12));
    ObservationSeries zeros;
    zeros.values = {{-2, 0.0}, {-1, 0.0}, {2, 0.0}, {3, 0.0}};
    CHECK(estimate(sol, zeros) == 0.0);
    ObservationSeries ones;
    for (int t = -5; t <= 6; ++t)
        if (t < 0 || t > 1) ones.values[t] = 1.0;
    CHECK(estimate(sol, ones) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("missing observations and gap values are rejected") {
    const auto sol = solve(golden_model(), golden_functional());
    ObservationSeries s;
    s.values = {{-2, 1.0}, {2, 3.0}, {3, 4.0}};
    CHECK_THROWS_AS(estimate(sol, s), MissingObservationError);
    s.values = {{-2, 1.0}, {-1, 2.0}, {0, 5.0}, {2, 3.0}, {3, 4.0}};
    CHECK_THROWS_AS(estimate(sol, s), ValidationError);
}

TEST_CASE("single point golden value") {
    const auto sol = solve_point(golden_model(), 0);
    CHECK(sol.mse() == doctest::Approx(84.0 / 85.0).epsilon(1e-12));
    const auto via_solve = solve(golden_model(), {1.0, 0.0});
    CHECK(via_solve.mse() == doctest::Approx(84.0 / 85.0).epsilon(1e-12));
}

TEST_CASE("zero functional gives a zero solution") {
    const auto sol = solve(golden_model(), {0.0, 0.0});
    CHECK(sol.c().norm() == 0.0);
    CHECK(sol.mse() == 0.0);
    CHECK(sol.weights().weights.empty());
    CHECK(std::abs(sol.characteristic(0.7)) == 0.0);
}

TEST_CASE("weights decay geometrically for a slowly mixing model") {
    const auto model = ObservationModel::noise_free({1, 1, 1}, Density::rational(1.0, {1.0}, {1.0, -0.9}, 1, 1));
    const auto sol = solve(model, golden_functional());
    // Pure AR(1): the weights are finite; an MA factor produces the geometric tail.
    CHECK(sol.weights().weights.size() <= 4);
    const auto ma = ObservationModel::noise_free({1, 1, 1}, Density::rational(1.0, {1.0, -0.9}, {1.0}, 1, 1));
    const auto sol_ma = solve(ma, golden_functional());
    double C = 0;
    for (const auto& [k, w] : sol_ma.weights().weights) {
        const int dist = k < 0 ? -k : k - 3;
        C = std::max(C, std::abs(w) / std::pow(0.9, dist));
    }
    for (const auto& [k, w] : sol_ma.weights().weights) {
        const int dist = k < 0 ? -k : k - 3;
        CHECK(std::abs(w) <= C * std::pow(0.9, dist) + 1e-14);
    }
    CHECK(sol_ma.weights().weights.size() > 20);
}

TEST_CASE("solver invariants on random models") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 12; ++trial) {
        const auto c = mmi::testing::random_case(rng, trial % 3 != 0);
        CAPTURE(c.label);
        const auto sol = solve(c.model(), c.functional);
        CHECK(sol.system_residual() < 1e-9);
        CHECK(sol.mse_routes().relative_gap < 1e-6);
        CHECK(sol.weights().orthogonality < 1e-8);
        CHECK(sol.weights().imaginary < 1e-10);
        CHECK(sol.mse() > 0);
    }
}

TEST_CASE("noise-free and point specialisations agree with the general solver") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 6; ++trial) {
        const auto c = mmi::testing::random_case(rng, false);
        CAPTURE(c.label);
        const auto general = solve(ObservationModel::signal_plus_noise(c.spec, c.signal, Density::zero()), c.functional);
        const auto nf = solve_noise_free(c.model(), c.functional);
        CHECK((general.c() - nf.c()).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::abs(general.mse() - nf.mse()) < 1e-10);

        const int p = c.spec.N / 2;
        std::vector<double> e(c.spec.N + 1, 0.0);
        e[p] = 1.0;
        const auto via_solve = solve(c.model(), e);
        const auto point = solve_point(c.model(), p);
        CHECK((via_solve.c() - point.c()).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::abs(via_solve.mse() - point.mse()) < 1e-10);
        const auto series = series_from(rng, c.spec, 400);
        const auto pe = estimate_point(c.model(), p, series);
        CHECK(std::abs(pe.value - estimate(via_solve, series)) < 1e-10);
        CHECK(std::abs(pe.mse - via_solve.mse()) < 1e-10);
    }
}

TEST_CASE("cointegrated solver reduces to the standard one") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 4; ++trial) {
        const auto c = mmi::testing::random_case(rng, true);
        const auto p = Density::composite(1.0, c.signal, c.noise, c.spec.n);
        const auto base = solve(c.model(), c.functional);
        const auto co = solve_cointegrated(ObservationModel::cointegrated(c.spec, c.signal, p, 1.0), c.functional);
        CHECK((base.c() - co.c()).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::abs(base.mse() - co.mse()) < 1e-10);
    }
    const auto f = golden_signal();
    const auto co = solve_cointegrated(ObservationModel::cointegrated({1, 1, 1}, f, f, 1.0), golden_functional());
    CHECK(co.mse() == doctest::Approx(616.0 / 85.0).epsilon(1e-10));
    CHECK(std::abs(co.weights().weights.at(-1) + 106.0 / 85.0) < 1e-10);
}

TEST_CASE("cointegrated beta scaling") {
    // With p = β² f the observed sequence is β ξ, so weights scale by 1/β and the MSE is unchanged.
    const double beta = 2.5;
    const auto f = golden_signal();
    const auto p = Density::composite(beta * beta, f, Density::zero(), 1);
    const auto co = solve_cointegrated(ObservationModel::cointegrated({1, 1, 1}, f, p, beta), golden_functional());
    CHECK(co.mse() == doctest::Approx(616.0 / 85.0).epsilon(1e-9));
    CHECK(co.weights().weights.at(-1) == doctest::Approx(-106.0 / 85.0 / beta).epsilon(1e-9));
    CHECK(co.boundary_weights().at(-1) == doctest::Approx(3.0 / beta).epsilon(1e-9));
}

TEST_CASE("mismatched functional length is rejected") {
    CHECK_THROWS_AS(solve(golden_model(), {1.0, 2.0, 3.0}), ValidationError);
    CHECK_THROWS_AS(solve_point(golden_model(), 2), ValidationError);
}

}

#include <doctest.h>

#include "mmi/errors.hpp"
#include "mmi/increment_algebra.hpp"

#include <boost/rational.hpp>

#include <random>

using namespace mmi;
using Q = boost::rational<long long>;

namespace {

std::vector<Q> to_q(const std::vector<int>& v) { return {v.begin(), v.end()}; }

// Brute-force power series of (1 + x^μ + x^{2μ} + ...)^n truncated at x^K.
std::vector<long long> series_power(int n, int mu, int K) {
    std::vector<long long> base(K + 1, 0), acc(K + 1, 0);
    for (int k = 0; k <= K; k += mu) base[k] = 1;
    acc[0] = 1;
    for (int r = 0; r < n; ++r) {
        std::vector<long long> next(K + 1, 0);
        for (int i = 0; i <= K; ++i)
            for (int j = 0; i + j <= K; ++j) next[i + j] += acc[i] * base[j];
        acc = next;
    }
    return acc;
}

} // namespace

TEST_SUITE("increment_algebra") {

TEST_CASE("d coefficients match the listed expansions") {
    CHECK(d_coefficients({1, 1, 0}, 4) == std::vector<std::int64_t>{1, 1, 1, 1, 1});
    CHECK(d_coefficients({2, 1, 0}, 3) == std::vector<std::int64_t>{1, 2, 3, 4});
    CHECK(d_coefficients({1, 2, 0}, 4) == std::vector<std::int64_t>{1, 0, 1, 0, 1});
    CHECK(d_coefficients({2, 2, 0}, 6) == std::vector<std::int64_t>{1, 0, 2, 0, 3, 0, 4});
}

TEST_CASE("d coefficients agree with brute-force multiplication") {
    for (int n = 1; n <= 4; ++n)
        for (int mu = 1; mu <= 3; ++mu) {
            const auto d = d_coefficients({n, mu, 0}, 20);
            const auto ref = series_power(n, mu, 20);
            for (int k = 0; k <= 20; ++k) CHECK(d[k] == ref[k]);
        }
}

TEST_CASE("d inverts the signed binomial pattern exactly") {
    for (int n = 1; n <= 4; ++n)
        for (int mu = 1; mu <= 3; ++mu) {
            const int K = 25;
            const auto d = d_coefficients({n, mu, 0}, K);
            for (int m = 0; m <= K; ++m) {
                std::int64_t acc = 0;
                for (int l = 0; l <= n && l * mu <= m; ++l)
                    acc += (l % 2 ? -1 : 1) * binomial(n, l) * d[m - l * mu];
                CHECK(acc == (m == 0 ? 1 : 0));
            }
        }
}

TEST_CASE("b coefficients on the listed inputs") {
    CHECK(b_coefficients<Q>({1, 1, 1}, to_q({2, 1})) == to_q({3, 1}));
    CHECK(b_coefficients<Q>({2, 1, 2}, to_q({1, 1, 1})) == to_q({6, 3, 1}));
    CHECK(b_coefficients<Q>({2, 2, 3}, to_q({0, 0, 0, 0})) == to_q({0, 0, 0, 0}));
}

TEST_CASE("b equals the upper-triangular matrix product") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> coef(-9, 9);
    for (int n = 1; n <= 3; ++n)
        for (int mu = 1; mu <= 3; ++mu)
            for (int N = 0; N <= 5; ++N) {
                const IncrementSpec spec{n, mu, N};
                std::vector<Q> a(N + 1);
                for (auto& x : a) x = coef(rng);
                const auto D = d_matrix(spec);
                const auto b = b_coefficients(spec, a);
                for (int k = 0; k <= N; ++k) {
                    Q acc = 0;
                    for (int m = 0; m <= N; ++m) acc += Q(D[k][m]) * a[m];
                    CHECK(acc == b[k]);
                }
            }
}

TEST_CASE("v coefficients on the listed inputs") {
    const auto v = v_coefficients<Q>({1, 1, 1}, to_q({3, 1}));
    REQUIRE(v.size() == 1);
    CHECK(v[0] == Q(-3));
    CHECK(v_coefficients<Q>({2, 1, 2}, to_q({0, 0, 0})) == to_q({0, 0}));
    const auto v2 = v_coefficients<Q>({1, 2, 1}, to_q({3, 1}));
    CHECK(v2 == to_q({-3, -1}));
}

TEST_CASE("a_mu coefficients on the listed inputs") {
    CHECK(a_mu_coefficients<Q>({1, 1, 1}, to_q({2, 1})) == to_q({2, -1, -1}));
    CHECK(a_mu_coefficients<Q>({1, 2, 1}, to_q({2, 1})) == to_q({2, 1, -2, -1}));
    CHECK(a_mu_coefficients<Q>({2, 1, 1}, to_q({0, 0})) == to_q({0, 0, 0, 0}));
}

TEST_CASE("a_mu is the convolution of the padded functional with the signed pattern") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> coef(-9, 9);
    for (int n = 1; n <= 3; ++n)
        for (int mu = 1; mu <= 3; ++mu)
            for (int N = 0; N <= 4; ++N) {
                const IncrementSpec spec{n, mu, N};
                std::vector<Q> a(N + 1);
                for (auto& x : a) x = coef(rng);
                std::vector<Q> padded(spec.dimension(), Q(0));
                std::copy(a.begin(), a.end(), padded.begin());
                std::vector<Q> conv(spec.dimension(), Q(0));
                for (int m = 0; m < spec.dimension(); ++m)
                    for (int l = 0; l <= n && l * mu <= m; ++l)
                        conv[m] += Q((l % 2 ? -1 : 1) * binomial(n, l)) * padded[m - l * mu];
                CHECK(a_mu_coefficients(spec, a) == conv);
            }
}

TEST_CASE("a constant sequence is recovered from boundary values alone") {
    // With zero increments the estimate is -sum v(k), which must equal sum a(k).
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coef(-9, 9);
    for (int n = 1; n <= 3; ++n)
        for (int mu = 1; mu <= 3; ++mu)
            for (int N = 0; N <= 4; ++N) {
                const IncrementSpec spec{n, mu, N};
                std::vector<Q> a(N + 1);
                for (auto& x : a) x = coef(rng);
                const auto bundle = coefficient_bundle(spec, a);
                Q sv = 0, sa = 0;
                for (const auto& x : bundle.v) sv += x;
                for (const auto& x : a) sa += x;
                CHECK(-sv == sa);
            }
}

TEST_CASE("bundle pads the right-hand side and indexes v by time") {
    const auto bundle = coefficient_bundle<Q>({1, 1, 1}, to_q({2, 1}));
    CHECK(bundle.rhs == to_q({3, 1, 0}));
    CHECK(bundle.v_at(-1) == Q(-3));
}

TEST_CASE("invalid specs and lengths are rejected") {
    CHECK_THROWS_AS(IncrementSpec({0, 1, 1}).validate(), ValidationError);
    CHECK_THROWS_AS(IncrementSpec({1, 0, 1}).validate(), ValidationError);
    CHECK_THROWS_AS(IncrementSpec({1, 1, -1}).validate(), ValidationError);
    CHECK_THROWS_AS(b_coefficients<Q>({1, 1, 1}, to_q({1, 2, 3})), ValidationError);
}

}

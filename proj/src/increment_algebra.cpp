#include "mmi/increment_algebra.hpp"

#include "mmi/errors.hpp"

#include <string>

namespace mmi {

void IncrementSpec::validate() const {
    if (n < 1) throw ValidationError("increment order n must be >= 1, got " + std::to_string(n));
    if (mu < 1) throw ValidationError("increment step mu must be >= 1, got " + std::to_string(mu));
    if (N < 0) throw ValidationError("gap end N must be >= 0, got " + std::to_string(N));
}

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::vector<std::int64_t> d_coefficients(const IncrementSpec& spec, int K) {
    if (K < 0) throw ValidationError("d_coefficients needs K >= 0");
    // Multiply n copies of the series 1 + x^mu + x^{2mu} + ... truncated at K.
    std::vector<std::int64_t> d(K + 1, 0);
    d[0] = 1;
    for (int copy = 0; copy < spec.n; ++copy) {
        // Multiplying by 1/(1 - x^mu) is a running sum at stride mu.
        for (int k = spec.mu; k <= K; ++k) d[k] += d[k - spec.mu];
    }
    return d;
}

std::vector<std::vector<std::int64_t>> d_matrix(const IncrementSpec& spec) {
    const auto d = d_coefficients(spec, spec.N);
    std::vector<std::vector<std::int64_t>> D(spec.N + 1, std::vector<std::int64_t>(spec.N + 1, 0));
    for (int k = 0; k <= spec.N; ++k)
        for (int m = k; m <= spec.N; ++m) D[k][m] = d[m - k];
    return D;
}

void check_functional_length(const IncrementSpec& spec, std::size_t length) {
    if (length != static_cast<std::size_t>(spec.N + 1))
        throw ValidationError("coefficient vector has length " + std::to_string(length) +
                              ", expected N+1 = " + std::to_string(spec.N + 1));
}

} // namespace mmi

#pragma once

// Coefficient algebra for n-th increments with step mu. Everything here is
// templated on the scalar so the golden checks can run over exact rationals.

#include <algorithm>
#include <cstdint>
#include <vector>

namespace mmi {

struct IncrementSpec {
    int n = 1;   // increment order
    int mu = 1;  // increment step
    int N = 0;   // gap is {0, ..., N}

    int dimension() const { return N + mu * n + 1; }
    int boundary() const { return mu * n; }
    void validate() const;
};

std::int64_t binomial(int n, int k);

// Floor and ceiling of a/b for b > 0 and any sign of a.
inline int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
inline int ceil_div(int a, int b) { return -floor_div(-a, b); }

// Power-series coefficients of (sum_j x^{mu j})^n up to x^K.
std::vector<std::int64_t> d_coefficients(const IncrementSpec& spec, int K);

// Upper-triangular Toeplitz matrix with first row d(0..N), row-major.
std::vector<std::vector<std::int64_t>> d_matrix(const IncrementSpec& spec);

void check_functional_length(const IncrementSpec& spec, std::size_t length);

// b(k) = sum_{m=k}^{N} a(m) d(m-k)
template <class T>
std::vector<T> b_coefficients(const IncrementSpec& spec, const std::vector<T>& a) {
    check_functional_length(spec, a.size());
    const auto d = d_coefficients(spec, spec.N);
    std::vector<T> b(spec.N + 1, T(0));
    for (int k = 0; k <= spec.N; ++k)
        for (int m = k; m <= spec.N; ++m) b[k] += a[m] * T(d[m - k]);
    return b;
}

// v(k) for k = -mu n .. -1, stored at index k + mu n.
template <class T>
std::vector<T> v_coefficients(const IncrementSpec& spec, const std::vector<T>& b) {
    check_functional_length(spec, b.size());
    std::vector<T> v(spec.boundary(), T(0));
    for (int k = -spec.boundary(); k <= -1; ++k) {
        const int lo = ceil_div(-k, spec.mu);
        const int hi = std::min(floor_div(spec.N - k, spec.mu), spec.n);
        T sum(0);
        for (int l = lo; l <= hi; ++l) {
            const T term = T(binomial(spec.n, l)) * b[l * spec.mu + k];
            sum += (l % 2 == 0) ? term : -term;
        }
        v[k + spec.boundary()] = sum;
    }
    return v;
}

// a_mu(m) for m = 0 .. N + mu n: the signed binomial pattern applied to a.
template <class T>
std::vector<T> a_mu_coefficients(const IncrementSpec& spec, const std::vector<T>& a) {
    check_functional_length(spec, a.size());
    std::vector<T> out(spec.dimension(), T(0));
    for (int m = 0; m < spec.dimension(); ++m) {
        const int lo = std::max(ceil_div(m - spec.N, spec.mu), 0);
        const int hi = std::min(floor_div(m, spec.mu), spec.n);
        for (int l = lo; l <= hi; ++l) {
            const T term = T(binomial(spec.n, l)) * a[m - spec.mu * l];
            out[m] += (l % 2 == 0) ? term : -term;
        }
    }
    return out;
}

template <class T>
struct CoefficientBundle {
    std::vector<std::int64_t> d;  // d(0..N+mu n)
    std::vector<T> b;             // b(0..N)
    std::vector<T> v;             // v(-mu n..-1)
    std::vector<T> a_mu;          // a_mu(0..N+mu n)
    std::vector<T> rhs;           // b padded with zeros to N+mu n+1

    T v_at(int k) const { return v[k + static_cast<int>(v.size())]; }
};

template <class T>
CoefficientBundle<T> coefficient_bundle(const IncrementSpec& spec, const std::vector<T>& a) {
    spec.validate();
    CoefficientBundle<T> out;
    out.d = d_coefficients(spec, spec.dimension() - 1);
    out.b = b_coefficients(spec, a);
    out.v = v_coefficients(spec, out.b);
    out.a_mu = a_mu_coefficients(spec, a);
    out.rhs.assign(spec.dimension(), T(0));
    for (int k = 0; k <= spec.N; ++k) out.rhs[k] = out.b[k];
    return out;
}

} // namespace mmi

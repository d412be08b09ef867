#include "mmi/oracle.hpp"

#include "mmi/errors.hpp"
#include "mmi/increment_algebra.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <random>

namespace mmi {

namespace {

std::vector<double> real_coefficients(const ObservationModel& model, int max_lag,
                                      const QuadratureOptions& quadrature, bool noise) {
    auto w = [&model, noise](double l) {
        const auto s = model.sample(l);
        return noise ? s.noise : s.observed;
    };
    std::vector<cplx> c;
    if (auto M = model.native_grid()) {
        std::vector<double> samples(*M);
        for (int j = 0; j < *M; ++j) samples[j] = w(midpoint_node(*M, j));
        c = coefficients_from_samples(samples, 0, max_lag);
    } else {
        c = fourier_coefficients([&w](double l) { return cplx(w(l), 0.0); }, 0, max_lag, quadrature).values;
    }
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
    return out;
}

// Smallest eigenvalue / trace over a few random principal minors.
double minor_margin(const std::vector<double>& r, unsigned seed) {
    const int L = static_cast<int>(r.size());
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pick(0, L - 1);
    double margin = INFINITY;
    for (int trial = 0; trial < 8; ++trial) {
        const int size = std::min(L, 12);
        std::vector<int> idx;
        while (static_cast<int>(idx.size()) < size) {
            const int i = pick(rng);
            if (std::find(idx.begin(), idx.end(), i) == idx.end()) idx.push_back(i);
        }
        Eigen::MatrixXd m(size, size);
        for (int a = 0; a < size; ++a)
            for (int b = 0; b < size; ++b) m(a, b) = r[std::abs(idx[a] - idx[b])];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
        const double tr = m.trace();
        if (tr > 0) margin = std::min(margin, es.eigenvalues().minCoeff() / tr);
    }
    return std::isfinite(margin) ? margin : 0.0;
}

} // namespace

CovarianceTable covariances(const ObservationModel& model, int max_lag, const QuadratureOptions& quadrature) {
    if (max_lag < 0) throw ValidationError("covariances needs max_lag >= 0");
    CovarianceTable t;
    t.max_lag = max_lag;
    t.increment = real_coefficients(model, max_lag, quadrature, false);
    t.noise = real_coefficients(model, max_lag, quadrature, true);
    t.psd_margin = std::min(minor_margin(t.increment, 17u), t.noise[0] > 0 ? minor_margin(t.noise, 29u) : 0.0);
    t.psd_ok = t.psd_margin >= -1e-10;
    return t;
}

ProjectionResult project(const ObservationModel& model, const std::vector<double>& a, int window,
                         const QuadratureOptions& quadrature) {
    if (window < 1) throw ValidationError("projection window must be >= 1");
    const auto& spec = model.spec();
    check_functional_length(spec, a.size());
    const int D = spec.dimension();
    const double beta = model.mode() == ObservationMode::Cointegrated ? model.beta() : 1.0;
    const auto bundle = coefficient_bundle(spec, a);

    std::vector<int> ks;
    for (int k = -window; k <= -1; ++k) ks.push_back(k);
    for (int k = D; k <= D - 1 + window; ++k) ks.push_back(k);
    const int m = static_cast<int>(ks.size());

    const auto cov = covariances(model, 2 * window + 2 * D + spec.boundary(), quadrature);
    auto noise_cross = [&](int k, int j) {
        // Cov(zeta^{(n)}(k), eta(j))
        double acc = 0;
        for (int l = 0; l <= spec.n; ++l) {
            const double term = static_cast<double>(binomial(spec.n, l)) * cov.noise_at(k - l * spec.mu - j);
            acc += (l % 2 == 0) ? term : -term;
        }
        return acc;
    };

    Eigen::MatrixXd G(m, m);
    Eigen::VectorXd r(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) G(i, j) = cov.inc(ks[i] - ks[j]);
        double acc = 0;
        for (int k = 0; k <= spec.N; ++k) acc += bundle.b[k] * cov.inc(k - ks[i]);
        for (int j = 0; j <= spec.N; ++j) acc -= a[j] * noise_cross(ks[i], j);
        r[i] = acc;
    }
    double var = 0;
    for (int k = 0; k <= spec.N; ++k)
        for (int k2 = 0; k2 <= spec.N; ++k2) var += bundle.b[k] * bundle.b[k2] * cov.inc(k - k2);
    for (int j = 0; j <= spec.N; ++j)
        for (int j2 = 0; j2 <= spec.N; ++j2) var += a[j] * a[j2] * cov.noise_at(j - j2);
    for (int k = 0; k <= spec.N; ++k)
        for (int j = 0; j <= spec.N; ++j) var -= 2.0 * bundle.b[k] * a[j] * noise_cross(k, j);

    ProjectionResult out;
    out.window = window;
    out.target_variance = var / (beta * beta);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
    out.gram_margin = es.eigenvalues().minCoeff() / G.trace();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(G);
    qr.setThreshold(1e-13);
    out.rank = static_cast<int>(qr.rank());
    if (out.rank < m)
        throw NumericalError("singular Gram matrix (effective rank " + std::to_string(out.rank) + " of " +
                                 std::to_string(m) + ")",
                             "singular_gram");
    Eigen::VectorXd w = qr.solve(r);
    w += qr.solve(r - G * w);
    out.mse = (var - r.dot(w)) / (beta * beta);
    for (int i = 0; i < m; ++i) out.weights[ks[i]] = w[i] / beta;
    for (int k = -spec.boundary(); k <= -1; ++k) out.boundary[k] = -bundle.v[k + spec.boundary()] / beta;
    return out;
}

} // namespace mmi
